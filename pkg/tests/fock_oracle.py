"""Brute-force oracle: truncated Fock space of the three modes.

Output operators are built as explicit sparse matrices from the propagator
rows and applied to the product coherent state. Nothing here uses Wick
pairing, so agreement with the Gaussian engine is an independent check.
Truncation is harmless as long as the state has negligible weight within a
few quanta of the cutoff.
"""

import math

import numpy as np
import scipy.sparse as sp


def _annihilation(d):
    return sp.diags(np.sqrt(np.arange(1, d)), 1, shape=(d, d), format="csr")


def _coherent(alpha, d):
    n = np.arange(d)
    logfact = np.array([math.lgamma(k + 1) for k in n])
    mag = abs(alpha)
    if mag == 0:
        c = np.zeros(d, dtype=complex)
        c[0] = 1
        return c
    c = np.exp(-0.5 * mag**2 + n * math.log(mag) - 0.5 * logfact) * np.exp(1j * n * np.angle(alpha))
    return c / np.linalg.norm(c)


class FockOracle:
    def __init__(self, lam, alpha_1o, alpha_1e, dims=(30, 30, 8)):
        d1, d2, d3 = dims
        eye = [sp.identity(d, format="csr") for d in dims]
        a = [_annihilation(d) for d in dims]
        self.a1o = sp.kron(sp.kron(a[0], eye[1]), eye[2], format="csr")
        self.a1e = sp.kron(sp.kron(eye[0], a[1]), eye[2], format="csr")
        self.a3e = sp.kron(sp.kron(eye[0], eye[1]), a[2], format="csr")
        dag = lambda m: m.conj().T.tocsr()
        lam = np.asarray(lam, dtype=float)
        self.b1 = lam[0, 0] * self.a1o + lam[0, 1] * dag(self.a1e) + lam[0, 2] * self.a3e
        self.b2 = lam[1, 0] * dag(self.a1o) + lam[1, 1] * self.a1e + lam[1, 2] * dag(self.a3e)
        self.b3 = lam[2, 0] * self.a1o + lam[2, 1] * dag(self.a1e) + lam[2, 2] * self.a3e
        vac = np.zeros(d3, dtype=complex)
        vac[0] = 1
        self.psi = np.kron(np.kron(_coherent(alpha_1o, d1), _coherent(alpha_1e, d2)), vac)
        b1d, b2d = dag(self.b1), dag(self.b2)
        self.stokes = [
            b1d @ self.b1 + b2d @ self.b2,
            b1d @ self.b1 - b2d @ self.b2,
            b1d @ self.b2 + b2d @ self.b1,
            1j * (b2d @ self.b1 - b1d @ self.b2),
        ]
        self.numbers = [b1d @ self.b1, b2d @ self.b2, dag(self.b3) @ self.b3]

    def expect(self, op):
        return complex(np.vdot(self.psi, op @ self.psi))

    def expect_product(self, x, y):
        return complex(np.vdot(self.psi, x @ (y @ self.psi)))

    def variance(self, op):
        v = op @ self.psi
        m = np.vdot(self.psi, v)
        return float(np.vdot(v, v).real - abs(m) ** 2)

    def photon_numbers(self):
        return [self.expect(n).real for n in self.numbers]

    def stokes_means(self):
        return np.array([self.expect(s).real for s in self.stokes])

    def stokes_variances(self):
        return np.array([self.variance(s) for s in self.stokes])
