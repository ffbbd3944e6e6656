"""Observables of the output modes for a coherent x coherent x vacuum input.

Every input mode is split as ``a = alpha + da`` with ``da`` in vacuum. The
output operators are then affine in the six vacuum fluctuation operators, so
all moments follow from Wick pairing of the vacuum two-point function
``<da da^+> = 1``. No Fock-space truncation is involved.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateInputError, DomainError
from .propagator import PropagatorMatrix


def wrap_phase(phi: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    r = math.remainder(phi, 2 * math.pi)
    return r + 2 * math.pi if r <= -math.pi else r


@dataclass(frozen=True)
class InputState:
    """Coherent amplitudes of modes 1o and 1e; mode 3e is in vacuum."""

    mag_1o: float
    phase_1o: float
    mag_1e: float
    phase_1e: float

    def __post_init__(self):
        for name in ("mag_1o", "phase_1o", "mag_1e", "phase_1e"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if self.mag_1o < 0 or self.mag_1e < 0:
            raise DomainError("coherent amplitudes must be nonnegative magnitudes")
        object.__setattr__(self, "phase_1o", wrap_phase(self.phase_1o))
        object.__setattr__(self, "phase_1e", wrap_phase(self.phase_1e))

    @classmethod
    def from_photon_numbers(
        cls, n_1o: float, n_1e: float, phase_sum: float = 0.0, phase_diff: float = 0.0
    ) -> InputState:
        if n_1o < 0 or n_1e < 0:
            raise DomainError("initial mean photon numbers must be nonnegative")
        return cls(
            math.sqrt(n_1o),
            0.5 * (phase_sum + phase_diff),
            math.sqrt(n_1e),
            0.5 * (phase_sum - phase_diff),
        )

    @property
    def alpha_1o(self) -> complex:
        return cmath.rect(self.mag_1o, self.phase_1o)

    @property
    def alpha_1e(self) -> complex:
        return cmath.rect(self.mag_1e, self.phase_1e)

    @property
    def phase_sum(self) -> float:
        return self.phase_1o + self.phase_1e

    @property
    def s0_variance(self) -> float:
        """Variance of S0 for the input coherent state, ``|a_1o|^2 + |a_1e|^2``."""
        return self.mag_1o**2 + self.mag_1e**2


# Column order of the fluctuation expansion.
FLUCT_OPERATORS = ("da1o", "da1o+", "da1e", "da1e+", "da3e", "da3e+")
# Dagger partner of each column.
_DAGGER = np.array([1, 0, 3, 2, 5, 4])


@dataclass(frozen=True, eq=False)
class OutputExpansion:
    """Outputs ``b1 = a_1o(zeta)``, ``b2 = a_1e(zeta)`` as mean + fluctuation."""

    mean_b1: complex
    mean_b2: complex
    fluct: np.ndarray  # (2, 6) complex, columns FLUCT_OPERATORS

    def commutator_residual(self) -> float:
        """Largest deviation from ``[b_r, b_r^+] = 1``, ``[b1, b2^+] = 0``, ``[b1, b2] = 0``."""
        u = self.fluct[:, 0::2]  # annihilation parts
        w = self.fluct[:, 1::2]  # creation parts
        # [b_r, b_s^+] = sum_j u_rj conj(u_sj) - w_rj conj(w_sj)
        mixed = u @ u.conj().T - w @ w.conj().T
        # [b_1, b_2] = sum_j u_1j w_2j - w_1j u_2j
        pair = np.sum(u[0] * w[1] - w[0] * u[1])
        return float(max(np.max(np.abs(mixed - np.eye(2))), abs(pair)))

    def field_vector(self) -> tuple[np.ndarray, np.ndarray]:
        """Means and fluctuation rows for ``v = (b1, b2, b1^+, b2^+)``."""
        m = np.array([self.mean_b1, self.mean_b2, np.conj(self.mean_b1), np.conj(self.mean_b2)])
        f = np.vstack([self.fluct, self.fluct[:, _DAGGER].conj()])
        return m, f


def output_expansion(p: PropagatorMatrix, s: InputState) -> OutputExpansion:
    lam = p.lam
    a_o, a_e = s.alpha_1o, s.alpha_1e
    fluct = np.zeros((2, 6), dtype=complex)
    # b1 = l11 a1o + l12 a1e^+ + l13 a3e
    fluct[0, 0], fluct[0, 3], fluct[0, 4] = lam[0]
    # b2 = l21 a1o^+ + l22 a1e + l23 a3e^+  (conjugate of the stored a1e^+ row)
    fluct[1, 1], fluct[1, 2], fluct[1, 5] = lam[1]
    mean_b1 = lam[0, 0] * a_o + lam[0, 1] * a_e.conjugate()
    mean_b2 = lam[1, 0] * a_o.conjugate() + lam[1, 1] * a_e
    return OutputExpansion(complex(mean_b1), complex(mean_b2), fluct)


# Vacuum two-point function <dx_i dx_j> over FLUCT_OPERATORS.
_VACUUM = np.zeros((6, 6))
_VACUUM[0, 1] = _VACUUM[2, 3] = _VACUUM[4, 5] = 1.0


def _form(entries) -> np.ndarray:
    k = np.zeros((4, 4), dtype=complex)
    for (i, j), c in entries.items():
        k[i, j] = c
    return k


# Quadratic forms sum_ij K_ij v_i v_j over v = (b1, b2, b1^+, b2^+).
N1O_FORM = _form({(2, 0): 1})
N1E_FORM = _form({(3, 1): 1})
STOKES_FORMS = np.stack(
    [
        _form({(2, 0): 1, (3, 1): 1}),  # S0 = b1+ b1 + b2+ b2
        _form({(2, 0): 1, (3, 1): -1}),  # S1 = b1+ b1 - b2+ b2
        _form({(2, 1): 1, (3, 0): 1}),  # S2 = b1+ b2 + b2+ b1
        _form({(3, 0): 1j, (2, 1): -1j}),  # S3 = i(b2+ b1 - b1+ b2)
    ]
)


def quadratic_moments(expansion: OutputExpansion, forms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Means and connected second moments of quadratic forms in the outputs.

    Returns ``(mean, cov)`` with ``cov[a, b] = <Q_a Q_b> - <Q_a><Q_b>`` (complex,
    operator order kept). Fourth-order fluctuation moments are reduced by Wick's
    theorem; the fully disconnected part is never formed, which keeps the
    variance free of cancellation at large amplitudes.
    """
    forms = np.asarray(forms, dtype=complex)
    m, f = expansion.field_vector()
    g = f @ _VACUUM @ f.T  # <dv_i dv_j>
    mean = np.einsum("aij,ij->a", forms, np.outer(m, m) + g)
    conn = (
        np.einsum("j,l,ik->ijkl", m, m, g)
        + np.einsum("j,k,il->ijkl", m, m, g)
        + np.einsum("i,l,jk->ijkl", m, m, g)
        + np.einsum("i,k,jl->ijkl", m, m, g)
        + np.einsum("ik,jl->ijkl", g, g)
        + np.einsum("il,jk->ijkl", g, g)
    )
    cov = np.einsum("aij,bkl,ijkl->ab", forms, forms, conn)
    return mean, cov


def mean_photon_numbers(p: PropagatorMatrix, s: InputState) -> tuple[float, float, float]:
    """Closed-form ``<N_1o>, <N_1e>, <N_3e>`` at the propagator's ``zeta``."""
    lam = p.lam
    o2, e2 = s.mag_1o**2, s.mag_1e**2
    cross = 2.0 * s.mag_1o * s.mag_1e * math.cos(s.phase_sum)
    n1o = lam[0, 1] ** 2 + lam[0, 1] ** 2 * e2 + lam[0, 0] * lam[0, 1] * cross + lam[0, 0] ** 2 * o2
    n1e = (
        lam[1, 0] ** 2
        + lam[1, 2] ** 2
        + lam[1, 1] ** 2 * e2
        + lam[1, 0] * lam[1, 1] * cross
        + lam[1, 0] ** 2 * o2
    )
    n3e = lam[2, 1] ** 2 + lam[2, 1] ** 2 * e2 + lam[2, 0] * lam[2, 1] * cross + lam[2, 0] ** 2 * o2
    return float(n1o), float(n1e), float(n3e)


def wick_photon_numbers(p: PropagatorMatrix, s: InputState) -> tuple[float, float]:
    """``<b1^+ b1>`` and ``<b2^+ b2>`` from the Wick engine."""
    mean, _ = quadratic_moments(output_expansion(p, s), np.stack([N1O_FORM, N1E_FORM]))
    return float(mean[0].real), float(mean[1].real)


class Mode(str, Enum):
    O1 = "1o"
    E1 = "1e"


def photon_number_variance(p: PropagatorMatrix, s: InputState, mode: Mode | str) -> float:
    """``<dN^2>`` of output mode 1o or 1e."""
    form = {Mode.O1: N1O_FORM, Mode.E1: N1E_FORM}[Mode(mode)]
    _, cov = quadratic_moments(output_expansion(p, s), form[None])
    return float(cov[0, 0].real)


@dataclass(frozen=True, eq=False)
class StokesReport:
    zeta: float
    means: np.ndarray
    variances: np.ndarray
    normalized: np.ndarray = field(init=False)
    denominator: float = 0.0

    def __post_init__(self):
        if not self.denominator > 0:
            raise DegenerateInputError(
                "normalization <dS0^2(0)> = |a_1o|^2 + |a_1e|^2 vanishes; "
                "use raw variances for the spontaneous regime"
            )
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "variances", np.asarray(self.variances, dtype=float))
        object.__setattr__(self, "normalized", self.variances / self.denominator)

    def uncertainty_margins(self) -> np.ndarray:
        """``dSi^2 dSj^2 - <Sk>^2`` for cyclic ``(i, j, k)`` over ``(1, 2, 3)``."""
        v, m = self.variances, self.means
        return np.array([v[1] * v[2] - m[3] ** 2, v[2] * v[3] - m[1] ** 2, v[3] * v[1] - m[2] ** 2])

    def satisfies_uncertainty(self, rel: float = 1e-9) -> bool:
        v, m = self.variances, self.means
        prods = np.array([v[1] * v[2], v[2] * v[3], v[3] * v[1]])
        bounds = np.array([m[3], m[1], m[2]]) ** 2
        return bool(np.all(prods >= bounds * (1 - rel)))


def stokes_moments(p: PropagatorMatrix, s: InputState) -> tuple[np.ndarray, np.ndarray]:
    """Means and full connected covariance ``<S_a S_b> - <S_a><S_b>`` of the Stokes operators."""
    return quadratic_moments(output_expansion(p, s), STOKES_FORMS)


def stokes_variances_wick(p: PropagatorMatrix, s: InputState) -> StokesReport:
    mean, cov = stokes_moments(p, s)
    return StokesReport(
        zeta=p.zeta,
        means=mean.real,
        variances=np.diag(cov).real,
        denominator=s.s0_variance,
    )


def stokes_means(p: PropagatorMatrix, s: InputState) -> np.ndarray:
    """``<S0..S3>`` from the closed-form photon numbers and the mean bracket."""
    from .closed_form import pq_coefficients, stokes_mean_bracket

    n1o, n1e, _ = mean_photon_numbers(p, s)
    s2, s3 = stokes_mean_bracket(pq_coefficients(p), s)
    return np.array([n1o + n1e, n1o - n1e, s2, s3])


def su2_commutator_check(p: PropagatorMatrix, s: InputState) -> float:
    """Largest residual of the SU(2) algebra evaluated as expectation values.

    Checks ``<[S0, Sj]> = 0`` and ``<[S1, S2]> = 2i<S3>`` with cyclic partners.
    """
    mean, cov = stokes_moments(p, s)
    comm = cov - cov.T  # <[Sa, Sb]>; the mean products cancel
    res = [abs(comm[0, j]) for j in (1, 2, 3)]
    for a, b, c in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        res.append(abs(comm[a, b] - 2j * mean[c]))
    return float(max(res))
