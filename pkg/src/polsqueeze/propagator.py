"""Closed-form propagator of the linearized three-mode system.

The field vector ``(a_1o, a_1e^+, a_3e)`` obeys ``d/dzeta v = M v`` with

    M = [[0, 1, -k2],
         [1, 0,  k1],
         [k2, k1, 0]]

so ``v(zeta) = lambda(zeta) v(0)`` with ``lambda = exp(zeta M)``. Since
``M^3 = q^2 M`` (``q^2 = 1 + k1^2 - k2^2``) the exponential collapses to
``I + S M + H M^2`` where ``S = sinh(q zeta)/q`` and ``H = (cosh(q zeta)-1)/q^2``.
Both kernels are entire in ``q^2`` and are evaluated without complex
arithmetic in either sign regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# Commutator metric for the ordering (a_1o, a_1e^+, a_3e).
ETA = np.diag([1.0, -1.0, 1.0])

_SERIES_THRESHOLD = 1e-6
_SERIES_TERMS = 6


@dataclass(frozen=True)
class CouplingRatios:
    """Dimensionless couplings ``k1 = gamma3/gamma1`` and ``k2 = gamma2/gamma1``."""

    k1: float
    k2: float
    q_sq: float = field(init=False)

    def __post_init__(self):
        k1, k2 = float(self.k1), float(self.k2)
        if not (math.isfinite(k1) and math.isfinite(k2)):
            raise DomainError(f"coupling ratios must be finite, got k1={k1}, k2={k2}")
        if k1 < 0 or k2 < 0:
            raise DomainError(f"coupling ratios must be nonnegative, got k1={k1}, k2={k2}")
        object.__setattr__(self, "k1", k1)
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "q_sq", 1.0 + k1 * k1 - k2 * k2)


@dataclass(frozen=True, eq=False)
class PropagatorMatrix:
    """``lam[i, j]``: coefficient of input ``j`` in output ``i``, order (1o, 1e^+, 3e)."""

    lam: np.ndarray
    zeta: float

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.shape != (3, 3):
            raise DomainError(f"propagator must be 3x3, got shape {lam.shape}")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    def __getitem__(self, idx):
        return self.lam[idx]

    @classmethod
    def identity(cls) -> PropagatorMatrix:
        return cls(np.eye(3), 0.0)


def coefficient_matrix(k: CouplingRatios) -> np.ndarray:
    """Generator ``M`` of the linear system for ``(a_1o, a_1e^+, a_3e)``."""
    return np.array(
        [
            [0.0, 1.0, -k.k2],
            [1.0, 0.0, k.k1],
            [k.k2, k.k1, 0.0],
        ]
    )


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v}")


def stable_trig_kernels(q_sq: float, zeta: float) -> tuple[float, float, float]:
    """Return ``(C, S, H)`` = ``(cosh(q z), sinh(q z)/q, (cosh(q z) - 1)/q^2)``.

    For ``q_sq < 0`` these continue to ``cos``/``sin`` of ``w = sqrt(-q_sq)``.
    Near ``q_sq * zeta**2 = 0`` a truncated even power series is used. ``H`` is
    evaluated through half-angle forms, which avoids the ``C - 1`` cancellation.
    """
    q_sq = float(q_sq)
    zeta = float(zeta)
    _check_finite(q_sq=q_sq, zeta=zeta)
    x = q_sq * zeta * zeta
    if abs(x) < _SERIES_THRESHOLD:
        # C = sum x^n/(2n)!, S = z sum x^n/(2n+1)!, H = z^2 sum x^n/(2n+2)!
        c = s = h = 0.0
        term = 1.0
        for n in range(_SERIES_TERMS):
            c += term / math.factorial(2 * n)
            s += term / math.factorial(2 * n + 1)
            h += term / math.factorial(2 * n + 2)
            term *= x
        return c, s * zeta, h * zeta * zeta
    if q_sq > 0:
        q = math.sqrt(q_sq)
        half = math.sinh(0.5 * q * zeta)
        return math.cosh(q * zeta), math.sinh(q * zeta) / q, 2.0 * half * half / q_sq
    w = math.sqrt(-q_sq)
    half = math.sin(0.5 * w * zeta)
    return math.cos(w * zeta), math.sin(w * zeta) / w, 2.0 * half * half / (-q_sq)


def lambda_matrix(k: CouplingRatios, zeta: float) -> PropagatorMatrix:
    """Evaluate the exact propagator ``exp(zeta M)`` in closed form."""
    zeta = float(zeta)
    _check_finite(zeta=zeta)
    if zeta < 0:
        raise DomainError(f"zeta must be >= 0 (forward evolution only), got {zeta}")
    k1, k2 = k.k1, k.k2
    c, s, h = stable_trig_kernels(k.q_sq, zeta)
    lam = np.array(
        [
            [c - k1 * k1 * h, s - k1 * k2 * h, -k2 * s + k1 * h],
            [s + k1 * k2 * h, c + k2 * k2 * h, k1 * s - k2 * h],
            [k2 * s + k1 * h, k1 * s + k2 * h, c - h],
        ]
    )
    return PropagatorMatrix(lam, zeta)


def _rk4_batch(gen: np.ndarray, zetas: np.ndarray, steps: int) -> np.ndarray:
    # gen: (n, 3, 3), zetas: (n,). Classical RK4 on d(lam)/dz = gen @ lam.
    # For a constant generator the four stages collapse into one step matrix
    # R = I + A + A^2/2 + A^3/6 + A^4/24 with A = h gen; it is applied step by step.
    n = gen.shape[0]
    a = (zetas / steps)[:, None, None] * gen
    eye = np.broadcast_to(np.eye(3), (n, 3, 3))
    a2 = a @ a
    step = eye + a + a2 / 2.0 + (a2 @ a) / 6.0 + (a2 @ a2) / 24.0
    lam = eye.copy()
    for _ in range(steps):
        lam = step @ lam
    return lam


def lambda_oracle_batch(
    k1: np.ndarray, k2: np.ndarray, zeta: np.ndarray, steps: int
) -> np.ndarray:
    """Vectorized :func:`lambda_oracle` over parameter arrays; returns ``(n, 3, 3)``."""
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    k1 = np.atleast_1d(np.asarray(k1, dtype=float))
    k2 = np.atleast_1d(np.asarray(k2, dtype=float))
    zeta = np.atleast_1d(np.asarray(zeta, dtype=float))
    k1, k2, zeta = np.broadcast_arrays(k1, k2, zeta)
    if not (np.all(np.isfinite(k1)) and np.all(np.isfinite(k2)) and np.all(np.isfinite(zeta))):
        raise DomainError("oracle inputs must be finite")
    if np.any(zeta < 0) or np.any(k1 < 0) or np.any(k2 < 0):
        raise DomainError("oracle requires zeta >= 0 and nonnegative couplings")
    gen = np.zeros((k1.size, 3, 3))
    gen[:, 0, 1] = gen[:, 1, 0] = 1.0
    gen[:, 0, 2] = -k2.ravel()
    gen[:, 2, 0] = k2.ravel()
    gen[:, 1, 2] = gen[:, 2, 1] = k1.ravel()
    return _rk4_batch(gen, zeta.ravel(), int(steps))


def lambda_oracle(k: CouplingRatios, zeta: float, steps: int) -> PropagatorMatrix:
    """Integrate the same linear system with fixed-step RK4 (verification only)."""
    zeta = float(zeta)
    _check_finite(zeta=zeta)
    if zeta < 0:
        raise DomainError(f"zeta must be >= 0, got {zeta}")
    lam = lambda_oracle_batch(k.k1, k.k2, zeta, steps)[0]
    return PropagatorMatrix(lam, zeta)


def symplectic_residual(p: PropagatorMatrix | np.ndarray) -> float:
    """Max-abs entry of ``lam @ eta @ lam.T - eta``; zero for exact evolution."""
    lam = p.lam if isinstance(p, PropagatorMatrix) else np.asarray(p, dtype=float)
    return float(np.max(np.abs(lam @ ETA @ lam.T - ETA)))


def relative_symplectic_residual(p: PropagatorMatrix | np.ndarray) -> float:
    """:func:`symplectic_residual` divided by ``max(1, max|lam|)**2``.

    Entries of ``lam`` grow like ``exp(q zeta)``; rounding each entry to binary64
    already perturbs ``lam eta lam^T`` by about ``eps * max|lam|**2``, so this
    scaled form is the precision-meaningful measure at large gain.
    """
    lam = p.lam if isinstance(p, PropagatorMatrix) else np.asarray(p, dtype=float)
    return symplectic_residual(lam) / max(1.0, float(np.max(np.abs(lam)))) ** 2
