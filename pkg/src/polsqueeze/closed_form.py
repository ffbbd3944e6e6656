"""Printed closed-form Stokes expressions, kept as a verification transcription.

The Stokes operators are written as quadratic polynomials in the *input*
operators with coefficient families ``p_j+-`` (S0 upper sign, S1 lower) and
``q_j`` (S2, S3). The variance expressions below are transcribed term by term
as printed, including the ``+-`` structure (upper sign for S0/S2, lower for
S1/S3). The Wick engine in :mod:`polsqueeze.moments` is the source of truth;
disagreements are located by :mod:`polsqueeze.erratum`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .moments import InputState, StokesReport
from .propagator import PropagatorMatrix


@dataclass(frozen=True, eq=False)
class PQCoefficients:
    p_plus: np.ndarray  # p0+ .. p6+
    p_minus: np.ndarray  # p0- .. p6-
    q: np.ndarray  # q0 .. q5

    def p(self, sign: int) -> np.ndarray:
        return self.p_plus if sign > 0 else self.p_minus


def pq_coefficients(p: PropagatorMatrix) -> PQCoefficients:
    l = p.lam
    l11, l12, l13 = l[0]
    l21, l22, l23 = l[1]

    def fam(sign):
        return np.array(
            [
                l12**2 + sign * l21**2 + sign * l23**2,
                l13**2 + sign * l23**2,
                l12 * l13 + sign * l22 * l23,
                l12**2 + sign * l22**2,
                l11 * l13 + sign * l21 * l23,
                l11 * l12 + sign * l21 * l22,
                l11**2 + sign * l21**2,
            ]
        )

    q = np.array(
        [
            l13 * l23,
            l13 * l22 + l12 * l23,
            l12 * l22,
            l13 * l21 + l11 * l23,
            l12 * l21 + l11 * l22,
            l11 * l21,
        ]
    )
    return PQCoefficients(fam(+1), fam(-1), q)


def stokes_mean_bracket(c: PQCoefficients, s: InputState) -> tuple[float, float]:
    """``<S2>``, ``<S3>`` as expectation of the q-expansion on the coherent input.

    Only the q2, q4, q5 families survive (the others carry an ``a_3e`` factor).
    Note ``<a_1e^+2> = |a_1e|^2 exp(-2i phi_1e)``; the printed bracket writes the
    opposite exponent for the q2 term, which only matters for S3 (see erratum).
    """
    q = c.q
    x = q[5] * s.alpha_1o**2 + q[4] * s.alpha_1o * s.alpha_1e.conjugate() + q[2] * s.alpha_1e.conjugate() ** 2
    # S2 = X + X^+, S3 = i(X - X^+) with X = q5 a1o^2 + q4 a1o a1e^+ + q2 a1e^+2
    return 2.0 * x.real, -2.0 * x.imag


def _printed_s01(pp: np.ndarray, s: InputState) -> tuple[float, float]:
    """Printed ``<S^2>`` and ``<S>`` bracket for S0 (p+) or S1 (p-), unnormalized."""
    p0, p1, p2, p3, p4, p5, p6 = pp
    o, e = s.mag_1o, s.mag_1e
    cs = math.cos(s.phase_1o + s.phase_1e)
    c2s = math.cos(2 * (s.phase_1o + s.phase_1e))
    second = (
        p0**2
        + p2**2
        + p5**2
        + (p2**2 + 2 * p0 * p3 + p3**2 + p5**2) * e**2
        + p3**2 * e**4
        + 2 * (p2 * p4 + 2 * p0 * p5 + p3 * p5 + p5 * p6) * o * e * cs
        + 4 * p3 * p5 * o * e**3 * cs
        + 2 * p5**2 * o**2 * e**2 * c2s
        + (p4**2 + p5**2 + 2 * p0 * p6 + p6**2) * o**2
        + 2 * (p5**2 + p3 * p6) * o**2 * e**2
        + 4 * p5 * p6 * o**3 * e * cs
        + p6**2 * o**4
    )
    mean = p0 + p3 * e**2 + 2 * p5 * o * e * cs + p6 * o**2
    return second, mean


def _printed_s23(q: np.ndarray, s: InputState, sign: int) -> tuple[float, complex]:
    """Printed ``<S^2>`` and mean bracket for S2 (sign=+1) or S3 (sign=-1)."""
    q0, q1, q2, q3, q4, q5 = q
    o, e = s.mag_1o, s.mag_1e
    fo, fe = s.phase_1o, s.phase_1e
    cos = math.cos
    second = (
        2 * q0**2
        + 2 * q2**2
        + q3**2
        + 2 * q5**2
        + sign * 2 * q2**2 * e**4 * cos(4 * fe)
        + (q1**2 + 4 * q2**2 + q4**2) * e**2
        + 2 * q2**2 * e**4
        + 2 * (q1 * q3 + 2 * q2 * q4 + 2 * q4 * q5) * o * e * cos(fo + fe)
        + 4 * q2 * q4 * o * e**3 * cos(fo + fe)
        + sign * 4 * q2 * q4 * o * e**3 * cos(fo - 3 * fe)
        + 4 * q2 * q5 * o**2 * e**2 * cos(2 * fo + 2 * fe)
        + sign * 2 * (q4**2 + 2 * q2 * q5) * o**2 * e**2 * cos(2 * fo - 2 * fe)
        + sign * 4 * q4 * q5 * o**3 * e * cos(3 * fo - fe)
        + sign * 2 * q5**2 * o**4 * cos(4 * fo)
        + 4 * q4 * q5 * o**3 * e * cos(fo + fe)
        + (q3**2 + q4**2 + 4 * q5**2) * o**2
        + 2 * q4**2 * o**2 * e**2
        + 2 * q5**2 * o**4
    )
    unit = 1 if sign > 0 else 1j
    bracket = unit * (
        q2 * e**2 * (cmath.exp(2j * fe) + sign * cmath.exp(-2j * fe))
        + q4 * o * e * (cmath.exp(1j * (fo - fe)) + sign * cmath.exp(-1j * (fo - fe)))
        + q5 * o**2 * (cmath.exp(2j * fo) + sign * cmath.exp(-2j * fo))
    )
    return second, bracket


def printed_raw_variances(
    p: PropagatorMatrix, s: InputState, fix_s3_bracket: bool = False
) -> np.ndarray:
    """Unnormalized ``<dSj^2>`` from the printed closed forms (defined for any input).

    With ``fix_s3_bracket`` the subtracted S3 mean uses :func:`stokes_mean_bracket`
    instead of the printed bracket; this is the single change needed for the
    transcription to match the Wick engine.
    """
    c = pq_coefficients(p)
    out = []
    for sign in (+1, -1):
        second, mean = _printed_s01(c.p(sign), s)
        out.append(second - mean**2)
    for sign in (+1, -1):
        second, bracket = _printed_s23(c.q, s, sign)
        if fix_s3_bracket and sign < 0:
            out.append(second - stokes_mean_bracket(c, s)[1] ** 2)
        else:
            out.append(second - (bracket**2).real)
    return np.array(out)


def printed_mean_bracket(p: PropagatorMatrix, s: InputState) -> np.ndarray:
    """Means as they appear inside the printed subtracted brackets."""
    c = pq_coefficients(p)
    _, m0 = _printed_s01(c.p_plus, s)
    _, m1 = _printed_s01(c.p_minus, s)
    _, b2 = _printed_s23(c.q, s, +1)
    _, b3 = _printed_s23(c.q, s, -1)
    return np.array([m0, m1, b2.real, b3.real])


def stokes_variances_paper(
    p: PropagatorMatrix, s: InputState, fix_s3_bracket: bool = False
) -> StokesReport:
    """Normalized variances from the printed closed forms.

    Raises :class:`DegenerateInputError` when both input amplitudes vanish; use
    :func:`printed_raw_variances` in that regime.
    """
    return StokesReport(
        zeta=p.zeta,
        means=printed_mean_bracket(p, s),
        variances=printed_raw_variances(p, s, fix_s3_bracket),
        denominator=s.s0_variance,
    )
