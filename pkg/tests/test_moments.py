import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fock_oracle import FockOracle
from polsqueeze import CouplingRatios, DegenerateInputError, DomainError, lambda_matrix
from polsqueeze.moments import (
    InputState,
    Mode,
    mean_photon_numbers,
    output_expansion,
    photon_number_variance,
    stokes_means,
    stokes_moments,
    stokes_variances_wick,
    su2_commutator_check,
    wick_photon_numbers,
    wrap_phase,
)
from polsqueeze.propagator import PropagatorMatrix

FANO_K0_ZETA05 = 1.4277664879054168  # regression value, Wick engine (Fock oracle agrees to 1e-13)

phases = st.floats(-math.pi, math.pi)
mags = st.floats(0.0, 2.0)
ks = st.floats(0.0, 1.5)
zs = st.floats(0.0, 1.2)


def point(k1, k2, zeta):
    return lambda_matrix(CouplingRatios(k1, k2), zeta)


class TestInputState:
    def test_photon_number_constructor(self):
        s = InputState.from_photon_numbers(4.0, 9.0, phase_sum=1.0, phase_diff=0.4)
        assert (s.mag_1o, s.mag_1e) == (2.0, 3.0)
        assert s.phase_1o == pytest.approx(0.7)
        assert s.phase_1e == pytest.approx(0.3)
        assert s.phase_sum == pytest.approx(1.0)
        assert s.s0_variance == 13.0

    def test_phase_wrapping(self):
        assert wrap_phase(math.pi) == math.pi
        assert wrap_phase(-math.pi) == math.pi
        assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
        assert InputState(1, 7.0, 1, 0).phase_1o == pytest.approx(7.0 - 2 * math.pi)

    @pytest.mark.parametrize("args", [(-1, 0, 1, 0), (1, math.nan, 1, 0), (1, 0, math.inf, 0)])
    def test_rejects_invalid(self, args):
        with pytest.raises(DomainError):
            InputState(*args)

    def test_rejects_negative_photons(self):
        with pytest.raises(DomainError):
            InputState.from_photon_numbers(-1, 1)


class TestOutputExpansion:
    def test_identity(self):
        s = InputState(1.3, 0.2, 0.7, -1.1)
        e = output_expansion(PropagatorMatrix.identity(), s)
        assert e.mean_b1 == s.alpha_1o and e.mean_b2 == s.alpha_1e
        expected = np.zeros((2, 6))
        expected[0, 0] = expected[1, 2] = 1
        np.testing.assert_array_equal(e.fluct, expected)

    def test_two_mode_limit(self):
        e = output_expansion(point(0, 0, 1.0), InputState(1, 0, 0, 0))
        assert e.mean_b1 == pytest.approx(math.cosh(1), abs=1e-15)
        assert e.mean_b2 == pytest.approx(math.sinh(1), abs=1e-15)

    @given(ks, ks, zs)
    def test_commutators_preserved(self, k1, k2, zeta):
        e = output_expansion(point(k1, k2, zeta), InputState(1, 0, 1, 0))
        assert e.commutator_residual() <= 1e-10 * max(1.0, np.abs(e.fluct).max() ** 2)


class TestPhotonNumbers:
    def test_zero_zeta(self):
        s = InputState(1.5, 0.3, 0.5, 2.0)
        assert mean_photon_numbers(point(0.4, 0.7, 0), s) == pytest.approx((2.25, 0.25, 0), abs=1e-15)

    def test_ordinary_crystal_value(self):
        # Exact reduction at k = 0: <N> = e^{-2 zeta} + sinh^2 zeta for both modes.
        s = InputState.from_photon_numbers(1, 1, phase_sum=math.pi)
        n1o, n1e, n3e = mean_photon_numbers(point(0, 0, 0.4), s)
        exact = math.exp(-0.8) + math.sinh(0.4) ** 2
        assert n1o == pytest.approx(exact, abs=1e-14)
        assert n1e == pytest.approx(exact, abs=1e-14)
        assert n3e == 0
        assert exact == pytest.approx(0.6180464372696444, abs=1e-15)

    def test_spontaneous_regime(self):
        p = point(0.3, 0.8, 0.9)
        l = p.lam
        got = mean_photon_numbers(p, InputState(0, 0, 0, 0))
        assert got == pytest.approx((l[0, 1] ** 2, l[1, 0] ** 2 + l[1, 2] ** 2, l[2, 1] ** 2), rel=1e-14)

    @given(ks, ks, zs, mags, mags, phases, phases)
    def test_closed_form_matches_wick(self, k1, k2, zeta, o, e, fo, fe):
        p, s = point(k1, k2, zeta), InputState(o, fo, e, fe)
        closed = mean_photon_numbers(p, s)[:2]
        wick = wick_photon_numbers(p, s)
        scale = max(1.0, *closed)
        assert np.allclose(closed, wick, rtol=0, atol=1e-12 * scale)

    @given(ks, ks, zs, mags, mags, phases)
    def test_manley_rowe_bookkeeping(self, k1, k2, zeta, o, e, fsum):
        # The eta-weighted number N1o - N1e + N3e is a constant of motion.
        p = point(k1, k2, zeta)
        n1o, n1e, n3e = mean_photon_numbers(p, InputState.from_photon_numbers(o, e, fsum, 0.0))
        scale = max(1.0, np.abs(p.lam).max() ** 2 * (1 + o + e))
        assert n1o - n1e + n3e == pytest.approx(o - e, abs=1e-11 * scale)

    @given(zs, mags, mags, phases, phases)
    def test_ordinary_crystal_pairwise_creation(self, zeta, o, e, fo, fe):
        n1o, n1e, n3e = mean_photon_numbers(point(0, 0, 2 * zeta), InputState(o, fo, e, fe))
        assert n3e == 0
        assert n1o - n1e == pytest.approx(o**2 - e**2, abs=1e-10)

    def test_phase_sensitivity(self):
        zetas = np.round(np.arange(101) * 0.01, 12)
        k = CouplingRatios(0.2, 0.5)

        def n1o(phase_sum):
            s = InputState.from_photon_numbers(1, 1, phase_sum)
            return np.array([mean_photon_numbers(lambda_matrix(k, z), s)[0] for z in zetas])

        assert np.all(np.diff(n1o(0.0)) > 0)
        # phi_sum = pi: derivative at 0+ is -2 (stimulated down-conversion runs backwards).
        h = 1e-6
        s = InputState.from_photon_numbers(1, 1, math.pi)
        slope = (mean_photon_numbers(lambda_matrix(k, h), s)[0] - 1) / h
        assert slope == pytest.approx(-2.0, abs=1e-4)
        assert np.diff(n1o(math.pi))[0] < 0


class TestPhotonVariance:
    def test_coherent_at_zero(self):
        s = InputState(1.7, 0.4, 0.9, 0.1)
        assert photon_number_variance(point(0.5, 0.5, 0), s, Mode.O1) == pytest.approx(1.7**2, rel=1e-14)
        assert photon_number_variance(point(0.5, 0.5, 0), s, "1e") == pytest.approx(0.81, rel=1e-14)

    def test_thermal_marginal(self):
        var = photon_number_variance(point(0, 0, 1.0), InputState(0, 0, 0, 0), Mode.O1)
        sh2 = math.sinh(1) ** 2
        assert var == pytest.approx(sh2 * (sh2 + 1), rel=1e-13)

    def test_super_poissonian_fano(self):
        p = point(0, 0, 0.5)
        s = InputState.from_photon_numbers(1, 1, phase_sum=math.pi)
        fano = photon_number_variance(p, s, Mode.O1) / mean_photon_numbers(p, s)[0]
        assert fano > 1
        assert fano == pytest.approx(FANO_K0_ZETA05, rel=1e-12)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            photon_number_variance(point(0, 0, 0), InputState(1, 0, 1, 0), "3e")


class TestStokes:
    def test_coherent_means(self):
        p = PropagatorMatrix.identity()
        assert stokes_means(p, InputState(1, math.pi, 1, 0)) == pytest.approx([2, 0, -2, 0], abs=1e-15)
        assert stokes_means(p, InputState(1.5, 0.7, 0, 0)) == pytest.approx([2.25, 2.25, 0, 0], abs=1e-15)

    def test_means_dual_route_example(self):
        p = point(0.2, 0.5, 0.6)
        s = InputState.from_photon_numbers(1, 1, math.pi)
        wick, _ = stokes_moments(p, s)
        assert np.abs(stokes_means(p, s) - wick.real).max() <= 1e-10

    @given(ks, ks, zs, mags, mags, phases, phases)
    def test_means_dual_route(self, k1, k2, zeta, o, e, fo, fe):
        p, s = point(k1, k2, zeta), InputState(o, fo, e, fe)
        wick, _ = stokes_moments(p, s)
        closed = stokes_means(p, s)
        assert np.abs(wick.imag).max() <= 1e-12 * max(1.0, np.abs(wick).max())
        assert np.allclose(closed, wick.real, rtol=0, atol=1e-11 * max(1.0, np.abs(wick).max()))

    @given(mags, mags, phases, phases)
    def test_coherent_baseline(self, o, e, fo, fe):
        if o**2 + e**2 < 1e-6:
            return
        rep = stokes_variances_wick(PropagatorMatrix.identity(), InputState(o, fo, e, fe))
        assert np.abs(rep.normalized - 1).max() <= 1e-12

    @given(zs, mags, mags, phases, phases)
    def test_ordinary_crystal_conserves_s1(self, zeta, o, e, fo, fe):
        if o**2 + e**2 < 1e-3:
            return
        rep = stokes_variances_wick(point(0, 0, 2 * zeta), InputState(o, fo, e, fe))
        assert rep.normalized[1] == pytest.approx(1, abs=1e-10)

    def test_degenerate_denominator(self):
        with pytest.raises(DegenerateInputError):
            stokes_variances_wick(point(0.2, 0.5, 0.3), InputState(0, 0, 0, 0))

    def test_raw_spontaneous_variances_available(self):
        _, cov = stokes_moments(point(0.2, 0.5, 0.3), InputState(0, 0, 0, 0))
        assert np.all(np.diag(cov).real > 0)

    @given(ks, ks, zs, mags, mags, phases, phases)
    def test_s2_s3_variances_coincide(self, k1, k2, zeta, o, e, fo, fe):
        _, cov = stokes_moments(point(k1, k2, zeta), InputState(o, fo, e, fe))
        v = np.diag(cov).real
        assert v[2] == pytest.approx(v[3], rel=1e-10, abs=1e-10)

    @given(ks, ks, zs, mags, mags, phases, phases, st.floats(-3, 3))
    def test_shift_invariance(self, k1, k2, zeta, o, e, fo, fe, delta):
        # (phi_1o + d, phi_1e - d): variances and numbers invariant, the
        # coherence means (S2, S3) rotate rigidly by 2d.
        p = point(k1, k2, zeta)
        a, b = InputState(o, fo, e, fe), InputState(o, fo + delta, e, fe - delta)
        ma, ca = stokes_moments(p, a)
        mb, cb = stokes_moments(p, b)
        scale = max(1.0, np.abs(ca).max())
        assert np.allclose(np.diag(ca).real, np.diag(cb).real, rtol=0, atol=1e-12 * scale)
        assert np.allclose(mean_photon_numbers(p, a), mean_photon_numbers(p, b), rtol=0, atol=1e-12 * scale)
        assert np.allclose(ma.real[:2], mb.real[:2], rtol=0, atol=1e-12 * scale)
        za, zb = complex(ma[2].real, -ma[3].real), complex(mb[2].real, -mb[3].real)
        assert abs(zb - za * complex(math.cos(2 * delta), math.sin(2 * delta))) <= 1e-11 * scale

    @given(ks, ks, zs, mags, mags, phases, phases)
    def test_uncertainty_relation(self, k1, k2, zeta, o, e, fo, fe):
        if o**2 + e**2 < 1e-6:
            return
        assert stokes_variances_wick(point(k1, k2, zeta), InputState(o, fo, e, fe)).satisfies_uncertainty()

    @pytest.mark.parametrize(
        "k1,k2,zeta,tol", [(0.5, 0.5, 0.0, 1e-12), (0.2, 0.5, 1.0, 1e-10), (1.0, math.sqrt(2), 2.0, 1e-10)]
    )
    def test_su2_algebra(self, k1, k2, zeta, tol):
        assert su2_commutator_check(point(k1, k2, zeta), InputState.from_photon_numbers(1, 1, math.pi)) <= tol

    def test_sub_poissonian_s1_exists(self):
        s = InputState.from_photon_numbers(1, 1, math.pi)
        v1 = [stokes_variances_wick(point(0.0, 1.4, z), s).normalized[1] for z in np.linspace(0, 1.5, 31)]
        assert min(v1) < 1


@pytest.mark.parametrize(
    "k1,k2,zeta,o,fo,e,fe",
    [
        (0.2, 0.5, 0.6, 1.0, math.pi, 1.0, 0.0),
        (0.0, 0.0, 0.5, 1.0, 2.0, 1.0, 1.1),
        (0.7, 0.3, 0.4, 1.3, -0.5, 0.6, 2.3),
        (1.0, math.sqrt(2), 0.5, 0.8, 0.2, 1.1, -1.0),
        (0.3, 1.4, 0.35, 1.0, 0.4, 0.9, 1.7),
    ],
)
def test_against_fock_oracle(k1, k2, zeta, o, fo, e, fe):
    p, s = point(k1, k2, zeta), InputState(o, fo, e, fe)
    fock = FockOracle(p.lam, s.alpha_1o, s.alpha_1e)
    mean, cov = stokes_moments(p, s)
    np.testing.assert_allclose(mean.real, fock.stokes_means(), rtol=0, atol=1e-9)
    np.testing.assert_allclose(np.diag(cov).real, fock.stokes_variances(), rtol=0, atol=1e-9)
    np.testing.assert_allclose(mean_photon_numbers(p, s), fock.photon_numbers(), rtol=0, atol=1e-9)
    for mode, op in ((Mode.O1, fock.numbers[0]), (Mode.E1, fock.numbers[1])):
        assert photon_number_variance(p, s, mode) == pytest.approx(fock.variance(op), abs=1e-9)
