import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhring import (
    FluxProgram,
    InvalidParameterError,
    ModeWindow,
    Picture,
    RingPotential,
    WaveState,
    chain_couplings,
    free_energy,
    is_pt_symmetric,
    make_reference_potential,
    sample_potential,
)

finite_floats = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


class TestReferencePotential:
    def test_fig2_amplitude(self):
        p = make_reference_potential(0.08, 0.0)
        assert p.coupling(+1) == pytest.approx(0.08)
        assert p.coupling(-1) == pytest.approx(0.08)

    def test_fully_nonhermitian_drops_lower_harmonic(self):
        p = make_reference_potential(0.02, 1.0)
        assert p.coupling(+1) == pytest.approx(0.04)
        assert p.coupling(-1) == 0
        assert p.harmonics == [1]

    def test_zero_amplitude_gives_empty_coeffs(self):
        p = make_reference_potential(0.0, 0.5)
        assert p.coeffs == {}

    def test_negative_parameters_rejected(self):
        with pytest.raises(InvalidParameterError):
            make_reference_potential(-0.1, 0.0)
        with pytest.raises(InvalidParameterError):
            make_reference_potential(0.1, -0.5)

    @given(v0=st.floats(0, 1), alpha=st.floats(0, 3))
    def test_chain_couplings_match_construction(self, v0, alpha):
        s1, s2 = chain_couplings(make_reference_potential(v0, alpha))
        assert s1 == pytest.approx(v0 * (1 + alpha))
        assert s2 == pytest.approx(v0 * (1 - alpha))


class TestFreeEnergy:
    def test_direct_square(self):
        assert free_energy(2, 0.5) == pytest.approx(2.25)
        assert free_energy(0, 0.0) == 0.0

    @given(l=st.integers(-20, 20))
    def test_pair_coalescence_at_half_integer_flux(self, l):
        f = (2 * l + 1) / 2
        assert free_energy(l + 1, f) == pytest.approx(free_energy(l, f), abs=1e-12)

    @given(n=st.integers(-30, 30), f=finite_floats)
    def test_mirror_symmetry(self, n, f):
        assert free_energy(n, f) == pytest.approx(free_energy(-n, -f), rel=1e-12, abs=1e-12)


class TestPTSymmetry:
    @given(v0=st.floats(0, 1), alpha=st.floats(0, 5))
    def test_reference_family_always_pt(self, v0, alpha):
        assert is_pt_symmetric(make_reference_potential(v0, alpha), tol=0.0)

    def test_imaginary_coefficient_breaks_pt(self):
        assert not is_pt_symmetric(RingPotential({+1: 0.1j}))

    def test_empty_potential_is_pt(self):
        assert is_pt_symmetric(RingPotential({}))


class TestSamplePotential:
    def test_fully_nonhermitian_values(self):
        p = make_reference_potential(0.02, 1.0)
        vals = sample_potential(p, np.array([0.0, np.pi]))
        assert vals[0] == pytest.approx(0.04)
        assert vals[1] == pytest.approx(-0.04, abs=1e-15)

    def test_zero_potential(self):
        assert np.all(sample_potential(RingPotential({}), np.linspace(0, 7, 11)) == 0)

    @given(v0=st.floats(0, 0.5), alpha=st.floats(0, 2), phi=st.floats(-10, 10))
    @settings(max_examples=60)
    def test_matches_trigonometric_form(self, v0, alpha, phi):
        # u_q normalization doubles the bare cos/sin profile
        p = make_reference_potential(v0, alpha)
        expected = 2 * v0 * (np.cos(phi) + 1j * alpha * np.sin(phi))
        got = sample_potential(p, phi)[0]
        assert got == pytest.approx(expected, abs=1e-12)

    def test_nonfinite_phi_rejected(self):
        with pytest.raises(InvalidParameterError):
            sample_potential(RingPotential({1: 0.1}), [np.nan])


class TestFluxProgram:
    def test_static_is_constant(self):
        f = FluxProgram.static(0.25)
        assert f(0.0) == 0.25
        assert f(123.0) == 0.25

    def test_ramp_vanishes_at_origin(self):
        f = FluxProgram.ramp(-0.003, tau0=-966.67)
        assert f(-966.67) == pytest.approx(0.0)

    def test_zero_sigma_rejected(self):
        with pytest.raises(InvalidParameterError):
            FluxProgram.ramp(0.0)

    @given(
        sigma=st.floats(-0.5, 0.5).filter(lambda s: abs(s) > 1e-3),
        tau0=st.floats(-100, 100),
        n=st.integers(-5, 5),
        tau=st.floats(0, 50),
    )
    @settings(max_examples=60)
    def test_phase_integral_matches_quadrature(self, sigma, tau0, n, tau):
        flux = FluxProgram.ramp(sigma, tau0)
        ts = np.linspace(0, tau, 4001)
        ref = np.trapezoid((n - flux(ts)) ** 2, ts) if hasattr(np, "trapezoid") else np.trapz((n - flux(ts)) ** 2, ts)
        assert flux.phase_integral(n, tau) == pytest.approx(ref, rel=1e-6, abs=1e-6)


class TestWindowAndState:
    def test_window_validation(self):
        with pytest.raises(InvalidParameterError):
            ModeWindow(3, 3)
        with pytest.raises(InvalidParameterError):
            ModeWindow(0, 1)  # only 2 modes

    def test_state_length_checked(self):
        w = ModeWindow(-2, 2)
        with pytest.raises(InvalidParameterError):
            WaveState(tau=0.0, window=w, amps=np.zeros(3, complex))

    def test_state_is_immutable(self):
        w = ModeWindow(-2, 2)
        s = WaveState(tau=0.0, window=w, amps=np.zeros(5, complex), picture=Picture.DIRECT)
        with pytest.raises(ValueError):
            s.amps[0] = 1.0
