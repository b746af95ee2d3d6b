import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhring import (
    FluxProgram,
    GaugeDirection,
    InvalidParameterError,
    ModeWindow,
    PropagatorConfig,
    RingPotential,
    WaveState,
    asymmetry_residual,
    asymptotic_amplitudes,
    crossing_times,
    delta_state,
    evolve,
    gauge_map,
    lz_probability,
    lz_transition_probability,
    make_reference_potential,
    plan_transparency,
    two_level_lz,
)


class TestCrossingTimes:
    def test_first_crossing(self):
        ev = crossing_times(0.08, 0.08, 0.003, [0])[0]
        assert ev.tau_n == pytest.approx(166.6667, abs=1e-3)

    def test_negative_ramp_deep_level(self):
        ev = crossing_times(0.04, 0.0, -0.003, [-7])[0]
        assert ev.tau_n == pytest.approx(2166.6667, abs=1e-3)

    @given(sigma=st.floats(-0.5, 0.5).filter(lambda s: abs(s) > 1e-4), n=st.integers(-10, 10))
    def test_doubling_sigma_halves_times(self, sigma, n):
        t1 = crossing_times(0.1, 0.1, sigma, [n])[0].tau_n
        t2 = crossing_times(0.1, 0.1, 2 * sigma, [n])[0].tau_n
        assert t2 == pytest.approx(t1 / 2, rel=1e-12)

    def test_zero_sigma_rejected(self):
        with pytest.raises(InvalidParameterError):
            crossing_times(0.1, 0.1, 0.0, [0])

    def test_events_carry_probability(self):
        ev = crossing_times(0.08, 0.08, 0.003, [0, 1, 2])
        assert all(e.p_zener == pytest.approx(lz_probability(0.08, 0.08, 0.003)) for e in ev)
        assert all(e.s_eff == pytest.approx(0.08) for e in ev)


class TestLZProbability:
    def test_reference_value(self):
        # 1 - exp(-pi 0.08^2 / 0.003), the "close to one" drift regime
        assert lz_probability(0.08, 0.08, 0.003) == pytest.approx(1.0 - math.exp(-math.pi * 0.0064 / 0.003))
        assert lz_probability(0.08, 0.08, 0.003) == pytest.approx(0.99877, abs=1e-5)

    def test_vanishing_coupling(self):
        assert lz_probability(0.0, 0.08, 0.003) == 0.0
        assert lz_probability(0.08, 0.0, -0.003) == 0.0

    def test_sudden_limit(self):
        assert lz_probability(0.08, 0.08, 1e6) == pytest.approx(0.0, abs=1e-7)

    def test_ramp_sign_irrelevant(self):
        assert lz_probability(0.1, 0.05, 0.01) == lz_probability(0.1, 0.05, -0.01)

    def test_negative_product_rejected(self):
        with pytest.raises(InvalidParameterError):
            lz_probability(0.04, -0.01, 0.003)

    @given(
        s=st.floats(0.01, 0.1),
        ds=st.floats(0.001, 0.05),
        sigma=st.floats(0.005, 0.05),
        dsig=st.floats(0.001, 0.05),
    )
    @settings(max_examples=60)
    def test_monotonicity(self, s, ds, sigma, dsig):
        # strictly monotone in the coupling product and in 1/|sigma|
        # (away from float saturation of 1 - exp(-x))
        assert lz_probability(s + ds, s + ds, sigma) > lz_probability(s, s, sigma)
        assert lz_probability(s, s, sigma + dsig) < lz_probability(s, s, sigma)


class TestGaugeMap:
    def test_single_mode_factor(self):
        w = ModeWindow(0, 2)
        s = WaveState(tau=0.0, window=w, amps=np.array([0, 1.0, 0], complex))
        out = gauge_map(s, 0.3, GaugeDirection.FROM_HERMITIAN)
        assert abs(out.amplitude(1)) == pytest.approx(1.3627703, abs=1e-6)

    def test_alpha_zero_is_identity(self):
        w = ModeWindow(-2, 2)
        s = WaveState(tau=0.0, window=w, amps=np.arange(5, dtype=complex))
        out = gauge_map(s, 0.0, GaugeDirection.TO_HERMITIAN)
        assert np.array_equal(out.amps, s.amps)

    @given(alpha=st.floats(0.0, 0.95), seed=st.integers(0, 100))
    @settings(max_examples=40)
    def test_round_trip(self, alpha, seed):
        rng = np.random.default_rng(seed)
        w = ModeWindow(-3, 3)
        s = WaveState(tau=0.0, window=w, amps=rng.normal(size=7) + 1j * rng.normal(size=7))
        back = gauge_map(gauge_map(s, alpha, GaugeDirection.TO_HERMITIAN), alpha, GaugeDirection.FROM_HERMITIAN)
        assert np.abs(back.amps - s.amps).max() < 1e-13 * max(1.0, np.abs(s.amps).max())

    def test_breaking_point_rejected(self):
        w = ModeWindow(-2, 2)
        s = WaveState(tau=0.0, window=w, amps=np.ones(5, complex))
        with pytest.raises(InvalidParameterError):
            gauge_map(s, 1.0, GaugeDirection.TO_HERMITIAN)

    def test_commutes_with_evolution(self):
        # evolving the skewed chain equals gauge-dressing the symmetric one
        alpha, v0, sigma = 0.3, 0.08, 0.003
        flux = FluxProgram.ramp(sigma)
        w = ModeWindow(-5, 7)
        cfg = PropagatorConfig(rtol=1e-10, atol=1e-13)
        taus = np.linspace(0.0, 600.0, 13)
        skew = evolve(make_reference_potential(v0, alpha), flux, w, delta_state(w, 0), (0.0, 600.0), cfg, taus=taus)
        s_eff = v0 * math.sqrt(1 - alpha**2)
        sym = evolve(RingPotential({1: s_eff, -1: s_eff}), flux, w, delta_state(w, 0), (0.0, 600.0), cfg, taus=taus)
        for k in range(len(taus)):
            mapped = gauge_map(sym.states[k], alpha, GaugeDirection.FROM_HERMITIAN)
            assert np.abs(mapped.amps - skew.amps[k]).max() < 1e-6


class TestAsymmetry:
    def _pair(self, alpha, v0, sigma=0.003, span=700.0, rtol=1e-10):
        w = ModeWindow(-8, 8)
        cfg = PropagatorConfig(rtol=rtol, atol=1e-13)
        taus = np.linspace(0.0, span, 15)
        p = make_reference_potential(v0, alpha)
        plus = evolve(p, FluxProgram.ramp(sigma), w, delta_state(w, 0), (0.0, span), cfg, taus=taus)
        minus = evolve(p, FluxProgram.ramp(-sigma), w, delta_state(w, 0), (0.0, span), cfg, taus=taus)
        return plus, minus

    def test_hermitian_mirror(self):
        plus, minus = self._pair(0.0, 0.08)
        assert asymmetry_residual(plus, minus, 0.0) < 1e-8

    def test_nonhermitian_weighted_mirror(self):
        plus, minus = self._pair(0.3, 0.08)
        assert asymmetry_residual(plus, minus, 0.3) < 1e-6

    def test_zero_potential_exact(self):
        plus, minus = self._pair(0.0, 0.0)
        assert asymmetry_residual(plus, minus, 0.0) == 0.0

    def test_mismatched_trajectories_rejected(self):
        w = ModeWindow(-3, 3)
        p = RingPotential({})
        a = evolve(p, FluxProgram.ramp(0.003), w, delta_state(w, 0), (0.0, 50.0), taus=6)
        b = evolve(p, FluxProgram.ramp(-0.003), w, delta_state(w, 0), (0.0, 50.0), taus=7)
        with pytest.raises(InvalidParameterError):
            asymmetry_residual(a, b, 0.0)


class TestAsymptoticAmplitudes:
    def test_single_jump_magnitude(self):
        # |J| = s1 sqrt(pi/|sigma|) with s1 = 2 v0 = 0.04
        taus = np.array([400.0])
        table = asymptotic_amplitudes(0.02, 0.003, {0: 1.0}, taus)
        assert abs(table[1][0]) == pytest.approx(1.2944, abs=2e-4)

    def test_no_jump_before_first_crossing(self):
        taus = np.array([10.0, 100.0])
        table = asymptotic_amplitudes(0.02, 0.003, {0: 1.0}, taus, n_range=(0, 2))
        assert np.allclose(table[0], 1.0)
        assert np.allclose(table[1], 0.0)

    def test_downward_ramp_freezes(self):
        taus = np.linspace(10.0, 3000.0, 7)
        table = asymptotic_amplitudes(0.02, -0.003, {0: 1.0}, taus)
        assert np.allclose(table[0], 1.0)
        for n, vals in table.items():
            if n != 0:
                assert np.allclose(vals, 0.0)

    def test_cascade_compounds_jumps(self):
        taus = np.array([900.0])
        table = asymptotic_amplitudes(0.02, 0.003, {0: 1.0}, taus)
        jump = 0.04 * math.sqrt(math.pi / 0.003)
        assert abs(table[2][0]) == pytest.approx(jump**2, rel=1e-12)

    def test_crossing_time_sample_rejected(self):
        tau0 = (2 * 0 + 1) / (2 * 0.003)
        with pytest.raises(InvalidParameterError):
            asymptotic_amplitudes(0.02, 0.003, {0: 1.0}, np.array([tau0]))


class TestUnidirectionalBlocking:
    """What the one-way coupling guarantees in the exact dynamics: with
    s2 = 0 and a downward ramp, nothing ever flows below the occupied mode,
    and the modes above it carry only bounded virtual dressing."""

    def test_downward_flow_exactly_blocked_and_dressing_bounded(self):
        p = make_reference_potential(0.02, 1.0)
        flux = FluxProgram.ramp(-0.003)
        w = ModeWindow(-6, 4)
        traj = evolve(p, flux, w, delta_state(w, 0), (0.0, 800.0), taus=81)
        below = np.abs(traj.amps[:, w.ns < 0])
        assert below.max() < 1e-12
        above = np.abs(traj.amps[:, w.ns > 0])
        # first-order dressing peaks at ~ 2 s1 / gap = 0.08; no secular growth
        assert above.max() < 2.5 * 0.04
        assert np.abs(traj.mode(0)) == pytest.approx(1.0, abs=1e-9)


class TestTransparencyPlan:
    def test_reference_plan(self):
        plan = plan_transparency(-7, -0.003, 1200.0)
        assert plan.tau0 == pytest.approx(-966.6667, abs=1e-3)
        assert plan.T == pytest.approx((2 * -7 + 1) / (2 * -0.003) + plan.tau0)

    def test_small_example(self):
        # T = (2M+1)/(2 sigma) + tau0 with M=0, sigma=-0.5: tau0 = 0 - (-1) = 1
        plan = plan_transparency(0, -0.5, 0.0)
        assert plan.tau0 == pytest.approx(1.0)

    @given(T=st.floats(-100, 2000), shift=st.floats(-500, 500))
    def test_target_shift_moves_origin_linearly(self, T, shift):
        a = plan_transparency(-3, -0.01, T)
        b = plan_transparency(-3, -0.01, T + shift)
        assert b.tau0 - a.tau0 == pytest.approx(shift, abs=1e-9)

    def test_wrong_ramp_direction_rejected(self):
        with pytest.raises(InvalidParameterError):
            plan_transparency(-7, 0.003, 1200.0)


class TestTwoLevel:
    def test_hermitian_crossing_matches_formula(self):
        sigma, S = 0.003, 0.08
        tau_n = 1 / (2 * sigma)
        span = (tau_n - 400, tau_n + 400)
        c = two_level_lz(S, S, 0, sigma, span)
        p_z = lz_probability(S, S, sigma)
        assert abs(c[1]) ** 2 == pytest.approx(p_z, rel=0.02)

    def test_zero_coupling_keeps_moduli(self):
        sigma = 0.003
        tau_n = 1 / (2 * sigma)
        c = two_level_lz(0.0, 0.0, 0, sigma, (tau_n - 400, tau_n + 400))
        assert abs(c[0]) == pytest.approx(1.0, abs=1e-12)
        assert abs(c[1]) == pytest.approx(0.0, abs=1e-12)

    def test_scattering_independent_of_winding_number(self):
        sigma, S = 0.003, 0.08
        mags = []
        for n in (0, 3):
            tau_n = (2 * n + 1) / (2 * sigma)
            c = two_level_lz(S, S, n, sigma, (tau_n - 380, tau_n + 380))
            mags.append(np.abs(c))
        assert np.abs(mags[0] - mags[1]).max() < 1e-6

    def test_narrow_span_rejected(self):
        with pytest.raises(InvalidParameterError):
            two_level_lz(0.08, 0.08, 0, 0.003, (160.0, 175.0))

    def test_projected_probability_accuracy(self):
        for x in (0.4, 2.0, 20.0):
            S = 0.08
            sigma = math.pi * S * S / x
            p_num = lz_transition_probability(S, S, sigma)
            p_th = lz_probability(S, S, sigma)
            assert p_num == pytest.approx(p_th, rel=2e-3)

    def test_projected_probability_gauge_invariant(self):
        # skewed couplings with the same product give the same probability
        p_sym = lz_transition_probability(0.08, 0.08, 0.005)
        p_skew = lz_transition_probability(0.104, 0.08 * 0.08 / 0.104, 0.005)
        assert p_skew == pytest.approx(p_sym, rel=1e-9)
