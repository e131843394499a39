import math

import numpy as np
import pytest

from ferrosim import (EPS0, DielectricLayer, PresetPulse,
                      StackConfig, Triangle, WaveformSpec, displacement_current,
                      hysteresis_experiment, integrate_current,
                      loop_waveform_spec, nc_hysteresis_check,
                      reversal_experiment, scurve, switching_time,
                      uniform_grid)
from ferrosim.experiments import ReversalCurve

QUASI_STATIC_PERIOD = 8e-6


@pytest.fixture(scope="module")
def mfm_loop(mfm_stack):
    grid = uniform_grid(1, 5e-9, p0=-0.25)
    spec = loop_waveform_spec(amplitude=2.0, period=QUASI_STATIC_PERIOD, cycles=2)
    return hysteresis_experiment(mfm_stack, grid, spec)


class TestIntegrateCurrent:
    def test_zero_current(self):
        dp = integrate_current(np.zeros(100), area=1e-10, dt=1e-9)
        assert np.allclose(dp, 0.0)

    def test_linear_capacitor_collapses_to_line(self, hzo, mfm_stack):
        # analytic oracle: square-wave current of a linear capacitor under a
        # triangle integrates to a triangular P_T(t); P-E loop has no area
        period, n = 1e-6, 8000
        dt = period / n
        t = np.arange(2 * n) * dt
        cap = EPS0 * hzo.eps_f * mfm_stack.area / hzo.t_f
        v_rate = 4.0 / period
        phase = np.mod(t / period, 1.0)
        sign = np.where((phase < 0.25) | (phase >= 0.75), 1.0, -1.0)
        i = cap * v_rate * sign
        p_t = integrate_current(i, mfm_stack.area, dt=dt)
        v = np.where(phase < 0.25, 4 * phase,
                     np.where(phase < 0.75, 2 - 4 * phase, 4 * phase - 4))
        expected = EPS0 * hzo.eps_f * v / hzo.t_f
        assert np.max(np.abs(p_t - expected)) < 1e-3 * np.max(np.abs(expected))
        # closed loop in (E, P_T): enclosed area tiny against a switching
        # loop's scale (only the sampled square-wave corners contribute)
        e = v / hzo.t_f
        area = np.sum(0.5 * (e[1:] + e[:-1]) * np.diff(p_t))
        assert abs(area) < 1e-3 * 4 * np.max(np.abs(e)) * np.max(np.abs(p_t))

    def test_round_trip_with_displacement_current(self):
        t = np.linspace(0.0, 1.0, 4001)
        d = 0.2 * np.sin(2 * np.pi * t) + 0.05 * np.sin(6 * np.pi * t) + 0.4
        i = displacement_current(d, area=3e-10, t=t)
        rec = integrate_current(i, area=3e-10, t=t)
        centered = d - 0.5 * (d.max() + d.min())
        assert np.max(np.abs(rec - centered)) < 1e-6 * np.ptp(d)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            integrate_current(np.array([]), area=1e-10, dt=1e-9)


class TestHysteresis:
    def test_quasi_static_metrics_match_calibration(self, mfm_loop):
        m = mfm_loop.metrics
        assert mfm_loop.switching
        assert m.e_c_pos == pytest.approx(1e8, rel=0.05)
        assert m.e_c_neg == pytest.approx(-1e8, rel=0.05)
        assert m.p_r_pos == pytest.approx(0.25, rel=0.02)
        assert m.p_r_neg == pytest.approx(-0.25, rel=0.02)
        assert m.e_c_pos > 0 > m.e_c_neg

    def test_loop_area_positive_and_matches_dissipation(self, mfm_stack, mfm_loop):
        # cross-check: area equals the cycle integral of I*V minus the
        # stored-energy change, per unit ferroelectric volume
        m = mfm_loop.metrics
        assert m.loop_area > 0.0
        tr = mfm_loop.trace
        t0 = tr.t[-1] - QUASI_STATIC_PERIOD
        sel = tr.t >= t0 - 1e-12
        t, i, v, u = tr.t[sel], tr.i[sel], tr.v[sel], tr.u_total[sel]
        supplied = np.trapezoid(i * v, t)
        stored = u[-1] - u[0]
        vol = mfm_stack.area * mfm_stack.ferro.t_f
        assert m.loop_area == pytest.approx((supplied - stored) / vol, rel=0.01)

    def test_second_period_loop_closes(self, mfm_loop):
        # periodicity convergence: P at the final cycle's ends agrees
        tr = mfm_loop.trace
        t_end = tr.t[-1]
        j0 = int(np.argmin(np.abs(tr.t - (t_end - QUASI_STATIC_PERIOD))))
        assert abs(tr.p_mean[-1] - tr.p_mean[j0]) < 1e-3 * 2 * 0.25

    def test_sub_coercive_amplitude_flagged_non_switching(self, mfm_stack):
        grid = uniform_grid(1, 5e-9, p0=-0.25)
        spec = loop_waveform_spec(amplitude=0.5, period=2e-6, cycles=2,
                                  preset_amplitude=-1.5)
        result = hysteresis_experiment(mfm_stack, grid, spec)
        assert not result.switching
        assert result.metrics is None
        assert result.e_fe.size > 0

    def test_needs_two_cycles(self, mfm_stack):
        grid = uniform_grid(1, 5e-9, p0=-0.25)
        spec = WaveformSpec(segments=(Triangle(2.0, 2e-6, 1),),
                            sample_interval=2e-6 / 2048)
        with pytest.raises(ValueError, match="cycles"):
            hysteresis_experiment(mfm_stack, grid, spec)

    def test_loop_metrics_odd_symmetric(self, mfm_stack):
        # negating the waveform swaps and sign-flips the metrics
        period = 2e-6
        up = loop_waveform_spec(amplitude=2.0, period=period, cycles=2)
        down = loop_waveform_spec(amplitude=-2.0, period=period, cycles=2,
                                  preset_amplitude=3.0)
        m_up = hysteresis_experiment(mfm_stack, uniform_grid(1, 5e-9, p0=-0.25),
                                     up).metrics
        m_dn = hysteresis_experiment(mfm_stack, uniform_grid(1, 5e-9, p0=0.25),
                                     down).metrics
        assert m_up.e_c_pos == pytest.approx(-m_dn.e_c_neg, rel=1e-10)
        assert m_up.e_c_neg == pytest.approx(-m_dn.e_c_pos, rel=1e-10)
        assert m_up.p_r_pos == pytest.approx(-m_dn.p_r_neg, rel=1e-10)
        assert m_up.p_r_neg == pytest.approx(-m_dn.p_r_pos, rel=1e-10)
        assert m_up.loop_area == pytest.approx(m_dn.loop_area, rel=1e-10)

    def test_slower_sweeps_tighten_the_loop(self, mfm_stack):
        e_cs = []
        for period in (1e-6, 3e-6, 9e-6):
            res = hysteresis_experiment(
                mfm_stack, uniform_grid(1, 5e-9, p0=-0.25),
                loop_waveform_spec(amplitude=2.0, period=period, cycles=2))
            e_cs.append(res.metrics.e_c_pos)
        assert e_cs[0] >= e_cs[1] >= e_cs[2]
        # converging: successive differences shrink
        assert (e_cs[1] - e_cs[2]) < (e_cs[0] - e_cs[1])


class TestReversal:
    def test_zero_field_no_switching(self, mfm_stack):
        grid = uniform_grid(1, 5e-9, p0=-0.25)
        preset = PresetPulse(amplitude=-3.0, width=2e-7)
        curves = reversal_experiment(mfm_stack, grid, [0.0],
                                     np.logspace(-9, -6, 25), preset,
                                     relax_width=2e-7)
        assert abs(curves[0].delta_p[-1]) < 1e-3 * 2 * 0.25
        assert abs(curves[0].p_start) == pytest.approx(0.25, rel=1e-4)

    def test_delta_p_monotone_and_bounded(self, mfm_stack):
        grid = uniform_grid(4, 5e-9, p0=-0.25)
        preset = PresetPulse(amplitude=-3.0, width=2e-7)
        curves = reversal_experiment(mfm_stack, grid, [1.4e8, 1.8e8],
                                     np.logspace(-9, -6, 40), preset)
        for c in curves:
            assert np.all(np.diff(c.delta_p) >= -1e-5 * 2 * abs(c.p_start))
            assert np.all(c.delta_p <= 2 * abs(c.p_start) * 1.05)
            assert c.delta_p[0] == 0.0

    def test_switching_time_decreases_with_field(self, mfm_stack):
        grid = uniform_grid(1, 5e-9, p0=-0.25)
        preset = PresetPulse(amplitude=-3.0, width=2e-7)
        fields = [1.1e8, 1.3e8, 1.6e8, 2.0e8]
        curves = reversal_experiment(mfm_stack, grid, fields,
                                     np.logspace(-9, -6, 50), preset)
        t50 = [switching_time(c) for c in curves]
        assert all(t is not None for t in t50)
        assert all(a > b for a, b in zip(t50, t50[1:]))

    def test_preset_must_be_negative(self, mfm_stack):
        grid = uniform_grid(1, 5e-9, p0=-0.25)
        with pytest.raises(ValueError, match="preset"):
            reversal_experiment(mfm_stack, grid, [1.5e8], [1e-9, 1e-8],
                                PresetPulse(amplitude=3.0, width=1e-7))

    def test_negative_field_rejected(self, mfm_stack):
        grid = uniform_grid(1, 5e-9, p0=-0.25)
        with pytest.raises(ValueError):
            reversal_experiment(mfm_stack, grid, [-1e8], [1e-9, 1e-8],
                                PresetPulse(amplitude=-3.0, width=1e-7))


class TestSwitchingTime:
    def _curve(self):
        times = np.array([0.0, 1e-9, 2e-9, 4e-9, 8e-9, 1.6e-8])
        dp = np.array([0.0, 0.1, 0.2, 0.3, 0.4, 0.4])
        return ReversalCurve(field=1e8, times=times, delta_p=dp, p_start=-0.2)

    def test_level_zero_is_first_time(self):
        assert switching_time(self._curve(), level=0.0) == 0.0

    def test_level_one_is_last_crossing(self):
        assert switching_time(self._curve(), level=1.0) == 1.6e-8

    def test_interpolated_midpoint(self):
        t = switching_time(self._curve(), level=0.5)
        assert t == pytest.approx(2e-9, rel=1e-12)

    def test_monotone_in_level(self):
        curve = self._curve()
        levels = np.linspace(0.05, 0.95, 10)
        times = [switching_time(curve, level=l) for l in levels]
        assert all(a <= b for a, b in zip(times, times[1:]))

    def test_unreachable_level_returns_none(self):
        assert switching_time(self._curve(), level=1.5) is None
        flat = ReversalCurve(field=1e8, times=np.array([0.0, 1e-9]),
                             delta_p=np.array([0.0, 0.0]), p_start=-0.2)
        assert switching_time(flat) is None

    def test_normalized_uses_measured_saturation(self):
        c = self._curve()
        assert np.allclose(c.normalized(), c.delta_p / (2 * 0.2))


class TestSCurve:
    def test_nc_bounds_analytic(self, hzo):
        sc = scurve(hzo)
        p_star = math.sqrt(abs(hzo.alpha) / (6 * hzo.beta))
        assert sc.nc_upper == pytest.approx(p_star, rel=1e-12)
        assert sc.nc_lower == pytest.approx(-p_star, rel=1e-12)
        # oracle: slope sign from finite differences of the sampled curve
        de = np.gradient(sc.e, sc.p)
        inside = (sc.p > sc.nc_lower * 0.98) & (sc.p < sc.nc_upper * 0.98)
        outside = (sc.p < sc.nc_lower * 1.02) | (sc.p > sc.nc_upper * 1.02)
        assert np.all(de[inside] < 0)
        assert np.all(de[outside] > 0)

    def test_zero_at_spontaneous_polarization(self, hzo):
        p0 = hzo.p_spontaneous()
        assert abs(hzo.landau_field(p0)) < 1e-9 * hzo.e_c_intrinsic()
        # sampled curve crosses zero within one grid cell of +-P0
        sc = scurve(hzo)
        h = sc.p[1] - sc.p[0]
        e_near = np.interp(p0, sc.p, sc.e)
        slope = abs(hzo.landau_field_slope(p0))
        assert abs(e_near) <= slope * h

    def test_odd_symmetry(self, hzo):
        sc = scurve(hzo)
        assert np.allclose(sc.e, -sc.e[::-1], rtol=0, atol=1e-3)


class TestNcCheck:
    def test_bare_ferroelectric_is_hysteretic(self, mfm_stack):
        res = nc_hysteresis_check(mfm_stack)
        assert res.verdict == "hysteretic"
        assert not res.non_hysteretic

    def test_thick_low_permittivity_dielectric_stabilizes(self, hzo):
        stack = StackConfig(ferro=hzo, area=1e-10,
                            dielectric=DielectricLayer(eps_d=2.0, t_d=5e-9))
        res = nc_hysteresis_check(stack)
        assert res.verdict == "non_hysteretic"

    def test_verdict_matches_numeric_min_over_dense_grid(self, hzo, rng):
        # oracle: finite-difference minimum of V(P) slope on a dense grid
        for _ in range(40):
            t_d = rng.uniform(0.0, 4e-9)
            eps_d = rng.uniform(1.5, 30.0)
            stack = StackConfig(ferro=hzo, area=1e-10,
                                dielectric=DielectricLayer(eps_d=eps_d, t_d=t_d))
            p = np.linspace(-0.3, 0.3, 20001)
            e = hzo.landau_field(p)
            v = e * hzo.t_f + stack.t_eff * (EPS0 * hzo.eps_f * e + p) / EPS0
            dv_dp = np.diff(v) / np.diff(p)
            numeric = "non_hysteretic" if dv_dp.min() > 0 else "hysteretic"
            res = nc_hysteresis_check(stack)
            if abs(res.min_dv_dp) > 1e-4 * abs(2 * hzo.alpha * hzo.t_f):
                assert res.verdict == numeric
