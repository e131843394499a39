"""Virtual measurement procedures for capacitor stacks.

Mirrors a standard loop-tracer workflow: program a voltage waveform
(conditioning preset plus triangular cycles), integrate the device current
into the total polarization P_T = P + eps0*(eps_f - 1)*E_fe, and read the
remnant polarization / coercive field off the steady-state loop. Also
covers constant-field polarization-reversal transients and the
quasi-static S-curve diagnostics used for negative-capacitance stacks.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from .constants import EPS0
from .dynamics import PolarizationGrid, SolverOptions, Trace, simulate, run_transient
from .materials import FerroMaterial, StackConfig
from .waveforms import PresetPulse, Triangle, WaveformSpec, make_waveform

__all__ = [
    "LoopMetrics",
    "HysteresisResult",
    "ReversalCurve",
    "SCurve",
    "NcCheckResult",
    "loop_waveform_spec",
    "integrate_current",
    "hysteresis_experiment",
    "reversal_experiment",
    "switching_time",
    "scurve",
    "nc_hysteresis_check",
]


@dataclass(frozen=True)
class LoopMetrics:
    """Loop readouts: remnant polarizations at E=0, coercive fields at
    P_T=0, and the enclosed area (energy dissipated per cycle and volume)."""

    p_r_pos: float     # [C/m^2]
    p_r_neg: float     # [C/m^2]
    e_c_pos: float     # [V/m]
    e_c_neg: float     # [V/m]
    loop_area: float   # [J/m^3 per cycle]


@dataclass(frozen=True)
class HysteresisResult:
    e_fe: np.ndarray            # final-cycle field in the ferroelectric [V/m]
    p_t: np.ndarray             # final-cycle total polarization [C/m^2]
    metrics: Optional[LoopMetrics]
    switching: bool
    trace: Trace


@dataclass(frozen=True)
class ReversalCurve:
    """Switched polarization under a constant step field.

    delta_p(t) = mean P(t) - mean P(0), measured from the state right after
    the negative preset; p_start is that post-preset mean polarization, so
    |p_start| is the measured saturation used for normalization.
    """

    field: float                # [V/m]
    times: np.ndarray           # [s]
    delta_p: np.ndarray         # [C/m^2]
    p_start: float              # [C/m^2]

    def normalized(self) -> np.ndarray:
        return self.delta_p / (2.0 * abs(self.p_start))


@dataclass(frozen=True)
class SCurve:
    p: np.ndarray
    e: np.ndarray
    nc_lower: float    # dE/dP < 0 exactly on (nc_lower, nc_upper)
    nc_upper: float


@dataclass(frozen=True)
class NcCheckResult:
    verdict: str           # "non_hysteretic" | "hysteretic"
    min_dv_dp: float       # min over P of dV/dP for the series stack [V*m^2/C]
    t_eff: float

    @property
    def non_hysteretic(self) -> bool:
        return self.verdict == "non_hysteretic"


def loop_waveform_spec(amplitude: float, period: float, cycles: int = 2,
                       sample_interval: float = None,
                       preset_amplitude: float = None,
                       preset_width: float = None) -> WaveformSpec:
    """Preset pulse followed by a triangular sweep, as used for P-E loops.

    Defaults: 2048 samples per triangle period, preset at -1.5x the triangle
    amplitude, preset width of 100 sample intervals.
    """
    if sample_interval is None:
        sample_interval = period / 2048.0
    if preset_amplitude is None:
        preset_amplitude = -1.5 * amplitude
    if preset_width is None:
        preset_width = 100.0 * sample_interval
    return WaveformSpec(
        segments=(PresetPulse(preset_amplitude, preset_width),
                  Triangle(amplitude, period, cycles)),
        sample_interval=sample_interval,
    )


def integrate_current(i, area: float, dt: float = None, t=None) -> np.ndarray:
    """Cumulative trapezoidal integral of i/area, charge-centered.

    Returns the total-polarization change with its offset chosen so the
    midpoint of the curve's max and min sits at zero, the usual centering
    for a steady-state loop.
    """
    i = np.asarray(i, dtype=float)
    if i.size == 0:
        raise ValueError("integrate_current needs a non-empty current trace")
    if (dt is None) == (t is None):
        raise ValueError("pass exactly one of dt or t")
    if t is not None:
        steps = np.diff(np.asarray(t, dtype=float))
    else:
        steps = np.full(i.size - 1, dt)
    q = np.concatenate(([0.0], np.cumsum(0.5 * (i[1:] + i[:-1]) * steps))) / area
    return q - 0.5 * (q.max() + q.min())


def _branch_crossing(e: np.ndarray, p: np.ndarray, rising: bool):
    """Field where p crosses zero with the sign direction of the branch."""
    s = np.sign(p)
    if rising:
        hits = np.nonzero((s[:-1] <= 0) & (s[1:] > 0))[0]
    else:
        hits = np.nonzero((s[:-1] >= 0) & (s[1:] < 0))[0]
    if hits.size == 0:
        return None
    j = hits[0]
    dp = p[j + 1] - p[j]
    if dp == 0.0:
        return float(e[j])
    return float(e[j] - p[j] * (e[j + 1] - e[j]) / dp)


def _value_at_zero_field(e: np.ndarray, p: np.ndarray) -> float:
    """p interpolated at e = 0 along a monotone-in-e branch."""
    if e[0] > e[-1]:
        e, p = e[::-1], p[::-1]
    return float(np.interp(0.0, e, p))


def hysteresis_experiment(stack: StackConfig, grid: PolarizationGrid,
                          spec: WaveformSpec,
                          options: SolverOptions = SolverOptions()) -> HysteresisResult:
    """Run the loop program and extract metrics from the final full cycle.

    The waveform program must contain a triangle segment with at least 2
    cycles; earlier
    cycles condition the film into its time-periodic regime and are
    discarded. The loop is reported as P_T versus the field in the
    ferroelectric. A loop with no P_T zero crossing is returned with
    metrics=None and switching=False.
    """
    tri = [seg for seg, _, _ in _spans_of(spec) if isinstance(seg, Triangle)]
    if not tri or tri[-1].cycles < 2:
        raise ValueError("hysteresis_experiment needs a triangle segment with >= 2 cycles")
    wf = make_waveform(spec)
    # metrics extraction needs every waveform sample in the trace
    opts = replace(options, record_stride=1)
    trace = run_transient(stack, grid, wf, opts)

    t0, t1 = wf.triangle_cycle_window(-1)
    period = t1 - t0
    halo = 0.25 * wf.sample_interval
    in_cycle = (trace.t >= t0 - halo) & (trace.t <= t1 + halo)
    tc = trace.t[in_cycle]
    e = trace.e_fe[in_cycle]
    p_t = trace.p_mean[in_cycle] + EPS0 * (stack.ferro.eps_f - 1.0) * trace.e_fe[in_cycle]

    # quarters of the cycle by time; for a positive-amplitude triangle the
    # rising sweep is the last quarter (E: -A -> 0) continued by the first
    # (0 -> +A), valid once periodic; a negated program swaps the roles
    q1 = (tc >= t0 - halo) & (tc <= t0 + 0.25 * period + halo)
    q23 = (tc >= t0 + 0.25 * period - halo) & (tc <= t0 + 0.75 * period + halo)
    q4 = (tc >= t0 + 0.75 * period - halo) & (tc <= t1 + halo)

    e_wrap = np.concatenate((e[q4][:-1], e[q1]))
    p_wrap = np.concatenate((p_t[q4][:-1], p_t[q1]))
    if tri[-1].amplitude >= 0.0:
        e_rise, p_rise = e_wrap, p_wrap
        e_fall, p_fall = e[q23], p_t[q23]
    else:
        e_rise, p_rise = e[q23], p_t[q23]
        e_fall, p_fall = e_wrap, p_wrap

    e_c_pos = _branch_crossing(e_rise, p_rise, rising=True)
    e_c_neg = _branch_crossing(e_fall, p_fall, rising=False)
    switching = e_c_pos is not None and e_c_neg is not None

    metrics = None
    if switching:
        p_r_neg = _value_at_zero_field(e_rise, p_rise)
        p_r_pos = _value_at_zero_field(e_fall, p_fall)
        # enclosed area = energy dissipated per cycle per ferroelectric volume
        e_loop = np.append(e, e[0])
        p_loop = np.append(p_t, p_t[0])
        area = float(np.sum(0.5 * (e_loop[1:] + e_loop[:-1]) * np.diff(p_loop)))
        metrics = LoopMetrics(p_r_pos=p_r_pos, p_r_neg=p_r_neg,
                              e_c_pos=e_c_pos, e_c_neg=e_c_neg, loop_area=area)
    return HysteresisResult(e_fe=e, p_t=p_t, metrics=metrics,
                            switching=switching, trace=trace)


def _spans_of(spec: WaveformSpec):
    t = 0.0
    for seg in spec.segments:
        yield seg, t, t + seg.duration
        t += seg.duration


def reversal_experiment(stack: StackConfig, grid: PolarizationGrid,
                        e_list: Sequence[float], t_grid,
                        preset: PresetPulse,
                        options: SolverOptions = SolverOptions(),
                        relax_width: float = 0.0) -> List[ReversalCurve]:
    """Polarization-reversal family: preset negative, then a constant step.

    For each field E in e_list the grid is saturated by the preset pulse,
    a constant voltage E * t_f is applied, and delta_p(t) = mean P(t) -
    mean P(0) is recorded at the (typically log-spaced) times t_grid.
    A relax_width > 0 inserts a zero-volt hold between preset and step so
    the reference state is the remnant one rather than the driven one.
    """
    if preset.amplitude >= 0.0:
        raise ValueError("preset must saturate negative (amplitude < 0)")
    e_list = [float(e) for e in e_list]
    if len(e_list) == 0:
        raise ValueError("e_list must not be empty")
    if any(e < 0.0 for e in e_list):
        raise ValueError("step fields must be non-negative")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size < 1 or np.any(t_grid < 0.0):
        raise ValueError("t_grid must be non-negative")
    if t_grid[0] > 0.0:
        t_grid = np.concatenate(([0.0], t_grid))

    t_f = stack.ferro.t_f
    curves = []
    for e_step in e_list:
        _, preset_grid = simulate(stack, grid, lambda t: preset.amplitude,
                                  [0.0, preset.width], options)
        if relax_width > 0.0:
            _, preset_grid = simulate(stack, preset_grid, lambda t: 0.0,
                                      [0.0, relax_width], options)
        v_step = e_step * t_f
        trace, _ = simulate(stack, preset_grid, lambda t: v_step, t_grid, options)
        delta_p = trace.p_mean - trace.p_mean[0]
        curves.append(ReversalCurve(field=e_step, times=trace.t.copy(),
                                    delta_p=delta_p,
                                    p_start=float(trace.p_mean[0])))
    return curves


def switching_time(curve: ReversalCurve, level: float = 0.5) -> Optional[float]:
    """Interpolated time at which delta_p reaches level * max(delta_p).

    Returns None when the level is never reached (level > 1 or a curve that
    never switches). level=0 maps to the first sample time; level=1 maps to
    the last sample attaining the maximum.
    """
    dp = np.asarray(curve.delta_p, dtype=float)
    t = np.asarray(curve.times, dtype=float)
    top = dp.max()
    if top <= 0.0 or level > 1.0:
        return None
    if level <= 0.0:
        return float(t[0])
    if level == 1.0:
        return float(t[np.nonzero(dp == top)[0][-1]])
    target = level * top
    below = np.nonzero(dp < target)[0]
    if below.size == 0:
        return float(t[0])
    j = below[-1]
    if j + 1 >= dp.size:
        return None
    d0, d1 = dp[j], dp[j + 1]
    if d1 == d0:
        return float(t[j + 1])
    return float(t[j] + (target - d0) * (t[j + 1] - t[j]) / (d1 - d0))


def scurve(mat: FerroMaterial, p_max: float = None, n_points: int = 1001) -> SCurve:
    """Quasi-static E(P) = 2*alpha*P + 4*beta*P^3 + 6*gamma*P^5 with the
    negative-capacitance interval where dE/dP < 0."""
    if p_max is None:
        p_max = 1.5 * mat.p_spontaneous()
    p = np.linspace(-p_max, p_max, int(n_points))
    p_fold = mat.p_fold()
    return SCurve(p=p, e=mat.landau_field(p), nc_lower=-p_fold, nc_upper=p_fold)


def nc_hysteresis_check(stack: StackConfig) -> NcCheckResult:
    """Classify a series stack as hysteretic or stabilized (non-hysteretic).

    The applied voltage as a function of uniform polarization is
    V(P) = E(P)*t_f + t_eff*(eps0*eps_f*E(P) + P)/eps0; the stack is
    non-hysteretic exactly when dV/dP > 0 for all P, i.e. when the series
    capacitance outweighs the ferroelectric's negative-capacitance region.
    """
    mat = stack.ferro
    t_eff = stack.t_eff
    min_dv_dp = (mat.min_field_slope() * (mat.t_f + mat.eps_f * t_eff)
                 + t_eff / EPS0)
    verdict = "non_hysteretic" if min_dv_dp > 0.0 else "hysteretic"
    return NcCheckResult(verdict=verdict, min_dv_dp=float(min_dv_dp), t_eff=t_eff)
