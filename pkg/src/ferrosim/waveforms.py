"""Voltage-program building blocks and uniform sampling.

A waveform is an ordered list of segments (rectangular preset pulse,
triangular sweep, rectangular step, flat hold) sampled on a uniform grid.
Triangles start and end at zero: 0 -> +A at T/4 -> 0 at T/2 -> -A at
3T/4 -> 0 at T, repeated `cycles` times.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

__all__ = [
    "WaveformError",
    "PresetPulse",
    "Triangle",
    "StepPulse",
    "Hold",
    "WaveformSpec",
    "Waveform",
    "make_waveform",
]


class WaveformError(ValueError):
    """Invalid waveform program."""


@dataclass(frozen=True)
class PresetPulse:
    """Rectangular conditioning pulse applied before the main program."""

    amplitude: float   # [V]
    width: float       # [s]

    @property
    def duration(self):
        return self.width

    def value(self, t_local):
        return np.full_like(np.asarray(t_local, dtype=float), self.amplitude)


@dataclass(frozen=True)
class Triangle:
    """Symmetric triangular sweep, zero-mean, `cycles` repetitions."""

    amplitude: float   # [V]
    period: float      # [s]
    cycles: int = 1

    @property
    def duration(self):
        return self.period * self.cycles

    def value(self, t_local):
        phase = np.mod(np.asarray(t_local, dtype=float) / self.period, 1.0)
        up = 4.0 * phase
        down = 2.0 - 4.0 * phase
        close = 4.0 * phase - 4.0
        v = np.where(phase < 0.25, up, np.where(phase < 0.75, down, close))
        return self.amplitude * v


@dataclass(frozen=True)
class StepPulse:
    """Rectangular step of fixed amplitude."""

    amplitude: float   # [V]
    width: float       # [s]

    @property
    def duration(self):
        return self.width

    def value(self, t_local):
        return np.full_like(np.asarray(t_local, dtype=float), self.amplitude)


@dataclass(frozen=True)
class Hold:
    """Constant level, typically 0 V, for a fixed time."""

    level: float       # [V]
    width: float       # [s]

    @property
    def duration(self):
        return self.width

    def value(self, t_local):
        return np.full_like(np.asarray(t_local, dtype=float), self.level)


Segment = Union[PresetPulse, Triangle, StepPulse, Hold]


def _char_time(seg: Segment) -> float:
    return seg.period if isinstance(seg, Triangle) else seg.duration


@dataclass(frozen=True)
class WaveformSpec:
    """Ordered segments plus the uniform sample interval [s].

    The sample interval must resolve the shortest segment (interval <
    duration/20, with a triangle's characteristic duration being one
    period).
    """

    segments: Tuple[Segment, ...]
    sample_interval: float

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if len(self.segments) == 0:
            raise WaveformError("waveform needs at least one segment")
        for seg in self.segments:
            if isinstance(seg, Triangle):
                if not (seg.period > 0.0 and np.isfinite(seg.period)):
                    raise WaveformError(f"triangle period > 0 required, got {seg.period}")
                if seg.cycles < 1 or seg.cycles != int(seg.cycles):
                    raise WaveformError(f"triangle cycles must be a positive integer, got {seg.cycles}")
            else:
                if not (seg.width > 0.0 and np.isfinite(seg.width)):
                    raise WaveformError(f"segment width > 0 required, got {seg.width}")
        if not (self.sample_interval > 0.0 and np.isfinite(self.sample_interval)):
            raise WaveformError(f"sample_interval > 0 required, got {self.sample_interval}")
        shortest = min(_char_time(s) for s in self.segments)
        if self.sample_interval >= shortest / 20.0:
            raise WaveformError(
                f"sample_interval {self.sample_interval:g} s too coarse for the "
                f"shortest segment ({shortest:g} s); need < duration/20"
            )


@dataclass(frozen=True)
class Waveform:
    """Sampled program: uniform times t, values v, and segment spans.

    spans holds one (segment, t_start, t_end) triple per segment, in order.
    """

    t: np.ndarray
    v: np.ndarray
    sample_interval: float
    spans: Tuple[tuple, ...]

    def v_at(self, t):
        """Sampled-waveform interpolation; constant beyond the ends."""
        return np.interp(t, self.t, self.v)

    def duration(self) -> float:
        return float(self.t[-1])

    def triangle_cycle_window(self, cycle: int = -1) -> tuple:
        """(t_start, t_end) of one cycle of the last triangle segment.

        cycle indexes the repetitions of that segment (negative from the
        end), so cycle=-1 is the final full loop.
        """
        tri_spans = [(seg, t0, t1) for seg, t0, t1 in self.spans
                     if isinstance(seg, Triangle)]
        if not tri_spans:
            raise WaveformError("waveform has no triangle segment")
        seg, t0, _ = tri_spans[-1]
        c = cycle if cycle >= 0 else seg.cycles + cycle
        if not 0 <= c < seg.cycles:
            raise WaveformError(f"cycle {cycle} out of range for {seg.cycles} cycles")
        return (t0 + c * seg.period, t0 + (c + 1) * seg.period)


def make_waveform(spec: WaveformSpec) -> Waveform:
    """Sample the program on the uniform grid t_k = k * sample_interval.

    Sample points at a segment boundary take the value of the segment that
    starts there (right-continuous), so a preset pulse hands over exactly
    at its trailing edge.
    """
    dt = spec.sample_interval
    starts = np.cumsum([0.0] + [_duration(s) for s in spec.segments])
    total = starts[-1]
    n = int(math.floor(total / dt + 1e-9)) + 1
    t = np.arange(n) * dt
    v = np.empty(n)
    seg_idx = np.searchsorted(starts[1:-1], t, side="right")
    spans = []
    for j, seg in enumerate(spec.segments):
        mask = seg_idx == j
        v[mask] = seg.value(t[mask] - starts[j])
        spans.append((seg, float(starts[j]), float(starts[j + 1])))
    return Waveform(t=t, v=v, sample_interval=dt, spans=tuple(spans))


def _duration(seg: Segment) -> float:
    return seg.duration
