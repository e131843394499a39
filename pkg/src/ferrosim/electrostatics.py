"""Closed-form electrostatics of a layered capacitor column.

Each lateral cell is an independent 1D column sharing the electrode voltage:
the displacement D = eps0*eps_f*E_fe + P is uniform through the column, and
the layer voltages add up to the applied bias. Eliminating the layer fields
gives

    E_fe = (V - t_eff * P / eps0) / (t_f + eps_f * t_eff),

with t_eff = sum(t_d_i / eps_d_i) over the series layers. At V = 0 and
t_eff > 0 this is the depolarization field, opposite in sign to P.
"""

from dataclasses import dataclass

import numpy as np

from .constants import EPS0
from .materials import StackConfig

__all__ = ["FieldSolution", "solve_fields", "depolarization_field", "displacement_current"]


@dataclass(frozen=True)
class FieldSolution:
    """Per-column field solution.

    e_fe : field in the ferroelectric [V/m]
    e_d : tuple of fields, one per series layer, in stack order [V/m]
    d : displacement eps0*eps_f*e_fe + P, continuous through the column [C/m^2]
    sigma_m : electrode charge per area (= d) [C/m^2]
    """

    e_fe: np.ndarray
    e_d: tuple
    d: np.ndarray

    @property
    def sigma_m(self):
        return self.d


def solve_fields(stack: StackConfig, p, v) -> FieldSolution:
    """Solve the series-layer electrostatics for polarization p and bias v.

    p may be a scalar or a per-cell array; v is a scalar. With no series
    layers the result is the ideal-MFM field v/t_f, independent of p.
    """
    mat = stack.ferro
    p = np.asarray(p, dtype=float)
    t_eff = stack.t_eff
    denom = mat.t_f + mat.eps_f * t_eff
    e_fe = (v - t_eff * p / EPS0) / denom
    d = EPS0 * mat.eps_f * e_fe + p
    e_d = tuple(d / (EPS0 * layer.eps_d) for layer in stack.series_layers())
    return FieldSolution(e_fe=e_fe, e_d=e_d, d=d)


def depolarization_field(stack: StackConfig, p):
    """Field in the ferroelectric at zero bias; 0 for an ideal MFM stack."""
    return solve_fields(stack, p, 0.0).e_fe


def displacement_current(d_mean, area: float, dt: float = None, t=None):
    """Device current I(t) = area * dD/dt from a sampled displacement trace.

    Central differences in the interior, one-sided at the endpoints. Pass
    either the uniform sample interval dt or an explicit time array t.
    """
    d_mean = np.asarray(d_mean, dtype=float)
    if d_mean.size < 2:
        raise ValueError("displacement_current needs at least 2 samples")
    if (dt is None) == (t is None):
        raise ValueError("pass exactly one of dt or t")
    if t is not None:
        return area * np.gradient(d_mean, np.asarray(t, dtype=float))
    return area * np.gradient(d_mean, dt)
