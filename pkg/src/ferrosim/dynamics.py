"""Gradient-flow integration of the polarization dynamics.

The per-cell free-energy density is

    u = alpha_i*P^2 + beta*P^4 + gamma*P^6
        - (eps0*eps_f/2)*E_fe^2 - E_fe*P + k*|grad P|^2,

and the overdamped dynamics relax it:

    rho * dP/dt = -(2*alpha_i*P + 4*beta*P^3 + 6*gamma*P^5
                    - E_fe - 2*k*laplacian(P)).

E_fe is re-solved per cell from the stack electrostatics before every
derivative evaluation. The recorded total energy is the fixed-bias free
energy of the whole stack (Landau + gradient + field energy in every layer
minus battery work), which the flow strictly decreases at constant
voltage; that Lyapunov property drives the adaptive step controller:
a step whose energy rises beyond tolerance is rejected and retried with
dt/2, and dt grows by 1.2x after every accepted step up to dt_max.

Space is a 1D lateral chain with a 3-point Laplacian and zero-flux or
periodic ends; lateral interaction enters only through the domain-wall
term, the electrostatics of each column stays closed-form.
"""

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .constants import EPS0
from .electrostatics import displacement_current
from .materials import FerroMaterial, StackConfig

__all__ = [
    "StiffnessError",
    "PolarizationGrid",
    "SolverOptions",
    "Trace",
    "uniform_grid",
    "apply_disorder",
    "free_energy_density",
    "variational_derivative",
    "total_energy",
    "step_dynamics",
    "simulate",
    "run_transient",
]

_DT_GROWTH = 1.2

_BOUNDARIES = ("zero-flux", "periodic")


class StiffnessError(RuntimeError):
    """dt underflowed dt_min; reports the stiffest cell and its curvature."""

    def __init__(self, cell_index: int, curvature: float, dt: float):
        self.cell_index = int(cell_index)
        self.curvature = float(curvature)
        self.dt = float(dt)
        super().__init__(
            f"step size underflow (dt={dt:.3e}): cell {cell_index} has local "
            f"energy curvature {curvature:.3e} V*m/C"
        )


@dataclass(frozen=True)
class PolarizationGrid:
    """Per-cell spontaneous polarization state on a 1D lateral grid.

    p : polarization per cell [C/m^2]
    dx : lateral cell pitch [m]
    alpha_scale : per-cell multiplier on alpha (grain disorder); all > 0
    boundary : "zero-flux" or "periodic"
    """

    p: np.ndarray
    dx: float
    alpha_scale: np.ndarray = None
    boundary: str = "zero-flux"

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if p.ndim != 1 or p.size < 1:
            raise ValueError("p must be a 1D array with at least one cell")
        if not np.all(np.isfinite(p)):
            raise ValueError("p must be finite")
        object.__setattr__(self, "p", p)
        if not (np.isfinite(self.dx) and self.dx > 0.0):
            raise ValueError(f"dx > 0 required, got {self.dx}")
        scale = self.alpha_scale
        if scale is None:
            scale = np.ones_like(p)
        else:
            scale = np.atleast_1d(np.asarray(scale, dtype=float))
            if scale.shape != p.shape:
                raise ValueError("alpha_scale must match p in shape")
            if not np.all(np.isfinite(scale) & (scale > 0.0)):
                raise ValueError("alpha_scale entries must be finite and > 0")
        object.__setattr__(self, "alpha_scale", scale)
        if self.boundary not in _BOUNDARIES:
            raise ValueError(f"boundary must be one of {_BOUNDARIES}, got {self.boundary!r}")

    @property
    def n_cells(self) -> int:
        return self.p.size


def uniform_grid(n_cells: int, dx: float, p0: float = 0.0,
                 boundary: str = "zero-flux") -> PolarizationGrid:
    """Grid of n_cells cells, all at polarization p0."""
    return PolarizationGrid(p=np.full(int(n_cells), float(p0)), dx=dx, boundary=boundary)


def apply_disorder(grid: PolarizationGrid, seed: int, sigma_rel: float) -> PolarizationGrid:
    """Multiply each cell's alpha by a log-normal factor exp(sigma_rel * z).

    z is standard normal from a generator seeded with `seed`, so the same
    seed reproduces the same grid bit for bit. sigma_rel = 0 returns the
    grid unchanged. Local coercive fields scale as the 3/2 power of the
    multiplier, which is how grain-to-grain nucleation-time spread enters.
    """
    if sigma_rel < 0.0:
        raise ValueError(f"sigma_rel >= 0 required, got {sigma_rel}")
    if sigma_rel == 0.0:
        return grid
    rng = np.random.default_rng(seed)
    factors = np.exp(sigma_rel * rng.standard_normal(grid.n_cells))
    return replace(grid, alpha_scale=grid.alpha_scale * factors)


@dataclass(frozen=True)
class SolverOptions:
    """Adaptive-step controls: 0 < dt_min <= dt0 <= dt_max."""

    dt0: float = 1e-12
    dt_min: float = 1e-21
    dt_max: float = 1e-6
    energy_rejection: float = 1e-10   # allowed relative energy increase per step
    max_steps: int = 20_000_000
    record_stride: int = 1

    def __post_init__(self):
        if not (0.0 < self.dt_min <= self.dt0 <= self.dt_max):
            raise ValueError(
                f"0 < dt_min <= dt0 <= dt_max required, got "
                f"({self.dt_min}, {self.dt0}, {self.dt_max})"
            )
        if self.energy_rejection <= 0.0:
            raise ValueError("energy_rejection must be > 0")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")


@dataclass(frozen=True)
class Trace:
    """Time series of a transient: bias, mean field, mean polarization and
    displacement, device current and total stack energy."""

    t: np.ndarray
    v: np.ndarray
    e_fe: np.ndarray
    p_mean: np.ndarray
    d_mean: np.ndarray
    i: np.ndarray
    u_total: np.ndarray

    def __post_init__(self):
        n = self.t.size
        for name in ("v", "e_fe", "p_mean", "d_mean", "i", "u_total"):
            if getattr(self, name).size != n:
                raise ValueError(f"trace arrays must have equal length ({name})")
        if n > 1 and not np.all(np.diff(self.t) > 0.0):
            raise ValueError("trace times must be strictly increasing")


def free_energy_density(mat: FerroMaterial, p_cell, e_fe, grad_p):
    """Six-term free-energy density of a cell [J/m^3]."""
    p = np.asarray(p_cell, dtype=float)
    e = np.asarray(e_fe, dtype=float)
    g = np.asarray(grad_p, dtype=float)
    return (mat.bulk_energy_density(p)
            - 0.5 * EPS0 * mat.eps_f * e * e
            - e * p
            + mat.k * g * g)


def _laplacian(p: np.ndarray, dx: float, boundary: str) -> np.ndarray:
    if p.size == 1:
        return np.zeros_like(p)
    inv_dx2 = 1.0 / (dx * dx)
    lap = np.empty_like(p)
    lap[1:-1] = (p[2:] - 2.0 * p[1:-1] + p[:-2]) * inv_dx2
    if boundary == "periodic":
        lap[0] = (p[1] - 2.0 * p[0] + p[-1]) * inv_dx2
        lap[-1] = (p[0] - 2.0 * p[-1] + p[-2]) * inv_dx2
    else:  # zero-flux: ghost cells mirror the edge value
        lap[0] = (p[1] - p[0]) * inv_dx2
        lap[-1] = (p[-2] - p[-1]) * inv_dx2
    return lap


def variational_derivative(mat: FerroMaterial, grid: PolarizationGrid, e_fe) -> np.ndarray:
    """Per-cell dU/dP per unit volume for the given per-cell field [V*m/C * C/m^2 = V/m].

    2*alpha_i*P + 4*beta*P^3 + 6*gamma*P^5 - E_fe - 2*k*laplacian(P).
    """
    p = grid.p
    e = np.broadcast_to(np.asarray(e_fe, dtype=float), p.shape)
    p2 = p * p
    bulk = p * (2.0 * mat.alpha * grid.alpha_scale
                + p2 * (4.0 * mat.beta + 6.0 * mat.gamma * p2))
    return bulk - e - 2.0 * mat.k * _laplacian(p, grid.dx, grid.boundary)


class _Engine:
    """Precomputed coefficients for one (stack, grid) pair."""

    def __init__(self, stack: StackConfig, grid: PolarizationGrid):
        mat = stack.ferro
        self.mat = mat
        self.dx = grid.dx
        self.boundary = grid.boundary
        self.n = grid.n_cells
        self.alpha_i = mat.alpha * grid.alpha_scale
        self.cell_area = stack.area / self.n
        self.cell_vol = self.cell_area * mat.t_f
        self.t_eff = stack.t_eff
        denom = mat.t_f + mat.eps_f * self.t_eff
        self.e_per_v = 1.0 / denom                      # dE_fe/dV
        self.e_per_p = -self.t_eff / (EPS0 * denom)     # dE_fe/dP
        self.rho = mat.rho
        # natural energy scale: Landau well depth times ferroelectric volume
        well_depth = abs(float(mat.bulk_energy_density(mat.p_spontaneous())))
        self.u_scale = well_depth * stack.area * mat.t_f

    def field(self, p: np.ndarray, v: float) -> np.ndarray:
        return self.e_per_v * v + self.e_per_p * p

    def force(self, p: np.ndarray, v: float) -> np.ndarray:
        p2 = p * p
        bulk = p * (2.0 * self.alpha_i + p2 * (4.0 * self.mat.beta
                                               + 6.0 * self.mat.gamma * p2))
        return (bulk - self.field(p, v)
                - 2.0 * self.mat.k * _laplacian(p, self.dx, self.boundary))

    def energy(self, p: np.ndarray, v: float) -> float:
        mat = self.mat
        p2 = p * p
        bulk = float(np.sum(p2 * (self.alpha_i + p2 * (mat.beta + mat.gamma * p2))))
        bonds = np.diff(p)
        grad = float(np.dot(bonds, bonds)) / (self.dx * self.dx)
        if self.boundary == "periodic" and self.n > 1:
            grad += ((p[0] - p[-1]) / self.dx) ** 2
        e = self.field(p, v)
        d = EPS0 * mat.eps_f * e + p
        elec = float(np.sum(-0.5 * EPS0 * mat.eps_f * e * e - e * p))
        u = self.cell_vol * (bulk + mat.k * grad + elec)
        if self.t_eff > 0.0:
            # field energy in the series layers minus the extra battery work;
            # makes the recorded energy the true fixed-bias Lyapunov function
            u -= self.cell_area * self.t_eff / (2.0 * EPS0) * float(np.dot(d, d))
        return u

    def curvature(self, p: np.ndarray) -> np.ndarray:
        """Diagonal of the force Jacobian, used for stiffness reporting."""
        p2 = p * p
        diag_lap = 2.0 if self.n > 1 else 0.0
        return (2.0 * self.alpha_i + p2 * (12.0 * self.mat.beta
                                           + 30.0 * self.mat.gamma * p2)
                - self.e_per_p + 2.0 * self.mat.k * diag_lap / (self.dx * self.dx))


def total_energy(stack: StackConfig, grid: PolarizationGrid, v: float) -> float:
    """Total fixed-bias free energy of the stack [J].

    Sum over cells of the six-term density times cell volume, plus the
    series-layer field energy minus battery work when series layers are
    present. This is the quantity the gradient flow decreases at fixed v
    and the one recorded in Trace.u_total.
    """
    return _Engine(stack, grid).energy(grid.p, v)


def _accepted_step(eng: _Engine, p: np.ndarray, v: float, dt: float,
                   options: SolverOptions):
    """One accepted explicit-Euler step; returns (p_new, dt_used, n_rejects)."""
    u0 = eng.energy(p, v)
    f = eng.force(p, v)
    rejects = 0
    while True:
        p_new = p - (dt / eng.rho) * f
        u1 = eng.energy(p_new, v)
        allowed = options.energy_rejection * max(abs(u0), abs(u1), eng.u_scale)
        if u1 - u0 <= allowed:
            return p_new, dt, rejects
        dt *= 0.5
        rejects += 1
        if dt < options.dt_min:
            curv = eng.curvature(p)
            i_max = int(np.argmax(np.abs(curv)))
            raise StiffnessError(i_max, curv[i_max], dt)


def step_dynamics(grid: PolarizationGrid, stack: StackConfig, v: float, dt: float,
                  options: SolverOptions = SolverOptions()):
    """Advance the state by one accepted step of at most dt.

    Returns (new grid, next dt): the step is retried with dt/2 whenever the
    total energy at fixed v rises beyond tolerance, and the returned next
    dt is 1.2x the accepted one, capped at dt_max. Raises StiffnessError if
    halving underflows dt_min.
    """
    if not (options.dt_min <= dt <= options.dt_max):
        raise ValueError(f"dt must lie in [{options.dt_min}, {options.dt_max}], got {dt}")
    eng = _Engine(stack, grid)
    p_new, dt_used, _ = _accepted_step(eng, grid.p, v, dt, options)
    dt_next = min(dt_used * _DT_GROWTH, options.dt_max)
    return replace(grid, p=p_new), dt_next


def simulate(stack: StackConfig, grid: PolarizationGrid, v_fn: Callable[[float], float],
             t_record, options: SolverOptions = SolverOptions()):
    """March the dynamics through the checkpoint times t_record.

    v_fn(t) gives the applied voltage; it is held fixed across each sub-step
    (evaluated at the sub-step start). The state is recorded exactly at every
    checkpoint. Returns (Trace, final grid). Deterministic for identical
    inputs.
    """
    t_record = np.atleast_1d(np.asarray(t_record, dtype=float))
    if t_record.size < 1 or (t_record.size > 1 and not np.all(np.diff(t_record) > 0.0)):
        raise ValueError("t_record must be non-empty and strictly increasing")
    eng = _Engine(stack, grid)
    p = grid.p.copy()
    n_rec = t_record.size
    v_rec = np.empty(n_rec)
    e_rec = np.empty(n_rec)
    p_rec = np.empty(n_rec)
    d_rec = np.empty(n_rec)
    u_rec = np.empty(n_rec)

    def record(idx: int, t: float):
        v = float(v_fn(t))
        e = eng.field(p, v)
        v_rec[idx] = v
        e_rec[idx] = float(np.mean(e))
        p_rec[idx] = float(np.mean(p))
        d_rec[idx] = float(np.mean(EPS0 * eng.mat.eps_f * e + p))
        u_rec[idx] = eng.energy(p, v)

    record(0, t_record[0])
    t = float(t_record[0])
    dt = options.dt0
    steps = 0
    for idx in range(1, n_rec):
        t_target = float(t_record[idx])
        gap_tol = 1e-9 * (t_target - t)
        while t_target - t > gap_tol:
            dt_try = min(dt, t_target - t)
            p, dt_used, _ = _accepted_step(eng, p, float(v_fn(t)), dt_try, options)
            t += dt_used
            dt = min(dt_used * _DT_GROWTH, options.dt_max)
            steps += 1
            if steps > options.max_steps:
                raise RuntimeError(f"exceeded max_steps={options.max_steps} "
                                   f"at t={t:.3e} s")
        t = t_target
        record(idx, t)

    if n_rec >= 2:
        i_rec = displacement_current(d_rec, stack.area, t=t_record)
    else:
        i_rec = np.zeros(n_rec)
    trace = Trace(t=t_record.copy(), v=v_rec, e_fe=e_rec, p_mean=p_rec,
                  d_mean=d_rec, i=i_rec, u_total=u_rec)
    return trace, replace(grid, p=p)


def run_transient(stack: StackConfig, grid: PolarizationGrid, waveform,
                  options: SolverOptions = SolverOptions()) -> Trace:
    """Drive the stack with a sampled waveform and return the recorded trace.

    Records every record_stride-th waveform sample (the final sample is
    always included), so traces from stride 1 are uniformly sampled at the
    waveform interval.
    """
    idx = np.arange(0, waveform.t.size, options.record_stride)
    if idx[-1] != waveform.t.size - 1:
        idx = np.append(idx, waveform.t.size - 1)
    trace, _ = simulate(stack, grid, waveform.v_at, waveform.t[idx], options)
    return trace
