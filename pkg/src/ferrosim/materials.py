"""Material and layer-stack data model.

The ferroelectric is described by an even-order Landau polynomial for the
free-energy density of the spontaneous polarization P,

    u_bulk(P) = alpha*P^2 + beta*P^4 + gamma*P^6,

plus a background (non-switching) permittivity eps_f, a domain-wall
coupling k and a kinetic resistivity rho that sets the time scale of the
polarization dynamics. Series dielectrics (a real interlayer and/or a
dead-layer pair standing in for finite electrode screening) are plain
linear layers.

All stored quantities are strict SI; unit-suffixed keys are resolved at
the config boundary (see ferrosim.config).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "StackValidationError",
    "FerroMaterial",
    "DielectricLayer",
    "StackConfig",
    "calibrate_landau",
    "validate_stack",
]


class StackValidationError(ValueError):
    """A material/stack invariant is violated; message names the field."""


@dataclass(frozen=True)
class FerroMaterial:
    """Ferroelectric layer parameters.

    Parameters
    ----------
    alpha : float
        2nd-order Landau coefficient [V*m/C]; < 0 in the ferroelectric phase.
    beta : float
        4th-order coefficient [V*m^5/C^3].
    gamma : float
        6th-order coefficient [V*m^9/C^5]; 0 selects the quartic form.
    k : float
        Domain-wall coupling coefficient [V*m^3/C]; >= 0.
    rho : float
        Kinetic resistivity [Ohm*m] governing the switching speed; > 0.
        It only rescales time, so pick it to match a measured time scale.
    eps_f : float
        Background relative permittivity of the ferroelectric; >= 1.
    t_f : float
        Ferroelectric thickness [m]; > 0.
    """

    alpha: float
    beta: float
    gamma: float
    k: float
    rho: float
    eps_f: float
    t_f: float

    def __post_init__(self):
        _check_ferro(self)

    def bulk_energy_density(self, p):
        """u_bulk(P) = alpha*P^2 + beta*P^4 + gamma*P^6 [J/m^3]."""
        p2 = np.square(p)
        return p2 * (self.alpha + p2 * (self.beta + p2 * self.gamma))

    def landau_field(self, p):
        """Quasi-static field E(P) = 2*alpha*P + 4*beta*P^3 + 6*gamma*P^5 [V/m]."""
        p2 = np.square(p)
        return p * (2.0 * self.alpha + p2 * (4.0 * self.beta + 6.0 * self.gamma * p2))

    def landau_field_slope(self, p):
        """dE/dP = 2*alpha + 12*beta*P^2 + 30*gamma*P^4 [V*m/C]."""
        p2 = np.square(p)
        return 2.0 * self.alpha + p2 * (12.0 * self.beta + 30.0 * self.gamma * p2)

    def p_spontaneous(self) -> float:
        """Positive zero-field minimum of u_bulk [C/m^2]."""
        if self.gamma == 0.0:
            return math.sqrt(-self.alpha / (2.0 * self.beta))
        # stationarity: 2a + 4b x + 6c x^2 = 0 with x = P^2; outer root is the minimum
        a, b, c = self.alpha, self.beta, self.gamma
        disc = 4.0 * b * b - 12.0 * a * c
        x = (-2.0 * b + math.sqrt(disc)) / (6.0 * c)
        return math.sqrt(x)

    def p_fold(self) -> float:
        """Positive P where dE/dP first vanishes: edge of the NC region [C/m^2]."""
        if self.gamma == 0.0:
            return math.sqrt(-self.alpha / (6.0 * self.beta))
        # dE/dP = 0: 30c x^2 + 12b x + 2a = 0 with x = P^2; inner root is the fold
        a, b, c = self.alpha, self.beta, self.gamma
        disc = 144.0 * b * b - 240.0 * a * c
        x = (-12.0 * b - math.sqrt(disc)) / (60.0 * c)
        if x <= 0.0:
            x = (-12.0 * b + math.sqrt(disc)) / (60.0 * c)
        return math.sqrt(x)

    def e_c_intrinsic(self) -> float:
        """Magnitude of the fold point of E(P): the intrinsic coercive field [V/m]."""
        return abs(float(self.landau_field(self.p_fold())))

    def min_field_slope(self) -> float:
        """Global minimum of dE/dP over all P (the deepest NC slope) [V*m/C]."""
        if self.gamma > 0.0 and self.beta < 0.0:
            x = -self.beta / (5.0 * self.gamma)   # vertex of the quadratic in P^2
            return 2.0 * self.alpha + x * (12.0 * self.beta + 30.0 * self.gamma * x)
        return 2.0 * self.alpha


@dataclass(frozen=True)
class DielectricLayer:
    """Linear dielectric layer: relative permittivity and thickness [m]."""

    eps_d: float
    t_d: float

    def __post_init__(self):
        if not (np.isfinite(self.eps_d) and self.eps_d >= 1.0):
            raise StackValidationError(f"eps_d >= 1 required, got {self.eps_d}")
        if not (np.isfinite(self.t_d) and self.t_d >= 0.0):
            raise StackValidationError(f"t_d >= 0 required, got {self.t_d}")


@dataclass(frozen=True)
class StackConfig:
    """Capacitor stack: ferroelectric, optional series dielectric, optional
    electrode dead layers (one identical layer per electrode), device area.

    The dead-layer pair models finite metal screening: each electrode
    contributes a series layer of thickness = screening length and
    permittivity eps_e, which reproduces an electrode charge smaller
    than P at zero bias.
    """

    ferro: FerroMaterial
    area: float
    dielectric: Optional[DielectricLayer] = None
    electrode_screen: Optional[DielectricLayer] = None

    def __post_init__(self):
        if not (np.isfinite(self.area) and self.area > 0.0):
            raise StackValidationError(f"area > 0 required, got {self.area}")

    def series_layers(self) -> tuple:
        """All series dielectric layers with nonzero thickness (screen counted twice)."""
        layers = []
        if self.dielectric is not None and self.dielectric.t_d > 0.0:
            layers.append(self.dielectric)
        if self.electrode_screen is not None and self.electrode_screen.t_d > 0.0:
            layers.append(self.electrode_screen)
            layers.append(self.electrode_screen)
        return tuple(layers)

    @property
    def t_eff(self) -> float:
        """Effective series thickness sum(t_d_i / eps_d_i) [m]; 0 for ideal MFM."""
        return sum(l.t_d / l.eps_d for l in self.series_layers())


def _check_ferro(mat: FerroMaterial) -> None:
    for name in ("alpha", "beta", "gamma", "k", "rho", "eps_f", "t_f"):
        v = getattr(mat, name)
        if not np.isfinite(v):
            raise StackValidationError(f"{name} must be finite, got {v}")
    if mat.t_f <= 0.0:
        raise StackValidationError(f"t_f > 0 required, got {mat.t_f}")
    if mat.rho <= 0.0:
        raise StackValidationError(f"rho > 0 required, got {mat.rho}")
    if mat.eps_f < 1.0:
        raise StackValidationError(f"eps_f >= 1 required, got {mat.eps_f}")
    if mat.k < 0.0:
        raise StackValidationError(f"k >= 0 required, got {mat.k}")
    if mat.alpha >= 0.0:
        raise StackValidationError(
            f"alpha < 0 required for a ferroelectric phase, got {mat.alpha}"
        )
    highest = mat.gamma if mat.gamma != 0.0 else mat.beta
    if highest <= 0.0:
        raise StackValidationError(
            "highest-order retained coefficient must be > 0 so the free energy "
            f"is bounded below (gamma={mat.gamma}, beta={mat.beta})"
        )


def calibrate_landau(p_r: float, e_c: float) -> tuple:
    """Invert (P_r, E_C) into quartic Landau coefficients (alpha, beta), gamma = 0.

    The returned coefficients place the zero-field minima of the free energy
    at +-p_r and the fold point of E(P) = 2*alpha*P + 4*beta*P^3 at magnitude
    e_c, so every simulation is traceable to the two measurable loop numbers.

    Parameters
    ----------
    p_r : float
        Spontaneous (remnant) polarization [C/m^2]; > 0.
    e_c : float
        Intrinsic coercive field [V/m]; > 0.

    Returns
    -------
    (alpha, beta) : tuple of float
        alpha = -(3*sqrt(3)/4) * e_c / p_r, beta = |alpha| / (2 * p_r^2).
    """
    if not (np.isfinite(p_r) and p_r > 0.0):
        raise StackValidationError(f"p_r > 0 required, got {p_r}")
    if not (np.isfinite(e_c) and e_c > 0.0):
        raise StackValidationError(f"e_c > 0 required, got {e_c}")
    alpha = -(3.0 * math.sqrt(3.0) / 4.0) * e_c / p_r
    beta = -alpha / (2.0 * p_r * p_r)
    return alpha, beta


def validate_stack(stack: StackConfig) -> StackConfig:
    """Re-check every invariant of a stack tree; returns the stack unchanged.

    Construction already validates, so this is the explicit entry point for
    configs assembled by hand or deserialized from unchecked sources.
    """
    if not isinstance(stack.ferro, FerroMaterial):
        raise StackValidationError("ferro must be a FerroMaterial")
    _check_ferro(stack.ferro)
    for name, layer in (("dielectric", stack.dielectric),
                        ("electrode_screen", stack.electrode_screen)):
        if layer is None:
            continue
        if not (np.isfinite(layer.eps_d) and layer.eps_d >= 1.0):
            raise StackValidationError(f"{name}.eps_d >= 1 required, got {layer.eps_d}")
        if not (np.isfinite(layer.t_d) and layer.t_d >= 0.0):
            raise StackValidationError(f"{name}.t_d >= 0 required, got {layer.t_d}")
    if not (np.isfinite(stack.area) and stack.area > 0.0):
        raise StackValidationError(f"area > 0 required, got {stack.area}")
    return stack
