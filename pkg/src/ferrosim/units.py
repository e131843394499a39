"""Unit conversions between the human-facing units and strict SI.

Everything inside the solvers is SI (m, V/m, C/m^2). The units here exist
only at I/O boundaries: config files, CLI printouts, ingested data.
"""

from .constants import Q_E

__all__ = ["UnitError", "convert_units"]


class UnitError(ValueError):
    """Unknown unit name or conversion across incompatible quantities."""


# Scale of each unit relative to the base unit of its quantity.
# Charge areal density base: C/m^2; field base: V/m; length base: m.
_UNIT_TABLE = {
    # charge per area
    "C/m2": ("charge_density", 1.0),
    "uC/cm2": ("charge_density", 1e-2),
    "C/cm2": ("charge_density", 1e4),
    "e/cm2": ("charge_density", Q_E * 1e4),
    # electric field
    "V/m": ("field", 1.0),
    "MV/cm": ("field", 1e8),
    # length
    "m": ("length", 1.0),
    "nm": ("length", 1e-9),
}

_ALIASES = {
    "µC/cm2": "uC/cm2",
    "µC/cm²": "uC/cm2",
    "uC/cm²": "uC/cm2",
    "C/m²": "C/m2",
    "C/cm²": "C/cm2",
    "e/cm²": "e/cm2",
}


def _lookup(unit: str):
    name = _ALIASES.get(unit, unit)
    try:
        return _UNIT_TABLE[name]
    except KeyError:
        raise UnitError(f"unknown unit {unit!r}; supported: {sorted(_UNIT_TABLE)}") from None


def convert_units(value, from_unit: str, to_unit: str):
    """Exact scale-factor conversion between two units of the same quantity.

    Supported quantities: charge areal density (uC/cm2, C/m2, C/cm2, e/cm2),
    electric field (MV/cm, V/m), length (nm, m). Raises UnitError for an
    unknown unit or a cross-quantity pair.
    """
    q_from, s_from = _lookup(from_unit)
    q_to, s_to = _lookup(to_unit)
    if q_from != q_to:
        raise UnitError(f"cannot convert {from_unit!r} ({q_from}) to {to_unit!r} ({q_to})")
    return value * (s_from / s_to)
