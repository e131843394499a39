import pytest

from ferrosim import Q_E, UnitError, convert_units


def test_uc_cm2_to_si():
    assert convert_units(16.0, "uC/cm2", "C/m2") == pytest.approx(0.16, rel=1e-15)


def test_charge_per_area_in_elementary_charges():
    # 16 uC/cm2 is about 1e14 electron charges per cm2
    n = convert_units(16.0, "uC/cm2", "e/cm2")
    assert n == pytest.approx(16e-6 / Q_E, rel=1e-12)
    assert n == pytest.approx(9.987e13, rel=1e-3)
    assert abs(n - 1e14) / 1e14 < 0.02


def test_mv_cm_to_si():
    assert convert_units(1.0, "MV/cm", "V/m") == pytest.approx(1e8, rel=1e-15)


def test_nm_to_m():
    assert convert_units(10.0, "nm", "m") == pytest.approx(1e-8, rel=1e-15)


@pytest.mark.parametrize("a,b", [
    ("uC/cm2", "C/m2"),
    ("MV/cm", "V/m"),
    ("nm", "m"),
    ("e/cm2", "C/cm2"),
    ("uC/cm2", "e/cm2"),
])
def test_round_trip_exact(a, b):
    for value in (1.0, 3.7, 1e-6, 42.0):
        back = convert_units(convert_units(value, a, b), b, a)
        assert back == pytest.approx(value, rel=1e-15)


def test_unknown_unit_rejected():
    with pytest.raises(UnitError):
        convert_units(1.0, "furlong", "m")


def test_cross_quantity_rejected():
    with pytest.raises(UnitError):
        convert_units(1.0, "nm", "V/m")


def test_micro_sign_alias():
    assert convert_units(16.0, "µC/cm2", "C/m2") == pytest.approx(0.16, rel=1e-15)
