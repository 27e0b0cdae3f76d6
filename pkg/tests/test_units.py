import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpglab.errors import DimensionError, UnitParseError
from mpglab.units import (
    DIMENSIONLESS,
    ENERGY,
    POWER,
    TIME,
    Quantity,
    parse_quantity,
    parse_unit,
    q,
)


def test_energy_conversions():
    assert q(1.56, "MWh").to(parse_unit("kWh")).value == pytest.approx(1560.0)
    assert q(3_600_000, "J").to(parse_unit("kWh")).value == pytest.approx(1.0)


def test_power_is_energy_over_time():
    assert parse_unit("kW").dimension == ENERGY / TIME
    assert parse_unit("kWh/h").dimension == POWER
    # energy = power * time survives the dimension system
    kw = parse_unit("kW")
    h = parse_unit("h")
    assert (kw * h).dimension == ENERGY


def test_compound_unit_parsing():
    u = parse_unit("kgCO2e/kWh")
    assert u.dimension == parse_unit("gCO2e").dimension / ENERGY
    assert parse_unit("USD/MWh").dimension == parse_unit("USD/kWh").dimension
    assert parse_unit("Gb/s/W").dimension == parse_unit("Gb/J").dimension
    assert parse_unit("year^-1").dimension == DIMENSIONLESS / TIME


def test_unknown_unit_rejected():
    with pytest.raises(UnitParseError):
        parse_unit("furlongs")
    with pytest.raises(UnitParseError):
        parse_unit("kWh//h")


def test_count_species_do_not_interconvert():
    tokens = q(5, "token")
    with pytest.raises(DimensionError):
        tokens.to(parse_unit("FLOP"))
    with pytest.raises(DimensionError):
        q(1, "inference").to(parse_unit("op"))


def test_quantity_suffix_grammar():
    quantity = parse_quantity("1.5MWh")
    assert quantity.value == 1.5
    assert quantity.unit.dimension == ENERGY
    assert parse_quantity("0.4kgCO2e/kWh").value == 0.4
    assert parse_quantity("42").unit.dimension == DIMENSIONLESS
    assert parse_quantity("-3e2W").value == -300.0


def test_quantity_suffix_rejects_garbage():
    with pytest.raises(UnitParseError):
        parse_quantity("MWh1.5")
    with pytest.raises(UnitParseError):
        parse_quantity("1.5 parsecs")


@given(st.floats(min_value=1e-6, max_value=1e6, allow_nan=False))
def test_round_trip_conversion(value):
    mwh = q(value, "MWh")
    back = mwh.to(parse_unit("kWh")).to(parse_unit("MWh"))
    assert back.value == pytest.approx(value, rel=1e-12)


def test_scale_must_be_positive():
    from fractions import Fraction

    from mpglab.units import Unit

    with pytest.raises(DimensionError):
        Unit(DIMENSIONLESS, Fraction(-1))


def test_dimension_algebra():
    assert (ENERGY / ENERGY).is_dimensionless
    assert (ENERGY * TIME) / TIME == ENERGY
    with pytest.raises(DimensionError):
        from fractions import Fraction

        ENERGY.pow_rational(Fraction(1, 2))


def test_quantity_str():
    assert str(Quantity(2.5, parse_unit("kWh"))) == "2.5 kWh"
