"""Dimension tracking and unit conversion for metric formulas.

The dimension system is a vector of integer exponents over a fixed set of
base axes: energy, time, currency, CO2-equivalent mass, water volume,
temperature, and the count species that must never silently interconvert
(tokens, generic ops, inferences, FLOPs, bits) plus hydrogen mass for
levelized-hydrogen costing.  Power is deliberately a derived dimension
(energy/time) so that energy = power x time survives dimensional checking.

Scales are exact rationals relative to one canonical unit per axis
(kWh, hour, USD, kgCO2e, litre, kelvin, and the unit count of each species).
A Quantity is a float value tagged with a Unit; conversions go through the
canonical scale.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError, UnitParseError

AXES = (
    "energy",
    "time",
    "currency",
    "co2e",
    "water",
    "temperature",
    "tokens",
    "ops",
    "inferences",
    "flops",
    "bits",
    "h2",
)
_AXIS_INDEX = {name: i for i, name in enumerate(AXES)}
_ZERO = (0,) * len(AXES)


@dataclass(frozen=True)
class Dimension:
    """Integer exponents over the base axes; multiplication adds them."""

    exponents: tuple[int, ...] = _ZERO

    @staticmethod
    def base(axis: str) -> "Dimension":
        exps = list(_ZERO)
        exps[_AXIS_INDEX[axis]] = 1
        return Dimension(tuple(exps))

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, k: int) -> "Dimension":
        return Dimension(tuple(a * int(k) for a in self.exponents))

    def pow_rational(self, q: Fraction) -> "Dimension":
        """Raise to a rational power; every exponent must stay integral."""
        exps = []
        for a in self.exponents:
            scaled = a * q
            if scaled.denominator != 1:
                raise DimensionError(
                    f"exponent {q} gives a fractional dimension for {self}"
                )
            exps.append(int(scaled))
        return Dimension(tuple(exps))

    @property
    def is_dimensionless(self) -> bool:
        return self.exponents == _ZERO

    def __str__(self) -> str:
        if self.is_dimensionless:
            return "dimensionless"
        num = [f"{n}^{e}" if e != 1 else n for n, e in zip(AXES, self.exponents) if e > 0]
        den = [f"{n}^{-e}" if e != -1 else n for n, e in zip(AXES, self.exponents) if e < 0]
        if not num:
            num = ["1"]
        return "/".join(["*".join(num)] + den) if den else "*".join(num)


DIMENSIONLESS = Dimension()
ENERGY = Dimension.base("energy")
TIME = Dimension.base("time")
CURRENCY = Dimension.base("currency")
CO2E = Dimension.base("co2e")
WATER = Dimension.base("water")
TEMPERATURE = Dimension.base("temperature")
TOKENS = Dimension.base("tokens")
OPS = Dimension.base("ops")
INFERENCES = Dimension.base("inferences")
FLOPS = Dimension.base("flops")
BITS = Dimension.base("bits")
H2 = Dimension.base("h2")
POWER = ENERGY / TIME  # derived: canonical kWh/h == kW


@dataclass(frozen=True)
class Unit:
    """A dimension plus an exact positive rational scale to its canonical unit."""

    dimension: Dimension = DIMENSIONLESS
    scale: Fraction = Fraction(1)
    symbol: str = ""

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise DimensionError(f"unit scale must be positive, got {self.scale}")

    def __mul__(self, other: "Unit") -> "Unit":
        return Unit(
            self.dimension * other.dimension,
            self.scale * other.scale,
            _join_symbols(self.symbol, other.symbol, "*"),
        )

    def __truediv__(self, other: "Unit") -> "Unit":
        return Unit(
            self.dimension / other.dimension,
            self.scale / other.scale,
            _join_symbols(self.symbol, other.symbol, "/"),
        )

    def __pow__(self, k: int) -> "Unit":
        return Unit(self.dimension ** k, self.scale ** k, f"{self.symbol}^{k}")

    def __str__(self) -> str:
        return self.symbol or str(self.dimension)


def _join_symbols(a: str, b: str, op: str) -> str:
    if not a and not b:
        return ""
    a = a or "1"
    b = b or "1"
    return f"{a}{op}{b}"


DIMENSIONLESS_UNIT = Unit(DIMENSIONLESS, Fraction(1), "")


@dataclass(frozen=True)
class Quantity:
    """A scalar value in a concrete unit."""

    value: float
    unit: Unit = DIMENSIONLESS_UNIT

    @property
    def dimension(self) -> Dimension:
        return self.unit.dimension

    def canonical(self) -> float:
        """Value expressed in the canonical unit of its dimension."""
        return self.value * float(self.unit.scale)

    def to(self, unit: Unit) -> "Quantity":
        if unit.dimension != self.dimension:
            raise DimensionError(
                f"cannot convert {self.unit or self.dimension} to {unit or unit.dimension}"
            )
        return Quantity(self.canonical() / float(unit.scale), unit)

    def __str__(self) -> str:
        sym = str(self.unit)
        return f"{self.value} {sym}".rstrip()


def _registry() -> dict[str, Unit]:
    def u(dim: Dimension, scale, symbol: str) -> Unit:
        return Unit(dim, Fraction(scale), symbol)

    reg: dict[str, Unit] = {}

    def add(symbols: str, unit: Unit) -> None:
        for s in symbols.split():
            reg[s] = Unit(unit.dimension, unit.scale, s)

    # energy (canonical kWh)
    add("Wh", u(ENERGY, Fraction(1, 1000), "Wh"))
    add("kWh", u(ENERGY, 1, "kWh"))
    add("MWh", u(ENERGY, 1000, "MWh"))
    add("GWh", u(ENERGY, 10 ** 6, "GWh"))
    add("J", u(ENERGY, Fraction(1, 3_600_000), "J"))
    add("kJ", u(ENERGY, Fraction(1, 3600), "kJ"))
    add("MJ", u(ENERGY, Fraction(1000, 3600), "MJ"))
    add("GJ", u(ENERGY, Fraction(10 ** 6, 3600), "GJ"))
    # power (canonical kW = kWh/h)
    add("W", u(POWER, Fraction(1, 1000), "W"))
    add("kW", u(POWER, 1, "kW"))
    add("MW", u(POWER, 1000, "MW"))
    add("GW", u(POWER, 10 ** 6, "GW"))
    # time (canonical hour)
    add("s sec", u(TIME, Fraction(1, 3600), "s"))
    add("ms", u(TIME, Fraction(1, 3_600_000), "ms"))
    add("min", u(TIME, Fraction(1, 60), "min"))
    add("h hr hour hours", u(TIME, 1, "h"))
    add("day days", u(TIME, 24, "day"))
    add("year years yr", u(TIME, 8760, "year"))
    # currency (canonical USD)
    add("USD", u(CURRENCY, 1, "USD"))
    add("kUSD", u(CURRENCY, 1000, "kUSD"))
    add("MUSD", u(CURRENCY, 10 ** 6, "MUSD"))
    # CO2-equivalent mass (canonical kg)
    add("gCO2e gCO2", u(CO2E, Fraction(1, 1000), "gCO2e"))
    add("kgCO2e kgCO2", u(CO2E, 1, "kgCO2e"))
    add("tCO2e tCO2", u(CO2E, 1000, "tCO2e"))
    # water volume (canonical litre)
    add("L l litre", u(WATER, 1, "L"))
    add("m3", u(WATER, 1000, "m3"))
    add("ML", u(WATER, 10 ** 6, "ML"))
    # temperature difference (canonical kelvin)
    add("K degC C", u(TEMPERATURE, 1, "K"))
    # count species
    add("token tokens", u(TOKENS, 1, "token"))
    add("ktoken", u(TOKENS, 1000, "ktoken"))
    add("Mtoken", u(TOKENS, 10 ** 6, "Mtoken"))
    add("op ops", u(OPS, 1, "op"))
    add("kop", u(OPS, 1000, "kop"))
    add("Mop", u(OPS, 10 ** 6, "Mop"))
    add("Gop", u(OPS, 10 ** 9, "Gop"))
    add("inference inferences request requests query queries", u(INFERENCES, 1, "inference"))
    add("kinference", u(INFERENCES, 1000, "kinference"))
    add("FLOP flop FLOPs", u(FLOPS, 1, "FLOP"))
    add("MFLOP", u(FLOPS, 10 ** 6, "MFLOP"))
    add("GFLOP", u(FLOPS, 10 ** 9, "GFLOP"))
    add("TFLOP", u(FLOPS, 10 ** 12, "TFLOP"))
    add("PFLOP", u(FLOPS, 10 ** 15, "PFLOP"))
    add("EFLOP", u(FLOPS, 10 ** 18, "EFLOP"))
    add("bit bits", u(BITS, 1, "bit"))
    add("kb", u(BITS, 1000, "kb"))
    add("Mb", u(BITS, 10 ** 6, "Mb"))
    add("Gb", u(BITS, 10 ** 9, "Gb"))
    add("Tb", u(BITS, 10 ** 12, "Tb"))
    add("B byte bytes", u(BITS, 8, "B"))
    add("kB", u(BITS, 8000, "kB"))
    add("MB", u(BITS, 8 * 10 ** 6, "MB"))
    add("GB", u(BITS, 8 * 10 ** 9, "GB"))
    add("TB", u(BITS, 8 * 10 ** 12, "TB"))
    # hydrogen mass (canonical kg)
    add("kgH2", u(H2, 1, "kgH2"))
    add("tH2", u(H2, 1000, "tH2"))
    # dimensionless helpers
    add("ratio", u(DIMENSIONLESS, 1, "ratio"))
    add("pct %", u(DIMENSIONLESS, Fraction(1, 100), "%"))
    return reg


UNIT_REGISTRY = _registry()

_ATOM_RE = re.compile(r"^([A-Za-z%][A-Za-z0-9]*|%)(?:\^(-?\d+))?$")


def parse_unit(text: str) -> Unit:
    """Parse a unit expression: atoms joined by '*' and '/', each with an
    optional integer '^' exponent.  The empty string is dimensionless.

    Examples: "kWh", "kgCO2e/kWh", "USD/MWh", "Gb/s/W", "year^-1".
    """
    text = text.strip()
    if not text or text == "1":
        return DIMENSIONLESS_UNIT
    # tokenize into (op, atom) pairs; leading "1/" allows pure reciprocals
    parts = re.split(r"([*/])", text.replace("·", "*"))
    parts = [p.strip() for p in parts if p.strip()]
    if parts and parts[0] == "1":
        parts = parts[1:]
        if not parts:
            return DIMENSIONLESS_UNIT
    unit = DIMENSIONLESS_UNIT
    op = "*"
    expect_atom = True
    for p in parts:
        if p in "*/":
            if expect_atom:
                raise UnitParseError(f"malformed unit expression: {text!r}")
            op = p
            expect_atom = True
            continue
        m = _ATOM_RE.match(p)
        if not m:
            raise UnitParseError(f"unknown unit token {p!r} in {text!r}")
        sym, exp = m.group(1), int(m.group(2) or 1)
        atom = UNIT_REGISTRY.get(sym)
        if atom is None:
            raise UnitParseError(f"unknown unit symbol {sym!r} in {text!r}")
        powered = atom ** exp if exp != 1 else atom
        unit = unit * powered if op == "*" else unit / powered
        expect_atom = False
    if expect_atom:
        raise UnitParseError(f"malformed unit expression: {text!r}")
    return Unit(unit.dimension, unit.scale, text)


_QUANTITY_RE = re.compile(r"^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(.*)$")


def parse_quantity(text: str) -> Quantity:
    """Parse the CLI suffix grammar: a number immediately followed by a unit
    token, e.g. "1.5MWh", "0.4kgCO2e/kWh", "42".  No whitespace needed; a
    single space between number and unit is tolerated.
    """
    m = _QUANTITY_RE.match(text.strip())
    if not m:
        raise UnitParseError(f"cannot parse quantity {text!r}")
    value = float(m.group(1))
    return Quantity(value, parse_unit(m.group(2)))


def q(value: float, unit: str = "") -> Quantity:
    """Shorthand constructor: q(1.56, "MWh")."""
    return Quantity(float(value), parse_unit(unit))
