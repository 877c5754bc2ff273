"""Gauged Landau-Ginzburg models ``(V, C*_G, C*_R, W)`` and their phases."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from pathlib import Path

from .poly import Poly, PolyError, VariableTable, format_poly, parse_poly


class ModelError(ValueError):
    pass


class Space(enum.Enum):
    STACK = "stack"
    PLUS = "plus"
    MINUS = "minus"

    @classmethod
    def parse(cls, value) -> "Space":
        if isinstance(value, Space):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ModelError(f"unknown space {value!r}; expected stack, plus or minus") from None

    def opposite(self) -> "Space":
        if self is Space.STACK:
            raise ModelError("the stack has no opposite phase")
        return Space.MINUS if self is Space.PLUS else Space.PLUS


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)
    witness: Fraction | None = None

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, bool(passed), detail))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


@dataclass(frozen=True)
class Decomposition:
    x_indices: tuple[int, ...]
    y_indices: tuple[int, ...]
    z_indices: tuple[int, ...]
    d: int


@dataclass(frozen=True)
class GaugedModel:
    table: VariableTable
    W: Poly
    name: str = "model"

    def __post_init__(self):
        if self.W.table != self.table:
            raise ModelError("superpotential is over a different variable table")

    @classmethod
    def from_spec(cls, variables, W: str, name: str = "model") -> "GaugedModel":
        table = VariableTable.build(variables)
        return cls(table, parse_poly(W, table), name)

    @property
    def arity(self) -> int:
        return self.table.arity

    def poly(self, text: str) -> Poly:
        return parse_poly(text, self.table)

    def to_dict(self) -> dict:
        return {"name": self.name, "variables": self.table.to_list(), "W": format_poly(self.W)}

    @classmethod
    def from_dict(cls, data: dict) -> "GaugedModel":
        try:
            spec = [(v["name"], v["gauge"], v["r"]) for v in data["variables"]]
            return cls.from_spec(spec, data.get("W", "0"), data.get("name", "model"))
        except (KeyError, TypeError, PolyError) as exc:
            raise ModelError(f"malformed model description: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> "GaugedModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def parity_witness(table: VariableTable) -> Fraction | None:
    """Smallest ``t >= 0`` with ``g_i t = r_i (mod 2)`` for all variables, if any.

    Solutions are periodic mod 2 and have denominator dividing
    ``2 * lcm(|g_i|)``, so a finite scan decides the system.
    """
    nonzero = [abs(g) for g in table.gauge if g]
    M = 2 * (lcm(*nonzero) if nonzero else 1)
    for a in range(2 * M):
        t = Fraction(a, M)
        if all(((g * t - r) % 2) == 0 for g, r in zip(table.gauge, table.r)):
            return t
    return None


def validate(m: GaugedModel) -> ValidationReport:
    rep = ValidationReport()
    gsum = sum(m.table.gauge)
    rep.add("calabi_yau", gsum == 0, f"sum of gauge weights = {gsum}")
    degs = sorted(m.W.bidegrees())
    ok = m.W.is_zero() or degs == [(0, 2)]
    rep.add("W_bidegree", ok, "W = 0" if m.W.is_zero() else f"bidegrees of W: {degs}")
    rep.add("W_polynomial", m.W.is_polynomial(), "")
    t = parity_witness(m.table)
    rep.witness = t
    rep.add("parity", t is not None, f"t = {t}" if t is not None else "no rational t solves g_i t = r_i mod 2")
    return rep


def require_valid(m: GaugedModel) -> GaugedModel:
    rep = validate(m)
    if not rep.valid:
        raise ModelError("invalid model: " + "; ".join(f"{c.name} ({c.detail})" for c in rep.failures()))
    return m


def decompose(m: GaugedModel) -> Decomposition:
    g = m.table.gauge
    xs = tuple(i for i, w in enumerate(g) if w > 0)
    ys = tuple(i for i, w in enumerate(g) if w < 0)
    zs = tuple(i for i, w in enumerate(g) if w == 0)
    return Decomposition(xs, ys, zs, sum(g[i] for i in xs))


def side_indices(m: GaugedModel, side: Space) -> tuple[int, ...]:
    """Variables whose simultaneous vanishing is unstable on the given phase."""
    dec = decompose(m)
    if side is Space.PLUS:
        idx = dec.x_indices
    elif side is Space.MINUS:
        idx = dec.y_indices
    else:
        raise ModelError("the stack has no unstable locus")
    if not idx:
        raise ModelError(f"the {side.value} phase is empty for model {m.name!r}")
    return idx


def mirror(m: GaugedModel) -> GaugedModel:
    """Same model with all gauge weights negated (swaps the two phases)."""
    table = VariableTable.build((v.name, -v.gauge, v.r) for v in m.table.variables)
    W = Poly(m.W.terms, table)
    return GaugedModel(table, W, m.name + "~")
