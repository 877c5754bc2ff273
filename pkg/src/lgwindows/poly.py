"""Exact polynomials on V, bigraded by gauge weight and R-weight.

Coefficients are :class:`fractions.Fraction`.  Exponent vectors may carry
negative entries so that the same type also holds sections over the affine
charts ``{v_i != 0}`` (Laurent monomials); ordinary polynomial code never
produces them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple[int, ...]


class PolyError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    gauge: int
    r: int


@dataclass(frozen=True)
class VariableTable:
    variables: tuple[Variable, ...]

    def __post_init__(self):
        if not self.variables:
            raise PolyError("variable table is empty")
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in {names}")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v.name):
                raise PolyError(f"bad variable name {v.name!r}")
            if not isinstance(v.gauge, int) or not isinstance(v.r, int):
                raise PolyError(f"weights of {v.name} must be integers")

    @classmethod
    def build(cls, spec: Iterable[tuple[str, int, int]]) -> "VariableTable":
        return cls(tuple(Variable(n, int(g), int(r)) for n, g, r in spec))

    @property
    def arity(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def gauge(self) -> tuple[int, ...]:
        return tuple(v.gauge for v in self.variables)

    @property
    def r(self) -> tuple[int, ...]:
        return tuple(v.r for v in self.variables)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PolyError(f"unknown variable {name!r}") from None

    def var(self, name: str) -> "Poly":
        e = [0] * self.arity
        e[self.index(name)] = 1
        return Poly({tuple(e): Fraction(1)}, self)

    def one(self) -> "Poly":
        return Poly.constant(1, self)

    def zero(self) -> "Poly":
        return Poly({}, self)

    def to_list(self) -> list[dict]:
        return [{"name": v.name, "gauge": v.gauge, "r": v.r} for v in self.variables]


def bidegree(m: Sequence[int], table: VariableTable) -> tuple[int, int]:
    """Gauge and R-degree of the monomial with exponent vector ``m``."""
    if len(m) != table.arity:
        raise PolyError(f"exponent vector {tuple(m)} has arity {len(m)}, table has {table.arity}")
    g = sum(e * w for e, w in zip(m, table.gauge))
    r = sum(e * w for e, w in zip(m, table.r))
    return g, r


def monomial_key(m: Monomial) -> tuple:
    """Sort key for graded-lexicographic order in table order."""
    return (sum(m), m)


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("terms", "table", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction], table: VariableTable):
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}
        self.table = table
        self._hash = None

    @classmethod
    def constant(cls, c, table: VariableTable) -> "Poly":
        return cls({(0,) * table.arity: Fraction(c)}, table)

    @classmethod
    def monomial(cls, m: Sequence[int], table: VariableTable, coeff=1) -> "Poly":
        if len(m) != table.arity:
            raise PolyError("monomial arity mismatch")
        return cls({tuple(m): Fraction(coeff)}, table)

    # ------------------------------------------------------------------ algebra
    def _check(self, other: "Poly"):
        if self.table != other.table:
            raise PolyError("polynomials live over different variable tables")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other, self.table)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out, self.table)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.table)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly({}, self.table)
            return Poly({m: c * other for m, c in self.terms.items()}, self.table)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Poly({}, self.table)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out, self.table)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative power")
        out = Poly.constant(1, self.table)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.table)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # --------------------------------------------------------------- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        return all(e >= 0 for m in self.terms for e in m)

    def bidegrees(self) -> set[tuple[int, int]]:
        return {bidegree(m, self.table) for m in self.terms}

    def is_bihomogeneous(self, g: int | None = None, r: int | None = None) -> bool:
        degs = self.bidegrees()
        if not degs:
            return True
        if len(degs) > 1:
            return False
        (g0, r0), = degs
        return (g is None or g == g0) and (r is None or r == r0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def coefficient(self, m: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.table.arity)

    def set_zero(self, indices: Iterable[int]) -> "Poly":
        """Restrict to the linear subspace where the given variables vanish."""
        idx = list(indices)
        return Poly({m: c for m, c in self.terms.items() if all(m[i] == 0 for i in idx)}, self.table)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def divide_monomial(self, m: Sequence[int]) -> "Poly":
        """Exact division by a monomial; every term must be divisible."""
        out = {}
        for mm, c in self.terms.items():
            q = tuple(a - b for a, b in zip(mm, m))
            if any(e < 0 for e in q):
                raise PolyError("monomial division is not exact")
            out[q] = c
        return Poly(out, self.table)

    # ------------------------------------------------------------------ text io
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.table.names, m):
            if e == 1:
                factors.append(name)
            elif e != 0:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM_SPLIT = re.compile(r"([+-])")


def parse_poly(text: str, table: VariableTable) -> Poly:
    """Parse ``2*x1^2*y1 - 1/3*x2 + 5`` style text."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise PolyError("empty polynomial string")
    # keep a minus that belongs to an exponent such as x^-1
    s = s.replace("^-", "^~")
    tokens = _TERM_SPLIT.split(s)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    if len(tokens) % 2:
        raise PolyError(f"cannot parse {text!r}")
    out = Poly({}, table)
    for sign, body in zip(tokens[::2], tokens[1::2]):
        if not body:
            raise PolyError(f"dangling sign in {text!r}")
        coeff = Fraction(1)
        exps = [0] * table.arity
        for factor in body.split("*"):
            if not factor:
                raise PolyError(f"empty factor in {text!r}")
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
                continue
            mt = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(~?\d+))?", factor)
            if not mt:
                raise PolyError(f"bad factor {factor!r} in {text!r}")
            e = mt.group(2)
            e = 1 if e is None else (-int(e[1:]) if e.startswith("~") else int(e))
            exps[table.index(mt.group(1))] += e
        if sign == "-":
            coeff = -coeff
        out = out + Poly({tuple(exps): coeff}, table)
    return out


# ---------------------------------------------------------------- enumeration
@lru_cache(maxsize=256)
def _monomials_by_bidegree(table: VariableTable, max_total_degree: int) -> dict:
    buckets: dict[tuple[int, int], list[Monomial]] = {}
    n = table.arity
    for m in _exponents_up_to(n, max_total_degree):
        buckets.setdefault(bidegree(m, table), []).append(m)
    for v in buckets.values():
        v.sort(key=monomial_key)
    return buckets


def _exponents_up_to(n: int, bound: int) -> Iterator[Monomial]:
    if n == 0:
        yield ()
        return
    for e in range(bound + 1):
        for rest in _exponents_up_to(n - 1, bound - e):
            yield (e,) + rest


def graded_basis(g: int, r: int, max_total_degree: int, table: VariableTable) -> list[Monomial]:
    """Monomials of bidegree ``(g, r)`` and total degree at most the bound, grlex-increasing."""
    if max_total_degree < 0:
        return []
    return list(_monomials_by_bidegree(table, max_total_degree).get((g, r), ()))


def brute_force_basis(g: int, r: int, max_total_degree: int, table: VariableTable) -> list[Monomial]:
    """Unoptimised reference enumeration over the full exponent box."""
    out = []
    for m in product(range(max_total_degree + 1), repeat=table.arity):
        if sum(m) <= max_total_degree and bidegree(m, table) == (g, r):
            out.append(m)
    return sorted(out, key=monomial_key)
