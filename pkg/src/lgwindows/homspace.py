"""Truncated spaces of morphisms between branes and linear solves inside them.

Each matrix entry of a morphism of fixed charge lives in one bigraded piece
of the sections of a line bundle; which sections are allowed depends on the
locus:

* ``Space.STACK``: polynomials on V (C*_G-invariants of the right weight);
* ``Space.PLUS`` / ``Space.MINUS``: global sections on the GIT quotient,
  assembled fibrewise over the weighted projective base;
* ``Chart(i)``: sections over ``{v_i != 0}``, i.e. Laurent in ``v_i``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

from . import linalg
from .brane import Brane, Matrix, Morphism, Summand, map_degree, mat_zero
from .model import GaugedModel, Space, decompose
from .poly import Monomial, Poly, VariableTable, bidegree, graded_basis, monomial_key


class ConcentrationError(ValueError):
    """Raised when a line bundle has higher cohomology on the requested phase."""


class BoundError(RuntimeError):
    """A truncated linear search found no solution; a larger bound may help."""


@dataclass(frozen=True)
class Chart:
    var: int

    @property
    def value(self) -> str:
        return f"chart{self.var}"


Locus = Space | Chart


# ------------------------------------------------------------ section bases
@lru_cache(maxsize=None)
def _sub_table(table: VariableTable, indices: tuple[int, ...]) -> VariableTable:
    return VariableTable(tuple(table.variables[i] for i in indices))


def _embed(m: Sequence[int], indices: Sequence[int], arity: int) -> list[int]:
    out = [0] * arity
    for e, i in zip(m, indices):
        out[i] = e
    return out


def sub_basis(table: VariableTable, indices: tuple[int, ...], g: int, r: int, bound: int) -> list[Monomial]:
    """Monomials only in ``indices`` with bidegree ``(g, r)``, as full exponent vectors."""
    if not indices:
        return [(0,) * table.arity] if (g, r) == (0, 0) and bound >= 0 else []
    sub = _sub_table(table, indices)
    return [tuple(_embed(m, indices, table.arity)) for m in graded_basis(g, r, bound, sub)]


@lru_cache(maxsize=None)
def _fiber_monomials(table: VariableTable, indices: tuple[int, ...], bound: int) -> tuple:
    out = []
    if not indices:
        return (((0,) * table.arity, 0, 0, 0),)
    sub = _sub_table(table, indices)
    from .poly import _exponents_up_to

    for m in _exponents_up_to(len(indices), bound):
        full = tuple(_embed(m, indices, table.arity))
        g, r = bidegree(full, table)
        out.append((full, g, r, sum(m)))
    return tuple(out)


def base_sections(table: VariableTable, base: tuple[int, ...], j: int, r: int, bound: int) -> list[Monomial]:
    """H^0 of ``O(j)`` at R-degree ``r`` on the weighted projective space of ``base``.

    With a single base variable the base is a point with finite stabiliser
    and negative powers are allowed.
    """
    if len(base) == 1:
        (i,) = base
        w = table.gauge[i]
        if j % w:
            return []
        e = j // w
        if e * table.r[i] != r:
            return []
        m = [0] * table.arity
        m[i] = e
        return [tuple(m)]
    if j < 0 if table.gauge[base[0]] > 0 else j > 0:
        return []
    return sub_basis(table, base, j, r, bound)


@lru_cache(maxsize=65536)
def sections(model: GaugedModel, locus: Locus, g: int, r: int, bound: int) -> tuple[Monomial, ...]:
    """Monomial basis of the sections of ``O(g)`` at R-degree ``r`` on ``locus``, truncated."""
    table = model.table
    if bound < 0:
        return ()
    if isinstance(locus, Chart):
        i = locus.var
        gi = table.gauge[i]
        if gi == 0:
            raise ValueError("chart variable must have nonzero gauge weight")
        others = tuple(a for a in range(table.arity) if a != i)
        out = []
        for m, gm, rm, _deg in _fiber_monomials(table, others, bound):
            rest = g - gm
            if rest % gi:
                continue
            e = rest // gi
            if rm + e * table.r[i] != r:
                continue
            mm = list(m)
            mm[i] = e
            out.append(tuple(mm))
        return tuple(sorted(out, key=monomial_key))
    if locus is Space.STACK:
        return tuple(graded_basis(g, r, bound, table))
    dec = decompose(model)
    if locus is Space.PLUS:
        base, fiber = dec.x_indices, dec.y_indices + dec.z_indices
        if not base:
            raise ConcentrationError("the plus phase is empty")
        if g <= -dec.d:
            raise ConcentrationError(f"O({g}) has higher cohomology on the plus phase (d = {dec.d})")
    else:
        base, fiber = dec.y_indices, dec.x_indices + dec.z_indices
        if not base:
            raise ConcentrationError("the minus phase is empty")
        if g >= dec.d:
            raise ConcentrationError(f"O({g}) has higher cohomology on the minus phase (d = {dec.d})")
    fiber = tuple(sorted(fiber))
    out = []
    for m, gm, rm, deg in _fiber_monomials(table, fiber, bound):
        for b in base_sections(table, base, g - gm, r - rm, bound - deg):
            out.append(tuple(a + c for a, c in zip(m, b)))
    return tuple(sorted(set(out), key=monomial_key))


# ---------------------------------------------------------- morphism spaces
Key = tuple  # (target index, source index, monomial)


def morphism_vector(phi: Morphism | Matrix) -> dict[Key, Fraction]:
    mat = phi.matrix if isinstance(phi, Morphism) else phi
    out = {}
    for i, row in enumerate(mat):
        for j, e in enumerate(row):
            for m, c in e.terms.items():
                out[(i, j, m)] = c
    return out


def _columns_of(A: Matrix) -> list[list[tuple[int, dict]]]:
    """Nonzero entries of ``A`` grouped by column."""
    width = len(A[0]) if A else 0
    cols = [[] for _ in range(width)]
    for a, row in enumerate(A):
        for i, e in enumerate(row):
            if e.terms:
                cols[i].append((a, e.terms))
    return cols


def _rows_of(B: Matrix) -> list[list[tuple[int, dict]]]:
    return [[(b, e.terms) for b, e in enumerate(row) if e.terms] for row in B]


def _shifted(entries, m: Monomial, place, sign=1) -> dict:
    out = {}
    for idx, terms in entries:
        for mm, cc in terms.items():
            key = place(idx, tuple(x + y for x, y in zip(mm, m)))
            out[key] = out.get(key, 0) + (cc if sign == 1 else -cc)
    return out


def _unit_product_left(A: Matrix, i: int, j: int, m: Monomial, cols=None) -> dict:
    """Vector of ``A · (x^m e_ij)`` (A acts on the target side)."""
    col = (cols or _columns_of(A))[i] if A else []
    return _shifted(col, m, lambda a, mono: (a, j, mono))


def _unit_product_right(B: Matrix, i: int, j: int, m: Monomial, rows=None) -> dict:
    """Vector of ``(x^m e_ij) · B``."""
    row = (rows or _rows_of(B))[j] if B else []
    return _shifted(row, m, lambda b, mono: (i, b, mono))


def _add_into(acc: dict, vec: dict, scale=1, tag=None):
    for k, v in vec.items():
        kk = k if tag is None else (tag,) + k
        acc[kk] = acc.get(kk, 0) + scale * v


@dataclass
class MorphismSpace:
    """Truncated space of charge-``charge`` maps ``source -> target`` on ``locus``.

    ``allowed(i, j)`` may restrict which entries are free; ``monomial_filter``
    may restrict individual monomials.
    """

    source: Brane
    target: Brane
    charge: int
    locus: Locus
    bound: int
    allowed: Callable[[int, int], bool] | None = None
    monomial_filter: Callable[[int, int, Monomial], bool] | None = None
    basis: list[Key] = field(init=False)
    _sparse: tuple | None = field(init=False, default=None, repr=False)
    _cache: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        model = self.source.model
        basis = []
        for i, tgt in enumerate(self.target.summands):
            for j, src in enumerate(self.source.summands):
                if self.allowed is not None and not self.allowed(i, j):
                    continue
                g, r = map_degree(src, tgt, self.charge)
                for m in sections(model, self.locus, g, r, self.bound):
                    if self.monomial_filter is None or self.monomial_filter(i, j, m):
                        basis.append((i, j, m))
        self.basis = basis

    def __len__(self):
        return len(self.basis)

    def element(self, coeffs: Sequence[Fraction]) -> Morphism:
        table = self.source.table
        rows = [[dict() for _ in range(self.source.rank)] for _ in range(self.target.rank)]
        for (i, j, m), c in zip(self.basis, coeffs):
            if c:
                rows[i][j][m] = rows[i][j].get(m, 0) + c
        mat = tuple(tuple(Poly(e, table) for e in row) for row in rows)
        return Morphism(self.source, self.target, self.charge, mat)

    # linear maps on basis elements ------------------------------------
    def d_column(self, key: Key) -> dict:
        """Coordinates of ``d_{E,F}`` applied to a basis element."""
        i, j, m = key
        E, F = self.source, self.target
        if self._sparse is None:
            self._sparse = (_columns_of(F.d), _rows_of(E.d))
        out = _unit_product_left(F.d, i, j, m, self._sparse[0])
        sign = -1 if self.charge % 2 == 0 else 1
        _add_into(out, _unit_product_right(E.d, i, j, m, self._sparse[1]), sign)
        return out

    def d_columns(self) -> list[dict]:
        return [self.d_column(k) for k in self.basis]

    def left_column(self, A: Matrix, key: Key) -> dict:
        i, j, m = key
        return _unit_product_left(A, i, j, m, self._cached(A, _columns_of))

    def right_column(self, B: Matrix, key: Key) -> dict:
        i, j, m = key
        return _unit_product_right(B, i, j, m, self._cached(B, _rows_of))

    def _cached(self, M: Matrix, build):
        key = (id(M), build)
        if key not in self._cache:
            self._cache[key] = (M, build(M))
        return self._cache[key][1]


def solve_in(space: MorphismSpace, columns: list[dict], rhs: dict) -> Morphism | None:
    sol = linalg.solve(columns, rhs)
    if sol is None:
        return None
    return space.element(sol)


def closed_maps(space: MorphismSpace) -> list[Morphism]:
    return [space.element(v) for v in linalg.nullspace(space.d_columns())]


def random_closed_map(space: MorphismSpace, rng: random.Random, spread: int = 7) -> Morphism | None:
    basis = linalg.nullspace(space.d_columns())
    if not basis:
        return None
    coeffs = [Fraction(0)] * len(space)
    for vec in basis:
        c = rng.randint(-spread, spread) or 1
        for a, v in enumerate(vec):
            if v:
                coeffs[a] += c * v
    return space.element(coeffs)
