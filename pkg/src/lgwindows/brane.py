"""B-branes as square matrices over the bigraded polynomial ring.

A summand ``(k, n)`` stands for the line bundle ``O(k)[n]``.  A map
``O(a)[p] -> O(b)[q]`` of R-charge ``s`` is a polynomial of gauge degree
``b - a`` and R-degree ``s + q - p``; the differential of a brane is the
charge-1 case.  Matrices are indexed ``[target][source]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .model import GaugedModel, ModelError, Space, ValidationReport
from .poly import Poly, PolyError, VariableTable, format_poly, parse_poly

Matrix = tuple[tuple[Poly, ...], ...]


class BraneError(ValueError):
    pass


# ------------------------------------------------------------------ matrices
def mat_zero(rows: int, cols: int, table: VariableTable) -> Matrix:
    z = table.zero()
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def mat_identity(n: int, table: VariableTable, scalar=1) -> Matrix:
    z, one = table.zero(), Poly.constant(scalar, table)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix, table: VariableTable, cols: int | None = None) -> Matrix:
    """``A B``; pass ``cols`` when ``B`` has no rows."""
    rows = len(A)
    inner = len(B)
    if cols is None:
        cols = len(B[0]) if B else 0
    if rows and len(A[0]) != inner:
        raise BraneError("matrix shapes do not compose")
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = table.zero()
            for k in range(inner):
                a = A[i][k]
                if a.terms:
                    b = B[k][j]
                    if b.terms:
                        acc = acc + a * b
            row.append(acc)
        out.append(tuple(row))
    if not rows:
        return ()
    return tuple(out)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(A: Matrix, c) -> Matrix:
    return tuple(tuple(a * c for a in row) for row in A)


def mat_is_zero(A: Matrix) -> bool:
    return all(a.is_zero() for row in A for a in row)


def mat_from_strings(rows: Sequence[Sequence[str]], table: VariableTable) -> Matrix:
    return tuple(tuple(parse_poly(str(s), table) for s in row) for row in rows)


def mat_to_strings(A: Matrix) -> list[list[str]]:
    return [[format_poly(a) for a in row] for row in A]


# -------------------------------------------------------------------- branes
@dataclass(frozen=True)
class Summand:
    k: int
    n: int

    def __iter__(self):
        return iter((self.k, self.n))


def map_degree(source: Summand, target: Summand, charge: int) -> tuple[int, int]:
    """Bidegree a matrix entry ``source -> target`` of the given charge must have."""
    return target.k - source.k, charge + target.n - source.n


@dataclass(frozen=True, eq=False)
class Brane:
    model: GaugedModel
    space: Space
    summands: tuple[Summand, ...]
    d: Matrix

    def __post_init__(self):
        n = len(self.summands)
        if len(self.d) != n or any(len(row) != n for row in self.d):
            raise BraneError(f"differential must be {n}x{n}")

    @property
    def table(self) -> VariableTable:
        return self.model.table

    @property
    def rank(self) -> int:
        return len(self.summands)

    @property
    def twists(self) -> list[int]:
        return [s.k for s in self.summands]

    def with_space(self, space: Space) -> "Brane":
        return Brane(self.model, Space.parse(space), self.summands, self.d)

    def same_data(self, other: "Brane") -> bool:
        return (
            self.model == other.model
            and self.summands == other.summands
            and all(a == b for ra, rb in zip(self.d, other.d) for a, b in zip(ra, rb))
        )

    def __repr__(self):
        body = ", ".join(f"O({s.k})[{s.n}]" for s in self.summands) or "0"
        return f"Brane<{self.space.value}: {body}>"

    def to_dict(self) -> dict:
        return {
            "model": self.model.name,
            "space": self.space.value,
            "summands": [[s.k, s.n] for s in self.summands],
            "d": mat_to_strings(self.d),
        }

    @classmethod
    def from_dict(cls, data: dict, model: GaugedModel) -> "Brane":
        try:
            summands = tuple(Summand(int(k), int(n)) for k, n in data["summands"])
            d = mat_from_strings(data.get("d", []), model.table)
            if not summands and not d:
                d = ()
            return cls(model, Space.parse(data.get("space", "stack")), summands, d)
        except (KeyError, TypeError, PolyError, ModelError) as exc:
            raise BraneError(f"malformed brane description: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def make_brane(model: GaugedModel, space, summands: Iterable, d: Sequence[Sequence] | None = None) -> Brane:
    """Convenience constructor; entries of ``d`` may be strings or polynomials."""
    summ = tuple(s if isinstance(s, Summand) else Summand(*s) for s in summands)
    n = len(summ)
    if d is None:
        mat = mat_zero(n, n, model.table)
    else:
        mat = tuple(
            tuple(e if isinstance(e, Poly) else parse_poly(str(e), model.table) for e in row) for row in d
        )
    return Brane(model, Space.parse(space), summ, mat)


def zero_brane(model: GaugedModel, space=Space.STACK) -> Brane:
    return Brane(model, Space.parse(space), (), ())


def line_bundle(model: GaugedModel, k: int, n: int = 0, space=Space.STACK) -> Brane:
    return make_brane(model, space, [(k, n)])


def check_brane(b: Brane) -> ValidationReport:
    rep = ValidationReport()
    bad = []
    for i, tgt in enumerate(b.summands):
        for j, src in enumerate(b.summands):
            e = b.d[i][j]
            if e.is_zero():
                continue
            g, r = map_degree(src, tgt, 1)
            if not e.is_polynomial() or not e.is_bihomogeneous(g, r):
                bad.append(f"d[{i}][{j}] = {e} should have bidegree ({g}, {r})")
    rep.add("grading", not bad, "; ".join(bad[:5]))
    sq = mat_mul(b.d, b.d, b.table)
    W = mat_identity(b.rank, b.table, 1)
    W = tuple(tuple(e * b.model.W for e in row) for row in W)
    diff = mat_add(sq, mat_scale(W, -1))
    ok = mat_is_zero(diff)
    if ok:
        detail = "d^2 = W*Id"
    else:
        i, j = next((i, j) for i, row in enumerate(diff) for j, e in enumerate(row) if not e.is_zero())
        detail = f"(d^2 - W*Id)[{i}][{j}] = {diff[i][j]}"
    rep.add("curvature", ok, detail)
    return rep


def require_brane(b: Brane) -> Brane:
    rep = check_brane(b)
    if not rep.valid:
        raise BraneError("invalid brane: " + "; ".join(c.detail for c in rep.failures()))
    return b


# ----------------------------------------------------------------- morphisms
@dataclass(frozen=True, eq=False)
class Morphism:
    source: Brane
    target: Brane
    charge: int
    matrix: Matrix

    def __post_init__(self):
        if len(self.matrix) != self.target.rank or any(len(r) != self.source.rank for r in self.matrix):
            raise BraneError("morphism matrix has the wrong shape")

    @property
    def table(self) -> VariableTable:
        return self.source.table

    def __add__(self, other: "Morphism") -> "Morphism":
        if other.charge != self.charge:
            raise BraneError("cannot add morphisms of different charge")
        return Morphism(self.source, self.target, self.charge, mat_add(self.matrix, other.matrix))

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + other.scale(-1)

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, self.charge, mat_scale(self.matrix, c))

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition ``self ∘ other``."""
        if other.target.rank != self.source.rank:
            raise BraneError("morphisms do not compose")
        return Morphism(
            other.source, self.target, self.charge + other.charge,
            mat_mul(self.matrix, other.matrix, self.table, other.source.rank)
        )

    def is_zero(self) -> bool:
        return mat_is_zero(self.matrix)

    def is_homogeneous(self) -> bool:
        for i, tgt in enumerate(self.target.summands):
            for j, src in enumerate(self.source.summands):
                e = self.matrix[i][j]
                if e.terms and not e.is_bihomogeneous(*map_degree(src, tgt, self.charge)):
                    return False
        return True

    def to_dict(self) -> dict:
        return {"charge": self.charge, "matrix": mat_to_strings(self.matrix)}


def identity(E: Brane) -> Morphism:
    return Morphism(E, E, 0, mat_identity(E.rank, E.table))


def zero_map(E: Brane, F: Brane, charge: int = 0) -> Morphism:
    return Morphism(E, F, charge, mat_zero(F.rank, E.rank, E.table))


def d_hom_matrix(E: Brane, F: Brane, phi: Matrix, charge: int) -> Matrix:
    """``d_F ∘ φ - (-1)^s φ ∘ d_E``."""
    t = E.table
    left = mat_mul(F.d, phi, t, E.rank)
    right = mat_mul(phi, E.d, t, E.rank)
    sign = -1 if charge % 2 == 0 else 1
    return mat_add(left, mat_scale(right, sign))


def d_hom(phi: Morphism) -> Morphism:
    return Morphism(phi.source, phi.target, phi.charge + 1,
                    d_hom_matrix(phi.source, phi.target, phi.matrix, phi.charge))


def is_closed(phi: Morphism) -> bool:
    return d_hom(phi).is_zero()


def _compatible(E: Brane, F: Brane):
    if E.model != F.model:
        raise BraneError("branes live on different models")
    if E.space != F.space:
        raise BraneError(f"branes live on different spaces ({E.space.value} vs {F.space.value})")


@dataclass(frozen=True, eq=False)
class HomComplex:
    """The matrix-valued complex ``Hom(E, F)`` with differential ``d_{E,F}``."""

    source: Brane
    target: Brane

    def component_bidegree(self, i: int, j: int, charge: int) -> tuple[int, int]:
        """Bidegree of the coordinate mapping source summand ``j`` to target summand ``i``."""
        return map_degree(self.source.summands[j], self.target.summands[i], charge)

    def differential(self, phi: Morphism) -> Morphism:
        return d_hom(phi)

    def square_is_zero(self) -> bool:
        """``d^2 φ = d_F^2 φ - φ d_E^2``; checked on every matrix unit."""
        E, F, t = self.source, self.target, self.source.table
        one, z = t.one(), t.zero()
        for i in range(F.rank):
            for j in range(E.rank):
                unit = tuple(tuple(one if (a, b) == (i, j) else z for b in range(E.rank)) for a in range(F.rank))
                for s in (0, 1):
                    once = d_hom_matrix(E, F, unit, s)
                    if not mat_is_zero(d_hom_matrix(E, F, once, s + 1)):
                        return False
        return True


def hom_complex(E: Brane, F: Brane) -> HomComplex:
    _compatible(E, F)
    H = HomComplex(E, F)
    if not H.square_is_zero():
        raise BraneError("d_{E,F}^2 != 0; one of the branes fails the curvature identity")
    return H


# ---------------------------------------------------------- functors on branes
def twist_shift(E: Brane, k: int = 0, n: int = 0) -> Brane:
    return Brane(E.model, E.space, tuple(Summand(s.k + k, s.n + n) for s in E.summands), E.d)


def direct_sum(*branes: Brane) -> Brane:
    if not branes:
        raise BraneError("direct_sum needs at least one brane")
    first = branes[0]
    for b in branes[1:]:
        _compatible(first, b)
    summands = tuple(s for b in branes for s in b.summands)
    n = len(summands)
    t = first.table
    rows = [[t.zero()] * n for _ in range(n)]
    off = 0
    for b in branes:
        for i in range(b.rank):
            for j in range(b.rank):
                rows[off + i][off + j] = b.d[i][j]
        off += b.rank
    return Brane(first.model, first.space, summands, tuple(tuple(r) for r in rows))


def block_matrix(blocks: Sequence[Sequence[Matrix]], row_sizes: Sequence[int], col_sizes: Sequence[int],
                 table: VariableTable) -> Matrix:
    rows = []
    for bi, rs in enumerate(row_sizes):
        for i in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                for j in range(cs):
                    row.append(blk[i][j] if blk is not None else table.zero())
            rows.append(tuple(row))
    return tuple(rows)


def cone(phi: Morphism, check: bool = True) -> Brane:
    """Mapping cone ``E[1] ⊕ F`` with differential ``[[-d_E, 0], [φ, d_F]]``."""
    E, F = phi.source, phi.target
    _compatible(E, F)
    if check:
        if phi.charge != 0:
            raise BraneError(f"cone needs a charge-0 map, got charge {phi.charge}")
        if not phi.is_homogeneous():
            raise BraneError("cone needs a homogeneous map")
        if not is_closed(phi):
            raise BraneError("cone needs a closed map")
    t = E.table
    d = block_matrix([[mat_scale(E.d, -1), None], [phi.matrix, F.d]], [E.rank, F.rank], [E.rank, F.rank], t)
    summands = tuple(Summand(s.k, s.n + 1) for s in E.summands) + F.summands
    return Brane(E.model, E.space, summands, d)
