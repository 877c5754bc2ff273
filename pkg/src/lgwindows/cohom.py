"""Line-bundle cohomology and truncated homology of Hom complexes."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from . import linalg
from .brane import Brane, _compatible, map_degree
from .homspace import ConcentrationError, MorphismSpace, _fiber_monomials, sections, sub_basis
from .model import GaugedModel, Space, decompose, mirror
from .poly import bidegree, graded_basis

PROJVX = "projvx"


@dataclass
class CohomologyTable:
    """Dimensions indexed by ``(p, r)``; ``p`` is the cohomological degree and
    ``r`` the R-degree (or R-charge for Hom homology)."""

    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    bound: int = 0
    stabilized: bool = True

    def add(self, p: int, r: int, dim: int = 1):
        if dim:
            self.entries[(p, r)] = self.entries.get((p, r), 0) + dim

    def dim(self, p: int | None = None, r: int | None = None) -> int:
        return sum(v for (pp, rr), v in self.entries.items()
                   if (p is None or pp == p) and (r is None or rr == r))

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def restrict(self, rs: Iterable[int]) -> "CohomologyTable":
        keep = set(rs)
        return CohomologyTable({k: v for k, v in self.entries.items() if k[1] in keep}, self.bound, self.stabilized)

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def to_dict(self) -> dict:
        return {
            "entries": [{"p": p, "r": r, "dim": d} for (p, r), d in sorted(self.entries.items()) if d],
            "bound": self.bound,
            "stabilized": self.stabilized,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CohomologyTable":
        return cls({(e["p"], e["r"]): e["dim"] for e in data["entries"]}, data["bound"], data["stabilized"])

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, CohomologyTable):
            return NotImplemented
        return self.nonzero() == other.nonzero()


# ------------------------------------------------------------ line bundles
def _projvx(model: GaugedModel, base: tuple[int, ...], k: int, bound: int | None, out: CohomologyTable,
            r_shift: int = 0):
    """Cohomology of ``O(k)`` on the weighted projective space of ``base`` (positive weights).

    ``bound`` caps the degree of H^0 monomials; None means exact.
    """
    table = model.table
    d = sum(table.gauge[i] for i in base)
    top = len(base) - 1
    if len(base) == 1:
        (i,) = base
        w = table.gauge[i]
        if k % w == 0:
            out.add(0, r_shift + (k // w) * table.r[i])
        return
    if k >= 0:
        for m in _base_monomials(table, base, k, k if bound is None else min(k, bound)):
            out.add(0, r_shift + bidegree(m, table)[1])
    if k <= -d:
        rsum = sum(table.r[i] for i in base)
        for m in _base_monomials(table, base, -k - d, -k - d):
            out.add(top, r_shift - rsum - bidegree(m, table)[1])


def _base_monomials(table, base, g, bound):
    return [m for m, gm, _r, _deg in _fiber_monomials(table, base, bound) if gm == g]


def line_cohomology(model: GaugedModel, where, k: int, bound: int,
                    r_window: Iterable[int] | None = None) -> CohomologyTable:
    """Cohomology of ``O(k)`` on ``where`` in (Space or ``"projvx"``), truncated at ``bound``.

    Pieces on the projective base alone are finite and computed exactly.  On
    the phases the bound caps the total degree of H^0 representatives, as on
    the stack; top-degree classes are only cut in the fibre directions.
    """
    out = CohomologyTable(bound=bound)
    if where == PROJVX:
        base = decompose(model).x_indices
        if not base:
            raise ConcentrationError("V_x is empty")
        _projvx(model, base, k, None, out)
    else:
        space = Space.parse(where)
        if space is Space.STACK:
            table = model.table
            for m, _g, r, _deg in _fiber_monomials(table, tuple(range(table.arity)), bound):
                if _g == k:
                    out.add(0, r)
        elif space is Space.MINUS:
            return line_cohomology(mirror(model), Space.PLUS, -k, bound, r_window)
        else:
            dec = decompose(model)
            if not dec.x_indices:
                raise ConcentrationError("the plus phase is empty")
            fiber = tuple(sorted(dec.y_indices + dec.z_indices))
            for m, gm, rm, deg in _fiber_monomials(model.table, fiber, bound):
                _projvx(model, dec.x_indices, k - gm, bound - deg, out, rm)
    if r_window is not None:
        out = out.restrict(r_window)
    return out


def brute_force_projvx(model: GaugedModel, k: int, box: int | None = None) -> CohomologyTable:
    """Reference oracle on the weighted projective base.

    Enumerates exponent vectors coordinate box by coordinate box and keeps
    those of gauge degree ``k`` that are all ``>= 0`` (H^0) or all ``<= -1``
    (top cohomology, the Cech class ``x^a`` on the full intersection).  The
    default box is just large enough to contain every solution.
    """
    from itertools import product

    table = model.table
    base = decompose(model).x_indices
    top = len(base) - 1
    w = [table.gauge[i] for i in base]
    box = abs(k) + 1 if box is None else box
    out = CohomologyTable(bound=box)
    for sign, p in ((1, 0), (-1, top)):
        ranges = [range(0, box + 1) if sign > 0 else range(-1, -box - 2, -1) for _ in base]
        for e in product(*ranges):
            if sum(a * wi for a, wi in zip(e, w)) == k:
                out.add(p, sum(a * table.r[i] for a, i in zip(e, base)))
    return out


# ------------------------------------------------------------ Hom homology
def check_concentration(E: Brane, F: Brane):
    """Raise unless every entry of Hom(E, F) has cohomology only in degree 0."""
    if E.space is Space.STACK:
        return
    d = decompose(E.model).d
    for i, a in enumerate(E.summands):
        for j, b in enumerate(F.summands):
            diff = b.k - a.k
            bad = diff <= -d if E.space is Space.PLUS else diff >= d
            if bad:
                raise ConcentrationError(
                    f"Hom(O({a.k})[{a.n}] (source #{i}), O({b.k})[{b.n}] (target #{j})) has higher "
                    f"cohomology on the {E.space.value} phase: twist difference {diff}, d = {d}")


def _charges_present(E: Brane, F: Brane, bound: int) -> set[int]:
    """Charges with a nonzero truncated graded piece."""
    model = E.model
    table = model.table
    found = set()
    for a in E.summands:
        for b in F.summands:
            g, _ = map_degree(a, b, 0)
            rs = set()
            if E.space is Space.STACK:
                rs = {r for _m, gm, r, _d in _fiber_monomials(table, tuple(range(table.arity)), bound) if gm == g}
            else:
                tab = line_cohomology(model, E.space, g, bound)
                rs = {r for (_p, r) in tab.entries}
            for r in rs:
                found.add(r - b.n + a.n)
    return found


def _homology_at(E: Brane, F: Brane, bound: int, charges: Iterable[int]) -> dict[int, int]:
    spaces = {}

    def space(s):
        if s not in spaces:
            spaces[s] = MorphismSpace(E, F, s, E.space, bound)
        return spaces[s]

    out = {}
    for s in charges:
        C = space(s)
        if not len(C):
            out[s] = 0
            continue
        z = len(C) - linalg.rank(C.d_columns())
        prev = space(s - 1)
        allowed = set(C.basis)
        b = linalg.intersection_dim(prev.d_columns(), allowed)
        out[s] = z - b
    return out


def hom_homology(E: Brane, F: Brane, bound: int, charges: Iterable[int] | None = None) -> CohomologyTable:
    """Homology of Hom(E, F) per R-charge, with the three-bound stabilization test.

    Entries are reported as ``(0, charge)``.  On a phase every entry must
    have its cohomology concentrated in degree 0, otherwise
    :class:`ConcentrationError` names the offending pair.
    """
    _compatible(E, F)
    check_concentration(E, F)
    if charges is None:
        charges = sorted(_charges_present(E, F, bound))
    charges = list(charges)
    results = [_homology_at(E, F, b, charges) for b in (bound, bound + 1, bound + 2)]
    table = CohomologyTable(bound=bound, stabilized=results[0] == results[1] == results[2])
    for s, dim in results[0].items():
        table.add(0, s, dim)
    return table
