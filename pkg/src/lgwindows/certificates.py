"""Exact witnesses of homotopy equivalence and of local contractibility.

Search routines truncate; verification never does.  Every certificate
re-checks its identities as polynomial matrix equations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .brane import Brane, Morphism, cone, d_hom, identity, is_closed, mat_to_strings
from .homspace import BoundError, Chart, MorphismSpace, morphism_vector, random_closed_map, solve_in
from .model import Space, side_indices


class CertificateError(RuntimeError):
    """A certificate failed exact verification."""


def _block(phi: Morphism, rows: slice, cols: slice):
    return tuple(tuple(row[cols]) for row in phi.matrix[rows])


@dataclass
class HomotopyCertificate:
    """``F: A -> B`` and ``G: B -> A`` of charge 0 with ``G F - id = d(H)`` and ``F G - id = d(Hhat)``."""

    F: Morphism
    G: Morphism
    H: Morphism
    Hhat: Morphism

    @property
    def source(self) -> Brane:
        return self.F.source

    @property
    def target(self) -> Brane:
        return self.F.target

    def failures(self) -> list[str]:
        A, B = self.F.source, self.F.target
        out = []
        if self.F.charge or self.G.charge:
            out.append("F and G must have charge 0")
        if self.H.charge != -1 or self.Hhat.charge != -1:
            out.append("homotopies must have charge -1")
        if self.G.source is not B and not self.G.source.same_data(B) or not self.G.target.same_data(A):
            out.append("G does not go from target to source")
        if out:
            return out
        if not is_closed(self.F):
            out.append("F is not closed")
        if not is_closed(self.G):
            out.append("G is not closed")
        if not (self.G @ self.F - identity(A) - d_hom(self.H)).is_zero():
            out.append("G F - id != d(H)")
        if not (self.F @ self.G - identity(B) - d_hom(self.Hhat)).is_zero():
            out.append("F G - id != d(Hhat)")
        return out

    def verify(self) -> bool:
        return not self.failures()

    def require(self) -> "HomotopyCertificate":
        bad = self.failures()
        if bad:
            raise CertificateError("; ".join(bad))
        return self

    def inverse(self) -> "HomotopyCertificate":
        return HomotopyCertificate(self.G, self.F, self.Hhat, self.H)

    def then(self, other: "HomotopyCertificate") -> "HomotopyCertificate":
        """Compose ``A -> B`` (self) with ``B -> C`` (other)."""
        F = other.F @ self.F
        G = self.G @ other.G
        H = self.H + self.G @ other.H @ self.F
        Hhat = other.Hhat + other.F @ self.Hhat @ other.G
        return HomotopyCertificate(F, G, H, Hhat)

    def to_dict(self) -> dict:
        return {
            "kind": "homotopy_equivalence",
            "F": mat_to_strings(self.F.matrix),
            "G": mat_to_strings(self.G.matrix),
            "H": mat_to_strings(self.H.matrix),
            "Hhat": mat_to_strings(self.Hhat.matrix),
            "verified": self.verify(),
        }


def identity_certificate(E: Brane) -> HomotopyCertificate:
    from .brane import zero_map

    return HomotopyCertificate(identity(E), identity(E), zero_map(E, E, -1), zero_map(E, E, -1))


@dataclass
class ChartContraction:
    """Charge -1 endomorphisms ``h_i`` with ``d(h_i) = id`` over each chart ``{v_i != 0}``.

    The charts of the side variables cover the phase, so the brane is zero
    there (its endomorphism sheaf is locally contractible).
    """

    brane: Brane
    side: Space
    homotopies: dict[int, Morphism] = field(default_factory=dict)

    def failures(self) -> list[str]:
        out = []
        need = set(side_indices(self.brane.model, self.side))
        if set(self.homotopies) != need:
            out.append(f"charts {sorted(self.homotopies)} do not cover the {self.side.value} phase")
        for i, h in self.homotopies.items():
            if h.charge != -1 or not (d_hom(h) - identity(self.brane)).is_zero():
                out.append(f"d(h) != id on chart {self.brane.table.names[i]}")
            if any(e < 0 for p in (x for row in h.matrix for x in row) for m in p.terms
                   for a, e in enumerate(m) if a != i):
                out.append(f"homotopy on chart {self.brane.table.names[i]} has other poles")
        return out

    def verify(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        names = self.brane.table.names
        return {
            "kind": "chart_contraction",
            "side": self.side.value,
            "homotopies": {names[i]: mat_to_strings(h.matrix) for i, h in sorted(self.homotopies.items())},
            "verified": self.verify(),
        }


@dataclass
class LocalEquivalence:
    """A closed charge-0 map whose cone is contractible on every chart of ``side``."""

    map: Morphism
    contraction: ChartContraction

    def failures(self) -> list[str]:
        out = []
        if self.map.charge or not is_closed(self.map):
            out.append("map is not closed of charge 0")
        c = self.contraction.brane
        expect = cone(self.map, check=False)
        if not c.same_data(expect):
            out.append("contraction is not of the cone of the map")
        return out + self.contraction.failures()

    def verify(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        return {
            "kind": "local_equivalence",
            "source": self.map.source.to_dict(),
            "target": self.map.target.to_dict(),
            "map": mat_to_strings(self.map.matrix),
            "cone_contraction": self.contraction.to_dict(),
            "verified": self.verify(),
        }


# ----------------------------------------------------------------- search
def find_contraction(E: Brane, locus, bound: int) -> Morphism | None:
    """A charge -1 endomorphism ``h`` with ``d(h) = id`` on ``locus``, or None."""
    if not E.rank:
        from .brane import zero_map

        return zero_map(E, E, -1)
    # low-degree homotopies are the common case, so grow the bound
    target = morphism_vector(identity(E))
    last = -1
    for b in range(bound + 1):
        space = MorphismSpace(E, E, -1, locus, b)
        if len(space) == last:
            continue
        last = len(space)
        h = solve_in(space, space.d_columns(), target)
        if h is not None:
            return h
    return None


def chart_contraction(E: Brane, side: Space, bound: int) -> ChartContraction:
    out = ChartContraction(E, side)
    for i in side_indices(E.model, side):
        h = find_contraction(E, Chart(i), bound)
        if h is None:
            raise BoundError(f"no contracting homotopy on chart {E.table.names[i]} at bound {bound}; raise bound")
        out.homotopies[i] = h
    return out


def local_equivalence(phi: Morphism, side: Space, bound: int) -> LocalEquivalence:
    C = cone(phi)
    return LocalEquivalence(phi, chart_contraction(C, side, bound))


def certificate_from_map(F: Morphism, bound: int, locus=Space.STACK) -> HomotopyCertificate | None:
    """Complete a closed map to a homotopy equivalence by contracting its cone.

    With the cone differential ``[[-d_A, 0], [F, d_B]]`` a contraction
    ``h = [[p, q], [r, s]]`` yields ``G = q``, ``H = p`` and ``Hhat = -s``.
    """
    A, B = F.source, F.target
    C = cone(F)
    h = find_contraction(C, locus, bound)
    if h is None:
        return None
    a = A.rank
    p = _block(h, slice(0, a), slice(0, a))
    q = _block(h, slice(0, a), slice(a, None))
    s = _block(h, slice(a, None), slice(a, None))
    cert = HomotopyCertificate(
        F,
        Morphism(B, A, 0, q),
        Morphism(A, A, -1, p),
        Morphism(B, B, -1, s).scale(-1),
    )
    return cert.require()


def find_equivalence(A: Brane, B: Brane, bound: int, seed: int = 0, attempts: int = 3,
                     F: Morphism | None = None, locus=Space.STACK) -> HomotopyCertificate:
    """Search for a homotopy equivalence ``A -> B``.

    Candidates are seeded random closed maps, drawn first from maps of
    degree 0, then degree at most 1, and so on up to ``bound``; entries
    between equal summands are constants.  Each candidate's cone is then
    contracted by an exact linear solve at the full bound.
    """
    if F is not None:
        cert = certificate_from_map(F, bound, locus)
        if cert is None:
            raise BoundError(f"cone of the given map is not contractible at bound {bound}; raise bound")
        return cert
    from .brane import zero_map

    rng = random.Random(seed)

    def const_on_equal(i, j, m):
        return not any(m) if A.summands[j] == B.summands[i] else True

    seen = set()
    for map_bound in range(bound + 1):
        space = MorphismSpace(A, B, 0, locus, map_bound, monomial_filter=const_on_equal)
        size = len(space)
        if size in seen:
            continue
        seen.add(size)
        if not size:
            cert = certificate_from_map(zero_map(A, B), bound, locus)
            if cert is not None:
                return cert
            continue
        for _ in range(attempts):
            cand = random_closed_map(space, rng)
            if cand is None:
                break
            cert = certificate_from_map(cand, bound, locus)
            if cert is not None:
                return cert
    raise BoundError(f"no homotopy equivalence found at bound {bound}; raise bound")
