"""Exact linear algebra over Q on sparse column data.

A matrix is given as a list of columns, each column a ``{row_key: Fraction}``
mapping.  Row keys are arbitrary hashables.  Systems are first split into
blocks that share no rows; small blocks go through FLINT's dense routines,
large ones through a sparse Gauss-Jordan elimination.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import flint

Column = Mapping[Hashable, Fraction]

# entries (rows x columns) above which a block is eliminated sparsely
DENSE_LIMIT = 40_000


def _q(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _frac(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def row_index(columns: Sequence[Column], extra: Sequence[Column] = ()) -> dict:
    idx: dict = {}
    for col in list(columns) + list(extra):
        for k in col:
            if k not in idx:
                idx[k] = len(idx)
    return idx


def _dense(columns: Sequence[Column], rows: dict) -> flint.fmpq_mat:
    M = flint.fmpq_mat(len(rows), len(columns))
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                M[rows[k], j] = _q(v)
    return M


def _components(columns: Sequence[Column]) -> list[list[int]]:
    """Group column indices into blocks that share no rows."""
    parent = list(range(len(columns)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner: dict = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if not v:
                continue
            if k in owner:
                parent[find(j)] = find(owner[k])
            else:
                owner[k] = j
    groups: dict = {}
    for j in range(len(columns)):
        groups.setdefault(find(j), []).append(j)
    return list(groups.values())


class _Reduced:
    """Reduced row echelon data of one block: ``pivots[r] = (column, {column: coef})``.

    Each pivot row has a unit coefficient at its pivot column and is zero at
    every other pivot column.  ``rhs`` holds the reduced right-hand side
    (pivot rows first) and ``consistent`` whether the system is solvable.
    """

    def __init__(self, pivots, rhs, consistent):
        self.pivots = pivots
        self.rhs = rhs
        self.consistent = consistent


def _reduce_dense(columns: Sequence[Column], rhs: Column | None) -> _Reduced:
    n = len(columns)
    rows = row_index(columns, [rhs] if rhs else [])
    if not rows:
        return _Reduced([], [], True)
    M = _dense(list(columns) + ([rhs] if rhs is not None else []), rows)
    R, rk = M.rref()
    pivots, vals = [], []
    r = 0
    for j in range(M.ncols()):
        if r < rk and R[r, j] != 0:
            if j == n:
                return _Reduced(pivots, vals, False)
            pivots.append((j, {f: _frac(R[r, f]) for f in range(n) if R[r, f] != 0}))
            vals.append(_frac(R[r, n]) if rhs is not None else Fraction(0))
            r += 1
    return _Reduced(pivots, vals, True)


def _reduce_sparse(columns: Sequence[Column], rhs: Column | None) -> _Reduced:
    eqs: dict = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                eqs.setdefault(k, {})[j] = Fraction(v)
    b = {k: Fraction(v) for k, v in (rhs or {}).items() if v}
    occ: dict = {}
    for k, e in eqs.items():
        for j in e:
            occ.setdefault(j, set()).add(k)
    # shortest equation first, then its least shared column, to limit fill-in;
    # the heap holds stale lengths that are skipped on pop
    done = set()
    heap = [(len(e), n, k) for n, (k, e) in enumerate(eqs.items())]
    heapq.heapify(heap)
    tick = len(heap)
    order = []
    while heap:
        size, _, k = heapq.heappop(heap)
        if k in done or size != len(eqs[k]):
            continue
        done.add(k)
        e = eqs[k]
        if not e:
            continue
        p = min(e, key=lambda j: (len(occ[j]), j))
        c = e[p]
        if c != 1:
            for j in e:
                e[j] /= c
            if k in b:
                b[k] /= c
        for r in list(occ[p]):
            if r == k:
                continue
            er = eqs[r]
            f = er[p]
            for j, v in e.items():
                nv = er.get(j, 0) - f * v
                if nv:
                    if j not in er:
                        occ[j].add(r)
                    er[j] = nv
                elif j in er:
                    del er[j]
                    occ[j].discard(r)
            if r not in done:
                heapq.heappush(heap, (len(er), tick, r))
                tick += 1
            if k in b:
                nb = b.get(r, 0) - f * b[k]
                if nb:
                    b[r] = nb
                else:
                    b.pop(r, None)
        order.append((p, k))
    used = {k for _, k in order}
    consistent = not any(v for k, v in b.items() if k not in used)
    return _Reduced([(p, eqs[k]) for p, k in order], [b.get(k, Fraction(0)) for _, k in order], consistent)


def _reduce(columns: Sequence[Column], rhs: Column | None = None) -> _Reduced:
    rows = len(row_index(columns, [rhs] if rhs else []))
    if rows * (len(columns) + 1) <= DENSE_LIMIT:
        return _reduce_dense(columns, rhs)
    return _reduce_sparse(columns, rhs)


def _block_rank(columns: Sequence[Column]) -> int:
    if len(row_index(columns)) * len(columns) <= DENSE_LIMIT:
        return _dense(columns, row_index(columns)).rank()
    return len(_reduce_sparse(columns, None).pivots)


def rank(columns: Sequence[Column]) -> int:
    columns = [c for c in columns if any(c.values())]
    return sum(_block_rank([columns[j] for j in g]) for g in _components(columns))


def nullspace(columns: Sequence[Column]) -> list[list[Fraction]]:
    """Basis of ``{x : sum_j x_j col_j = 0}`` as dense coefficient lists."""
    n = len(columns)
    basis = []
    for g in _components(columns):
        red = _reduce([columns[j] for j in g])
        pivot_cols = {p for p, _ in red.pivots}
        for f in range(len(g)):
            if f in pivot_cols:
                continue
            v = [Fraction(0)] * n
            v[g[f]] = Fraction(1)
            for p, row in red.pivots:
                if f in row:
                    v[g[p]] = -row[f]
            basis.append(v)
    return basis


def solve(columns: Sequence[Column], rhs: Column) -> list[Fraction] | None:
    """One solution of ``sum_j x_j col_j = rhs`` (free variables zero), or None."""
    n = len(columns)
    rhs = {k: v for k, v in rhs.items() if v}
    # the rhs joins the block of whichever columns touch its rows
    x = [Fraction(0)] * n
    for g in _components(list(columns) + [rhs]):
        if n not in g:
            continue
        cols = [j for j in g if j < n]
        red = _reduce([columns[j] for j in cols], rhs)
        if not red.consistent:
            return None
        for (p, _), val in zip(red.pivots, red.rhs):
            x[cols[p]] = val
    return x


def intersection_dim(span_cols: Sequence[Column], allowed: set) -> int:
    """Dimension of ``span(span_cols) ∩ {vectors supported on allowed rows}``."""
    if not span_cols:
        return 0
    outside = [{k: v for k, v in c.items() if k not in allowed} for c in span_cols]
    kernel = nullspace(outside)
    images = []
    for vec in kernel:
        col: dict = {}
        for coef, c in zip(vec, span_cols):
            if coef:
                for k, v in c.items():
                    col[k] = col.get(k, 0) + coef * v
        images.append(col)
    return rank(images)
