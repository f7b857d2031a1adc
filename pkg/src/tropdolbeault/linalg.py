"""Exact sparse linear algebra over the rationals.

Matrices are stored row-wise as ``{column: Fraction}`` dictionaries, which
suits the incidence and Laplacian matrices produced by metric graphs (two
to a handful of nonzeros per row).  Every routine eliminates columns in
increasing order, so pivots, kernels and complements are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Row = Dict[int, Fraction]


class SparseMatrix:
    """A rows x cols rational matrix with dictionary rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[List[Row]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [dict() for _ in range(nrows)]
        assert len(rows) == nrows
        self.rows = rows

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        rows = []
        for r in dense:
            rows.append({j: Fraction(x) for j, x in enumerate(r) if x != 0})
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Dict[int, Fraction]]) -> "SparseMatrix":
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x:
                    m.rows[i][j] = Fraction(x)
        return m

    def add(self, i: int, j: int, x) -> None:
        v = self.rows[i].get(j, 0) + x
        if v:
            self.rows[i][j] = Fraction(v)
        else:
            self.rows[i].pop(j, None)

    def copy(self) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def transpose(self) -> "SparseMatrix":
        t = SparseMatrix(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                t.rows[j][i] = x
        return t

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                out[i][j] = x
        return out

    def column(self, j: int) -> Dict[int, Fraction]:
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def select_rows(self, keep: Sequence[int]) -> "SparseMatrix":
        return SparseMatrix(len(keep), self.ncols, [dict(self.rows[i]) for i in keep])

    def select_columns(self, keep: Sequence[int]) -> "SparseMatrix":
        where = {j: k for k, j in enumerate(keep)}
        rows = [{where[j]: x for j, x in r.items() if j in where} for r in self.rows]
        return SparseMatrix(self.nrows, len(keep), rows)

    def hstack(self, other: "SparseMatrix") -> "SparseMatrix":
        assert self.nrows == other.nrows
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            r.update({self.ncols + j: x for j, x in b.items()})
            rows.append(r)
        return SparseMatrix(self.nrows, self.ncols + other.ncols, rows)

    def matvec(self, v: Sequence) -> List[Fraction]:
        return [sum((x * v[j] for j, x in r.items()), Fraction(0)) for r in self.rows]

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        assert self.ncols == other.nrows
        out = SparseMatrix(self.nrows, other.ncols)
        for i, r in enumerate(self.rows):
            acc: Row = {}
            for k, x in r.items():
                for j, y in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + x * y
            out.rows[i] = {j: Fraction(v) for j, v in acc.items() if v}
        return out

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


def identity(n: int) -> SparseMatrix:
    return SparseMatrix(n, n, [{i: Fraction(1)} for i in range(n)])


def _axpy(target: Row, scale: Fraction, source: Row) -> None:
    # target += scale * source, dropping cancellations
    for j, x in source.items():
        v = target.get(j, 0) + scale * x
        if v:
            target[j] = v
        else:
            target.pop(j, None)


def rref(m: SparseMatrix) -> Tuple[List[Row], List[int]]:
    """Reduced row echelon form.

    Returns the nonzero reduced rows (pivot entry normalised to 1) together
    with their pivot columns, in increasing pivot order.  Pivot columns are
    chosen left to right; among candidate rows the sparsest is used, which
    does not change the result (the RREF is unique) but limits fill-in.
    """
    # bucket rows by leading column
    active: Dict[int, List[Row]] = {}
    for r in m.rows:
        if r:
            active.setdefault(min(r), []).append(dict(r))
    pivots: List[int] = []
    reduced: List[Row] = []
    while active:
        col = min(active)
        bucket = active.pop(col)
        bucket.sort(key=len)
        prow = bucket[0]
        inv = 1 / prow[col]
        prow = {j: x * inv for j, x in prow.items()}
        for r in bucket[1:]:
            _axpy(r, -r[col], prow)
            if r:
                active.setdefault(min(r), []).append(r)
        pivots.append(col)
        reduced.append(prow)
    # back substitution, last pivot first
    for k in range(len(reduced) - 1, -1, -1):
        pk = pivots[k]
        prow = reduced[k]
        for i in range(k):
            x = reduced[i].get(pk)
            if x:
                _axpy(reduced[i], -x, prow)
    return reduced, pivots


def rank(m: SparseMatrix) -> int:
    # forward elimination only
    active: Dict[int, List[Row]] = {}
    for r in m.rows:
        if r:
            active.setdefault(min(r), []).append(dict(r))
    count = 0
    while active:
        col = min(active)
        bucket = active.pop(col)
        bucket.sort(key=len)
        prow = bucket[0]
        for r in bucket[1:]:
            _axpy(r, -r[col] / prow[col], prow)
            if r:
                active.setdefault(min(r), []).append(r)
        count += 1
    return count


def nullspace(m: SparseMatrix) -> List[List[Fraction]]:
    """Basis of the right kernel, one vector per free column (ascending)."""
    reduced, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.ncols
        v[free] = Fraction(1)
        for prow, p in zip(reduced, pivots):
            x = prow.get(free)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def solve(m: SparseMatrix, b: Sequence) -> Optional[List[Fraction]]:
    """A solution of ``m x = b`` (free variables set to zero), or None."""
    aug = SparseMatrix(m.nrows, m.ncols + 1, [dict(r) for r in m.rows])
    for i, x in enumerate(b):
        if x:
            aug.rows[i][m.ncols] = Fraction(x)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for prow, p in zip(reduced, pivots):
        x[p] = prow.get(m.ncols, Fraction(0))
    return x


def column_complement(m: SparseMatrix) -> List[int]:
    """Indices ``J`` of unit vectors completing the column space to the whole space.

    The unit vectors ``e_j, j in J`` project to a basis of ``coker m``.
    Scanning ``[m | I]`` left to right makes the choice lexicographic.
    """
    reduced, pivots = rref(m.hstack(identity(m.nrows)))
    return [p - m.ncols for p in pivots if p >= m.ncols]


def is_independent(vectors: Iterable[Sequence]) -> bool:
    vectors = list(vectors)
    if not vectors:
        return True
    return rank(SparseMatrix.from_dense(vectors)) == len(vectors)


def det(dense: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact elimination (small square matrices)."""
    a = [[Fraction(x) for x in r] for r in dense]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return out
