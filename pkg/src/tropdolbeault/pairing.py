"""Poincare-duality pairings, Mayer-Vietoris sequences and subset Hodge tables.

For an open subset ``U`` the pairing ``H^{p,q}(U) x H_c^{1-p,1-q}(U) -> Q`` is
``(a, b) -> integral of a ^ b``.  ``U`` satisfies duality when all four
pairing matrices are square and invertible.

Residue data enters through ``S_U``, the sum of ``Pic^0`` ranks over the
positive-genus vertices inside ``U``.  When it is nonzero the compactly
supported ``(1,1)`` cohomology acquires ``dim S_U`` extra classes that
only exist at the level of the exact sequences, so duality fails by a
dimension count rather than by an exhibited null vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from . import linalg
from .dimension import INFINITE, Dim
from .dolbeault import COMPACT, FULL, CohomologyBasis, cohomology, hodge_numbers, integrate, wedge
from .graph import (MetricGraph, OpenSubset, Region, RegionError, ResidueModel, Scope, as_open_subset,
                    s_dimension)
from .sequences import BIDEGREES, COCHAIN, SEQUENCE, ConsistencyError, HodgeTable

PERFECT = "perfect"
DEGENERATE = "degenerate"
UNDETERMINED = "undetermined"


class InfiniteDimensionError(ValueError):
    """A requested cohomology basis is infinite-dimensional."""


def local_s_dimension(scope: Scope, model: ResidueModel) -> Dim:
    sc = as_open_subset(scope)
    return s_dimension(sc.graph, model, sc.vertices())


# ---------------------------------------------------------------------------
# pairing matrices
# ---------------------------------------------------------------------------


@dataclass
class PairingMatrix:
    left: Tuple[int, int]
    right: Tuple[int, int]
    matrix: List[List[Fraction]]
    rows: CohomologyBasis = field(repr=False)
    columns: CohomologyBasis = field(repr=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows.dimension, self.columns.dimension

    @property
    def rank(self) -> int:
        if not self.matrix or not self.matrix[0]:
            return 0
        return linalg.rank(linalg.SparseMatrix.from_dense(self.matrix))

    @property
    def is_perfect(self) -> bool:
        m, n = self.shape
        return m == n and self.rank == n

    def format(self) -> str:
        head = f"# H^{{{self.left[0]},{self.left[1]}}} x H_c^{{{self.right[0]},{self.right[1]}}} shape={self.shape[0]}x{self.shape[1]}"
        if not self.matrix or not self.matrix[0]:
            return head
        cells = [[str(x) for x in row] for row in self.matrix]
        w = max(len(c) for row in cells for c in row)
        return "\n".join([head] + ["[ " + " ".join(c.rjust(w) for c in row) + " ]" for row in cells])


def pairing_matrix(scope: Scope, p: int, q: int, model: Optional[ResidueModel] = None) -> PairingMatrix:
    """Exact matrix of ``H^{p,q}(U) x H_c^{1-p,1-q}(U)``.

    With a residue model whose ``S_U`` is infinite, pairings involving a
    ``(1,1)`` class are refused.
    """
    if model is not None and (p, q) in ((0, 0), (1, 1)) and local_s_dimension(scope, model) is INFINITE:
        raise InfiniteDimensionError("H^{1,1} is infinite-dimensional under this residue model")
    rows = cohomology(scope, p, q, FULL)
    cols = cohomology(scope, 1 - p, 1 - q, COMPACT)
    mat = [[integrate(wedge(a, b)) for b in cols.representatives] for a in rows.representatives]
    return PairingMatrix((p, q), (1 - p, 1 - q), mat, rows, cols)


@dataclass
class PDResult:
    verdict: str
    rank: int
    size: int
    reason: str
    matrices: Dict[Tuple[int, int], PairingMatrix] = field(repr=False, default_factory=dict)
    s_dim: Dim = 0

    def line(self, name: str = "X") -> str:
        return f"PD({name})={self.verdict} rank={self.rank}/{self.size}"


def pd_check(scope: Scope, model: ResidueModel = ResidueModel.TORSION) -> PDResult:
    """Decide duality for ``scope`` by exact ranks of all four pairing matrices."""
    sc = as_open_subset(scope)
    s = local_s_dimension(sc, model)
    mats = {pq: pairing_matrix(sc, *pq) for pq in BIDEGREES}
    rank = sum(m.rank for m in mats.values())
    size = sum(max(m.shape) for m in mats.values())
    if s is INFINITE:
        return PDResult(DEGENERATE, rank, size, "degenerate: infinite-dimensional H_c^{1,1}", mats, s)
    if s:
        m00 = mats[0, 0]
        return PDResult(DEGENERATE, rank, size + s,
                        f"degenerate: dimension obstruction ({m00.shape[0]}x{m00.shape[1] + s} at (0,0)x(1,1))",
                        mats, s)
    bad = [pq for pq, m in mats.items() if not m.is_perfect]
    if bad:
        return PDResult(DEGENERATE, rank, size, f"degenerate pairings at {bad}", mats, s)
    return PDResult(PERFECT, rank, size, "all pairings square and invertible", mats, s)


# ---------------------------------------------------------------------------
# Mayer-Vietoris
# ---------------------------------------------------------------------------


class CoverError(RegionError):
    pass


def _cells(scope: Scope) -> OpenSubset:
    return as_open_subset(scope)


@dataclass
class Cover:
    """``U = U1 u U2`` with ``U12 = U1 n U2``, all on one subdivision."""

    U: OpenSubset
    U1: OpenSubset
    U2: OpenSubset
    U12: OpenSubset = field(init=False)

    def __post_init__(self):
        parts = [_cells(x) for x in (self.U, self.U1, self.U2)]
        pts = set()
        for x in parts:
            pts |= set(x.subdivision.points)
        u, u1, u2 = (x.refine(pts) for x in parts)
        if not u.same_cells(u1.union(u2)):
            raise CoverError("U is not the union of U1 and U2")
        self.U, self.U1, self.U2 = u, u1, u2
        self.U12 = u1.intersection(u2)

    @classmethod
    def of(cls, U1: Scope, U2: Scope) -> "Cover":
        a, b = _cells(U1), _cells(U2)
        return cls(a.union(b), a, b)

    def members(self) -> Dict[str, OpenSubset]:
        return {"U": self.U, "U1": self.U1, "U2": self.U2, "U12": self.U12}


class _SetComplex:
    """A two-term cochain complex on cells whose restriction maps are coordinate projections.

    ``p = 1``: segments -> nodes (the (1,*) complex itself).  ``p = 0``:
    nodes and segment midpoints -> half-segments at member nodes, a
    barycentric model of the open set that restricts cell by cell.
    """

    def __init__(self, sc: OpenSubset, p: int):
        self.sc = sc
        if p == 1:
            self.cells0 = list(sc.ordered_segments)
            self.cells1 = list(sc.ordered_nodes)
            w0 = {c: i for i, c in enumerate(self.cells0)}
            w1 = {c: i for i, c in enumerate(self.cells1)}
            m = linalg.SparseMatrix(len(self.cells1), len(self.cells0))
            for s in self.cells0:
                if s.tail in w1:
                    m.add(w1[s.tail], w0[s], 1)
                if s.head in w1:
                    m.add(w1[s.head], w0[s], -1)
        else:
            self.cells0 = list(sc.ordered_nodes) + list(sc.ordered_segments)
            self.cells1 = [(s, side) for s in sc.ordered_segments for side in ("tail", "head")
                           if (s.tail if side == "tail" else s.head) in sc.nodes]
            w0 = {c: i for i, c in enumerate(self.cells0)}
            m = linalg.SparseMatrix(len(self.cells1), len(self.cells0))
            for i, (s, side) in enumerate(self.cells1):
                m.add(i, w0[s], 1)
                m.add(i, w0[s.tail if side == "tail" else s.head], -1)
        self.matrix = m
        self.index0 = {c: i for i, c in enumerate(self.cells0)}
        self.index1 = {c: i for i, c in enumerate(self.cells1)}
        self.kernel = linalg.nullspace(m)
        self.complement = linalg.column_complement(m)
        self._units = linalg.SparseMatrix.from_columns(m.nrows, [{j: Fraction(1)} for j in self.complement])
        self._kmat = (linalg.SparseMatrix.from_dense([list(c) for c in zip(*self.kernel)])
                      if self.kernel else None)

    @property
    def h0(self) -> int:
        return len(self.kernel)

    @property
    def h1(self) -> int:
        return len(self.complement)

    def coords0(self, vec) -> List[Fraction]:
        if self._kmat is None:
            return []
        x = linalg.solve(self._kmat, vec)
        if x is None:  # pragma: no cover - restriction preserves cocycles
            raise ConsistencyError("restricted class is not a cocycle")
        return x

    def coords1(self, vec) -> List[Fraction]:
        x = linalg.solve(self.matrix.hstack(self._units), vec)
        return x[self.matrix.ncols:]

    def rep1(self, k: int) -> List[Fraction]:
        v = [Fraction(0)] * len(self.cells1)
        v[self.complement[k]] = Fraction(1)
        return v

    def restrict(self, vec, target: "_SetComplex", degree: int) -> List[Fraction]:
        src = self.index0 if degree == 0 else self.index1
        cells = target.cells0 if degree == 0 else target.cells1
        return [vec[src[c]] for c in cells]

    def extend_by_zero(self, vec, source: "_SetComplex", degree: int) -> List[Fraction]:
        cells = self.cells0 if degree == 0 else self.cells1
        src = source.index0 if degree == 0 else source.index1
        return [vec[src[c]] if c in src else Fraction(0) for c in cells]


@dataclass
class MVReport:
    p: int
    dims: Tuple[int, ...]
    ranks: Tuple[int, ...]  # ranks of the five maps
    exact_at: Tuple[bool, ...]

    @property
    def exact(self) -> bool:
        return all(self.exact_at)

    @property
    def alternating_sum(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.dims))

    def line(self) -> str:
        return (f"MV(p={self.p}) dims=({','.join(map(str, self.dims))}) "
                f"exact={'yes' if self.exact else 'no'}")


def _rank(cols: List[List[Fraction]], nrows: int) -> int:
    if not cols or not nrows:
        return 0
    return linalg.rank(linalg.SparseMatrix.from_dense(list(map(list, zip(*cols)))))


def _compose_zero(first: List[List[Fraction]], second: List[List[Fraction]], mid: int, out: int) -> bool:
    # columns of `first` are vectors in the middle space; apply `second` (given by columns)
    if not first or not mid or not out:
        return True
    g = linalg.SparseMatrix.from_dense(list(map(list, zip(*second))))
    return all(not any(g.matvec(v)) for v in first)


def mv_audit(cover: Cover, p: int) -> MVReport:
    """Six-term Mayer-Vietoris sequence for ``H^{p,*}`` with explicit maps.

    Restriction maps act on common-subdivision cochains; the connecting map
    is the usual snake: extend a cocycle on ``U12`` by zero to ``U1``, apply
    the differential and glue.
    """
    if p not in (0, 1):
        raise ValueError("p must be 0 or 1")
    cU, c1, c2, c12 = (_SetComplex(x, p) for x in (cover.U, cover.U1, cover.U2, cover.U12))

    # H0(U) -> H0(U1) + H0(U2)
    a0 = [c1.coords0(cU.restrict(z, c1, 0)) + c2.coords0(cU.restrict(z, c2, 0)) for z in cU.kernel]
    # H0(U1) + H0(U2) -> H0(U12)
    b0 = [c12.coords0(c1.restrict(z, c12, 0)) for z in c1.kernel]
    b0 += [[-x for x in c12.coords0(c2.restrict(z, c12, 0))] for z in c2.kernel]
    # connecting map H0(U12) -> H1(U)
    delta = []
    for z in c12.kernel:
        lift = c1.extend_by_zero(z, c12, 0)
        dz = c1.matrix.matvec(lift)
        delta.append(cU.coords1(cU.extend_by_zero(dz, c1, 1)))
    # H1(U) -> H1(U1) + H1(U2)
    a1 = []
    for k in range(cU.h1):
        v = cU.rep1(k)
        a1.append(c1.coords1(cU.restrict(v, c1, 1)) + c2.coords1(cU.restrict(v, c2, 1)))
    # H1(U1) + H1(U2) -> H1(U12)
    b1 = [c12.coords1(c1.restrict(c1.rep1(k), c12, 1)) for k in range(c1.h1)]
    b1 += [[-x for x in c12.coords1(c2.restrict(c2.rep1(k), c12, 1))] for k in range(c2.h1)]

    dims = (cU.h0, c1.h0 + c2.h0, c12.h0, cU.h1, c1.h1 + c2.h1, c12.h1)
    maps = [a0, b0, delta, a1, b1]
    ranks = tuple(_rank(m, dims[i + 1]) for i, m in enumerate(maps))
    exact = []
    for i, d in enumerate(dims):
        r_in = ranks[i - 1] if i > 0 else 0
        r_out = ranks[i] if i < len(maps) else 0
        ok = r_in + r_out == d
        if 0 < i < len(maps):
            ok &= _compose_zero(maps[i - 1], maps[i], d, dims[i + 1])
        exact.append(ok)
    return MVReport(p, dims, ranks, tuple(exact))


@dataclass
class ThreeOfFour:
    known: Dict[str, str]
    unknown: str
    predicted: str
    actual: str

    @property
    def confirmed(self) -> bool:
        return self.predicted == UNDETERMINED or self.predicted == self.actual

    def line(self) -> str:
        known = " ".join(f"{k}={v}" for k, v in self.known.items())
        return f"{known} => {self.unknown} predicted={self.predicted} actual={self.actual} confirmed={'yes' if self.confirmed else 'no'}"


def predict_fourth(known: Mapping[str, str]) -> str:
    """Three perfect sets force the fourth; exactly one degenerate set forces another."""
    if len(known) < 3:
        raise ValueError("need verdicts for three of U, U1, U2, U12")
    bad = sum(v == DEGENERATE for v in known.values())
    if bad == 0:
        return PERFECT
    if bad == 1:
        return DEGENERATE
    return UNDETERMINED


def three_of_four(cover: Cover, model: ResidueModel = ResidueModel.TORSION, unknown: str = "U",
                  known: Optional[Mapping[str, str]] = None) -> ThreeOfFour:
    members = cover.members()
    if unknown not in members:
        raise ValueError(f"unknown must be one of {sorted(members)}")
    if known is None:
        known = {k: pd_check(v, model).verdict for k, v in members.items() if k != unknown}
    known = dict(known)
    predicted = predict_fourth(known)
    actual = pd_check(members[unknown], model).verdict
    return ThreeOfFour(known, unknown, predicted, actual)


# ---------------------------------------------------------------------------
# strictly simple subsets
# ---------------------------------------------------------------------------


@dataclass
class SubsetHodge:
    full: HodgeTable
    compact: HodgeTable
    k: int
    closed_form_applies: bool

    def lines(self) -> List[str]:
        out = [f"k={self.k}", f"scope={'closed-form' if self.closed_form_applies else 'residue-corrected'}"]
        out += ["full " + x for x in self.full.lines()]
        out += ["compact " + x for x in self.compact.lines()]
        return out


def subset_hodge(region: Region, g: Optional[MetricGraph] = None, model: ResidueModel = ResidueModel.TORSION) -> SubsetHodge:
    """Hodge numbers of a strictly simple region, full and compactly supported.

    When the closed form applies (``S_X = 0`` or no positive-genus vertex in
    the region) they must be ``(1, 0, k-1, 0)`` and ``(0, k-1, 0, 1)``.
    """
    if not region.strictly_simple:
        raise RegionError("region is not strictly simple")
    g = g or region.graph
    k = region.boundary_count
    full = hodge_numbers(region, FULL)
    comp = hodge_numbers(region, COMPACT)
    s_local = local_s_dimension(region, model)
    in_scope = s_dimension(g, model) == 0 or s_local == 0
    prov = {pq: COCHAIN for pq in BIDEGREES}
    ft = HodgeTable(dict(zip(BIDEGREES, full)), dict(prov), "full")
    ct = HodgeTable(dict(zip(BIDEGREES, comp)), dict(prov), "compact")
    if in_scope:
        if full != (1, 0, k - 1, 0) or comp != (0, k - 1, 0, 1):
            raise ConsistencyError(f"k={k}: engine gives {full} and {comp}")
    else:
        ct.entries[1, 1] = comp[3] + s_local
        ct.provenance[1, 1] = SEQUENCE
        ct.notes.append("residue-corrected: residue classes added to h_c[1][1]")
    return SubsetHodge(ft, ct, k, in_scope)
