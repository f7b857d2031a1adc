"""Real (p,q)-superforms on subdivided graphs and their d''-cohomology.

A form of bidegree ``(p, q)`` on an open subset lives on the cells of a
subdivision:

* ``(0, 0)``: a continuous PL function, stored by node values.  On an open
  subset with boundary, each boundary end of a segment carries its own
  limiting value, since the function need not extend to the cut point.
* ``(1, 0)`` and ``(0, 1)``: one coefficient per segment, a polynomial in
  the arclength ``x`` measured from the segment's tail (orientation follows
  the edge).  Cohomology representatives are piecewise constant.
* ``(1, 1)``: atoms at nodes plus a polynomial density per segment.

With that layout ``d''`` of a ``(1, 0)``-form has atoms equal to the sum of
outgoing coefficients at each node and density ``a'(x)``, so
``d'' d' f = ddc f`` for PL functions and Stokes' formula holds exactly.

Compact supports on a region follow a finite cell model: after splitting
every boundary segment (in two, or in three when both of its ends are on the
boundary), compactly supported cochains vanish on boundary segments and
functions additionally vanish at the inner node of such a segment.  Atoms
are allowed at every node of the region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .graph import BoundaryEnd, Node, OpenSubset, Scope, Segment, SubdivisionPoint, as_open_subset, node_name
from .potential import DiscreteMeasure, PLFunction

Poly = Tuple[Fraction, ...]

FULL = "full"
COMPACT = "compact"


class DegreeError(ValueError):
    """Bidegree outside ``{0, 1}^2``."""


# ---------------------------------------------------------------------------
# polynomials in the local arclength coordinate
# ---------------------------------------------------------------------------


def _poly(c) -> Poly:
    if isinstance(c, tuple):
        p = tuple(Fraction(x) for x in c)
    else:
        p = (Fraction(c),)
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p or (Fraction(0),)


def _padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _poly(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))


def _pscale(c, a: Poly) -> Poly:
    return _poly(tuple(c * x for x in a))


def _pmul(a: Poly, b: Poly) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly(tuple(out))


def _pder(a: Poly) -> Poly:
    return _poly(tuple(i * a[i] for i in range(1, len(a))))


def _pval(a: Poly, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in reversed(a):
        out = out * x + c
    return out


def _pint(a: Poly, length: Fraction) -> Fraction:
    return sum((c * length ** (i + 1) / (i + 1) for i, c in enumerate(a)), Fraction(0))


def _pshift(a: Poly, offset: Fraction) -> Poly:
    # p(x + offset) as a polynomial in x
    out: Poly = (Fraction(0),)
    for c in reversed(a):
        out = _padd(_pmul(out, (offset, Fraction(1))), (c,))
    return out


def _is_zero(a: Poly) -> bool:
    return all(x == 0 for x in a)


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


class Form:
    """A ``(p, q)``-form on an open subset of a subdivided graph."""

    def __init__(self, bidegree: Tuple[int, int], scope: Scope, values=None, density=None):
        p, q = bidegree
        if p not in (0, 1) or q not in (0, 1):
            raise DegreeError(f"bidegree {bidegree} outside {{0,1}}^2")
        self.bidegree = (p, q)
        self.scope = as_open_subset(scope)
        values = dict(values or {})
        sc = self.scope
        if self.bidegree == (0, 0):
            keys = sc.ordered_nodes + sc.boundary_ends
            unknown = set(values) - set(keys)
            if unknown:
                raise ValueError(f"values outside the scope: {sorted(map(str, unknown))[:3]}")
            self.values: Dict = {k: Fraction(values.get(k, 0)) for k in keys}
        elif self.bidegree == (1, 1):
            unknown = set(values) - sc.nodes
            if unknown:
                raise ValueError(f"atoms outside the scope: {sorted(map(str, unknown))[:3]}")
            self.values = {n: Fraction(w) for n, w in values.items() if w}
        else:
            unknown = set(values) - sc.segments
            if unknown:
                raise ValueError(f"coefficients outside the scope: {sorted(map(str, unknown))[:3]}")
            self.values = {s: _poly(c) for s, c in values.items() if not _is_zero(_poly(c))}
        self.density: Dict[Segment, Poly] = {}
        if density:
            if self.bidegree != (1, 1):
                raise ValueError("only (1,1)-forms carry densities")
            for s, c in density.items():
                if s not in sc.segments:
                    raise ValueError(f"density outside the scope: {s}")
                if not _is_zero(_poly(c)):
                    self.density[s] = _poly(c)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_function(cls, f: PLFunction) -> "Form":
        return cls((0, 0), OpenSubset.whole(f.subdivision), f.values)

    @classmethod
    def from_measure(cls, scope: Scope, mu: DiscreteMeasure) -> "Form":
        return cls((1, 1), scope, mu.atoms)

    # -- access -------------------------------------------------------------

    def end_value(self, s: Segment, side: str) -> Fraction:
        node = s.tail if side == "tail" else s.head
        if node in self.scope.nodes:
            return self.values[node]
        return self.values[BoundaryEnd(s, side)]

    def local(self, s: Segment) -> Poly:
        """The restriction to ``s`` as a polynomial in arclength from the tail."""
        if self.bidegree == (0, 0):
            a, b = self.end_value(s, "tail"), self.end_value(s, "head")
            return _poly((a, (b - a) / s.length))
        if self.bidegree == (1, 1):
            return self.density.get(s, (Fraction(0),))
        return self.values.get(s, (Fraction(0),))

    def coefficient(self, s: Segment, reverse: bool = False) -> Poly:
        """Coefficient of a degree-one form on ``s``; reversing the orientation flips its sign."""
        if self.bidegree not in ((1, 0), (0, 1)):
            raise DegreeError("coefficients belong to (1,0) and (0,1) forms")
        c = self.local(s)
        if not reverse:
            return c
        return _pscale(-1, _pshift(tuple(c[i] * (-1) ** i for i in range(len(c))), -s.length))

    def is_zero(self) -> bool:
        if self.bidegree == (0, 0):
            return all(v == 0 for v in self.values.values())
        return not self.values and not self.density

    def is_constant(self) -> bool:
        return self.bidegree == (0, 0) and len(set(self.values.values())) <= 1

    def is_compactly_supported(self) -> bool:
        """Vanishing on every boundary segment (and, for functions, at boundary ends)."""
        sc = self.scope
        if sc.is_compact:
            return True
        bsegs = {e.segment for e in sc.boundary_ends}
        if self.bidegree == (0, 0):
            return all(_is_zero(self.local(s)) for s in bsegs)
        if self.bidegree == (1, 1):
            return all(s not in self.density for s in bsegs)
        return all(s not in self.values for s in bsegs)

    def refine(self, points: Sequence[SubdivisionPoint]) -> "Form":
        sc = self.scope.refine(points)
        if sc is self.scope:
            return self
        old = self.scope.subdivision
        if self.bidegree == (0, 0):
            vals = {}
            for s in sc.ordered_segments:
                o = old.segment_containing(s.edge, s.t0)
                loc = self.local(o)
                off = (s.t0 - o.t0) * sc.graph.edge[s.edge].length
                for side, x in (("tail", off), ("head", off + s.length)):
                    node = s.tail if side == "tail" else s.head
                    key = node if node in sc.nodes else BoundaryEnd(s, side)
                    vals[key] = _pval(loc, x)
            return Form((0, 0), sc, vals)
        pieces = {}
        for s in sc.ordered_segments:
            o = old.segment_containing(s.edge, s.t0)
            off = (s.t0 - o.t0) * sc.graph.edge[s.edge].length
            src = self.density if self.bidegree == (1, 1) else self.values
            if o in src:
                pieces[s] = _pshift(src[o], off)
        if self.bidegree == (1, 1):
            return Form((1, 1), sc, self.values, pieces)
        return Form(self.bidegree, sc, pieces)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Form") -> "Form":
        if self.bidegree != other.bidegree:
            raise DegreeError("cannot add forms of different bidegree")
        a, b = _common(self, other)
        if a.bidegree == (0, 0):
            return Form((0, 0), a.scope, {k: a.values[k] + b.values[k] for k in a.values})
        vals: Dict = dict(a.values)
        for k, v in b.values.items():
            if a.bidegree == (1, 1):
                vals[k] = vals.get(k, 0) + v
            else:
                vals[k] = _padd(vals.get(k, (Fraction(0),)), v)
        dens = dict(a.density)
        for k, v in b.density.items():
            dens[k] = _padd(dens.get(k, (Fraction(0),)), v)
        return Form(a.bidegree, a.scope, vals, dens)

    def __rmul__(self, c) -> "Form":
        c = Fraction(c)
        if self.bidegree == (0, 0):
            return Form((0, 0), self.scope, {k: c * v for k, v in self.values.items()})
        if self.bidegree == (1, 1):
            return Form((1, 1), self.scope, {k: c * v for k, v in self.values.items()},
                        {k: _pscale(c, v) for k, v in self.density.items()})
        return Form(self.bidegree, self.scope, {k: _pscale(c, v) for k, v in self.values.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-1) * other

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.bidegree != other.bidegree:
            return False
        a, b = _common(self, other)
        return a.values == b.values and a.density == b.density and a.scope.same_cells(b.scope)

    def format(self) -> str:
        """Line-oriented text: an orientation table followed by ``cell=value`` lines."""
        sc = self.scope
        lines = [f"# bidegree ({self.bidegree[0]},{self.bidegree[1]})"]
        for s in sc.ordered_segments:
            lines.append(f"# orient {s} {node_name(s.tail)} -> {node_name(s.head)} length={s.length}")
        if self.bidegree == (0, 0):
            lines += [f"{k}={v}" for k, v in self.values.items()]
        elif self.bidegree == (1, 1):
            lines += [f"{node_name(n)}={w}" for n, w in sorted(self.values.items(), key=lambda kv: sc.subdivision.node_index[kv[0]])]
            lines += [f"{s}~{_fmt_poly(p)}" for s, p in self.density.items()]
        else:
            lines += [f"{s}={_fmt_poly(self.values[s])}" for s in sc.ordered_segments if s in self.values]
        return "\n".join(lines)

    def __repr__(self):
        return f"Form({self.bidegree}, {len(self.values)} entries)"


def _fmt_poly(p: Poly) -> str:
    if len(p) == 1:
        return str(p[0])
    return " + ".join(f"{c}*x^{i}" if i else str(c) for i, c in enumerate(p) if c)


def _common(a: Form, b: Form) -> Tuple[Form, Form]:
    if a.scope.subdivision is b.scope.subdivision:
        return a, b
    pts = set(a.scope.subdivision.points) | set(b.scope.subdivision.points)
    return a.refine(pts), b.refine(pts)


# ---------------------------------------------------------------------------
# differentials, wedge, integration
# ---------------------------------------------------------------------------


def _divergence(form: Form, sign: int) -> Form:
    sc = form.scope
    atoms: Dict[Node, Fraction] = {}
    density = {}
    for s, c in form.values.items():
        if s.tail in sc.nodes:
            atoms[s.tail] = atoms.get(s.tail, 0) + sign * _pval(c, Fraction(0))
        if s.head in sc.nodes:
            atoms[s.head] = atoms.get(s.head, 0) - sign * _pval(c, s.length)
        density[s] = _pscale(sign, _pder(c))
    return Form((1, 1), sc, atoms, density)


def _slopes(f: Form, bidegree) -> Form:
    return Form(bidegree, f.scope, {s: _pder(f.local(s)) for s in f.scope.ordered_segments})


def d_second(form: Form) -> Form:
    """The operator d'' : A^{p,0} -> A^{p,1}."""
    if form.bidegree == (0, 0):
        return _slopes(form, (0, 1))
    if form.bidegree == (1, 0):
        return _divergence(form, +1)
    raise DegreeError(f"d'' of a {form.bidegree}-form leaves bidegrees {{0,1}}^2")


def d_prime(form: Form) -> Form:
    """The operator d' : A^{0,q} -> A^{1,q}, with d'd'' = -d''d'."""
    if form.bidegree == (0, 0):
        return _slopes(form, (1, 0))
    if form.bidegree == (0, 1):
        return _divergence(form, -1)
    raise DegreeError(f"d' of a {form.bidegree}-form leaves bidegrees {{0,1}}^2")


def wedge(alpha: Form, beta: Form) -> Form:
    """Exterior product; two degree-one factors anticommute."""
    (p1, q1), (p2, q2) = alpha.bidegree, beta.bidegree
    p, q = p1 + p2, q1 + q2
    if p > 1 or q > 1:
        raise DegreeError(f"wedge of {alpha.bidegree} and {beta.bidegree} has bidegree ({p},{q})")
    a, b = _common(alpha, beta)
    if not a.scope.same_cells(b.scope):
        raise ValueError("forms live on different open sets")
    if a.bidegree == (0, 0) and b.bidegree == (0, 0):
        if a.is_constant():
            return _scalar_times(a, b)
        if b.is_constant():
            return _scalar_times(b, a)
        raise ValueError("the product of two non-constant PL functions is not piecewise linear")
    if b.bidegree == (0, 0):
        a, b = b, a
    if a.bidegree == (0, 0):
        if b.bidegree == (1, 1):
            atoms = {n: a.values[n] * w for n, w in b.values.items()}
            dens = {s: _pmul(a.local(s), d) for s, d in b.density.items()}
            return Form((1, 1), b.scope, atoms, dens)
        return Form(b.bidegree, b.scope, {s: _pmul(a.local(s), c) for s, c in b.values.items()})
    # two degree-one forms; d'x ^ d''x is the positive area element
    sign = 1 if a.bidegree == (1, 0) else -1
    dens = {s: _pscale(sign, _pmul(c, b.values[s])) for s, c in a.values.items() if s in b.values}
    return Form((1, 1), a.scope, {}, dens)


def _scalar_times(const: Form, other: Form) -> Form:
    c = next(iter(const.values.values()), Fraction(0))
    return c * other


def integrate(form: Form) -> Fraction:
    """Integral of a compactly supported (1,1)-form: atoms plus densities times length."""
    if form.bidegree != (1, 1):
        raise DegreeError("only (1,1)-forms can be integrated")
    if not form.is_compactly_supported():
        raise ValueError("form is not compactly supported in its scope")
    total = sum(form.values.values(), Fraction(0))
    for s, d in form.density.items():
        total += _pint(d, s.length)
    return total


# ---------------------------------------------------------------------------
# cochain complexes and cohomology
# ---------------------------------------------------------------------------


def prepare_scope(scope: Scope) -> OpenSubset:
    """Split boundary segments so the compact-support cell model is valid."""
    sc = as_open_subset(scope)
    pts = []
    for s in {e.segment for e in sc.boundary_ends}:
        ends = (s.tail not in sc.nodes) + (s.head not in sc.nodes)
        pieces = 3 if ends == 2 else 2
        for j in range(1, pieces):
            pts.append(SubdivisionPoint(s.edge, s.t0 + (s.t1 - s.t0) * Fraction(j, pieces)))
    return sc.refine(pts)


@dataclass
class CochainComplex:
    """``C^{p,0} --d''--> C^{p,1}`` on the cells of a prepared open subset."""

    scope: OpenSubset
    p: int
    support: str
    domain: List  # basis cells of C^{p,0}
    codomain: List  # basis cells of C^{p,1}
    matrix: linalg.SparseMatrix  # codomain x domain

    def euler_characteristic(self) -> int:
        return len(self.domain) - len(self.codomain)


def _boundary_cells(sc: OpenSubset):
    bsegs = {e.segment for e in sc.boundary_ends}
    inner = set()
    for s in bsegs:
        for n in (s.tail, s.head):
            if n in sc.nodes:
                inner.add(n)
    return bsegs, inner


def cochain_complex(scope: Scope, p: int, support: str = FULL) -> CochainComplex:
    sc = prepare_scope(scope)
    if support not in (FULL, COMPACT):
        raise ValueError(f"support must be {FULL!r} or {COMPACT!r}")
    compact = support == COMPACT
    bsegs, inner = _boundary_cells(sc) if compact else (set(), set())
    segs = [s for s in sc.ordered_segments if s not in bsegs]
    if p == 0:
        domain: List = [n for n in sc.ordered_nodes if n not in inner]
        if not compact:
            domain += sc.boundary_ends
        where = {c: i for i, c in enumerate(domain)}
        m = linalg.SparseMatrix(len(segs), len(domain))
        for i, s in enumerate(segs):
            w = 1 / s.length
            for side, sign in (("tail", -w), ("head", w)):
                node = s.tail if side == "tail" else s.head
                key = node if node in sc.nodes else BoundaryEnd(s, side)
                if key in where:
                    m.add(i, where[key], sign)
        return CochainComplex(sc, 0, support, domain, segs, m)
    if p == 1:
        nodes = list(sc.ordered_nodes)
        where = {n: i for i, n in enumerate(nodes)}
        m = linalg.SparseMatrix(len(nodes), len(segs))
        for j, s in enumerate(segs):
            if s.tail in where:
                m.add(where[s.tail], j, 1)
            if s.head in where:
                m.add(where[s.head], j, -1)
        return CochainComplex(sc, 1, support, segs, nodes, m)
    raise DegreeError(f"p={p} outside {{0,1}}")


@dataclass
class CohomologyBasis:
    bidegree: Tuple[int, int]
    support: str
    dimension: int
    representatives: List[Form] = field(repr=False)
    scope: OpenSubset = field(repr=False)
    complex: CochainComplex = field(repr=False)
    vectors: List[List[Fraction]] = field(repr=False, default_factory=list)
    complement: List[int] = field(repr=False, default_factory=list)

    def coordinates(self, cochain: Sequence[Fraction]) -> List[Fraction]:
        """Coordinates of the class of ``cochain`` in this basis."""
        cx = self.complex
        if self.bidegree[1] == 0:
            mat = linalg.SparseMatrix.from_dense([list(col) for col in zip(*self.vectors)]) if self.vectors else None
            if mat is None:
                return []
            x = linalg.solve(mat, cochain)
            if x is None:
                raise ValueError("cochain is not a cocycle")
            return x
        units = linalg.SparseMatrix.from_columns(len(cx.codomain), [{j: Fraction(1)} for j in self.complement])
        x = linalg.solve(cx.matrix.hstack(units), cochain)
        return x[cx.matrix.ncols:]

    def verify(self) -> bool:
        """Representatives are cocycles with independent classes."""
        cx = self.complex
        if self.bidegree[1] == 0:
            return all(not any(cx.matrix.matvec(v)) for v in self.vectors) and linalg.is_independent(self.vectors)
        img = linalg.rank(cx.matrix)
        units = linalg.SparseMatrix.from_columns(len(cx.codomain), [{j: Fraction(1)} for j in self.complement])
        return linalg.rank(cx.matrix.hstack(units)) == img + len(self.complement)


def _form_from_vector(cx: CochainComplex, degree: int, vec: Sequence[Fraction]) -> Form:
    cells = cx.domain if degree == 0 else cx.codomain
    vals = {c: x for c, x in zip(cells, vec) if x}
    bideg = (cx.p, degree)
    if bideg == (1, 1):
        return Form((1, 1), cx.scope, vals)
    if bideg == (0, 0):
        return Form((0, 0), cx.scope, vals)
    return Form(bideg, cx.scope, vals)


def cohomology(scope: Scope, p: int, q: int, support: str = FULL) -> CohomologyBasis:
    """Basis of ``H^{p,q}`` (or ``H^{p,q}_c``) with reduced representatives.

    On a compact scope the two supports coincide.
    """
    if q not in (0, 1):
        raise DegreeError(f"q={q} outside {{0,1}}")
    cx = cochain_complex(scope, p, support)
    if q == 0:
        vecs = linalg.nullspace(cx.matrix)
        reps = [_form_from_vector(cx, 0, v) for v in vecs]
        return CohomologyBasis((p, q), support, len(vecs), reps, cx.scope, cx, vectors=vecs)
    comp = linalg.column_complement(cx.matrix)
    n = len(cx.codomain)
    vecs = []
    for j in comp:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        vecs.append(v)
    reps = [_form_from_vector(cx, 1, v) for v in vecs]
    return CohomologyBasis((p, q), support, len(comp), reps, cx.scope, cx, vectors=vecs, complement=comp)


def hodge_numbers(scope: Scope, support: str = FULL) -> Tuple[int, int, int, int]:
    """``(h00, h01, h10, h11)`` from ranks alone."""
    out = {}
    for p in (0, 1):
        cx = cochain_complex(scope, p, support)
        r = linalg.rank(cx.matrix)
        out[p, 0] = len(cx.domain) - r
        out[p, 1] = len(cx.codomain) - r
    return out[0, 0], out[0, 1], out[1, 0], out[1, 1]


def form_vector(form: Form, cx: CochainComplex, degree: int) -> List[Fraction]:
    """Express a piecewise-constant form in the cochain basis of ``cx``."""
    if not form.scope.same_cells(cx.scope):
        raise ValueError("form and complex live on different open sets")
    form = form.refine(cx.scope.subdivision.points)
    cells = cx.domain if degree == 0 else cx.codomain
    if form.bidegree == (0, 0):
        return [form.values.get(c, Fraction(0)) for c in cells]
    if form.bidegree == (1, 1):
        if form.density:
            raise ValueError("densities have no cochain representative")
        return [form.values.get(c, Fraction(0)) for c in cells]
    out = []
    for c in cells:
        poly = form.values.get(c, (Fraction(0),))
        if len(poly) > 1:
            raise ValueError("non-constant coefficients have no cochain representative")
        out.append(poly[0])
    return out
