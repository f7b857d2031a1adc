"""Augmented metric graphs: skeleta of semistable models.

A skeleton is a connected metric graph whose vertices carry the genus of the
corresponding component of the special fibre and, optionally, the rank of
``Pic^0`` of that component tensored with the reals.  Loops and parallel
edges are allowed.  Everything is exact: lengths and positions are
``fractions.Fraction``.

Besides the data model this module handles the skeleton file format,
subdivisions (common refinements for piecewise-linear data), and open
subsets built from cells of a subdivision, which is how regions and their
intersections are represented.
"""

from __future__ import annotations

import bisect
import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .dimension import INFINITE, Dim


class GraphError(ValueError):
    """Invalid skeleton data."""


class SkeletonSyntaxError(GraphError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class RegionError(GraphError):
    """Invalid region specification."""


def parse_rational(text: str) -> Fraction:
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text.strip()):
        raise ValueError(f"not a rational number: {text!r}")
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# graph and residue model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0
    picrank: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class ResidueModel(enum.Enum):
    """How ``Pic^0`` of the residue curves behaves.

    ``TORSION``: every ``Pic^0`` is torsion (residue field the algebraic
    closure of a finite field), so every vertex contributes rank 0.
    ``COMPLEX``: residue field ``C``; a positive-genus vertex contributes
    infinite rank.  ``EXPLICIT``: vertex ranks are read from ``picrank``.
    """

    TORSION = "torsion"
    COMPLEX = "complex"
    EXPLICIT = "explicit"

    def vertex_rank(self, v: Vertex) -> Dim:
        if self is ResidueModel.TORSION or v.genus == 0:
            return 0
        if self is ResidueModel.COMPLEX:
            return INFINITE
        return v.picrank


@dataclass(frozen=True)
class MetricGraph:
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.vertices:
            raise GraphError("graph has no vertices")
        seen = set()
        for v in self.vertices:
            if v.id in seen:
                raise GraphError(f"duplicate id {v.id!r}")
            seen.add(v.id)
            if v.genus < 0 or v.picrank < 0:
                raise GraphError(f"vertex {v.id!r}: genus and picrank must be non-negative")
            if v.genus == 0 and v.picrank != 0:
                raise GraphError(f"vertex {v.id!r}: picrank on genus-0 vertex")
        vids = {v.id for v in self.vertices}
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate id {e.id!r}")
            seen.add(e.id)
            if e.tail not in vids or e.head not in vids:
                raise GraphError(f"edge {e.id!r}: unknown endpoint")
            if not e.length > 0:
                raise GraphError(f"edge {e.id!r}: non-positive length")
            if "@" in e.id or ":" in e.id:
                raise GraphError(f"edge {e.id!r}: ids may not contain '@' or ':'")
        if not self._connected():
            raise GraphError("graph is disconnected")

    def _connected(self) -> bool:
        adj: Dict[str, List[str]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            adj[e.tail].append(e.head)
            adj[e.head].append(e.tail)
        start = self.vertices[0].id
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    @cached_property
    def vertex(self) -> Dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_order(self) -> Dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    def valence(self, vid: str) -> int:
        return sum((e.tail == vid) + (e.head == vid) for e in self.edges)


def betti(g: MetricGraph) -> int:
    """First Betti number ``E - V + 1`` of a connected graph."""
    return len(g.edges) - len(g.vertices) + 1


def positive_genus_vertices(g: MetricGraph) -> List[str]:
    return [v.id for v in g.vertices if v.genus > 0]


def s_dimension(g: MetricGraph, model: ResidueModel, vertices: Optional[Iterable[str]] = None) -> Dim:
    """Real dimension of the sum of ``Pic^0(C_v) (x) R`` over positive-genus vertices.

    ``vertices`` restricts the sum to a subset, which is what an open
    subset of the curve sees.
    """
    ids = [v.id for v in g.vertices] if vertices is None else list(vertices)
    total: Dim = 0
    for vid in ids:
        total = total + model.vertex_rank(g.vertex[vid])
    return total


# ---------------------------------------------------------------------------
# skeleton file format
# ---------------------------------------------------------------------------


def _keyvals(tokens: Sequence[str], allowed: Sequence[str], lineno: int) -> Dict[str, str]:
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in allowed:
            raise SkeletonSyntaxError(lineno, f"unexpected token {tok!r}")
        if key in out:
            raise SkeletonSyntaxError(lineno, f"repeated key {key!r}")
        out[key] = val
    return out


def parse_graph(text: str) -> Tuple[MetricGraph, ResidueModel]:
    """Parse skeleton-file contents into a validated graph and residue model.

    A missing ``residue`` line means ``torsion``.
    """
    model: Optional[ResidueModel] = None
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        kind, rest = tokens[0], tokens[1:]
        if kind == "residue":
            if model is not None:
                raise SkeletonSyntaxError(lineno, "residue declared twice")
            if len(rest) != 1:
                raise SkeletonSyntaxError(lineno, "expected: residue torsion|complex|explicit")
            try:
                model = ResidueModel(rest[0])
            except ValueError:
                raise SkeletonSyntaxError(lineno, f"unknown residue model {rest[0]!r}") from None
        elif kind == "vertex":
            if not rest:
                raise SkeletonSyntaxError(lineno, "vertex needs an id")
            kv = _keyvals(rest[1:], ("genus", "picrank"), lineno)
            try:
                genus = int(kv.get("genus", "0"))
                picrank = int(kv.get("picrank", "0"))
            except ValueError:
                raise SkeletonSyntaxError(lineno, "genus and picrank must be integers") from None
            vertices.append(Vertex(rest[0], genus, picrank))
        elif kind == "edge":
            if len(rest) < 3:
                raise SkeletonSyntaxError(lineno, "expected: edge ID TAIL HEAD length=L")
            kv = _keyvals(rest[3:], ("length",), lineno)
            if "length" not in kv:
                raise SkeletonSyntaxError(lineno, "edge needs length=")
            try:
                length = parse_rational(kv["length"])
            except ValueError as exc:
                raise SkeletonSyntaxError(lineno, str(exc)) from None
            if length <= 0:
                raise SkeletonSyntaxError(lineno, "non-positive length")
            edges.append(Edge(rest[0], rest[1], rest[2], length))
        else:
            raise SkeletonSyntaxError(lineno, f"unknown directive {kind!r}")
    return MetricGraph(tuple(vertices), tuple(edges)), (model or ResidueModel.TORSION)


def serialize(g: MetricGraph, model: ResidueModel = ResidueModel.TORSION) -> str:
    lines = [f"residue {model.value}"]
    for v in g.vertices:
        extra = f" picrank={v.picrank}" if v.picrank else ""
        lines.append(f"vertex {v.id} genus={v.genus}{extra}")
    for e in g.edges:
        lines.append(f"edge {e.id} {e.tail} {e.head} length={e.length}")
    return "\n".join(lines) + "\n"


def load_graph(path) -> Tuple[MetricGraph, ResidueModel]:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# ---------------------------------------------------------------------------
# subdivisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SubdivisionPoint:
    """An interior point of an edge at fractional position ``t`` (tail = 0, head = 1)."""

    edge: str
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.t < 1:
            raise RegionError(f"position {self.t} on {self.edge} is not strictly interior")

    def __str__(self):
        return f"{self.edge}@{self.t}"


Node = Union[str, SubdivisionPoint]


def node_name(node: Node) -> str:
    return str(node)


def parse_point(text: str, sep: str = "@") -> SubdivisionPoint:
    edge, s, t = text.partition(sep)
    if not s or not edge:
        raise RegionError(f"expected EDGE{sep}T, got {text!r}")
    try:
        return SubdivisionPoint(edge, parse_rational(t))
    except ValueError as exc:
        raise RegionError(str(exc)) from None


@dataclass(frozen=True)
class Segment:
    """A piece of an edge between two consecutive nodes, oriented like the edge."""

    edge: str
    t0: Fraction
    t1: Fraction
    tail: Node
    head: Node
    length: Fraction

    def __str__(self):
        return f"{self.edge}[{self.t0},{self.t1}]"


class Subdivision:
    """A graph with extra degree-two nodes at interior points of edges."""

    def __init__(self, graph: MetricGraph, points: Iterable[SubdivisionPoint] = ()):
        self.graph = graph
        pts = set(points)
        for p in pts:
            if p.edge not in graph.edge:
                raise RegionError(f"unknown edge {p.edge!r}")
        order = graph.edge_order
        self.points: Tuple[SubdivisionPoint, ...] = tuple(sorted(pts, key=lambda p: (order[p.edge], p.t)))
        self._ts: Dict[str, List[Fraction]] = {e.id: [Fraction(0)] for e in graph.edges}
        for p in self.points:
            self._ts[p.edge].append(p.t)
        segs = []
        for e in graph.edges:
            ts = self._ts[e.id] = self._ts[e.id] + [Fraction(1)]
            for a, b in zip(ts, ts[1:]):
                segs.append(Segment(e.id, a, b, self._node(e, a), self._node(e, b), (b - a) * e.length))
        self.nodes: Tuple[Node, ...] = tuple(v.id for v in graph.vertices) + self.points
        self.segments: Tuple[Segment, ...] = tuple(segs)
        self.node_index: Dict[Node, int] = {n: i for i, n in enumerate(self.nodes)}
        self.segment_index: Dict[Segment, int] = {s: i for i, s in enumerate(self.segments)}

    @staticmethod
    def _node(e: Edge, t: Fraction) -> Node:
        if t == 0:
            return e.tail
        if t == 1:
            return e.head
        return SubdivisionPoint(e.id, t)

    def segment_containing(self, edge: str, t: Fraction) -> Segment:
        """The segment whose half-open range ``[t0, t1)`` contains ``t``."""
        ts = self._ts[edge]
        k = bisect.bisect_right(ts, t) - 1
        k = min(max(k, 0), len(ts) - 2)
        return self.segments[self._edge_offset[edge] + k]

    @cached_property
    def _edge_offset(self) -> Dict[str, int]:
        offsets: Dict[str, int] = {}
        for i, s in enumerate(self.segments):
            offsets.setdefault(s.edge, i)
        return offsets

    def refine(self, points: Iterable[SubdivisionPoint]) -> "Subdivision":
        return Subdivision(self.graph, set(self.points) | set(points))

    def incident(self, node: Node) -> List[Segment]:
        return self._incidence.get(node, [])

    @cached_property
    def _incidence(self) -> Dict[Node, List[Segment]]:
        inc: Dict[Node, List[Segment]] = {}
        for s in self.segments:
            inc.setdefault(s.tail, []).append(s)
            if s.head != s.tail:
                inc.setdefault(s.head, []).append(s)
        return inc

    @cached_property
    def as_graph(self) -> MetricGraph:
        """The subdivided graph, with genus-0 vertices named ``edge@t``."""
        verts = list(self.graph.vertices) + [Vertex(str(p)) for p in self.points]
        counter: Dict[str, int] = {}
        edges = []
        for s in self.segments:
            k = counter.get(s.edge, 0)
            counter[s.edge] = k + 1
            edges.append(Edge(f"{s.edge}.{k}", str(s.tail), str(s.head), s.length))
        return MetricGraph(tuple(verts), tuple(edges))

    def __repr__(self):
        return f"Subdivision(nodes={len(self.nodes)}, segments={len(self.segments)})"


def subdivide(g: MetricGraph, points: Iterable[SubdivisionPoint] = ()) -> Subdivision:
    """Insert degree-two nodes at ``points``; coincident points collapse to one node."""
    return Subdivision(g, points)


# ---------------------------------------------------------------------------
# open subsets made of cells
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryEnd:
    """An end of a segment whose endpoint lies outside the open set."""

    segment: Segment
    side: str  # "tail" or "head"

    @property
    def point(self) -> Node:
        return self.segment.tail if self.side == "tail" else self.segment.head

    def __str__(self):
        return f"{self.segment}:{self.side}"


class OpenSubset:
    """An open subset of the graph that is a union of open cells of a subdivision.

    Openness means every segment at a member node is a member.  Segments
    whose endpoint is missing end at the topological boundary; each such
    segment end is a :class:`BoundaryEnd`.
    """

    def __init__(self, subdivision: Subdivision, nodes: Iterable[Node], segments: Iterable[Segment]):
        self.subdivision = subdivision
        self.nodes: FrozenSet[Node] = frozenset(nodes)
        self.segments: FrozenSet[Segment] = frozenset(segments)
        for n in self.nodes:
            for s in subdivision.incident(n):
                if s not in self.segments:
                    raise RegionError(f"not open: segment {s} at node {n} missing")

    @classmethod
    def whole(cls, g: Union[MetricGraph, Subdivision]) -> "OpenSubset":
        sub = g if isinstance(g, Subdivision) else Subdivision(g)
        return cls(sub, sub.nodes, sub.segments)

    @property
    def graph(self) -> MetricGraph:
        return self.subdivision.graph

    @cached_property
    def ordered_nodes(self) -> List[Node]:
        return [n for n in self.subdivision.nodes if n in self.nodes]

    @cached_property
    def ordered_segments(self) -> List[Segment]:
        return [s for s in self.subdivision.segments if s in self.segments]

    @cached_property
    def boundary_ends(self) -> List[BoundaryEnd]:
        ends = []
        for s in self.ordered_segments:
            if s.tail not in self.nodes:
                ends.append(BoundaryEnd(s, "tail"))
            if s.head not in self.nodes:
                ends.append(BoundaryEnd(s, "head"))
        return ends

    @property
    def is_compact(self) -> bool:
        return not self.boundary_ends

    @property
    def is_empty(self) -> bool:
        return not self.segments and not self.nodes

    def vertices(self) -> List[str]:
        """Original graph vertices lying in the set, in graph order."""
        return [v.id for v in self.graph.vertices if v.id in self.nodes]

    def refine(self, points: Iterable[SubdivisionPoint]) -> "OpenSubset":
        points = set(points)
        if points <= set(self.subdivision.points):
            return self
        sub = self.subdivision.refine(points)
        old = self.subdivision
        nodes = set(self.nodes)
        segments = []
        for s in sub.segments:
            if old.segment_containing(s.edge, s.t0) in self.segments:
                segments.append(s)
                if isinstance(s.tail, SubdivisionPoint) and s.tail not in old.node_index:
                    nodes.add(s.tail)
        return OpenSubset(sub, nodes, segments)

    def _common(self, other: "OpenSubset") -> Tuple["OpenSubset", "OpenSubset"]:
        if self.graph is not other.graph and self.graph != other.graph:
            raise RegionError("open subsets live on different graphs")
        pts = set(self.subdivision.points) | set(other.subdivision.points)
        return self.refine(pts), other.refine(pts)

    def union(self, other: "OpenSubset") -> "OpenSubset":
        a, b = self._common(other)
        return OpenSubset(a.subdivision, a.nodes | b.nodes, a.segments | b.segments)

    def intersection(self, other: "OpenSubset") -> "OpenSubset":
        a, b = self._common(other)
        return OpenSubset(a.subdivision, a.nodes & b.nodes, a.segments & b.segments)

    def same_cells(self, other: "OpenSubset") -> bool:
        a, b = self._common(other)
        return a.nodes == b.nodes and a.segments == b.segments

    def components(self) -> List["OpenSubset"]:
        parent: Dict[object, object] = {}

        def find(x):
            while parent[x] is not x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.ordered_nodes + self.ordered_segments:
            parent[c] = c
        for s in self.ordered_segments:
            for n in (s.tail, s.head):
                if n in self.nodes:
                    parent[find(s)] = find(n)
        groups: Dict[object, Tuple[list, list]] = {}
        for c in self.ordered_nodes + self.ordered_segments:
            groups.setdefault(find(c), ([], []))
        for n in self.ordered_nodes:
            groups[find(n)][0].append(n)
        for s in self.ordered_segments:
            groups[find(s)][1].append(s)
        return [OpenSubset(self.subdivision, ns, ss) for ns, ss in groups.values()]

    def cycle_rank(self) -> int:
        """First Betti number of the set (legs retract, so only closed segments count)."""
        closed = [s for s in self.segments if s.tail in self.nodes and s.head in self.nodes]
        return len(closed) - len(self.nodes) + len(self.components())

    def __repr__(self):
        return f"OpenSubset(nodes={len(self.nodes)}, segments={len(self.segments)}, ends={len(self.boundary_ends)})"


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """The connected component of ``graph minus cuts`` that contains ``seed``."""

    seed: str
    cuts: Tuple[SubdivisionPoint, ...]
    cells: OpenSubset = field(repr=False, compare=False)
    boundary_count: int
    strictly_simple: bool

    @property
    def graph(self) -> MetricGraph:
        return self.cells.graph


def extract_region(g: MetricGraph, seed: str, cuts: Sequence[SubdivisionPoint] = ()) -> Region:
    """Cut the graph at ``cuts`` and keep the component of ``seed``.

    ``boundary_count`` counts segment ends reaching a cut point, so a cut
    reached from two sides counts twice.  The region is strictly simple when
    its closure (region plus the cut points it touches) is a tree.
    """
    cuts = tuple(cuts)
    if len(set(cuts)) != len(cuts):
        raise RegionError("cut points must be pairwise distinct")
    if seed not in g.vertex:
        if any(str(c) == seed for c in cuts):
            raise RegionError(f"seed {seed!r} lies on a cut point")
        raise RegionError(f"unknown seed vertex {seed!r}")
    sub = Subdivision(g, cuts)
    blocked = set(cuts)
    nodes = {seed}
    segments = set()
    stack = [seed]
    while stack:
        n = stack.pop()
        for s in sub.incident(n):
            segments.add(s)
            for m in (s.tail, s.head):
                if m not in blocked and m not in nodes:
                    nodes.add(m)
                    stack.append(m)
    cells = OpenSubset(sub, nodes, segments)
    touched = {e.point for e in cells.boundary_ends}
    closure_betti = len(segments) - len(nodes) - len(touched) + 1
    return Region(seed, cuts, cells, len(cells.boundary_ends), closure_betti == 0)


def parse_region_spec(text: Union[str, Sequence[str]]) -> Tuple[str, List[SubdivisionPoint]]:
    """Parse ``seed=v1 cut=e1:1/3 cut=e2:1/2``."""
    tokens = text.split() if isinstance(text, str) else list(text)
    seed = None
    cuts = []
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if key == "seed" and sep:
            if seed is not None:
                raise RegionError("seed given twice")
            seed = val
        elif key == "cut" and sep:
            cuts.append(parse_point(val, ":"))
        else:
            raise RegionError(f"unexpected region token {tok!r}")
    if seed is None:
        raise RegionError("region needs seed=VERTEX")
    return seed, cuts


Scope = Union[MetricGraph, Region, OpenSubset]


def as_open_subset(scope: Scope) -> OpenSubset:
    if isinstance(scope, OpenSubset):
        return scope
    if isinstance(scope, Region):
        return scope.cells
    if isinstance(scope, MetricGraph):
        return OpenSubset.whole(scope)
    raise TypeError(f"not a scope: {scope!r}")
