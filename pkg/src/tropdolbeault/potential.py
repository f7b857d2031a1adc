"""Potential theory on metric graphs: the ``ddc`` operator and its Green functions.

Sign convention: ``ddc f`` puts at every node the sum of the outgoing
slopes of ``f``.  A local minimum therefore carries a positive atom, and
``ddc`` equals minus the weighted graph Laplacian with edge weights
``1/length``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Union

from . import linalg
from .graph import MetricGraph, Node, RegionError, Subdivision, SubdivisionPoint, node_name, parse_point, parse_rational


class NonzeroMassError(ValueError):
    """``ddc f = mu`` has no solution because ``mu`` has nonzero total mass."""


class DiscreteMeasure:
    """A finite signed atomic measure supported on nodes."""

    __slots__ = ("atoms",)

    def __init__(self, atoms: Union[Mapping[Node, object], Iterable] = ()):
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        acc: Dict[Node, Fraction] = {}
        for node, w in items:
            acc[node] = acc.get(node, Fraction(0)) + Fraction(w)
        self.atoms: Dict[Node, Fraction] = {n: w for n, w in acc.items() if w}

    def mass(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def points(self) -> List[SubdivisionPoint]:
        return [n for n in self.atoms if isinstance(n, SubdivisionPoint)]

    def __getitem__(self, node: Node) -> Fraction:
        return self.atoms.get(node, Fraction(0))

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return DiscreteMeasure(list(self.atoms.items()) + list(other.atoms.items()))

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return self + (-1) * other

    def __rmul__(self, c) -> "DiscreteMeasure":
        return DiscreteMeasure({n: c * w for n, w in self.atoms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return self.atoms == other.atoms

    def __repr__(self) -> str:
        body = " + ".join(f"{w}*d[{n}]" for n, w in self.atoms.items())
        return f"DiscreteMeasure({body or '0'})"


def dirac(node: Node, weight=1) -> DiscreteMeasure:
    return DiscreteMeasure({node: weight})


def parse_node(text: str, g: Optional[MetricGraph] = None) -> Node:
    if "@" in text:
        p = parse_point(text)
        if g is not None and p.edge not in g.edge:
            raise RegionError(f"unknown edge {p.edge!r}")
        return p
    if g is not None and text not in g.vertex:
        raise RegionError(f"unknown vertex {text!r}")
    return text


def parse_measure(text: str, g: Optional[MetricGraph] = None) -> DiscreteMeasure:
    """Parse ``v1:1 e2@1/3:-1`` (an optional leading ``measure`` keyword is ignored)."""
    tokens = text.split()
    if tokens and tokens[0] == "measure":
        tokens = tokens[1:]
    atoms = []
    for tok in tokens:
        node, sep, w = tok.rpartition(":")
        if not sep or not node:
            raise RegionError(f"expected NODE:WEIGHT, got {tok!r}")
        try:
            atoms.append((parse_node(node, g), parse_rational(w)))
        except ValueError as exc:
            raise RegionError(str(exc)) from None
    return DiscreteMeasure(atoms)


@dataclass
class PLFunction:
    """A continuous function, affine on every segment of ``subdivision``."""

    subdivision: Subdivision
    values: Dict[Node, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        missing = [n for n in self.subdivision.nodes if n not in self.values]
        if missing:
            raise ValueError(f"no value at nodes {missing[:3]}")
        self.values = {n: Fraction(self.values[n]) for n in self.subdivision.nodes}

    @classmethod
    def constant(cls, sub: Subdivision, c=1) -> "PLFunction":
        return cls(sub, {n: Fraction(c) for n in sub.nodes})

    def __call__(self, node: Node) -> Fraction:
        if node in self.values:
            return self.values[node]
        # interior point of a segment: interpolate
        s = self.subdivision.segment_containing(node.edge, node.t)
        a, b = self.values[s.tail], self.values[s.head]
        return a + (b - a) * (node.t - s.t0) / (s.t1 - s.t0)

    def slope(self, segment) -> Fraction:
        return (self.values[segment.head] - self.values[segment.tail]) / segment.length

    def refine(self, points: Iterable[SubdivisionPoint]) -> "PLFunction":
        sub = self.subdivision.refine(points)
        return PLFunction(sub, {n: self(n) for n in sub.nodes})

    def __add__(self, other: "PLFunction") -> "PLFunction":
        a, b = _common(self, other)
        return PLFunction(a.subdivision, {n: a.values[n] + b.values[n] for n in a.values})

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self + (-1) * other

    def __rmul__(self, c) -> "PLFunction":
        return PLFunction(self.subdivision, {n: c * v for n, v in self.values.items()})

    def is_constant(self) -> bool:
        return len(set(self.values.values())) <= 1

    def format(self) -> str:
        return "\n".join(f"{node_name(n)}={v}" for n, v in self.values.items())


def _common(f: PLFunction, g: PLFunction):
    pts = set(f.subdivision.points) | set(g.subdivision.points)
    return f.refine(pts), g.refine(pts)


def ddc(f: PLFunction) -> DiscreteMeasure:
    atoms: Dict[Node, Fraction] = {}
    for s in f.subdivision.segments:
        m = f.slope(s)
        atoms[s.tail] = atoms.get(s.tail, 0) + m
        atoms[s.head] = atoms.get(s.head, 0) - m
    return DiscreteMeasure(atoms)


def ddc_matrix(sub: Subdivision) -> linalg.SparseMatrix:
    """Matrix of ``ddc`` on node values (square, indexed by ``sub.nodes``)."""
    n = len(sub.nodes)
    m = linalg.SparseMatrix(n, n)
    idx = sub.node_index
    for s in sub.segments:
        i, j = idx[s.tail], idx[s.head]
        if i == j:
            continue
        w = 1 / s.length
        m.add(i, i, -w)
        m.add(i, j, w)
        m.add(j, j, -w)
        m.add(j, i, w)
    return m


def _subdivision_for(g: Union[MetricGraph, Subdivision], points: Iterable[SubdivisionPoint]) -> Subdivision:
    if isinstance(g, Subdivision):
        return g.refine(points)
    return Subdivision(g, points)


def green_solve(g: Union[MetricGraph, Subdivision], mu: DiscreteMeasure, basepoint: Optional[Node] = None) -> PLFunction:
    """The unique PL function with ``ddc f = mu`` and ``f(basepoint) = 0``.

    The subdivision is the one induced by the support of ``mu`` (and the
    basepoint, if it is an interior point).  Defaults to the first vertex.
    """
    if mu.mass() != 0:
        raise NonzeroMassError(f"no solution: total mass nonzero ({mu.mass()})")
    graph = g.graph if isinstance(g, Subdivision) else g
    if basepoint is None:
        basepoint = graph.vertices[0].id
    extra = list(mu.points())
    if isinstance(basepoint, SubdivisionPoint):
        extra.append(basepoint)
    sub = _subdivision_for(g, extra)
    for node in mu.atoms:
        if node not in sub.node_index:
            raise RegionError(f"measure supported off the graph: {node}")
    if basepoint not in sub.node_index:
        raise RegionError(f"unknown basepoint {basepoint}")
    lap = ddc_matrix(sub)
    b = sub.node_index[basepoint]
    keep = [i for i in range(len(sub.nodes)) if i != b]
    reduced = lap.select_rows(keep).select_columns(keep)
    rhs = [mu[sub.nodes[i]] for i in keep]
    x = linalg.solve(reduced, rhs)
    if x is None:  # pragma: no cover - connected graphs always solve
        raise ArithmeticError("singular reduced Laplacian")
    values = {sub.nodes[i]: xi for i, xi in zip(keep, x)}
    values[basepoint] = Fraction(0)
    f = PLFunction(sub, values)
    if ddc(f) != mu:  # pragma: no cover - exactness guard
        raise ArithmeticError("Green solve failed its ddc round trip")
    return f


def harmonic_space(g: Union[MetricGraph, Subdivision]) -> List[PLFunction]:
    """Basis of ``{f : ddc f = 0}`` computed as the kernel of the Laplacian."""
    sub = g if isinstance(g, Subdivision) else Subdivision(g)
    basis = linalg.nullspace(ddc_matrix(sub))
    out = []
    for v in basis:
        # normalise so the last nonzero coordinate is 1
        lead = next(x for x in reversed(v) if x)
        out.append(PLFunction(sub, {n: x / lead for n, x in zip(sub.nodes, v)}))
    return out


def random_point(g: MetricGraph, rng: random.Random, denominator: int = 12) -> SubdivisionPoint:
    e = rng.choice(g.edges)
    return SubdivisionPoint(e.id, Fraction(rng.randint(1, denominator - 1), denominator))


def random_measure(g: MetricGraph, rng: random.Random, atoms: int = 4, mass=0, interior: bool = True) -> DiscreteMeasure:
    """Random rational measure with prescribed total mass on vertices and interior points."""
    nodes: List[Node] = []
    while len(nodes) < atoms:
        if interior and rng.random() < 0.5:
            n: Node = random_point(g, rng)
        else:
            n = rng.choice(g.vertices).id
        if n not in nodes:
            nodes.append(n)
    weights = [Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in nodes[:-1]]
    weights.append(Fraction(mass) - sum(weights, Fraction(0)))
    return DiscreteMeasure(zip(nodes, weights))


@dataclass
class ResolutionReport:
    ker_dim: int
    coker_dim: int
    witness: bool
    mass_annihilates_image: bool
    nodes: int

    @property
    def passed(self) -> bool:
        return self.ker_dim == 1 and self.coker_dim == 1 and self.witness and self.mass_annihilates_image


def resolution_audit(g: MetricGraph, seed: int = 0, trials: int = 3) -> ResolutionReport:
    """Check ``0 -> H -> L0 -> L1 -> 0`` on a subdivision of ``g``.

    The kernel of ``ddc`` must be the constants and its cokernel must be
    detected by total mass: random mass-zero measures are solved exactly,
    random measures of nonzero mass are rejected.
    """
    rng = random.Random(seed)
    zero = [random_measure(g, rng, atoms=rng.randint(2, 5)) for _ in range(trials)]
    nonzero = [random_measure(g, rng, atoms=rng.randint(1, 4), mass=rng.choice([1, -2, Fraction(1, 3)])) for _ in range(trials)]
    pts = {p for mu in zero + nonzero for p in mu.points()}
    sub = Subdivision(g, pts)
    lap = ddc_matrix(sub)
    r = linalg.rank(lap)
    n = len(sub.nodes)
    # every column of ddc has total mass zero
    annihilates = all(sum(col.values(), Fraction(0)) == 0 for col in (lap.column(j) for j in range(n)))
    witness = True
    for mu in zero:
        f = green_solve(sub, mu)
        witness &= ddc(f) == mu
    for mu in nonzero:
        try:
            green_solve(sub, mu)
            witness = False
        except NonzeroMassError:
            pass
    return ResolutionReport(n - r, n - r, witness, annihilates, n)
