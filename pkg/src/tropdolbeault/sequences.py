"""Dimension bookkeeping for the long exact sequences of a skeleton curve.

Three sequences tie the Hodge numbers of a smooth projective curve to the
residue data of its skeleton:

* the resolution ``0 -> H -> L0 --ddc--> L1 -> 0`` of harmonic functions,
  whose cohomology is one-dimensional in degrees 0 and 1;
* ``0 -> S -> H^1(Aff) -> H^1(H) -> 0``, so ``dim H^1(Aff) = dim S + 1``;
* ``0 -> H^{1,0} -> H^{0,1} -> H^1(Aff) -> H^{1,1} -> 0``.

The cochain engine supplies ``h^{0,0}``, ``h^{0,1}`` and ``h^{1,0}``; the last
sequence then determines ``h^{1,1}``.  Every entry of a :class:`HodgeTable`
records how it was obtained.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import linalg
from .dimension import INFINITE, Dim, dim_json, is_finite
from .dolbeault import cochain_complex
from .graph import MetricGraph, OpenSubset, ResidueModel, betti, s_dimension
from .potential import resolution_audit

COCHAIN = "computed-by-cochain"
SEQUENCE = "derived-by-sequence"
MODEL = "model-value"

HOLDS = "holds"
FAILS = "fails"
FAILS_INFINITE = "fails-infinite"

BIDEGREES = ((0, 0), (0, 1), (1, 0), (1, 1))


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


@dataclass
class HodgeTable:
    entries: Dict[Tuple[int, int], Dim]
    provenance: Dict[Tuple[int, int], str]
    label: str = "global"
    notes: List[str] = field(default_factory=list)

    def __getitem__(self, pq: Tuple[int, int]) -> Dim:
        return self.entries[pq]

    def as_tuple(self) -> Tuple[Dim, Dim, Dim, Dim]:
        """``(h00, h01, h10, h11)``."""
        return tuple(self.entries[pq] for pq in BIDEGREES)

    def is_symmetric(self) -> bool:
        return all(self.entries[p, q] == self.entries[1 - p, 1 - q] for p, q in BIDEGREES)

    def lines(self) -> List[str]:
        return [f"h[{p}][{q}]={self.entries[p, q]}({self.provenance[p, q]})" for p, q in BIDEGREES]

    def to_json(self) -> dict:
        return {f"h[{p}][{q}]": {"value": dim_json(self.entries[p, q]), "provenance": self.provenance[p, q]}
                for p, q in BIDEGREES}


def aff_h1_dim(g: MetricGraph, model: ResidueModel) -> Dim:
    """``dim H^1(X, Aff) = dim S_X + 1``."""
    return s_dimension(g, model) + 1


@dataclass
class _CochainRanks:
    h00: int
    h01: int
    h10: int
    h11: int


def _cochain_ranks(g: MetricGraph) -> _CochainRanks:
    # two independent rank computations: d'' on PL functions, d'' on (1,0)-forms
    whole = OpenSubset.whole(g)
    c0 = cochain_complex(whole, 0)
    c1 = cochain_complex(whole, 1)
    r0 = linalg.rank(c0.matrix)
    r1 = linalg.rank(c1.matrix)
    return _CochainRanks(len(c0.domain) - r0, len(c0.codomain) - r0, len(c1.domain) - r1, len(c1.codomain) - r1)


def hodge_table(g: MetricGraph, model: ResidueModel) -> HodgeTable:
    ranks = _cochain_ranks(g)
    if ranks.h01 != ranks.h10:
        raise ConsistencyError(f"h01={ranks.h01} from PL functions but h10={ranks.h10} from closed (1,0)-forms")
    if ranks.h00 != 1 or ranks.h01 != betti(g):
        raise ConsistencyError("cochain engine disagrees with the topology of the graph")
    s = s_dimension(g, model)
    aff = s + 1
    h11 = aff - (ranks.h01 - ranks.h10)
    entries = {(0, 0): ranks.h00, (0, 1): ranks.h01, (1, 0): ranks.h10, (1, 1): h11}
    prov = {(0, 0): COCHAIN, (0, 1): COCHAIN, (1, 0): COCHAIN if s == 0 else MODEL, (1, 1): SEQUENCE}
    notes = []
    if s == 0:
        if h11 != ranks.h11:
            raise ConsistencyError(f"h11={h11} by exactness but {ranks.h11} from cochains")
    else:
        notes.append("h[1][0] is the skeleton value; it is not determined when S_X is nonzero")
    return HodgeTable(entries, prov, "global", notes)


@dataclass
class Verdict:
    value: str
    reason: str

    def __str__(self):
        return self.value


def pd_verdict(g: MetricGraph, model: ResidueModel) -> Verdict:
    """Poincare duality for the whole curve, decided twice.

    Route one: duality holds exactly when ``S_X = 0``.  Route two: the
    pairings are non-degenerate on the left, so duality holds exactly when
    ``h11 = 1`` and ``h10 = h01``.  Disagreement raises
    :class:`ConsistencyError`.
    """
    s = s_dimension(g, model)
    if s == 0:
        by_s = Verdict(HOLDS, "S_X = 0")
    elif s is INFINITE:
        by_s = Verdict(FAILS_INFINITE, "S_X is infinite-dimensional")
    else:
        by_s = Verdict(FAILS, f"dim S_X = {s}")
    t = hodge_table(g, model)
    if t[1, 1] is INFINITE:
        by_table = FAILS_INFINITE
    elif t[1, 1] == 1 and t[1, 0] == t[0, 1]:
        by_table = HOLDS
    else:
        by_table = FAILS
    if by_table != by_s.value:
        raise ConsistencyError(f"S_X route says {by_s.value}, Hodge-table route says {by_table}")
    return by_s


def finiteness_verdict(g: MetricGraph, model: ResidueModel) -> str:
    infinite = model is ResidueModel.COMPLEX and any(v.genus > 0 for v in g.vertices)
    table_infinite = not is_finite(hodge_table(g, model)[1, 1])
    if infinite != table_infinite:
        raise ConsistencyError("finiteness of h11 disagrees with G(X)")
    return "infinite" if infinite else "finite"


@dataclass
class SymmetryResult:
    passed: bool
    h10: Dim
    h01: Dim


def symmetry_check(g: MetricGraph, model: ResidueModel) -> SymmetryResult:
    """``h10 = h01``, both finite, over the algebraic closure of a finite field."""
    if model is not ResidueModel.TORSION:
        raise ValueError("symmetry_check requires the torsion residue model")
    t = hodge_table(g, model)
    ok = is_finite(t[1, 0]) and is_finite(t[0, 1]) and t[1, 0] == t[0, 1]
    return SymmetryResult(ok, t[1, 0], t[0, 1])


@dataclass
class SequenceAudit:
    sequence: str
    dims: Tuple[Dim, ...]
    exact: Optional[bool]  # None: not checkable (an infinite term)
    note: str = ""

    def line(self) -> str:
        flag = "n/a" if self.exact is None else ("yes" if self.exact else "no")
        return f"sequence={self.sequence} exact={flag} dims=({','.join(map(str, self.dims))})"

    def to_json(self) -> dict:
        return {"sequence": self.sequence, "dims": [dim_json(d) for d in self.dims],
                "exact": "n/a" if self.exact is None else ("yes" if self.exact else "no"), "note": self.note}


def _alternating(dims) -> Optional[bool]:
    if not all(is_finite(d) for d in dims):
        return None
    return sum((-1) ** i * d for i, d in enumerate(dims)) == 0


def sequence_audit(g: MetricGraph, model: ResidueModel, seed: int = 0) -> List[SequenceAudit]:
    res = resolution_audit(g, seed=seed)
    s = s_dimension(g, model)
    out = [SequenceAudit("resolution", (res.ker_dim, res.nodes, res.nodes, res.coker_dim),
                         res.passed and _alternating((res.ker_dim, res.nodes, res.nodes, res.coker_dim)),
                         "ddc on a random subdivision; cokernel detected by total mass")]
    harmonic = (s, s + 1, res.coker_dim)
    exact = _alternating(harmonic)
    out.append(SequenceAudit("harmonic", harmonic, exact, "" if exact is not None else "infinite term"))
    ranks = _cochain_ranks(g)
    t = hodge_table(g, model)
    # with S_X = 0 the (1,1) term comes from cochains, so the check is not circular
    h11 = ranks.h11 if s == 0 else t[1, 1]
    expo = (ranks.h10, ranks.h01, s + 1, h11)
    exact = _alternating(expo)
    note = "h[1][1] from cochains" if s == 0 else ("infinite term" if exact is None else "h[1][0] is a model value")
    out.append(SequenceAudit("exponential", expo, exact, note))
    return out
