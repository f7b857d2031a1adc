"""Duality on open pieces, and gluing it with Mayer-Vietoris.

Cover a circle by two arcs.  Each arc has perfect pairings, as does their
intersection (two intervals), so duality passes to the circle.
"""

from fractions import Fraction

from tropdolbeault import Edge, MetricGraph, SubdivisionPoint, Vertex, extract_region, mv_audit, pd_check, subset_hodge, three_of_four
from tropdolbeault.pairing import Cover

P = SubdivisionPoint
circle = MetricGraph([Vertex("v1"), Vertex("v2")],
                     [Edge("e1", "v1", "v2", Fraction(1)), Edge("e2", "v2", "v1", Fraction(1))])
arc1 = extract_region(circle, "v1", [P("e1", Fraction(3, 4)), P("e2", Fraction(1, 4))])
arc2 = extract_region(circle, "v2", [P("e1", Fraction(1, 4)), P("e2", Fraction(3, 4))])

# An arc is a star with two legs: one boundary component per leg.
arc = subset_hodge(arc1)
print("arc k =", arc.k)
print("  full   ", arc.full.as_tuple())
print("  compact", arc.compact.as_tuple())

cover = Cover.of(arc1, arc2)
for p in (0, 1):
    print(mv_audit(cover, p).line())

for name, piece in cover.members().items():
    print(pd_check(piece).line(name))

print(three_of_four(cover).line())
