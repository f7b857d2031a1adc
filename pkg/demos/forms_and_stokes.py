"""Forms, the two differentials and integration.

A (1,0)-form on a star-shaped region, vanishing near the boundary,
integrates to zero after applying d''.  The atoms at the nodes exactly
cancel the density along the segments.
"""

from fractions import Fraction

from tropdolbeault import (
    DiscreteMeasure,
    Edge,
    Form,
    MetricGraph,
    PLFunction,
    Subdivision,
    SubdivisionPoint,
    Vertex,
    d_prime,
    d_second,
    ddc,
    extract_region,
    integrate,
)

star = MetricGraph(
    [Vertex("c"), Vertex("a"), Vertex("b"), Vertex("d")],
    [Edge("s1", "c", "a", Fraction(1)), Edge("s2", "c", "b", Fraction(2)), Edge("s3", "c", "d", Fraction(3, 2))],
)
region = extract_region(star, "c", [SubdivisionPoint(e, Fraction(2, 3)) for e in ("s1", "s2", "s3")])
cells = region.cells.refine([SubdivisionPoint(e, Fraction(1, 3)) for e in ("s1", "s2", "s3")])

inner = [s for s in cells.ordered_segments if s.t0 == 0]
alpha = Form((1, 0), cells, {s: (Fraction(1), Fraction(-1, 2)) for s in inner})  # 1 - x/2 near the centre
print(alpha.format())

beta = d_second(alpha)
print(beta.format())
print("integral of d''alpha:", integrate(beta))

# d'' of d' is the ddc operator of potential theory.
sub = Subdivision(star)
f = PLFunction(sub, {"c": 0, "a": 1, "b": 3, "d": -1})
print("ddc f   =", ddc(f))
print("d''d' f =", DiscreteMeasure(d_second(d_prime(Form.from_function(f))).values))
