"""Solving ddc f = mu on a metric graph.

On a circle of circumference 2, put a unit source at the vertex and a unit
sink at the antipodal point.  The Green function rises linearly along both
arcs, and its total rise is the effective resistance of two unit arcs in
parallel, which is 1/2.
"""

from fractions import Fraction

from tropdolbeault import Edge, MetricGraph, NonzeroMassError, SubdivisionPoint, Vertex, ddc, dirac, green_solve

circle = MetricGraph([Vertex("v")], [Edge("e", "v", "v", Fraction(2))])
antipode = SubdivisionPoint("e", Fraction(1, 2))

mu = dirac("v") - dirac(antipode)
f = green_solve(circle, mu)
print(f.format())
print("rise from v to the antipode:", f(antipode) - f("v"))

# The answer is exact, so the round trip is an equality of rationals.
assert ddc(f) == mu

# A measure of nonzero mass is not in the image of ddc.
try:
    green_solve(circle, dirac("v"))
except NonzeroMassError as exc:
    print("rejected:", exc)
