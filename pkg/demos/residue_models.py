"""How the residue curves change the answer.

The same skeleton, a loop through a genus-one component, read under three
residue models.  Over a finite field nothing changes.  With an explicit
Picard rank, the top Hodge number grows and duality fails.  Over the
complex numbers the top group is infinite-dimensional.
"""

from fractions import Fraction

from tropdolbeault import Edge, MetricGraph, ResidueModel, Vertex, hodge_table, pd_check, pd_verdict, sequence_audit

g = MetricGraph([Vertex("v", genus=1, picrank=2)], [Edge("e", "v", "v", Fraction(1))])

for model in ResidueModel:
    table = hodge_table(g, model)
    print(f"[{model.value}] PD={pd_verdict(g, model).value}")
    for line in table.lines():
        print("   ", line)
    for audit in sequence_audit(g, model):
        print("   ", audit.line())

# With the explicit model, the H^{0,0} x H_c^{1,1} pairing is 1 x 3.
print(pd_check(g, ResidueModel.EXPLICIT).reason)
