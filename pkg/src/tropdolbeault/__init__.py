"""Tropical Dolbeault cohomology of curves, computed on skeleton metric graphs.

All arithmetic is exact (:class:`fractions.Fraction`).
"""

from .dimension import INFINITE, dim_json, dim_str, is_finite
from .graph import (
    BoundaryEnd,
    Edge,
    GraphError,
    MetricGraph,
    OpenSubset,
    Region,
    RegionError,
    ResidueModel,
    Segment,
    SkeletonSyntaxError,
    Subdivision,
    SubdivisionPoint,
    Vertex,
    betti,
    extract_region,
    load_graph,
    parse_graph,
    parse_region_spec,
    positive_genus_vertices,
    s_dimension,
    serialize,
    subdivide,
)
from .potential import (
    DiscreteMeasure,
    NonzeroMassError,
    PLFunction,
    ddc,
    dirac,
    green_solve,
    harmonic_space,
    parse_measure,
    random_measure,
    resolution_audit,
)
from .dolbeault import (
    COMPACT,
    FULL,
    DegreeError,
    Form,
    cochain_complex,
    cohomology,
    d_prime,
    d_second,
    hodge_numbers,
    integrate,
    wedge,
)
from .sequences import (
    ConsistencyError,
    HodgeTable,
    aff_h1_dim,
    finiteness_verdict,
    hodge_table,
    symmetry_check,
    pd_verdict,
    sequence_audit,
)
from .pairing import (
    Cover,
    InfiniteDimensionError,
    mv_audit,
    pairing_matrix,
    pd_check,
    predict_fourth,
    subset_hodge,
    three_of_four,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryEnd",
    "COMPACT",
    "ConsistencyError",
    "Cover",
    "DegreeError",
    "DiscreteMeasure",
    "Edge",
    "FULL",
    "Form",
    "GraphError",
    "HodgeTable",
    "INFINITE",
    "InfiniteDimensionError",
    "MetricGraph",
    "NonzeroMassError",
    "OpenSubset",
    "PLFunction",
    "Region",
    "RegionError",
    "ResidueModel",
    "Segment",
    "SkeletonSyntaxError",
    "Subdivision",
    "SubdivisionPoint",
    "Vertex",
    "aff_h1_dim",
    "betti",
    "cochain_complex",
    "cohomology",
    "d_prime",
    "d_second",
    "ddc",
    "dim_json",
    "dim_str",
    "dirac",
    "extract_region",
    "finiteness_verdict",
    "green_solve",
    "harmonic_space",
    "hodge_numbers",
    "hodge_table",
    "integrate",
    "is_finite",
    "symmetry_check",
    "load_graph",
    "mv_audit",
    "pairing_matrix",
    "parse_graph",
    "parse_measure",
    "parse_region_spec",
    "pd_check",
    "pd_verdict",
    "positive_genus_vertices",
    "predict_fourth",
    "random_measure",
    "resolution_audit",
    "s_dimension",
    "sequence_audit",
    "serialize",
    "subdivide",
    "subset_hodge",
    "three_of_four",
    "wedge",
]
