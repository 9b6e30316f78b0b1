"""Exact counting of convex-hull peeling sequences.

A peeling sequence removes one currently-extreme point at a time until
the set is empty; this package counts such sequences exactly over
rational coordinates, builds recursive certified low-count families, and
verifies the inequalities governing their growth by integer arithmetic.
"""

from peelcount.geometry import (
    CapacityError,
    DegeneracyError,
    LayerDecomposition,
    PointSet,
    convex_hull_2d,
    convex_layers,
    extreme_points,
    flatten,
    is_extreme,
    is_general_position,
    orientation,
    rat,
    shear_to_distinct_first_coord,
)
from peelcount.peeling import (
    count,
    count_bruteforce,
    count_layer_sequences,
    enumerate_sequences,
    extend_peeling,
    induced_subsequence,
    is_peeling_sequence,
    simplify,
)
from peelcount.constructions import (
    BlockTree,
    CertificationError,
    Construction,
    ConstructionSpec,
    InvariantReport,
    build_simplex,
    build_ternary,
    build_threeblock,
    certify_epsilon,
    verify_all_levels,
    verify_invariant,
)

__version__ = "0.1.0"

__all__ = [
    "BlockTree",
    "CapacityError",
    "CertificationError",
    "Construction",
    "ConstructionSpec",
    "DegeneracyError",
    "InvariantReport",
    "LayerDecomposition",
    "PointSet",
    "build_simplex",
    "build_ternary",
    "build_threeblock",
    "certify_epsilon",
    "convex_hull_2d",
    "convex_layers",
    "count",
    "count_bruteforce",
    "count_layer_sequences",
    "enumerate_sequences",
    "extend_peeling",
    "extreme_points",
    "flatten",
    "induced_subsequence",
    "is_extreme",
    "is_general_position",
    "is_peeling_sequence",
    "orientation",
    "rat",
    "shear_to_distinct_first_coord",
    "simplify",
    "verify_all_levels",
    "verify_invariant",
    "__version__",
]
