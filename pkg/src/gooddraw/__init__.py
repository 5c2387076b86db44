"""Good drawings of complete graphs: rotation systems, realization, census.

The package splits into three layers.  :mod:`gooddraw.rotation` holds the
combinatorial core: rotation systems of K_n, triangle emptiness, vertex
analytics and a canonical form under relabeling and mirroring.
:mod:`gooddraw.drawing` decides realizability by constructing an explicit
crossing-annotated planar map for a rotation system, or certifying that none
exists.  :mod:`gooddraw.census` enumerates all realizable weak-isomorphism
classes up to a given size and checks quantitative claims about empty
triangles against the full catalogue.  ``gooddraw.cli`` exposes the lot as a
command-line tool.
"""

from gooddraw.census import (
    CensusRecord,
    CensusSummary,
    ClaimReport,
    claim_names,
    dump_census,
    enumerate_classes,
    load_census,
    summarize,
    verify_claim,
)
from gooddraw.drawing import (
    DrawParseError,
    RealizedDrawing,
    dump_draw,
    k4_table,
    load_draw,
    realize,
)
from gooddraw.rotation import (
    CanonicalForm,
    RotParseError,
    RotationSystem,
    SidePartition,
    UnrealizableError,
    VertexStats,
    canonical_form,
    canonical_key,
    convex_rotation,
    crossing_pairs,
    dump_rot,
    empty_star_triangles,
    empty_triangles,
    is_empty,
    is_mirror_symmetric,
    parse_rot,
    rotation_from_key,
    side_partition,
    validate,
    vertex_stats,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm",
    "CensusRecord",
    "CensusSummary",
    "ClaimReport",
    "DrawParseError",
    "RealizedDrawing",
    "RotParseError",
    "RotationSystem",
    "SidePartition",
    "UnrealizableError",
    "VertexStats",
    "canonical_form",
    "canonical_key",
    "claim_names",
    "convex_rotation",
    "crossing_pairs",
    "dump_census",
    "dump_draw",
    "dump_rot",
    "empty_star_triangles",
    "empty_triangles",
    "enumerate_classes",
    "is_empty",
    "is_mirror_symmetric",
    "k4_table",
    "load_census",
    "load_draw",
    "parse_rot",
    "realize",
    "rotation_from_key",
    "side_partition",
    "summarize",
    "validate",
    "verify_claim",
    "vertex_stats",
    "__version__",
]
