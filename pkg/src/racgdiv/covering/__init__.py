"""Square complexes, chambers and coverings of complexes of groups."""

from .chamber import (
    ComplexOfGroups,
    CoveringData,
    CoveringReport,
    VertexTypeMap,
    build_chamber,
    canonical_complex_of_groups,
    check_cog_covering,
    glue_chambers,
    parallelism_classes,
)
from .complex import (
    CellMap,
    Edge,
    Square,
    SquareComplex,
    check_covering_map,
    condition_star_violations,
    parse_cell_list,
    square_subdivision,
)
from .obstruction import ObstructionResult, obstruction_check
from .presentation import build_presentation_complex, census_by_counting, census_small_squares, whitehead_link
from .witness import build_q2, negative_controls, verify_d2_cover

__all__ = [
    "CellMap",
    "ComplexOfGroups",
    "CoveringData",
    "CoveringReport",
    "Edge",
    "ObstructionResult",
    "Square",
    "SquareComplex",
    "VertexTypeMap",
    "build_chamber",
    "build_presentation_complex",
    "build_q2",
    "canonical_complex_of_groups",
    "census_by_counting",
    "census_small_squares",
    "check_cog_covering",
    "check_covering_map",
    "condition_star_violations",
    "glue_chambers",
    "negative_controls",
    "obstruction_check",
    "parallelism_classes",
    "parse_cell_list",
    "square_subdivision",
    "verify_d2_cover",
    "whitehead_link",
]
