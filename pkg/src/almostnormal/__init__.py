"""Normal and octagonal almost normal surfaces in 3-manifold triangulations."""
from .coords import (
    CoordSystem,
    CoordVector,
    EquationSystem,
    Verdict,
    check_admissible,
    constraint_sets,
    matching_matrix,
)
from .dd import RaySet, apply_star_filter, brute_force_admissible, enumerate_vertex_rays
from .homology import AbelianGroup, first_homology
from .lens import make_layered_lens_space
from .recognize import (
    find_almost_normal_sphere,
    recognize_sphere,
    verify_zero_efficiency,
)
from .surface import (
    build_cell_complex,
    components,
    euler_characteristic,
    extend_to_standard,
    from_joint,
    project,
    to_joint,
)
from .triangulation import (
    LinkSurface,
    ParseError,
    Skeleton,
    Triangulation,
    TriangulationError,
    build_skeleton,
    is_orientable,
    load_triangulation,
    parse_triangulation,
    vertex_link,
)

__all__ = [
    "AbelianGroup",
    "CoordSystem",
    "CoordVector",
    "EquationSystem",
    "LinkSurface",
    "ParseError",
    "RaySet",
    "Skeleton",
    "Triangulation",
    "TriangulationError",
    "Verdict",
    "apply_star_filter",
    "brute_force_admissible",
    "build_cell_complex",
    "build_skeleton",
    "check_admissible",
    "components",
    "constraint_sets",
    "enumerate_vertex_rays",
    "euler_characteristic",
    "extend_to_standard",
    "find_almost_normal_sphere",
    "first_homology",
    "from_joint",
    "is_orientable",
    "load_triangulation",
    "make_layered_lens_space",
    "matching_matrix",
    "parse_triangulation",
    "project",
    "recognize_sphere",
    "to_joint",
    "verify_zero_efficiency",
    "vertex_link",
]
