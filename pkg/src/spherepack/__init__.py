"""Sphere packing metrics on triangulated 3-manifolds.

Per-tetrahedron Euclidean and hyperbolic geometry, admissibility and
degeneracy classification, combinatorial scalar and alpha curvature,
the convex potential for prescribed curvature, a solver, and spectral
rigidity certificates.
"""

__version__ = "0.1.0"

from .curvature import (
    CurvatureJacobian,
    CurvatureVector,
    PackingMetric,
    alpha_curvature,
    curvature_jacobian,
    extended_curvature,
    scalar_curvature,
    total_action,
)
from .degeneracy import (
    NoFiniteRootError,
    PartitionInvariantError,
    RegionLabel,
    SoddyCoefficients,
    boundary_radius,
    classify,
    extended_solid_angles,
    soddy_coefficients,
    soddy_radius_euclidean,
    soddy_radius_hyperbolic,
)
from .mesh import (
    Complex,
    MeshFormatError,
    ValidationReport,
    parse_mesh,
    parse_radii,
    serialize_mesh,
    validate_closed,
    vertex_star,
)
from .solver import (
    ExperimentReport,
    Normalization,
    PrescribedTarget,
    QuadratureError,
    RigidityCertificate,
    SolveOptions,
    SolveResult,
    is_admissible,
    potential_gradient,
    potential_value,
    rigidity_certificate,
    rigidity_experiment,
    sample_admissible_metric,
    solve_prescribed,
)
from .tetgeom import (
    AdmissibilityError,
    Geometry,
    NumericDomainError,
    TetGeometry,
    cm_volume,
    edge_lengths,
    face_angles,
    gram_minor_check,
    q_euclidean,
    q_euclidean_derivative,
    q_euclidean_grouped,
    q_hyperbolic,
    q_value,
    solid_angle_vector,
    solid_angles,
    tet_jacobian,
    triangle_area,
)

__all__ = [
    "AdmissibilityError",
    "Complex",
    "CurvatureJacobian",
    "CurvatureVector",
    "ExperimentReport",
    "Geometry",
    "MeshFormatError",
    "NoFiniteRootError",
    "Normalization",
    "NumericDomainError",
    "PackingMetric",
    "PartitionInvariantError",
    "PrescribedTarget",
    "QuadratureError",
    "RegionLabel",
    "RigidityCertificate",
    "SoddyCoefficients",
    "SolveOptions",
    "SolveResult",
    "TetGeometry",
    "ValidationReport",
    "alpha_curvature",
    "boundary_radius",
    "classify",
    "cm_volume",
    "curvature_jacobian",
    "edge_lengths",
    "extended_curvature",
    "extended_solid_angles",
    "face_angles",
    "gram_minor_check",
    "is_admissible",
    "parse_mesh",
    "parse_radii",
    "potential_gradient",
    "potential_value",
    "q_euclidean",
    "q_euclidean_derivative",
    "q_euclidean_grouped",
    "q_hyperbolic",
    "q_value",
    "rigidity_certificate",
    "rigidity_experiment",
    "sample_admissible_metric",
    "scalar_curvature",
    "serialize_mesh",
    "soddy_coefficients",
    "soddy_radius_euclidean",
    "soddy_radius_hyperbolic",
    "solid_angle_vector",
    "solid_angles",
    "solve_prescribed",
    "tet_jacobian",
    "total_action",
    "triangle_area",
    "validate_closed",
    "vertex_star",
]
