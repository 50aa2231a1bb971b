"""Curvature quantities of a packing metric over a whole complex.

The scalar curvature at a vertex is 4*pi minus the sum of the solid
angles it carries in its incident tetrahedra; dividing by a power of
the conformal factor (the radius, or tanh of half the radius in the
hyperbolic case) gives the alpha-curvature family.  The curvature
Jacobian is assembled from per-tetrahedron angle Jacobians and is
symmetric positive semi-definite with kernel spanned by the radius
vector (Euclidean) or positive definite (hyperbolic).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .degeneracy import _degenerate_vertex, classify, extended_solid_angles
from .mesh import Complex, validate_closed
from .tetgeom import (
    AdmissibilityError,
    Geometry,
    NumericDomainError,
    q_batch,
    q_value,
    solid_angle_vector,
    solid_angles_batch,
    tet_jacobian,
)

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class PackingMetric:
    """A positive radius per vertex plus the background geometry."""

    radii: np.ndarray
    geometry: Geometry

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        if radii.ndim != 1 or radii.size == 0:
            raise ValueError("radii must be a non-empty 1-d vector")
        if not np.all(np.isfinite(radii)) or np.any(radii <= 0):
            raise ValueError("all radii must be positive and finite")
        object.__setattr__(self, "radii", radii)


@dataclass(frozen=True)
class CurvatureVector:
    """Per-vertex curvature values for a given alpha exponent."""

    values: np.ndarray
    alpha: float
    extended: bool


@dataclass(frozen=True)
class CurvatureJacobian:
    """The matrix of curvature derivatives with its spectral certificate."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    kernel_residual: float


def _require_closed(c: Complex):
    report = validate_closed(c)
    if not report.is_closed:
        raise ValueError(
            f"complex is not closed: {len(report.offending_faces)} faces "
            "are not shared by exactly 2 tetrahedra"
        )


def _tet_radii(radii_list, tet):
    return (radii_list[tet[0]], radii_list[tet[1]], radii_list[tet[2]], radii_list[tet[3]])


def conformal_factors(m: PackingMetric) -> np.ndarray:
    """The per-vertex factor s_i: the radius, or tanh(r_i / 2) hyperbolically."""
    if m.geometry is Geometry.EUCLIDEAN:
        return m.radii.copy()
    return np.tanh(0.5 * m.radii)


def scalar_curvature(c: Complex, m: PackingMetric) -> CurvatureVector:
    """Angle-deficit curvature 4*pi - sum of incident solid angles."""
    _require_closed(c)
    _check_metric_size(c, m)
    radii = m.radii.tolist()
    values = np.full(c.vertex_count, FOUR_PI)
    for t, tet in enumerate(c.tetrahedra):
        rt = _tet_radii(radii, tet)
        q = q_value(rt, m.geometry)
        if q <= 0.0:
            raise AdmissibilityError(
                f"tetrahedron {t} {tet} is inadmissible: {classify(rt, m.geometry)} (Q = {q!r})"
            )
        alphas = solid_angle_vector(rt, m.geometry)
        for slot, v in enumerate(tet):
            values[v] -= alphas[slot]
    return CurvatureVector(values=values, alpha=0.0, extended=False)


def _extended_curvature_values(c: Complex, radii_list: list, geometry: Geometry) -> np.ndarray:
    # Lean path shared with the solver: no re-validation per call.
    values = np.full(c.vertex_count, FOUR_PI)
    for tet in c.tetrahedra:
        alphas = extended_solid_angles(_tet_radii(radii_list, tet), geometry)
        for slot, v in enumerate(tet):
            values[v] -= alphas[slot]
    return values


def _extended_curvature_batch(c: Complex, radii_rows: np.ndarray, geometry: Geometry) -> np.ndarray:
    """Extended curvature for each row of an (m, N) radius array.

    Vectorizes the admissible rows per tetrahedron; degenerate rows get
    the constant extension through the scalar classifier.
    """
    m = radii_rows.shape[0]
    values = np.full((m, c.vertex_count), FOUR_PI)
    two_pi = 2.0 * math.pi
    for tet in c.tetrahedra:
        tet_rows = radii_rows[:, tet]
        q = q_batch(tet_rows, geometry)
        admissible = q > 0.0
        alphas = np.zeros((m, 4))
        if admissible.any():
            alphas[admissible] = solid_angles_batch(tet_rows[admissible], geometry)
        for row in np.flatnonzero(~admissible):
            vertex = _degenerate_vertex(tuple(tet_rows[row]), geometry)
            alphas[row, vertex] = two_pi
        values[:, tet] -= alphas
    return values


def extended_curvature(c: Complex, m: PackingMetric) -> CurvatureVector:
    """Curvature through the constant extension of solid angles; never fails."""
    _require_closed(c)
    _check_metric_size(c, m)
    values = _extended_curvature_values(c, m.radii.tolist(), m.geometry)
    return CurvatureVector(values=values, alpha=0.0, extended=True)


def alpha_curvature(c: Complex, m: PackingMetric, alpha: float) -> CurvatureVector:
    """Scalar curvature rescaled by the alpha power of the conformal factor."""
    base = scalar_curvature(c, m)
    values = base.values / conformal_factors(m) ** alpha
    return CurvatureVector(values=values, alpha=float(alpha), extended=False)


def total_action(c: Complex, m: PackingMetric) -> float:
    """Total curvature functional sum K_i r_i (Euclidean only).

    The hyperbolic counterpart needs the manifold volume, which this
    toolkit deliberately never evaluates; only gradients are used there.
    """
    if m.geometry is not Geometry.EUCLIDEAN:
        raise ValueError("total_action requires Euclidean geometry")
    return float(np.dot(scalar_curvature(c, m).values, m.radii))


def curvature_jacobian(c: Complex, m: PackingMetric, symmetrize: bool = True) -> CurvatureJacobian:
    """Assemble the curvature derivative matrix and its spectral data.

    Per-tetrahedron angle Jacobians are negated and scattered into the
    global matrix in tetrahedron order, so repeated runs are
    bit-identical.
    """
    _require_closed(c)
    _check_metric_size(c, m)
    radii = m.radii.tolist()
    n = c.vertex_count
    matrix = np.zeros((n, n))
    for t, tet in enumerate(c.tetrahedra):
        rt = _tet_radii(radii, tet)
        try:
            jac = tet_jacobian(rt, m.geometry, symmetrize=symmetrize)
        except AdmissibilityError:
            raise AdmissibilityError(
                f"tetrahedron {t} {tet} is inadmissible: {classify(rt, m.geometry)}"
            ) from None
        idx = np.array(tet)
        matrix[np.ix_(idx, idx)] -= jac
    if symmetrize:
        residual = float(np.max(np.abs(matrix - matrix.T)))
        if residual > 1e-4 * (1.0 + float(np.max(np.abs(matrix)))):
            raise NumericDomainError(f"curvature Jacobian asymmetric: residual {residual!r}")
        matrix = 0.5 * (matrix + matrix.T)
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (matrix + matrix.T))
    kernel_residual = float(np.max(np.abs(matrix @ m.radii)))
    return CurvatureJacobian(
        matrix=matrix,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        kernel_residual=kernel_residual,
    )


def _check_metric_size(c: Complex, m: PackingMetric):
    if m.radii.size != c.vertex_count:
        raise ValueError(f"metric has {m.radii.size} radii but complex has {c.vertex_count} vertices")
