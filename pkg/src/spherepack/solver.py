"""Prescribed-curvature solving and numerical rigidity certificates.

The driving object is a convex potential on the positive orthant whose
gradient at a metric is the extended curvature minus the prescribed
target (rescaled by the alpha power of the conformal factor).  The
potential itself is only ever needed up to an additive constant and is
evaluated as a line integral of its gradient, which is a closed
continuous 1-form; minimizing it recovers the unique metric with the
prescribed curvature, up to scaling in the Euclidean alpha-target-zero
regime.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .curvature import (
    PackingMetric,
    alpha_curvature,
    conformal_factors,
    curvature_jacobian,
    _check_metric_size,
    _extended_curvature_batch,
    _extended_curvature_values,
    _require_closed,
    _tet_radii,
)
from .mesh import Complex
from .tetgeom import AdmissibilityError, Geometry, NumericDomainError, q_batch, q_value

logger = logging.getLogger("spherepack")

# Spectral thresholds for certificates.
KERNEL_EIGENVALUE_TOL = 1e-7
KERNEL_COSINE_TOL = 1e-8
# Agreement threshold for recovered metrics in rigidity experiments.
EXPERIMENT_DISTANCE_TOL = 1e-5

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to converge within the refinement cap."""


class Normalization(Enum):
    SUM_SQUARES_FIXED = "sum_squares_fixed"
    NONE = "none"


@dataclass(frozen=True)
class PrescribedTarget:
    """A per-vertex curvature target for a given alpha and geometry."""

    values: np.ndarray
    alpha: float
    geometry: Geometry

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("target must be a non-empty 1-d vector")
        if not np.all(np.isfinite(values)):
            raise ValueError("target entries must be finite")
        object.__setattr__(self, "values", values)

    @property
    def alpha_target_nonpositive(self) -> bool:
        """Whether alpha * target <= 0 holds at every vertex."""
        return bool(np.all(self.alpha * self.values <= 0.0))

    @property
    def alpha_target_identically_zero(self) -> bool:
        """Whether alpha * target vanishes at every vertex."""
        return bool(np.all(self.alpha * self.values == 0.0))

    @property
    def scale_gauge(self) -> bool:
        """Euclidean with alpha * target identically zero: solutions form rays."""
        return self.geometry is Geometry.EUCLIDEAN and self.alpha_target_identically_zero


@dataclass
class SolveOptions:
    max_iterations: int = 500
    gradient_tolerance: float = 1e-9
    normalization: Normalization = Normalization.SUM_SQUARES_FIXED
    initial_radii: np.ndarray | None = None
    armijo_c1: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 40
    rng_seed: int = 0
    quadrature_rel_tol: float = 1e-10

    def __post_init__(self):
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.gradient_tolerance <= 0 or self.quadrature_rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not 0.0 < self.armijo_c1 < 1.0:
            raise ValueError("armijo_c1 must lie in (0, 1)")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a prescribed-curvature solve.

    converged is true only when the gradient tolerance was met at an
    admissible metric.  A vanishing gradient at an inadmissible point
    is the distinct outcome status == "extended_critical_point".
    trajectory_summary holds (iteration, max-norm of gradient,
    potential value relative to the initial metric).
    """

    radii: np.ndarray
    converged: bool
    status: str
    final_gradient_norm: float
    iterations: int
    trajectory_summary: tuple


def is_admissible(c: Complex, radii, geometry: Geometry) -> bool:
    """Whether every tetrahedron is nondegenerate under the given radii."""
    radii_list = np.asarray(radii, dtype=float).tolist()
    return all(
        q_value(_tet_radii(radii_list, tet), geometry) > 0.0 for tet in c.tetrahedra
    )


def _gradient_values(c: Complex, radii: np.ndarray, t: PrescribedTarget) -> np.ndarray:
    # Lean path: callers guarantee sizes, geometry and positivity.
    k = _extended_curvature_values(c, radii.tolist(), t.geometry)
    s = radii if t.geometry is Geometry.EUCLIDEAN else np.tanh(0.5 * radii)
    return k - t.values * s ** t.alpha


def _gradient_rows(c: Complex, rows: np.ndarray, t: PrescribedTarget) -> np.ndarray:
    # Vectorized over an (m, N) array of radius rows.
    k = _extended_curvature_batch(c, rows, t.geometry)
    s = rows if t.geometry is Geometry.EUCLIDEAN else np.tanh(0.5 * rows)
    return k - t.values[None, :] * s ** t.alpha


def potential_gradient(c: Complex, m: PackingMetric, t: PrescribedTarget) -> np.ndarray:
    """Extended curvature minus the target scaled by the conformal power.

    Defined for every positive metric, admissible or not.
    """
    _check_target(c, m, t)
    return _gradient_values(c, m.radii, t)


def _admissibility_breakpoints(c: Complex, r0: np.ndarray, r1: np.ndarray, geometry: Geometry) -> list:
    """Parameters in (0, 1) where some tetrahedron changes admissibility.

    Along the segment each nondegeneracy quadratic is smooth, so sign
    changes are scanned on a 64-interval grid and sharpened by
    bisection.  The gradient 1-form is analytic between consecutive
    crossings.
    """
    direction = r1 - r0
    scan = np.linspace(0.0, 1.0, 65)
    rows = r0[None, :] + scan[:, None] * direction[None, :]
    r0_list = r0.tolist()
    step_list = direction.tolist()
    points = []
    for tet in c.tetrahedra:
        signs = q_batch(rows[:, tet], geometry) > 0.0
        changes = np.flatnonzero(signs[1:] != signs[:-1])
        if changes.size == 0:
            continue
        base = tuple(r0_list[v] for v in tet)
        step = tuple(step_list[v] for v in tet)

        def q_at(s):
            return q_value(
                (base[0] + s * step[0], base[1] + s * step[1],
                 base[2] + s * step[2], base[3] + s * step[3]),
                geometry,
            )

        for idx in changes:
            lo, hi = float(scan[idx]), float(scan[idx + 1])
            lo_pos = bool(signs[idx])
            for _ in range(55):
                mid = 0.5 * (lo + hi)
                if (q_at(mid) > 0.0) == lo_pos:
                    lo = mid
                else:
                    hi = mid
            points.append(0.5 * (lo + hi))
    return sorted(p for p in points if 1e-12 < p < 1.0 - 1e-12)


_HALF_PI = 0.5 * math.pi


def _segment_integral(
    gradient_rows,
    r0: np.ndarray,
    r1: np.ndarray,
    rel_tol: float,
    breakpoints=(),
) -> float:
    """Integral of the gradient 1-form along the straight segment r0 -> r1.

    The segment is split at the admissibility crossings and each piece
    is reparameterized by s = a + (b - a) sin^2(theta).  Solid angles
    are analytic functions of the square root of the distance to a
    crossing, so the substitution makes each piece's integrand analytic
    in theta and 16-point Gauss-Legendre converges spectrally under
    recursive bisection.  gradient_rows maps an (m, N) array of radius
    rows to their (m, N) gradients.
    """
    direction = r1 - r0
    if not np.any(direction):
        return 0.0

    def panel(piece_a: float, width: float, ta: float, tb: float) -> float:
        mid, half = 0.5 * (ta + tb), 0.5 * (tb - ta)
        theta = mid + half * _GL_NODES
        s = piece_a + width * np.sin(theta) ** 2
        rows = r0[None, :] + s[:, None] * direction[None, :]
        f = gradient_rows(rows) @ direction
        values = f * (width * np.sin(2.0 * theta))
        return half * float(np.dot(_GL_WEIGHTS, values))

    knots = [0.0] + [s for s in breakpoints if 0.0 < s < 1.0] + [1.0]
    pieces = [(a, b - a) for a, b in zip(knots, knots[1:]) if b > a]
    wholes = [panel(a, w, 0.0, _HALF_PI) for a, w in pieces]
    if not all(math.isfinite(w) for w in wholes):
        raise QuadratureError("non-finite integrand on the segment")
    scale = max(1.0, math.fsum(abs(w) for w in wholes))
    abs_floor = rel_tol * scale

    def refine(pa: float, pw: float, ta: float, tb: float, estimate: float, depth: int) -> float:
        mid = 0.5 * (ta + tb)
        left = panel(pa, pw, ta, mid)
        right = panel(pa, pw, mid, tb)
        better = left + right
        if abs(better - estimate) <= max(rel_tol * abs(better), abs_floor * (tb - ta)):
            return better
        if tb - ta <= 1e-9:
            return better
        if depth >= 48:
            raise QuadratureError(
                f"no convergence on theta interval [{ta}, {tb}]: "
                f"estimates {estimate!r} vs {better!r}"
            )
        return refine(pa, pw, ta, mid, left, depth + 1) + refine(pa, pw, mid, tb, right, depth + 1)

    return math.fsum(
        refine(a, w, 0.0, _HALF_PI, whole, 0) for (a, w), whole in zip(pieces, wholes)
    )


def potential_value(
    c: Complex,
    m: PackingMetric,
    t: PrescribedTarget,
    reference: PackingMetric,
    rel_tol: float = 1e-10,
) -> float:
    """Potential at m, normalized to vanish at the (admissible) reference.

    Evaluated as the line integral of potential_gradient along the
    straight segment from the reference; path independence holds
    because the integrand is a closed continuous 1-form.
    """
    _check_target(c, m, t)
    _check_metric_size(c, reference)
    if reference.geometry is not m.geometry:
        raise ValueError("reference and metric geometries differ")
    if not is_admissible(c, reference.radii, reference.geometry):
        raise AdmissibilityError("reference metric must be admissible")
    return _integrate_gradient(c, t, reference.radii, m.radii, rel_tol)


def _integrate_gradient(c: Complex, t: PrescribedTarget, r0: np.ndarray, r1: np.ndarray, rel_tol: float) -> float:
    def gradient_rows(rows):
        return _gradient_rows(c, rows, t)

    breakpoints = _admissibility_breakpoints(c, r0, r1, t.geometry)
    return _segment_integral(gradient_rows, r0, r1, rel_tol, breakpoints)


def _hessian(c: Complex, m: PackingMetric, t: PrescribedTarget) -> np.ndarray:
    """Curvature Jacobian minus the diagonal from the target term."""
    h = curvature_jacobian(c, m).matrix.copy()
    if t.alpha != 0.0:
        r = m.radii
        if m.geometry is Geometry.EUCLIDEAN:
            ds = t.alpha * r ** (t.alpha - 1.0)
        else:
            half = 0.5 * r
            ds = t.alpha * np.tanh(half) ** (t.alpha - 1.0) * 0.5 / np.cosh(half) ** 2
        h -= np.diag(t.values * ds)
    return h


def _projected_newton_step(h: np.ndarray, g: np.ndarray, r: np.ndarray) -> np.ndarray:
    # Solve the restricted system on the orthogonal complement of r via
    # the bordered KKT matrix; removes the scaling gauge direction in
    # which the Hessian is singular.
    n = g.size
    kkt = np.zeros((n + 1, n + 1))
    kkt[:n, :n] = h
    kkt[:n, n] = r
    kkt[n, :n] = r
    rhs = np.zeros(n + 1)
    rhs[:n] = -g
    step = np.linalg.solve(kkt, rhs)
    return step[:n]


def solve_prescribed(c: Complex, t: PrescribedTarget, opts: SolveOptions | None = None) -> SolveResult:
    """Minimize the potential to find a metric with the prescribed curvature.

    Damped Newton steps are taken while the iterate is admissible (the
    potential is smooth there); elsewhere only first-order data is
    trusted and the method falls back to gradient descent.  Steps are
    shrunk to keep all radii positive, then backtracked under the
    Armijo condition on the potential, whose value is tracked
    incrementally by line integrals.  In the Euclidean scale-gauge
    regime every iterate is renormalized to the initial sum of squares.
    """
    if opts is None:
        opts = SolveOptions()
    _require_closed(c)
    n = c.vertex_count
    if t.values.size != n:
        raise ValueError(f"target has {t.values.size} entries but complex has {n} vertices")

    r = np.ones(n) if opts.initial_radii is None else np.asarray(opts.initial_radii, dtype=float).copy()
    if r.size != n:
        raise ValueError(f"initial radii have size {r.size}, expected {n}")
    if np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise ValueError("initial radii must be positive and finite")

    gauge = t.scale_gauge
    renormalize = gauge and opts.normalization is Normalization.SUM_SQUARES_FIXED
    norm_sq = float(np.dot(r, r))

    potential = 0.0  # relative to the initial metric
    trajectory = []
    status = "iteration_limit"
    iteration = 0
    g = _gradient_values(c, r, t)
    gnorm = float(np.max(np.abs(g)))

    for iteration in range(opts.max_iterations):
        trajectory.append((iteration, gnorm, potential))
        if gnorm <= opts.gradient_tolerance:
            status = "converged" if is_admissible(c, r, t.geometry) else "extended_critical_point"
            break
        if not np.all(np.isfinite(g)):
            raise NumericDomainError(f"non-finite gradient at iteration {iteration}")

        direction = None
        if is_admissible(c, r, t.geometry):
            try:
                h = _hessian(c, m=PackingMetric(r, t.geometry), t=t)
                if gauge:
                    direction = _projected_newton_step(h, g, r)
                else:
                    direction = np.linalg.solve(h, -g)
            except (np.linalg.LinAlgError, AdmissibilityError, NumericDomainError):
                direction = None
            if direction is not None and float(np.dot(g, direction)) >= 0.0:
                direction = None
        if direction is None:
            direction = -g
            if gauge:
                direction = direction - (np.dot(direction, r) / np.dot(r, r)) * r
        slope = float(np.dot(g, direction))
        if slope >= 0.0:
            status = "line_search_stall"
            break

        # Keep all radii strictly positive before testing decrease.
        step = 1.0
        shrink = 0
        while np.any(r + step * direction <= 0.0):
            step *= opts.backtrack_factor
            shrink += 1
            if shrink > opts.max_backtracks:
                break
        accepted = False
        for _ in range(opts.max_backtracks):
            trial = r + step * direction
            if np.any(trial <= 0.0):
                step *= opts.backtrack_factor
                continue
            if renormalize:
                trial = trial * math.sqrt(norm_sq / float(np.dot(trial, trial)))
            delta = _integrate_gradient(c, t, r, trial, opts.quadrature_rel_tol)
            if delta <= opts.armijo_c1 * step * slope:
                r = trial
                potential += delta
                accepted = True
                break
            step *= opts.backtrack_factor
        if not accepted:
            status = "line_search_stall"
            break
        g = _gradient_values(c, r, t)
        gnorm = float(np.max(np.abs(g)))
        logger.debug("iter %d: |grad|=%.3e potential=%.12e step=%.3e", iteration + 1, gnorm, potential, step)
    else:
        iteration = opts.max_iterations
        trajectory.append((iteration, gnorm, potential))

    if status in ("iteration_limit", "line_search_stall") and gnorm <= opts.gradient_tolerance:
        status = "converged" if is_admissible(c, r, t.geometry) else "extended_critical_point"
    if trajectory and trajectory[-1][0] != iteration:
        trajectory.append((iteration, gnorm, potential))

    return SolveResult(
        radii=r,
        converged=status == "converged",
        status=status,
        final_gradient_norm=gnorm,
        iterations=iteration,
        trajectory_summary=tuple(trajectory),
    )


@dataclass(frozen=True)
class RigidityCertificate:
    """Spectral report on the potential Hessian at an admissible metric."""

    regime: str
    certified: bool
    eigenvalues: np.ndarray
    kernel_residual: float | None
    kernel_cosine: float | None


def rigidity_certificate(c: Complex, m: PackingMetric, t: PrescribedTarget) -> RigidityCertificate:
    """Certify the definiteness structure of the potential Hessian.

    Euclidean with alpha*target identically zero: positive
    semi-definite with a one-dimensional kernel along the radius
    vector.  Euclidean with alpha*target nonpositive and not
    identically zero, and hyperbolic with alpha*target nonpositive:
    positive definite.  Other sign patterns are reported without a
    claim.
    """
    _check_target(c, m, t)
    h = _hessian(c, m, t)
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (h + h.T))

    if t.scale_gauge:
        regime = "euclidean_scale_gauge"
        kernel_residual = float(np.max(np.abs(h @ m.radii)))
        near_zero = np.abs(eigenvalues) <= KERNEL_EIGENVALUE_TOL
        unit_r = m.radii / np.linalg.norm(m.radii)
        if np.count_nonzero(near_zero) == 1:
            vec = eigenvectors[:, int(np.flatnonzero(near_zero)[0])]
            kernel_cosine = float(abs(np.dot(vec, unit_r)))
        else:
            kernel_cosine = 0.0
        certified = (
            np.count_nonzero(near_zero) == 1
            and bool(np.all(eigenvalues[~near_zero] > 0.0))
            and kernel_cosine >= 1.0 - KERNEL_COSINE_TOL
        )
        return RigidityCertificate(regime, certified, eigenvalues, kernel_residual, kernel_cosine)

    if t.alpha_target_nonpositive:
        regime = (
            "euclidean_definite" if t.geometry is Geometry.EUCLIDEAN else "hyperbolic_definite"
        )
        certified = bool(np.all(eigenvalues > 0.0))
        return RigidityCertificate(regime, certified, eigenvalues, None, None)

    return RigidityCertificate("uncertified", False, eigenvalues, None, None)


@dataclass(frozen=True)
class TrialOutcome:
    index: int
    converged: bool
    status: str
    iterations: int
    final_gradient_norm: float
    distance_to_truth: float | None


@dataclass(frozen=True)
class ExperimentReport:
    """Multistart uniqueness check for a prescribed-curvature problem."""

    passed: bool
    geometry: Geometry
    alpha: float
    trials: tuple
    max_pairwise_distance: float | None
    ground_truth: np.ndarray
    target: np.ndarray
    alpha_target_nonpositive: bool
    alpha_target_identically_zero: bool
    extended_critical_points: tuple
    seed: int
    gradient_tolerance: float


def sample_admissible_metric(c: Complex, geometry: Geometry, rng: np.random.Generator) -> np.ndarray:
    """Log-uniform radii in [0.5, 2] per vertex, rejected until admissible."""
    log_lo, log_hi = math.log(0.5), math.log(2.0)
    for _ in range(10000):
        radii = np.exp(rng.uniform(log_lo, log_hi, c.vertex_count))
        if is_admissible(c, radii, geometry):
            return radii
    raise RuntimeError("failed to sample an admissible metric in 10000 attempts")


def rigidity_experiment(
    c: Complex,
    geometry: Geometry,
    alpha: float,
    trials: int,
    seed: int,
    opts: SolveOptions | None = None,
) -> ExperimentReport:
    """Recover a sampled metric from many starts and measure the spread.

    A ground-truth metric is sampled, its alpha-curvature becomes the
    target, and the solve is repeated from random admissible
    initializations.  The experiment passes when every trial converges
    and the recovered metrics agree to within EXPERIMENT_DISTANCE_TOL
    in the max norm, after scale normalization in the Euclidean
    scale-gauge regime.  Uniqueness is what is being tested; a
    non-converged trial is reported as failure, not as evidence about
    existence.
    """
    _require_closed(c)
    if trials <= 0:
        raise ValueError("trials must be positive")
    base_opts = opts if opts is not None else SolveOptions()
    rng = np.random.default_rng(seed)

    ground_truth = sample_admissible_metric(c, geometry, rng)
    target_values = alpha_curvature(c, PackingMetric(ground_truth, geometry), alpha).values
    target = PrescribedTarget(values=target_values, alpha=alpha, geometry=geometry)

    def gauge_normalize(radii):
        if target.scale_gauge:
            return radii * (np.linalg.norm(ground_truth) / np.linalg.norm(radii))
        return radii

    truth_normalized = gauge_normalize(ground_truth)
    outcomes = []
    recovered = []
    extended = []
    for index in range(trials):
        init = sample_admissible_metric(c, geometry, rng)
        result = solve_prescribed(c, target, replace(base_opts, initial_radii=init, rng_seed=seed))
        distance = None
        if result.converged:
            rec = gauge_normalize(result.radii)
            recovered.append(rec)
            distance = float(np.max(np.abs(rec - truth_normalized)))
        elif result.status == "extended_critical_point":
            extended.append(index)
        outcomes.append(
            TrialOutcome(
                index=index,
                converged=result.converged,
                status=result.status,
                iterations=result.iterations,
                final_gradient_norm=result.final_gradient_norm,
                distance_to_truth=distance,
            )
        )

    max_pairwise = None
    if recovered:
        max_pairwise = 0.0
        for i in range(len(recovered)):
            for j in range(i + 1, len(recovered)):
                max_pairwise = max(
                    max_pairwise, float(np.max(np.abs(recovered[i] - recovered[j])))
                )
    passed = (
        len(recovered) == trials
        and max_pairwise is not None
        and max_pairwise <= EXPERIMENT_DISTANCE_TOL
    )
    return ExperimentReport(
        passed=passed,
        geometry=geometry,
        alpha=float(alpha),
        trials=tuple(outcomes),
        max_pairwise_distance=max_pairwise,
        ground_truth=ground_truth,
        target=target_values,
        alpha_target_nonpositive=target.alpha_target_nonpositive,
        alpha_target_identically_zero=target.alpha_target_identically_zero,
        extended_critical_points=tuple(extended),
        seed=seed,
        gradient_tolerance=base_opts.gradient_tolerance,
    )


def _check_target(c: Complex, m: PackingMetric, t: PrescribedTarget):
    _require_closed(c)
    _check_metric_size(c, m)
    if t.values.size != c.vertex_count:
        raise ValueError(f"target has {t.values.size} entries but complex has {c.vertex_count} vertices")
    if t.geometry is not m.geometry:
        raise ValueError("target and metric geometries differ")
