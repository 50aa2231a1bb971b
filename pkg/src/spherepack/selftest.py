"""Built-in verification suites over the whole toolkit.

Each suite checks one family of structural guarantees at desk scale
with fixed seeds, so repeated runs are byte-identical.  The reference
complexes used throughout live here as well: the boundary of the
4-simplex (5 vertices, 5 tetrahedra, a triangulated 3-sphere) and the
boundary of the 4-dimensional cross polytope (8 vertices, 16
tetrahedra).
"""

import dataclasses
import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .curvature import (
    PackingMetric,
    curvature_jacobian,
    scalar_curvature,
)
from .degeneracy import (
    classify,
    soddy_coefficients,
    soddy_radius_euclidean,
    soddy_radius_hyperbolic,
)
from .mesh import Complex
from .report import render_json
from .solver import (
    PrescribedTarget,
    potential_gradient,
    potential_value,
    rigidity_experiment,
    sample_admissible_metric,
    _integrate_gradient,
)
from .tetgeom import (
    Geometry,
    q_value,
    solid_angles,
    tet_jacobian,
)

DEFAULT_SEED = 20230817


def four_simplex_boundary() -> Complex:
    """The five facets of the 4-simplex: a 5-vertex triangulation of S^3."""
    return Complex(5, [list(t) for t in combinations(range(5), 4)])


def sixteen_cell_boundary() -> Complex:
    """Boundary of the 4-d cross polytope: 8 vertices, 16 tetrahedra.

    Vertices 2k and 2k+1 are the opposite pair on axis k and never
    share an edge.
    """
    tets = [list(t) for t in product((0, 1), (2, 3), (4, 5), (6, 7))]
    return Complex(8, tets)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    details: dict


def _random_admissible_tet(rng: np.random.Generator, geometry: Geometry):
    log_lo, log_hi = math.log(0.5), math.log(2.0)
    while True:
        r = tuple(np.exp(rng.uniform(log_lo, log_hi, 4)))
        if q_value(r, geometry) > 0.0:
            return r


def suite_descartes_identities(seed: int) -> SuiteResult:
    """Constructed boundary configurations satisfy the tangency identities."""
    rng = np.random.default_rng(seed)
    worst_e = 0.0
    worst_h = 0.0
    for _ in range(1000):
        rj, rk, rl = rng.uniform(0.1, 5.0, 3)
        ri = soddy_radius_euclidean(rj, rk, rl)
        k = [1.0 / x for x in (ri, rj, rk, rl)]
        worst_e = max(worst_e, abs(sum(k) ** 2 - 2.0 * sum(x * x for x in k)))
        ri = soddy_radius_hyperbolic(rj, rk, rl)
        k = [1.0 / math.tanh(x) for x in (ri, rj, rk, rl)]
        worst_h = max(worst_h, abs(sum(k) ** 2 - 2.0 * sum(x * x for x in k) + 4.0))
    passed = worst_e <= 1e-9 and worst_h <= 1e-7
    return SuiteResult(
        "descartes_identities",
        passed,
        {"euclidean_max_residual": worst_e, "hyperbolic_max_residual": worst_h, "samples": 1000},
    )


def suite_soddy_boundary(seed: int) -> SuiteResult:
    """Reference values, discriminant identity, and root selection."""
    rng = np.random.default_rng(seed)
    err_111 = abs(soddy_radius_euclidean(1, 1, 1) - (2.0 / math.sqrt(3.0) - 1.0))
    err_144 = abs(soddy_radius_euclidean(1, 4, 4) - 1.0 / 3.0)

    worst_disc = 0.0
    for _ in range(10000):
        rj, rk, rl = rng.uniform(1e-3, 10.0, 3)
        co = soddy_coefficients(rj, rk, rl, Geometry.EUCLIDEAN)
        closed_form = 16.0 * (rj * rk * rl) ** 3 * (rj + rk + rl)
        worst_disc = max(worst_disc, abs(co.discriminant - closed_form) / closed_form)

    # Samples with negative leading coefficient: one radius well below
    # the level where the square roots of pairwise products close a
    # triangle.
    violations = 0
    produced = 0
    while produced < 10000:
        rk, rl = rng.uniform(1.0, 10.0, 2)
        threshold = 1.0 / (1.0 / math.sqrt(rk) + 1.0 / math.sqrt(rl)) ** 2
        rj = rng.uniform(0.05, 0.95) * threshold
        co = soddy_coefficients(rj, rk, rl, Geometry.EUCLIDEAN)
        if co.a >= 0.0:
            continue
        produced += 1
        sqrt_disc = math.sqrt(co.discriminant)
        selected = (-co.b + sqrt_disc) / (2.0 * co.a)
        rejected = (-co.b - sqrt_disc) / (2.0 * co.a)
        if not (selected > 0.0 and rejected > 0.0 and rejected > min(rj, rk, rl)):
            violations += 1
    passed = err_111 <= 1e-12 and err_144 <= 1e-12 and worst_disc <= 1e-10 and violations == 0
    return SuiteResult(
        "soddy_boundary",
        passed,
        {
            "f_111_error": err_111,
            "f_144_error": err_144,
            "max_discriminant_rel_error": worst_disc,
            "rejected_root_violations": violations,
        },
    )


def suite_partition(seed: int) -> SuiteResult:
    """Every point of the positive orthant gets exactly one region label."""
    rng = np.random.default_rng(seed)
    details = {}
    passed = True
    for geometry in (Geometry.EUCLIDEAN, Geometry.HYPERBOLIC):
        samples = rng.uniform(1e-9, 10.0, size=(100000, 4))
        counts = [0, 0, 0, 0, 0]
        failures = 0
        for row in samples:
            try:
                label = classify(tuple(row), geometry)
            except Exception:
                failures += 1
                continue
            counts[0 if label.admissible else 1 + label.vertex] += 1
        details[geometry.value] = {
            "admissible": counts[0],
            "degenerate": counts[1:],
            "label_failures": failures,
        }
        passed = passed and failures == 0 and sum(counts) == 100000
    return SuiteResult("partition", passed, details)


def suite_degenerate_limits(seed: int) -> SuiteResult:
    """Approaching the critical boundary crushes one vertex as expected.

    All angle deficits decay like the square root of the offset, and
    the solid-angle deficit is three times the per-dihedral one, so the
    1e-3 proximity is reached by the dihedrals at offset 1e-8 and by
    the solid angle further along the path (offset 1e-10).
    """
    del seed  # deterministic path
    crit = soddy_radius_euclidean(1.0, 1.0, 1.0)
    offsets = [10.0 ** (-p) for p in range(2, 11)]
    crushed, spared, edge_near, edge_far = [], [], [], []
    for t in offsets:
        geo = solid_angles((crit + t, 1.0, 1.0, 1.0), Geometry.EUCLIDEAN)
        crushed.append(float(geo.solid_angles[0]))
        spared.append(float(np.max(geo.solid_angles[1:])))
        edge_near.append(float(np.min(geo.dihedral_angles[:3])))
        edge_far.append(float(np.max(geo.dihedral_angles[3:])))
    monotone = (
        all(a < b for a, b in zip(crushed, crushed[1:]))
        and all(a > b for a, b in zip(spared, spared[1:]))
        and all(a < b for a, b in zip(edge_near, edge_near[1:]))
        and all(a > b for a, b in zip(edge_far, edge_far[1:]))
    )
    at_1e8 = offsets.index(1e-8)
    final_ok = (
        crushed[-1] >= 2.0 * math.pi - 1e-3
        and spared[at_1e8] <= 1e-3
        and edge_near[at_1e8] >= math.pi - 1e-3
        and edge_far[at_1e8] <= 1e-3
    )
    return SuiteResult(
        "degenerate_limits",
        monotone and final_ok,
        {
            "monotone": monotone,
            "crushed_final": crushed[-1],
            "spared_at_1e8": spared[at_1e8],
            "near_dihedral_at_1e8": edge_near[at_1e8],
            "far_dihedral_at_1e8": edge_far[at_1e8],
        },
    )


def suite_single_tet_concavity(seed: int) -> SuiteResult:
    """Angle Jacobians are symmetric and negative (semi-)definite."""
    rng = np.random.default_rng(seed)
    details = {}
    passed = True
    for geometry in (Geometry.EUCLIDEAN, Geometry.HYPERBOLIC):
        worst_sym = 0.0
        worst_kernel = 0.0
        max_other = -math.inf
        for _ in range(100):
            r = _random_admissible_tet(rng, geometry)
            raw = tet_jacobian(r, geometry, symmetrize=False)
            worst_sym = max(worst_sym, float(np.max(np.abs(raw - raw.T))))
            jac = 0.5 * (raw + raw.T)
            eigenvalues = np.linalg.eigvalsh(jac)
            if geometry is Geometry.EUCLIDEAN:
                worst_kernel = max(worst_kernel, float(np.max(np.abs(jac @ np.array(r)))))
                max_other = max(max_other, float(eigenvalues[-2]))
                if abs(eigenvalues[-1]) > 1e-7:
                    passed = False
            else:
                max_other = max(max_other, float(eigenvalues[-1]))
        ok = worst_sym <= 1e-7 and max_other < -1e-10
        if geometry is Geometry.EUCLIDEAN:
            ok = ok and worst_kernel <= 1e-7
        passed = passed and ok
        details[geometry.value] = {
            "max_symmetry_residual": worst_sym,
            "max_kernel_residual": worst_kernel,
            "largest_nonkernel_eigenvalue": max_other,
        }
    return SuiteResult("single_tet_concavity", passed, details)


def suite_jacobian_spectrum(seed: int) -> SuiteResult:
    """Curvature Jacobian spectra on the 4-simplex boundary."""
    rng = np.random.default_rng(seed)
    c = four_simplex_boundary()
    details = {}
    passed = True
    for geometry in (Geometry.EUCLIDEAN, Geometry.HYPERBOLIC):
        worst_cosine = 1.0
        min_positive = math.inf
        bad = 0
        for _ in range(50):
            radii = sample_admissible_metric(c, geometry, rng)
            jac = curvature_jacobian(c, PackingMetric(radii, geometry))
            near_zero = np.abs(jac.eigenvalues) <= 1e-7
            if geometry is Geometry.EUCLIDEAN:
                if np.count_nonzero(near_zero) != 1 or not np.all(
                    jac.eigenvalues[~near_zero] > 0.0
                ):
                    bad += 1
                    continue
                vec = jac.eigenvectors[:, int(np.flatnonzero(near_zero)[0])]
                cosine = abs(float(np.dot(vec, radii / np.linalg.norm(radii))))
                worst_cosine = min(worst_cosine, cosine)
                min_positive = min(min_positive, float(np.min(jac.eigenvalues[~near_zero])))
            else:
                if not np.all(jac.eigenvalues > 0.0):
                    bad += 1
                min_positive = min(min_positive, float(np.min(jac.eigenvalues)))
        ok = bad == 0
        if geometry is Geometry.EUCLIDEAN:
            ok = ok and worst_cosine >= 1.0 - 1e-8
        passed = passed and ok
        details[geometry.value] = {
            "violations": bad,
            "worst_kernel_cosine": worst_cosine if geometry is Geometry.EUCLIDEAN else None,
            "smallest_positive_eigenvalue": min_positive,
        }
    return SuiteResult("jacobian_spectrum", passed, details)


def suite_potential_convexity(seed: int) -> SuiteResult:
    """Midpoint convexity of the potential and consistency of its gradient."""
    rng = np.random.default_rng(seed)
    c = four_simplex_boundary()
    worst_convexity = -math.inf
    worst_gradient = 0.0
    for geometry in (Geometry.EUCLIDEAN, Geometry.HYPERBOLIC):
        truth = sample_admissible_metric(c, geometry, rng)
        target_values = scalar_curvature(c, PackingMetric(truth, geometry)).values
        target = PrescribedTarget(target_values, 0.0, geometry)

        for segment in range(50):
            a = sample_admissible_metric(c, geometry, rng)
            if segment % 2 == 0:
                b = sample_admissible_metric(c, geometry, rng)
                crush = int(rng.integers(0, c.vertex_count))
                b = b.copy()
                b[crush] *= 0.02  # push the far endpoint into a degenerate component
            else:
                b = np.exp(rng.uniform(math.log(0.3), math.log(3.0), c.vertex_count))
            values = [0.0]
            knots = [0.0, 0.25, 0.5, 0.75, 1.0]
            for lo, hi in zip(knots, knots[1:]):
                delta = _integrate_gradient(
                    c, target, a + lo * (b - a), a + hi * (b - a), 1e-10
                )
                values.append(values[-1] + delta)
            for idx, s in ((1, 0.25), (2, 0.5), (3, 0.75)):
                gap = values[idx] - ((1 - s) * values[0] + s * values[4])
                worst_convexity = max(worst_convexity, gap)

        # Gradient of the quadrature-built potential, both sides of the boundary.
        reference = PackingMetric(np.ones(c.vertex_count), geometry)
        probes = []
        for _ in range(3):
            probes.append(sample_admissible_metric(c, geometry, rng))
        for _ in range(3):
            radii = sample_admissible_metric(c, geometry, rng)
            radii[int(rng.integers(0, c.vertex_count))] *= 0.02
            probes.append(radii)
        for radii in probes:
            grad = potential_gradient(c, PackingMetric(radii, geometry), target)
            for i in range(c.vertex_count):
                h = 1e-4
                plus = radii.copy()
                minus = radii.copy()
                plus[i] += h
                minus[i] -= h
                fp = potential_value(c, PackingMetric(plus, geometry), target, reference, rel_tol=1e-12)
                fm = potential_value(c, PackingMetric(minus, geometry), target, reference, rel_tol=1e-12)
                worst_gradient = max(worst_gradient, abs((fp - fm) / (2 * h) - grad[i]))
    passed = worst_convexity <= 1e-8 and worst_gradient <= 1e-5
    return SuiteResult(
        "potential_convexity",
        passed,
        {"max_convexity_gap": worst_convexity, "max_gradient_error": worst_gradient},
    )


def suite_global_rigidity(seed: int) -> SuiteResult:
    """Multistart recovery is unique in all three certified regimes."""
    c = four_simplex_boundary()
    configs = [
        (Geometry.EUCLIDEAN, 0.0),
        (Geometry.HYPERBOLIC, 0.0),
        (Geometry.EUCLIDEAN, -2.0),
    ]
    details = {}
    passed = True
    for offset, (geometry, alpha) in enumerate(configs):
        report = rigidity_experiment(c, geometry, alpha, trials=20, seed=seed + offset)
        key = f"{geometry.value}_alpha_{alpha:g}"
        details[key] = {
            "passed": report.passed,
            "max_pairwise_distance": report.max_pairwise_distance,
            "non_converged": sum(1 for t in report.trials if not t.converged),
        }
        passed = passed and report.passed
    return SuiteResult("global_rigidity", passed, details)


def suite_reference_values(seed: int) -> SuiteResult:
    """Closed-form checks on the regular 4-simplex boundary metric."""
    del seed
    c = four_simplex_boundary()
    regular = 3.0 * math.acos(1.0 / 3.0) - math.pi
    geo = solid_angles((1.0, 1.0, 1.0, 1.0), Geometry.EUCLIDEAN)
    angle_err = float(np.max(np.abs(geo.solid_angles - regular)))
    expected_k = 8.0 * math.pi - 12.0 * math.acos(1.0 / 3.0)
    k = scalar_curvature(c, PackingMetric(np.ones(5), Geometry.EUCLIDEAN)).values
    k_err = float(np.max(np.abs(k - expected_k)))
    passed = angle_err <= 1e-12 and k_err <= 1e-9
    return SuiteResult(
        "reference_values",
        passed,
        {"solid_angle_error": angle_err, "curvature_error": k_err},
    )


def suite_determinism(seed: int) -> SuiteResult:
    """Identical seeds reproduce experiment reports byte for byte."""
    c = four_simplex_boundary()
    first = rigidity_experiment(c, Geometry.EUCLIDEAN, 0.0, trials=3, seed=seed)
    second = rigidity_experiment(c, Geometry.EUCLIDEAN, 0.0, trials=3, seed=seed)
    text_a = render_json(dataclasses.asdict(first))
    text_b = render_json(dataclasses.asdict(second))
    passed = text_a == text_b
    return SuiteResult("determinism", passed, {"byte_identical": passed, "bytes": len(text_a)})


ALL_SUITES = (
    suite_descartes_identities,
    suite_soddy_boundary,
    suite_partition,
    suite_degenerate_limits,
    suite_single_tet_concavity,
    suite_jacobian_spectrum,
    suite_potential_convexity,
    suite_global_rigidity,
    suite_reference_values,
    suite_determinism,
)


def run_selftest(seed: int = DEFAULT_SEED) -> list[SuiteResult]:
    """Run every suite with per-suite seeds derived from the master seed."""
    return [suite(seed + 1000 * i) for i, suite in enumerate(ALL_SUITES)]
