"""Per-tetrahedron geometry against closed forms and independent oracles."""

import math

import numpy as np
import pytest

from spherepack import (
    AdmissibilityError,
    Geometry,
    NumericDomainError,
    cm_volume,
    edge_lengths,
    face_angles,
    gram_minor_check,
    q_euclidean,
    q_euclidean_derivative,
    q_euclidean_grouped,
    q_hyperbolic,
    q_value,
    soddy_radius_euclidean,
    soddy_radius_hyperbolic,
    solid_angle_vector,
    solid_angles,
    tet_jacobian,
    triangle_area,
)
from spherepack.tetgeom import EDGE_PAIRS, q_batch, solid_angles_batch

import oracles

E, H = Geometry.EUCLIDEAN, Geometry.HYPERBOLIC
REGULAR_SOLID_ANGLE = 3.0 * math.acos(1.0 / 3.0) - math.pi


def random_admissible(rng, geometry, low=0.5, high=2.0):
    while True:
        r = tuple(np.exp(rng.uniform(math.log(low), math.log(high), 4)))
        if q_value(r, geometry) > 0.0:
            return r


# ---------------------------------------------------------------------------
# Edge lengths and the nondegeneracy quadratics
# ---------------------------------------------------------------------------

def test_edge_lengths_unit():
    assert np.allclose(edge_lengths((1, 1, 1, 1)), 2.0)


def test_edge_lengths_1234():
    lengths = edge_lengths((1, 2, 3, 4))
    expected = {(0, 1): 3, (0, 2): 4, (0, 3): 5, (1, 2): 5, (1, 3): 6, (2, 3): 7}
    for e, pair in enumerate(EDGE_PAIRS):
        assert lengths[e] == expected[pair]


def test_face_triangle_inequalities_automatic(rng):
    for _ in range(100):
        r = rng.uniform(0.01, 10.0, 4)
        lengths = edge_lengths(r)
        lookup = {pair: lengths[e] for e, pair in enumerate(EDGE_PAIRS)}
        lookup.update({(b, a): v for (a, b), v in lookup.items()})
        for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
            assert lookup[i, j] + lookup[i, k] - lookup[j, k] == pytest.approx(2 * r[i])


def test_radii_validation():
    for bad in [(1, 1, 1), (1, 1, 1, 0.0), (1, 1, 1, -2.0), (1, 1, 1, math.nan)]:
        with pytest.raises(ValueError):
            edge_lengths(bad)


def test_q_euclidean_reference_values():
    assert q_euclidean((1, 1, 1, 1)) == pytest.approx(8.0, abs=1e-14)
    assert q_euclidean((2, 2, 2, 2)) == pytest.approx(2.0, abs=1e-14)
    soddy = 2.0 / math.sqrt(3.0) - 1.0
    assert abs(q_euclidean((soddy, 1, 1, 1))) <= 1e-10


def test_q_scaling(rng):
    for _ in range(20):
        r = rng.uniform(0.2, 4.0, 4)
        lam = rng.uniform(0.5, 3.0)
        assert q_euclidean(lam * r) == pytest.approx(q_euclidean(r) / lam**2, rel=1e-12)


def test_q_expanded_vs_grouped_form(rng):
    # Near the zero set both forms cancel, so agreement is measured
    # relative to the magnitude of the terms being combined.
    worst = 0.0
    for _ in range(100000):
        r = rng.uniform(1e-9, 10.0, 4)
        a = q_euclidean(r)
        b = q_euclidean_grouped(r)
        k = 1.0 / r
        scale = float(np.sum(k)) ** 2 + 2.0 * float(np.sum(k * k))
        worst = max(worst, abs(a - b) / scale)
    assert worst <= 1e-12


def test_q_derivative_closed_form_vs_fd(rng):
    for _ in range(200):
        r = rng.uniform(0.1, 5.0, 4)
        mu = int(rng.integers(0, 4))
        analytic = q_euclidean_derivative(tuple(r), mu)
        numeric = oracles.central_difference(lambda x: q_euclidean(tuple(x)), r, mu, 1e-6)
        assert numeric == pytest.approx(analytic, rel=1e-6)


def test_q_hyperbolic_reference_values():
    coth1 = 1.0 / math.tanh(1.0)
    assert q_hyperbolic((1, 1, 1, 1)) == pytest.approx(8.0 * coth1**2 + 4.0, rel=1e-14)
    assert q_hyperbolic((50, 50, 50, 50)) == pytest.approx(12.0, abs=1e-8)
    g = soddy_radius_hyperbolic(1, 1, 1)
    assert abs(q_hyperbolic((g, 1, 1, 1))) <= 1e-8


def test_q_batch_matches_scalar(rng):
    rows = rng.uniform(0.05, 5.0, size=(200, 4))
    for geometry in (E, H):
        batch = q_batch(rows, geometry)
        for i in range(rows.shape[0]):
            assert batch[i] == pytest.approx(q_value(tuple(rows[i]), geometry), rel=1e-13)


# ---------------------------------------------------------------------------
# Hyperbolic Gram-minor criterion
# ---------------------------------------------------------------------------

def test_gram_minor_reference_points():
    assert gram_minor_check((1, 1, 1, 1)) is True
    assert gram_minor_check((0.05, 1, 1, 1)) is False


def test_gram_minor_agrees_with_q(rng):
    for _ in range(10000):
        r = tuple(rng.uniform(1e-6, 5.0, 4))
        assert gram_minor_check(r) == (q_hyperbolic(r) > 0.0)


# ---------------------------------------------------------------------------
# Cayley-Menger volume
# ---------------------------------------------------------------------------

def test_cm_volume_regular():
    assert cm_volume((1, 1, 1, 1)) == pytest.approx(8.0 / (6.0 * math.sqrt(2.0)), rel=1e-12)


def test_cm_volume_scaling():
    v1 = cm_volume((0.7, 1.2, 0.9, 1.4))
    v2 = cm_volume((1.4, 2.4, 1.8, 2.8))
    assert v2 == pytest.approx(8.0 * v1, rel=1e-10)


def test_cm_volume_near_boundary_vanishes():
    crit = soddy_radius_euclidean(1, 1, 1)
    previous = math.inf
    for t in (1e-2, 1e-4, 1e-6):
        v = cm_volume((crit + t, 1, 1, 1))
        assert v < previous
        previous = v
    assert previous < 1e-2


def test_cm_volume_requires_admissible():
    with pytest.raises(AdmissibilityError):
        cm_volume((0.1, 1, 1, 1))


def test_cm_volume_matches_q_product_identity(rng):
    # 9 V^2 = (r0 r1 r2 r3)^2 Q ties the two nondegeneracy routes together.
    for _ in range(200):
        r = random_admissible(rng, E, 0.3, 3.0)
        v = cm_volume(r)
        assert 9.0 * v * v == pytest.approx(np.prod(r) ** 2 * q_euclidean(r), rel=1e-10)


# ---------------------------------------------------------------------------
# Face angles and triangle areas
# ---------------------------------------------------------------------------

def test_face_angles_equilateral_euclidean():
    angles = face_angles(edge_lengths((1, 1, 1, 1)), E)
    assert np.allclose(angles, math.pi / 3.0, atol=1e-14)


def test_face_angles_right_triangle():
    # Face {1,2,3} of radii (0.5, 2.5, 1.5, 3.5) has sides 4, 5 and 3... pick
    # lengths directly instead: a synthetic length vector is valid input.
    lengths = np.array([3.0, 4.0, 4.0, 5.0, 5.0, 5.0])
    angles = face_angles(lengths, E)
    # face 3 = vertices (0,1,2) with sides l01=3, l02=4, l12=5: right angle at 0.
    assert angles[3][0] == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_face_angles_hyperbolic_equilateral():
    lengths = np.full(6, 2.0)
    angles = face_angles(lengths, H)
    expected = math.acos(math.cosh(2.0) / (math.cosh(2.0) + 1.0))
    assert np.allclose(angles, expected, atol=1e-12)
    assert expected == pytest.approx(0.6590, abs=5e-5)


def test_face_angles_domain_error():
    with pytest.raises(NumericDomainError):
        face_angles(np.array([1.0, 1.0, 1.0, 5.0, 1.0, 1.0]), E)


def test_triangle_area_references():
    assert triangle_area((3, 4, 5)) == pytest.approx(6.0, rel=1e-14)
    assert triangle_area((2, 2, 2)) == pytest.approx(math.sqrt(3.0), rel=1e-14)
    with pytest.raises(ValueError):
        triangle_area((1, 1, 3))


def test_area_characterization_at_critical_boundary():
    # With the fourth sphere at its critical radius the three side faces
    # tile the opposite face exactly.
    ri = soddy_radius_euclidean(1, 1, 1)
    a_jkl = triangle_area((2.0, 2.0, 2.0))
    a_side = triangle_area((1.0 + ri, 1.0 + ri, 2.0))
    assert abs(a_jkl - 3.0 * a_side) <= 1e-9


# ---------------------------------------------------------------------------
# Solid angles
# ---------------------------------------------------------------------------

def test_solid_angles_regular_euclidean():
    geo = solid_angles((1, 1, 1, 1), E)
    assert np.allclose(geo.solid_angles, REGULAR_SOLID_ANGLE, atol=1e-12)
    assert np.allclose(geo.dihedral_angles, math.acos(1.0 / 3.0), atol=1e-12)
    assert geo.q_value == pytest.approx(8.0)


def test_solid_angles_scale_invariant_euclidean():
    a = solid_angles((1, 1, 1, 1), E).solid_angles
    b = solid_angles((2, 2, 2, 2), E).solid_angles
    assert np.allclose(a, b, atol=1e-12)


def test_solid_angles_hyperbolic_regular_thinner():
    geo = solid_angles((1, 1, 1, 1), H)
    assert np.ptp(geo.solid_angles) <= 1e-12
    assert geo.solid_angles[0] < REGULAR_SOLID_ANGLE
    expected = oracles.hyperbolic_solid_angles((1.0, 1.0, 1.0, 1.0))
    assert np.allclose(geo.solid_angles, expected, atol=1e-10)


def test_solid_angles_match_euclidean_oracles(rng):
    for _ in range(50):
        r = random_admissible(rng, E)
        geo = solid_angles(r, E)
        assert np.allclose(geo.solid_angles, oracles.euclidean_solid_angles(r), atol=1e-9)
        points = oracles.embed_euclidean(r)
        for e, (a, b) in enumerate(EDGE_PAIRS):
            assert geo.dihedral_angles[e] == pytest.approx(
                oracles.dihedral_from_coordinates(points, a, b), abs=1e-9
            )


def test_solid_angles_match_hyperbolic_oracle(rng):
    for _ in range(50):
        r = random_admissible(rng, H)
        geo = solid_angles(r, H)
        assert np.allclose(geo.solid_angles, oracles.hyperbolic_solid_angles(r), atol=1e-9)
        for e, (a, b) in enumerate(EDGE_PAIRS):
            assert geo.dihedral_angles[e] == pytest.approx(
                oracles.hyperbolic_dihedral(r, a, b), abs=1e-9
            )


def test_solid_angle_bounds_and_excess_identity(rng):
    for geometry in (E, H):
        for _ in range(100):
            r = random_admissible(rng, geometry)
            geo = solid_angles(r, geometry)
            assert np.all(geo.solid_angles > 0.0)
            assert np.all(geo.solid_angles < 2.0 * math.pi)
            # spherical excess identity against per-vertex dihedral sums
            lookup = {pair: geo.dihedral_angles[e] for e, pair in enumerate(EDGE_PAIRS)}
            lookup.update({(b, a): v for (a, b), v in lookup.items()})
            for mu in range(4):
                excess = sum(lookup[mu, nu] for nu in range(4) if nu != mu) - math.pi
                assert geo.solid_angles[mu] == pytest.approx(excess, abs=1e-9)


def test_solid_angles_rejects_degenerate():
    with pytest.raises(AdmissibilityError):
        solid_angles((0.1, 1, 1, 1), E)
    with pytest.raises(AdmissibilityError):
        solid_angle_vector((0.05, 1, 1, 1), H)


def test_solid_angles_batch_matches_scalar(rng):
    for geometry in (E, H):
        rows = np.array([random_admissible(rng, geometry) for _ in range(50)])
        batch = solid_angles_batch(rows, geometry)
        for i in range(rows.shape[0]):
            scalar = solid_angle_vector(tuple(rows[i]), geometry)
            assert np.allclose(batch[i], scalar, atol=1e-12)


def test_degenerate_limit_angles():
    crit = soddy_radius_euclidean(1.0, 1.0, 1.0)
    geo = solid_angles((crit + 1e-8, 1, 1, 1), E)
    # dihedrals at the crushed vertex approach pi, opposite ones vanish
    assert np.all(geo.dihedral_angles[:3] >= math.pi - 1e-3)
    assert np.all(geo.dihedral_angles[3:] <= 1e-3)
    assert np.max(geo.solid_angles[1:]) <= 1e-3
    # the crushed solid angle carries three dihedral deficits and needs a
    # smaller offset to get within the same tolerance
    geo10 = solid_angles((crit + 1e-10, 1, 1, 1), E)
    assert geo10.solid_angles[0] >= 2.0 * math.pi - 1e-3


# ---------------------------------------------------------------------------
# Angle Jacobian
# ---------------------------------------------------------------------------

def test_tet_jacobian_euclidean_kernel():
    jac = tet_jacobian((1, 1, 1, 1), E)
    assert np.max(np.abs(jac @ np.ones(4))) <= 1e-8


def test_tet_jacobian_symmetry(rng):
    for geometry in (E, H):
        for _ in range(100):
            r = random_admissible(rng, geometry)
            raw = tet_jacobian(r, geometry, symmetrize=False)
            assert np.max(np.abs(raw - raw.T)) <= 1e-8


def test_tet_jacobian_hyperbolic_negative_definite():
    eigenvalues = np.linalg.eigvalsh(tet_jacobian((1, 1, 1, 1), H))
    assert np.all(eigenvalues < 0.0)


def test_tet_jacobian_matches_alternate_step(rng):
    # Consistency of the default stencil with a coarser independent one.
    for geometry in (E, H):
        for _ in range(10):
            r = random_admissible(rng, geometry)
            jac = tet_jacobian(r, geometry)
            alt = np.empty((4, 4))
            for nu in range(4):
                alt[:, nu] = oracles.central_difference(
                    lambda x: solid_angle_vector(tuple(x), geometry), np.array(r), nu, 1e-5
                )
            assert np.max(np.abs(jac - alt)) <= 1e-6


def test_tet_jacobian_rejects_degenerate():
    with pytest.raises(AdmissibilityError):
        tet_jacobian((0.1, 1, 1, 1), E)


def test_schlafli_identity_euclidean(rng):
    # d(sum alpha_mu r_mu) = sum alpha_mu dr_mu
    def action(x):
        return float(np.dot(solid_angle_vector(tuple(x), E), x))

    for _ in range(20):
        r = np.array(random_admissible(rng, E))
        alphas = solid_angle_vector(tuple(r), E)
        for mu in range(4):
            slope = oracles.central_difference(action, r, mu, 1e-6)
            assert slope == pytest.approx(alphas[mu], abs=1e-6)
