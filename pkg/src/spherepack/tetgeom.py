"""Metric geometry of a single tetrahedron under a sphere packing.

A tetrahedron carries four vertex radii (r0, r1, r2, r3); every edge
length is the sum of its endpoint radii, in both Euclidean and
hyperbolic background geometry.  Local vertex indices are 0..3, edges
are indexed in the fixed order EDGE_PAIRS, and face f is the face
opposite vertex f with vertex tuple FACES[f].

Dihedral and solid angles are computed through the vertex link: the
three face angles at a vertex are the side lengths of a spherical
triangle whose interior angles are the dihedral angles at the edges
through that vertex.  The same pipeline serves both geometries; only
the face-angle law of cosines differs.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
FACES = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))

_EDGE_INDEX = {pair: e for e, pair in enumerate(EDGE_PAIRS)}
_EDGE_INDEX.update({(b, a): e for (a, b), e in _EDGE_INDEX.items()})

# Tolerated excursion of a cosine argument beyond [-1, 1] before the
# input is treated as genuinely out of domain rather than roundoff.
COS_DOMAIN_TOL = 1e-9


class Geometry(Enum):
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"

    @classmethod
    def parse(cls, name: str) -> "Geometry":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown geometry {name!r}; expected 'euclidean' or 'hyperbolic'") from None


TetRadii = tuple[float, float, float, float]


class AdmissibilityError(ValueError):
    """Radius tuple does not realize a nondegenerate tetrahedron."""


class NumericDomainError(ArithmeticError):
    """An inverse-trig argument left its domain beyond roundoff tolerance."""


@dataclass(frozen=True)
class TetGeometry:
    """Derived per-tetrahedron quantities.

    lengths[e] is the length of edge EDGE_PAIRS[e]; face_angles[f][s]
    is the angle at vertex FACES[f][s] of face f; dihedral_angles[e]
    is the dihedral along edge EDGE_PAIRS[e]; solid_angles[mu] is the
    solid angle at vertex mu; q_value is the nondegeneracy quadratic.
    """

    lengths: np.ndarray
    face_angles: np.ndarray
    dihedral_angles: np.ndarray
    solid_angles: np.ndarray
    q_value: float


def check_radii(r) -> TetRadii:
    """Validate and normalize a 4-tuple of vertex radii."""
    if len(r) != 4:
        raise ValueError(f"expected 4 radii, got {len(r)}")
    out = tuple(float(x) for x in r)
    for i, x in enumerate(out):
        if not math.isfinite(x) or x <= 0.0:
            raise ValueError(f"radius {i} must be a positive finite number, got {x}")
    return out


def edge_lengths(r) -> np.ndarray:
    """Edge lengths l_ab = r_a + r_b in EDGE_PAIRS order."""
    r = check_radii(r)
    return np.array([r[a] + r[b] for a, b in EDGE_PAIRS])


def q_euclidean(r) -> float:
    """Euclidean nondegeneracy quadratic (sum 1/r)^2 - 2 sum 1/r^2."""
    r = check_radii(r)
    k = [1.0 / x for x in r]
    s = k[0] + k[1] + k[2] + k[3]
    return s * s - 2.0 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3])


def q_euclidean_grouped(r) -> float:
    """Algebraically equal four-term grouping of q_euclidean.

    Kept as an independent evaluation route; the two forms must agree
    to roundoff.
    """
    r = check_radii(r)
    k = [1.0 / x for x in r]
    s = k[0] + k[1] + k[2] + k[3]
    return sum(ki * (s - 2.0 * ki) for ki in k)


def q_euclidean_derivative(r, mu: int) -> float:
    """Partial derivative of q_euclidean with respect to radius mu."""
    r = check_radii(r)
    if not 0 <= mu <= 3:
        raise IndexError(f"vertex index {mu} out of range")
    k = [1.0 / x for x in r]
    others = sum(k) - k[mu]
    return -2.0 / (r[mu] * r[mu]) * (others - k[mu])


def q_hyperbolic(r) -> float:
    """Hyperbolic nondegeneracy quadratic (sum coth r)^2 - 2 sum coth^2 r + 4."""
    r = check_radii(r)
    k = [1.0 / math.tanh(x) for x in r]
    s = k[0] + k[1] + k[2] + k[3]
    return s * s - 2.0 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3]) + 4.0


def q_value(r, geometry: Geometry) -> float:
    """Nondegeneracy quadratic for the given background geometry."""
    return q_euclidean(r) if geometry is Geometry.EUCLIDEAN else q_hyperbolic(r)


def gram_minor_check(r) -> bool:
    """Hyperbolic nondegeneracy via the Minkowski vertex Gram matrix.

    The matrix G with diagonal -1 and entries -cosh(l_ab) is the Gram
    matrix of the four vertices in the hyperboloid model.  The
    tetrahedron is nondegenerate iff every leading principal minor of
    G is negative.  (Equivalently the minors of the +cosh matrix
    alternate in sign from order 2 on; the all-negative form is the
    one that holds verbatim.)  Must agree with q_hyperbolic(r) > 0.
    """
    r = check_radii(r)
    lengths = edge_lengths(r)
    g = np.full((4, 4), -1.0)
    for e, (a, b) in enumerate(EDGE_PAIRS):
        g[a, b] = g[b, a] = -math.cosh(lengths[e])
    for k in range(1, 5):
        if np.linalg.det(g[:k, :k]) >= 0.0:
            return False
    return True


def cm_volume(r) -> float:
    """Euclidean volume from the Cayley-Menger determinant.

    Serves as an independent nondegeneracy oracle: requires
    q_euclidean(r) > 0, and a nonpositive determinant under that
    precondition indicates an internal inconsistency.
    """
    r = check_radii(r)
    if q_euclidean(r) <= 0.0:
        raise AdmissibilityError(f"degenerate radii {r}: Q = {q_euclidean(r)!r} <= 0")
    lengths = edge_lengths(r)
    m = np.ones((5, 5))
    m[0, 0] = 0.0
    for i in range(4):
        m[i + 1, i + 1] = 0.0
    for e, (a, b) in enumerate(EDGE_PAIRS):
        m[a + 1, b + 1] = m[b + 1, a + 1] = lengths[e] ** 2
    det = np.linalg.det(m)
    if det <= 0.0:
        raise NumericDomainError(
            f"Cayley-Menger determinant {det!r} <= 0 although Q > 0; radii {r}"
        )
    return math.sqrt(det / 288.0)


def triangle_area(l) -> float:
    """Heron area of a Euclidean triangle with side lengths l."""
    a, b, c = (float(x) for x in l)
    s = 0.5 * (a + b + c)
    prod = s * (s - a) * (s - b) * (s - c)
    if s - a <= 0 or s - b <= 0 or s - c <= 0:
        raise ValueError(f"triangle inequality violated for sides {(a, b, c)}")
    return math.sqrt(prod)


def _checked_cos(value: float, context: str) -> float:
    if value > 1.0 + COS_DOMAIN_TOL or value < -1.0 - COS_DOMAIN_TOL:
        raise NumericDomainError(f"cosine of {context} out of domain: {value!r}")
    return min(1.0, max(-1.0, value))


def _face_cosines(lengths, geometry: Geometry) -> list[list[float]]:
    """cos of the face angle at vertex mu in the face not containing nu.

    Returns a 4x4 table c[mu][nu] (diagonal unused).  These are the
    side cosines of the spherical link triangle at mu, with the entry
    for nu sitting opposite the link vertex that points along edge
    (mu, nu).
    """
    def length(a, b):
        return float(lengths[_EDGE_INDEX[(a, b)]])

    cos_table = [[0.0] * 4 for _ in range(4)]
    for mu in range(4):
        others = [v for v in range(4) if v != mu]
        for nu in others:
            rho, sig = (v for v in others if v != nu)
            p, q, opp = length(mu, rho), length(mu, sig), length(rho, sig)
            if geometry is Geometry.EUCLIDEAN:
                val = (p * p + q * q - opp * opp) / (2.0 * p * q)
            else:
                val = (math.cosh(p) * math.cosh(q) - math.cosh(opp)) / (
                    math.sinh(p) * math.sinh(q)
                )
            cos_table[mu][nu] = _checked_cos(val, f"face angle at vertex {mu} opposite {nu}")
    return cos_table


def face_angles(lengths, geometry: Geometry) -> np.ndarray:
    """The 12 face angles; entry [f][s] is at vertex FACES[f][s] of face f."""
    lengths = np.asarray(lengths, dtype=float)
    if lengths.shape != (6,):
        raise ValueError(f"expected 6 edge lengths, got shape {lengths.shape}")
    cos_table = _face_cosines(lengths, geometry)
    out = np.empty((4, 3))
    for f in range(4):
        for s, v in enumerate(FACES[f]):
            out[f, s] = math.acos(cos_table[v][f])
    return out


def _link_dihedral_cos(cos_table, mu: int, nu: int) -> float:
    """cos of the dihedral along edge (mu, nu), from the link of mu."""
    others = [v for v in range(4) if v != mu]
    rho, sig = (v for v in others if v != nu)
    ca = cos_table[mu][nu]
    cb, cc = cos_table[mu][rho], cos_table[mu][sig]
    sb = math.sqrt(max(0.0, 1.0 - cb * cb))
    sc = math.sqrt(max(0.0, 1.0 - cc * cc))
    denom = sb * sc
    if denom == 0.0:
        raise NumericDomainError(f"degenerate link triangle at vertex {mu}")
    return _checked_cos((ca - cb * cc) / denom, f"dihedral at edge ({mu},{nu})")


def _solid_angle_values(r: TetRadii, geometry: Geometry):
    """(per-vertex dihedral table beta[mu][nu], solid angles) for admissible r."""
    lengths = [r[a] + r[b] for a, b in EDGE_PAIRS]
    cos_table = _face_cosines(lengths, geometry)
    beta = [[0.0] * 4 for _ in range(4)]
    alphas = [0.0] * 4
    for mu in range(4):
        total = 0.0
        for nu in range(4):
            if nu == mu:
                continue
            b = math.acos(_link_dihedral_cos(cos_table, mu, nu))
            beta[mu][nu] = b
            total += b
        alphas[mu] = total - math.pi
    return beta, alphas


# Index tables driving the vectorized link pipeline.  For the ordered
# pair (mu, nu) with {rho, sig} the remaining two vertices:
# the side of mu's link triangle opposite the link vertex toward nu is
# the face angle at mu in face {mu, rho, sig}, computed from edges
# (mu,rho), (mu,sig) and (rho,sig).
def _build_link_tables():
    p_idx = np.zeros((4, 4), dtype=int)
    q_idx = np.zeros((4, 4), dtype=int)
    o_idx = np.zeros((4, 4), dtype=int)
    rho_of = np.zeros((4, 4), dtype=int)
    sig_of = np.zeros((4, 4), dtype=int)
    for mu in range(4):
        for nu in range(4):
            if nu == mu:
                continue
            rho, sig = (v for v in range(4) if v not in (mu, nu))
            p_idx[mu, nu] = _EDGE_INDEX[(mu, rho)]
            q_idx[mu, nu] = _EDGE_INDEX[(mu, sig)]
            o_idx[mu, nu] = _EDGE_INDEX[(rho, sig)]
            rho_of[mu, nu] = rho
            sig_of[mu, nu] = sig
    mu_grid = np.repeat(np.arange(4), 4).reshape(4, 4)
    offdiag = 1.0 - np.eye(4)
    return p_idx, q_idx, o_idx, mu_grid, rho_of, sig_of, offdiag


_P_IDX, _Q_IDX, _O_IDX, _MU_GRID, _RHO_OF, _SIG_OF, _OFFDIAG = _build_link_tables()
_A_VERTS = np.array([a for a, _ in EDGE_PAIRS])
_B_VERTS = np.array([b for _, b in EDGE_PAIRS])


def q_batch(radii4: np.ndarray, geometry: Geometry) -> np.ndarray:
    """Nondegeneracy quadratic for each row of an (m, 4) radius array."""
    k = 1.0 / radii4 if geometry is Geometry.EUCLIDEAN else 1.0 / np.tanh(radii4)
    total = k.sum(axis=1)
    q = total * total - 2.0 * (k * k).sum(axis=1)
    if geometry is Geometry.HYPERBOLIC:
        q = q + 4.0
    return q


def solid_angles_batch(radii4: np.ndarray, geometry: Geometry) -> np.ndarray:
    """Solid angles for each row of an (m, 4) array of admissible radii.

    Same link pipeline as the scalar path, vectorized over rows; the
    caller guarantees positivity and nondegeneracy of every row.
    """
    radii4 = np.asarray(radii4, dtype=float)
    lengths = radii4[:, _A_VERTS] + radii4[:, _B_VERTS]
    if geometry is Geometry.EUCLIDEAN:
        p = lengths[:, _P_IDX]
        q = lengths[:, _Q_IDX]
        o = lengths[:, _O_IDX]
        face_cos = (p * p + q * q - o * o) / (2.0 * p * q)
    else:
        ch = np.cosh(lengths)
        sh = np.sinh(lengths)
        face_cos = (ch[:, _P_IDX] * ch[:, _Q_IDX] - ch[:, _O_IDX]) / (
            sh[:, _P_IDX] * sh[:, _Q_IDX]
        )
    if np.any(np.abs(face_cos) > 1.0 + COS_DOMAIN_TOL):
        raise NumericDomainError("face-angle cosine out of domain in batch evaluation")
    face_cos = np.clip(face_cos, -1.0, 1.0)

    ca = face_cos
    cb = face_cos[:, _MU_GRID, _RHO_OF]
    cc = face_cos[:, _MU_GRID, _SIG_OF]
    sin_prod = np.sqrt(np.maximum(0.0, (1.0 - cb * cb) * (1.0 - cc * cc)))
    # Diagonal entries are meaningless; give them a safe denominator.
    sin_prod = sin_prod + np.eye(4)[None, :, :]
    dihedral_cos = (ca - cb * cc) / sin_prod
    if np.any(np.abs(dihedral_cos * _OFFDIAG) > 1.0 + COS_DOMAIN_TOL):
        raise NumericDomainError("dihedral cosine out of domain in batch evaluation")
    dihedral = np.arccos(np.clip(dihedral_cos, -1.0, 1.0)) * _OFFDIAG
    return dihedral.sum(axis=2) - math.pi


def solid_angles(r, geometry: Geometry) -> TetGeometry:
    """Full angle data of the tetrahedron with vertex radii r.

    Requires the nondegeneracy quadratic to be positive.  The dihedral
    along each edge is evaluated from both endpoint links and averaged;
    the two values agree up to roundoff.
    """
    r = check_radii(r)
    q = q_value(r, geometry)
    if q <= 0.0:
        raise AdmissibilityError(f"radii {r} are degenerate ({geometry.value} Q = {q!r})")
    lengths = edge_lengths(r)
    beta, alphas = _solid_angle_values(r, geometry)
    dihedrals = np.array([0.5 * (beta[a][b] + beta[b][a]) for a, b in EDGE_PAIRS])
    return TetGeometry(
        lengths=lengths,
        face_angles=face_angles(lengths, geometry),
        dihedral_angles=dihedrals,
        solid_angles=np.array(alphas),
        q_value=q,
    )


def solid_angle_vector(r, geometry: Geometry) -> np.ndarray:
    """Just the four solid angles (lean path for solvers and curvature)."""
    r = check_radii(r)
    q = q_value(r, geometry)
    if q <= 0.0:
        raise AdmissibilityError(f"radii {r} are degenerate ({geometry.value} Q = {q!r})")
    _, alphas = _solid_angle_values(r, geometry)
    return np.array(alphas)


def tet_jacobian(r, geometry: Geometry, symmetrize: bool = True) -> np.ndarray:
    """Matrix J with J[mu][nu] = d(solid angle at mu) / d(radius nu).

    Central finite differences with step 1e-6 * max(1, r_nu).  The raw
    matrix must already be symmetric to roundoff; it is returned as
    (J + J^T)/2 unless symmetrize is False.
    """
    r = check_radii(r)
    q = q_value(r, geometry)
    if q <= 0.0:
        raise AdmissibilityError(f"radii {r} are degenerate ({geometry.value} Q = {q!r})")
    points = np.tile(np.array(r), (8, 1))
    steps = np.empty(4)
    for nu in range(4):
        h = 1e-6 * max(1.0, r[nu])
        steps[nu] = h
        points[2 * nu, nu] += h
        points[2 * nu + 1, nu] -= h
    if np.any(points <= 0.0):
        raise ValueError(f"finite-difference stencil leaves the positive orthant at radii {r}")
    if np.any(q_batch(points, geometry) <= 0.0):
        raise AdmissibilityError(
            f"finite-difference stencil crosses the degeneracy boundary at radii {r}"
        )
    alphas = solid_angles_batch(points, geometry)
    jac = (alphas[0::2] - alphas[1::2]).T / (2.0 * steps)
    if not symmetrize:
        return jac
    residual = float(np.max(np.abs(jac - jac.T)))
    if residual > 1e-4 * (1.0 + float(np.max(np.abs(jac)))):
        raise NumericDomainError(
            f"angle Jacobian asymmetric beyond tolerance (residual {residual!r}) at radii {r}"
        )
    return 0.5 * (jac + jac.T)
