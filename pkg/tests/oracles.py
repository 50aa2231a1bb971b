"""Independent geometric oracles used to cross-check the library.

Everything here is computed by routes the library does not use: the
Euclidean tetrahedron is embedded by explicit coordinates, with solid
angles from the Van Oosterom-Strackee arctangent formula and dihedrals
from projected edge vectors; the hyperbolic dihedrals come from the
adjugate of the Minkowski vertex Gram matrix.
"""

import math

import numpy as np

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _length_lookup(r):
    lengths = {}
    for a, b in EDGE_PAIRS:
        lengths[(a, b)] = lengths[(b, a)] = r[a] + r[b]
    return lengths


def embed_euclidean(r):
    """Coordinates of the four vertices of the Euclidean packing tetrahedron."""
    l = _length_lookup(r)
    p0 = np.zeros(3)
    p1 = np.array([l[0, 1], 0.0, 0.0])
    a, b, c = l[0, 2], l[1, 2], l[0, 1]
    x = (a * a + c * c - b * b) / (2.0 * c)
    p2 = np.array([x, math.sqrt(a * a - x * x), 0.0])
    d0, d1, d2 = l[0, 3], l[1, 3], l[2, 3]
    x3 = (d0 * d0 + c * c - d1 * d1) / (2.0 * c)
    y3 = (d0 * d0 - d2 * d2 + p2[0] ** 2 + p2[1] ** 2 - 2.0 * x3 * p2[0]) / (2.0 * p2[1])
    p3 = np.array([x3, y3, math.sqrt(d0 * d0 - x3 * x3 - y3 * y3)])
    return [p0, p1, p2, p3]


def solid_angle_vos(points, mu):
    """Van Oosterom-Strackee solid angle at vertex mu."""
    others = [v for v in range(4) if v != mu]
    a = points[others[0]] - points[mu]
    b = points[others[1]] - points[mu]
    c = points[others[2]] - points[mu]
    numerator = abs(float(np.dot(a, np.cross(b, c))))
    na, nb, nc = (float(np.linalg.norm(v)) for v in (a, b, c))
    denominator = (
        na * nb * nc
        + float(np.dot(a, b)) * nc
        + float(np.dot(a, c)) * nb
        + float(np.dot(b, c)) * na
    )
    return 2.0 * math.atan2(numerator, denominator)


def dihedral_from_coordinates(points, a, b):
    """Dihedral along edge (a, b) from edge-orthogonal projections."""
    others = [v for v in range(4) if v not in (a, b)]
    edge = points[b] - points[a]
    edge = edge / np.linalg.norm(edge)
    u = points[others[0]] - points[a]
    v = points[others[1]] - points[a]
    u = u - np.dot(u, edge) * edge
    v = v - np.dot(v, edge) * edge
    cosine = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return math.acos(max(-1.0, min(1.0, cosine)))


def euclidean_solid_angles(r):
    points = embed_euclidean(r)
    return np.array([solid_angle_vos(points, mu) for mu in range(4)])


def hyperbolic_gram(r):
    """Minkowski vertex Gram matrix: diagonal -1, entries -cosh(length)."""
    l = _length_lookup(r)
    g = np.full((4, 4), -1.0)
    for a, b in EDGE_PAIRS:
        g[a, b] = g[b, a] = -math.cosh(l[a, b])
    return g


def hyperbolic_dihedral(r, a, b):
    """Dihedral along edge (a, b) from the adjugate of the vertex Gram."""
    g = hyperbolic_gram(r)
    adj = np.linalg.inv(g) * np.linalg.det(g)
    c, d = (v for v in range(4) if v not in (a, b))
    cosine = adj[c, d] / math.sqrt(adj[c, c] * adj[d, d])
    return math.acos(max(-1.0, min(1.0, cosine)))


def hyperbolic_solid_angles(r):
    """Solid angles as dihedral excess, with Gram-adjugate dihedrals."""
    out = np.empty(4)
    for mu in range(4):
        total = 0.0
        for nu in range(4):
            if nu != mu:
                total += hyperbolic_dihedral(r, mu, nu)
        out[mu] = total - math.pi
    return out


def cayley_menger_volume(r):
    """Euclidean volume straight from the Cayley-Menger determinant."""
    l = _length_lookup(r)
    m = np.ones((5, 5))
    m[0, 0] = 0.0
    for i in range(4):
        m[i + 1, i + 1] = 0.0
        for j in range(4):
            if i != j:
                m[i + 1, j + 1] = l[i, j] ** 2
    return math.sqrt(np.linalg.det(m) / 288.0)


def central_difference(fun, x, index, h):
    """Central finite difference of a scalar or vector function."""
    plus = np.array(x, dtype=float)
    minus = np.array(x, dtype=float)
    plus[index] += h
    minus[index] -= h
    return (fun(plus) - fun(minus)) / (2.0 * h)
