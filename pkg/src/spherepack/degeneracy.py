"""Structure of the admissible region for a single tetrahedron.

For fixed radii at three vertices, the set of fourth radii realizing a
nondegenerate tetrahedron is bounded below by a critical radius: the
radius at which the fourth sphere is tangent to the other three with
its center in their plane (a Descartes configuration).  That critical
radius is the positive root of a quadratic whose coefficients are
polynomials in the three fixed radii (Euclidean) or in their tanh
(hyperbolic, where the quadratic is solved for tanh of the radius).

The positive-radius orthant splits into the admissible region, where
the nondegeneracy quadratic Q is positive, and four degenerate
components, one per vertex; the component for vertex mu consists of
the tuples where r_mu is at most the critical radius determined by the
other three.  Solid angles extend continuously onto the degenerate
components by constants: 2*pi at the crushed vertex, 0 elsewhere.
"""

import math
from dataclasses import dataclass

import numpy as np

from .tetgeom import (
    Geometry,
    check_radii,
    q_value,
    _solid_angle_values,
)


class NoFiniteRootError(ArithmeticError):
    """The tangent-sphere quadratic has no root giving a finite radius.

    Cannot occur for finite positive inputs (the critical tanh is
    bounded by prod(t)/sum of pairwise products < 1); kept as a guard
    against non-finite intermediate values.
    """


class PartitionInvariantError(RuntimeError):
    """A degenerate point matched zero or several degenerate components."""


@dataclass(frozen=True)
class RegionLabel:
    """Admissible, or degenerate at one designated vertex (0..3)."""

    admissible: bool
    vertex: int | None = None

    def __str__(self):
        return "Admissible" if self.admissible else f"Degenerate({self.vertex})"


@dataclass(frozen=True)
class SoddyCoefficients:
    """Coefficients of the critical-radius quadratic a*x^2 + b*x + c.

    Euclidean: x is the fourth radius itself and the discriminant has
    the closed form 16 (rj rk rl)^3 (rj + rk + rl).  Hyperbolic: x is
    tanh of the fourth radius and the coefficients are the same
    polynomials in tanh of the inputs, with 4 (tj tk tl)^2 added to a.
    """

    a: float
    b: float
    c: float
    discriminant: float
    geometry: Geometry


def _quadratic_coefficients(x: float, y: float, z: float):
    a = 2.0 * x * y * z * (x + y + z) - (x * x * y * y + x * x * z * z + y * y * z * z)
    b = 2.0 * x * y * z * (x * y + x * z + y * z)
    c = -((x * y * z) ** 2)
    return a, b, c


def soddy_coefficients(rj: float, rk: float, rl: float, geometry: Geometry) -> SoddyCoefficients:
    """Quadratic coefficients for the critical fourth radius."""
    for name, v in (("rj", rj), ("rk", rk), ("rl", rl)):
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"{name} must be positive and finite, got {v!r}")
    if geometry is Geometry.EUCLIDEAN:
        a, b, c = _quadratic_coefficients(rj, rk, rl)
    else:
        tj, tk, tl = math.tanh(rj), math.tanh(rk), math.tanh(rl)
        a, b, c = _quadratic_coefficients(tj, tk, tl)
        a += 4.0 * (tj * tk * tl) ** 2
    return SoddyCoefficients(a=a, b=b, c=c, discriminant=b * b - 4.0 * a * c, geometry=geometry)


def _stable_positive_root(coeffs: SoddyCoefficients) -> float:
    # The root (-b + sqrt(disc)) / (2a), rationalized to -2c / (b + sqrt(disc)):
    # identical for a != 0, equals -c/b at a = 0, and avoids the
    # cancellation of -b + sqrt(disc) near a = 0.  With b > 0 and c < 0
    # the value is positive for every input.
    return -2.0 * coeffs.c / (coeffs.b + math.sqrt(coeffs.discriminant))


def soddy_radius_euclidean(rj: float, rk: float, rl: float) -> float:
    """Critical Euclidean radius of a fourth sphere tangent to three others.

    Tuples (r, rj, rk, rl) with r at or below this value are degenerate
    at the fourth vertex; above it (and outside the other three
    degenerate components) the tetrahedron is realizable.
    """
    return _stable_positive_root(soddy_coefficients(rj, rk, rl, Geometry.EUCLIDEAN))


def soddy_radius_hyperbolic(rj: float, rk: float, rl: float) -> float:
    """Hyperbolic counterpart of soddy_radius_euclidean.

    The quadratic is solved for t = tanh(radius); a root outside (0, 1)
    would mean no finite tangent sphere exists and raises
    NoFiniteRootError rather than guessing.
    """
    t = _stable_positive_root(soddy_coefficients(rj, rk, rl, Geometry.HYPERBOLIC))
    if not 0.0 < t < 1.0:
        raise NoFiniteRootError(
            f"critical tanh {t!r} outside (0, 1) for radii ({rj}, {rk}, {rl}); "
            "the tangent surface is not a finite sphere"
        )
    return math.atanh(t)


def boundary_radius(rj: float, rk: float, rl: float, geometry: Geometry) -> float:
    """Critical fourth radius in the given background geometry."""
    if geometry is Geometry.EUCLIDEAN:
        return soddy_radius_euclidean(rj, rk, rl)
    return soddy_radius_hyperbolic(rj, rk, rl)


def _degenerate_vertex(r: tuple, geometry: Geometry) -> int:
    """The unique vertex whose component contains the (degenerate) point r."""
    hits = []
    for mu in range(4):
        others = tuple(r[i] for i in range(4) if i != mu)
        try:
            crit = boundary_radius(*others, geometry)
        except NoFiniteRootError:
            continue
        if r[mu] <= crit:
            hits.append(mu)
    if len(hits) != 1:
        raise PartitionInvariantError(
            f"degenerate point {r} matched components {hits}; expected exactly one"
        )
    return hits[0]


def classify(r, geometry: Geometry) -> RegionLabel:
    """Assign a radius 4-tuple to the admissible region or one degenerate component.

    Membership in the component of vertex mu is decided by the explicit
    inequality r_mu <= critical radius of the other three, not by which
    radius is smallest; the two differ near corners where radii are
    comparable.  Exactly one component matches every degenerate point;
    anything else raises PartitionInvariantError.
    """
    r = check_radii(r)
    if q_value(r, geometry) > 0.0:
        return RegionLabel(admissible=True)
    return RegionLabel(admissible=False, vertex=_degenerate_vertex(r, geometry))


def extended_solid_angles(r, geometry: Geometry) -> np.ndarray:
    """Solid angles extended continuously by constants to all positive radii.

    On the admissible region this equals the solid angles; on the
    degenerate component of vertex mu the angle at mu is 2*pi and the
    other three vanish.
    """
    r = check_radii(r)
    if q_value(r, geometry) > 0.0:
        return np.array(_solid_angle_values(r, geometry)[1])
    out = np.zeros(4)
    out[_degenerate_vertex(r, geometry)] = 2.0 * math.pi
    return out
