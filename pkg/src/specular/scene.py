"""Problem instance and coordinate conventions in the reflection plane.

The origin O is the sphere centre and the x-axis runs along the bisector of
the angle AOB.  Focal point A sits at polar angle +theta, B at -theta, and
polar angles phi grow toward A.  After normalization r_a <= r_b, which puts
the specular point at phi >= 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    FocalInsideSphere,
    NonFiniteInput,
    NonPositiveRadius,
    PreconditionViolated,
    ThetaOutOfRange,
)

# relative slack when comparing the full angle against the tangency bound
GRAZING_RTOL = 1e-12


def normalize_angle(phi: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.remainder(phi, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    return a


@dataclass(frozen=True)
class CartesianPoint:
    x: float
    y: float

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def to_polar(self) -> PolarPoint:
        return PolarPoint(self.norm, math.atan2(self.y, self.x))

    def __sub__(self, other: CartesianPoint) -> CartesianPoint:
        return CartesianPoint(self.x - other.x, self.y - other.y)

    def dot(self, other: CartesianPoint) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: CartesianPoint) -> float:
        return self.x * other.y - self.y * other.x


@dataclass(frozen=True)
class PolarPoint:
    radius: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", normalize_angle(self.phi))

    def to_cartesian(self) -> CartesianPoint:
        return to_cartesian(self)


def to_cartesian(p: PolarPoint) -> CartesianPoint:
    return CartesianPoint(p.radius * math.cos(p.phi), p.radius * math.sin(p.phi))


@dataclass(frozen=True)
class SceneConfig:
    """A sphere of radius ``r`` and two focal points.

    ``theta`` is HALF the angle AOB.  Build instances through
    :func:`validate_scene`; the constructor itself does not check the
    ordering ``r < r_a <= r_b`` or the tangency bound.

    ``swapped`` records that the caller's labels were exchanged during
    normalization, ``grazing`` that 2*theta sits on the tangency bound.
    """

    r: float
    r_a: float
    r_b: float
    theta: float
    swapped: bool = field(default=False, compare=False)
    grazing: bool = field(default=False, compare=False)

    @property
    def a(self) -> CartesianPoint:
        return to_cartesian(PolarPoint(self.r_a, self.theta))

    @property
    def b(self) -> CartesianPoint:
        return to_cartesian(PolarPoint(self.r_b, -self.theta))

    def surface_point(self, phi: float) -> CartesianPoint:
        return to_cartesian(PolarPoint(self.r, phi))

    def to_input_frame(self, phi: float) -> float:
        """Map a polar angle back to the caller's original labelling."""
        return -phi if self.swapped else phi


def theta_max(r: float, r_a: float, r_b: float) -> float:
    """Largest full angle 2*theta for which segment AB clears the sphere.

    At the bound, AB is tangent to the circle of radius ``r``.
    """
    if not (r > 0 and r < r_a and r < r_b):
        raise PreconditionViolated(
            f"theta_max needs 0 < r < r_a, r_b (got r={r}, r_a={r_a}, r_b={r_b})"
        )
    root = math.sqrt((r_a * r_a - r * r) * (r_b * r_b - r * r))
    c = (r * r - root) / (r_a * r_b)
    return math.acos(max(-1.0, min(1.0, c)))


def validate_scene(r, r_a, r_b, theta) -> SceneConfig:
    """Check a raw instance and return a normalized :class:`SceneConfig`.

    ``theta`` is the half-angle.  Labels are swapped when ``r_a > r_b``.
    """
    values = [float(v) for v in (r, r_a, r_b, theta)]
    if not all(math.isfinite(v) for v in values):
        raise NonFiniteInput(f"non-finite scene input {values}")
    r, r_a, r_b, theta = values
    if r <= 0:
        raise NonPositiveRadius(f"sphere radius must be positive, got r={r}")
    if r_a <= r or r_b <= r:
        raise FocalInsideSphere(
            f"focal points must lie outside the sphere: r={r}, r_a={r_a}, r_b={r_b}"
        )
    swapped = r_a > r_b
    if swapped:
        r_a, r_b = r_b, r_a
    bound = theta_max(r, r_a, r_b)
    full = 2.0 * theta
    if full < 0 or full > bound * (1.0 + GRAZING_RTOL):
        raise ThetaOutOfRange(
            f"full angle 2*theta={full!r} outside [0, {bound!r}] (tangency bound)"
        )
    grazing = full >= bound * (1.0 - GRAZING_RTOL)
    return SceneConfig(r, r_a, r_b, theta, swapped=swapped, grazing=grazing)


def focal_separation(scene: SceneConfig) -> float:
    ra, rb = scene.r_a, scene.r_b
    d2 = ra * ra + rb * rb - 2.0 * ra * rb * math.cos(2.0 * scene.theta)
    return math.sqrt(max(d2, 0.0))


def phi_upper_bound(scene: SceneConfig) -> float:
    """Polar angle of the foot of the perpendicular from O onto line AB.

    The specular point lies between the bisector (phi = 0) and this angle.
    The collinear case 2*theta = 0 returns 0.
    """
    r_ab = focal_separation(scene)
    if scene.theta == 0.0 or r_ab == 0.0:
        return 0.0
    ra, rb = scene.r_a, scene.r_b
    c = (r_ab * r_ab + ra * ra - rb * rb) / (2.0 * ra * r_ab)
    angle_at_a = math.acos(max(-1.0, min(1.0, c)))
    return max(0.0, scene.theta + angle_at_a - 0.5 * math.pi)


def b_horizon(scene: SceneConfig) -> float:
    """Polar angle where the line of sight from B grazes the sphere.

    Surface points beyond it (toward A) are hidden from B.  The one-step
    map is increasing only up to here; when the perpendicular foot lies
    further out, the map turns back over the rest of the arc.
    """
    return math.acos(scene.r / scene.r_b) - scene.theta


def monotone_upper_bound(scene: SceneConfig) -> float:
    return min(phi_upper_bound(scene), b_horizon(scene))


def _normal_angle(m: CartesianPoint, x: CartesianPoint) -> float:
    # atan2 form stays accurate at grazing angles where acos does not
    d = x - m
    return math.atan2(abs(m.cross(d)), m.dot(d))


def incidence_angles(scene: SceneConfig, phi: float) -> tuple[float, float]:
    """Angles (psi_a, psi_b) between the outward normal at M and rays M->A, M->B."""
    m = scene.surface_point(phi)
    return _normal_angle(m, scene.a), _normal_angle(m, scene.b)


def _signed_normal_angle(m: CartesianPoint, x: CartesianPoint) -> float:
    d = x - m
    return math.atan2(m.cross(d), m.dot(d))


def specular_mismatch(scene: SceneConfig, phi: float) -> float:
    """psi_a - psi_b at M = (r, phi); zero exactly at a specular point.

    The angles are taken with orientation: psi_a counter-clockwise from
    the outward normal, psi_b clockwise.  While the two rays straddle the
    normal this is the plain difference of the unsigned incidence angles.
    Past A on the arc the unsigned difference would cross zero again at a
    point where both rays leave on the same side, which is not a
    reflection; the oriented form stays negative there.

    Positive on the bisector side of the specular point, negative beyond.
    """
    m = scene.surface_point(phi)
    return _signed_normal_angle(m, scene.a) + _signed_normal_angle(m, scene.b)
