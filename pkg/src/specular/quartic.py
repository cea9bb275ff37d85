"""The specular condition as a quartic in t = tan(phi).

Equating the tangents of the reflection angles seen from A and from B gives

    (1 + t^2) (p + q t)^2 = 4 t^2 sec^2(theta)

with p = (r/r_a - r/r_b) tan(theta) and q = r/r_a + r/r_b.  Expanded:

    q^2 t^4 + 2pq t^3 + (p^2 + q^2 - 4 sec^2 theta) t^2 + 2pq t + p^2 = 0.

Its four real roots are the four lines through O on which the circle
carries a reflection point.  Squaring loses the half-turn: each root t is
realised on the circle at exactly one of atan(t) and atan(t) + pi, and that
point reflects the two focal rays externally, internally, or one of each.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import (
    ComplexRootsDetected,
    DegenerateLeadingCoefficient,
    MultiplePhysicalRoots,
    NoPhysicalRoot,
    NotARoot,
    NumericalError,
)
from .scene import SceneConfig, normalize_angle, phi_upper_bound, specular_mismatch

RESIDUAL_TOL = 1e-11
DISTINCT_TOL = 1e-8
GRAZING_COS = 1e-9


class ReflectionType(enum.Enum):
    EXTERNAL = "External"
    EXTERNAL_INTERNAL = "ExternalInternal"
    INTERNAL = "Internal"
    INTERNAL_EXTERNAL = "InternalExternal"

    @property
    def mixed(self) -> bool:
        return self in (ReflectionType.EXTERNAL_INTERNAL, ReflectionType.INTERNAL_EXTERNAL)


@dataclass(frozen=True)
class QuarticCoefficients:
    c4: float
    c3: float
    c2: float
    c1: float
    c0: float
    p: float = math.nan
    q: float = math.nan

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> QuarticCoefficients:
        c4, c3, c2, c1, c0 = (float(v) for v in values)
        return cls(c4, c3, c2, c1, c0)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.c4, self.c3, self.c2, self.c1, self.c0)

    def __call__(self, t: float) -> float:
        return (((self.c4 * t + self.c3) * t + self.c2) * t + self.c1) * t + self.c0

    def derivative(self, t: float) -> float:
        return ((4.0 * self.c4 * t + 3.0 * self.c3) * t + 2.0 * self.c2) * t + self.c1

    def scaled_residual(self, t: float) -> float:
        return abs(self(t)) / (abs(self.c4) * max(1.0, abs(t)) ** 4)


@dataclass(frozen=True)
class RootEntry:
    t: float
    phi: float
    residual: float
    kind: ReflectionType | None = None
    # polar angle of the reflection point on the circle: phi or phi + pi
    circle_phi: float | None = None
    angle_sum_error: float | None = None


@dataclass(frozen=True)
class RootSet:
    entries: tuple[RootEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def ts(self) -> tuple[float, ...]:
        return tuple(e.t for e in self.entries)

    @property
    def min_separation(self) -> float:
        ts = sorted(self.ts)
        return min(b - a for a, b in zip(ts, ts[1:]))


def quartic_coefficients(scene: SceneConfig) -> QuarticCoefficients:
    r, r_a, r_b = scene.r, scene.r_a, scene.r_b
    tan_th = math.tan(scene.theta)
    p = (r / r_a - r / r_b) * tan_th
    q = r / r_a + r / r_b
    sec2 = 1.0 + tan_th * tan_th
    pq2 = 2.0 * p * q
    return QuarticCoefficients(
        c4=q * q, c3=pq2, c2=p * p + q * q - 4.0 * sec2, c1=pq2, c0=p * p, p=p, q=q
    )


def eq1_product_form(scene: SceneConfig, t: float) -> float:
    """Left minus right side of the unexpanded equation at t = tan(phi)."""
    r, r_a, r_b = scene.r, scene.r_a, scene.r_b
    tan_th = math.tan(scene.theta)
    lin = (r / r_a - r / r_b) * tan_th + (r / r_a + r / r_b) * t
    return (1.0 + t * t) * lin * lin - 4.0 * t * t * (1.0 + tan_th * tan_th)


# -- root finding -----------------------------------------------------------


def _largest_cubic_root(b: float, c: float, d: float) -> float:
    """Largest real root of x^3 + b x^2 + c x + d."""
    shift = b / 3.0
    pp = c - b * b / 3.0
    qq = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    disc = (qq / 2.0) ** 2 + (pp / 3.0) ** 3
    if disc > 0:
        sq = math.sqrt(disc)
        u = -qq / 2.0 + sq if qq < 0 else -qq / 2.0 - sq
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        x = u - pp / (3.0 * u) if u != 0.0 else 0.0
    elif pp == 0.0:
        x = 0.0
    else:
        rad = 2.0 * math.sqrt(-pp / 3.0)
        arg = 3.0 * qq / (pp * rad)
        x = rad * math.cos(math.acos(max(-1.0, min(1.0, arg))) / 3.0)
    x -= shift
    for _ in range(4):
        f = ((x + b) * x + c) * x + d
        df = (3.0 * x + 2.0 * b) * x + c
        if df == 0.0 or f == 0.0:
            break
        x -= f / df
    return x


def _real_quadratic(b: float, c: float, scale: float) -> list[float]:
    """Real roots of y^2 + b y + c; raises when clearly complex."""
    disc = b * b - 4.0 * c
    if disc < 0:
        if disc < -1e-10 * max(scale, b * b, abs(c), 1e-300):
            raise ComplexRootsDetected(f"quadratic factor y^2 + {b}y + {c} has complex roots")
        disc = 0.0
    sq = math.sqrt(disc)
    if b == 0.0 and sq == 0.0:
        return [0.0, 0.0]
    big = -0.5 * (b + math.copysign(sq, b))
    if big == 0.0:
        return [0.0, 0.0]
    return [big, c / big]


def _ferrari(coeffs: QuarticCoefficients) -> list[float]:
    c4, c3, c2, c1, c0 = coeffs.as_tuple()
    a, b, c, d = c3 / c4, c2 / c4, c1 / c4, c0 / c4
    # depress with t = y - a/4
    pp = b - 3.0 * a * a / 8.0
    qq = c - a * b / 2.0 + a**3 / 8.0
    rr = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a**4 / 256.0
    scale = max(1.0, abs(pp), math.sqrt(abs(rr)))
    if abs(qq) <= 1e-14 * scale**1.5:
        ys = []
        for z in _real_quadratic(pp, rr, scale * scale):
            if z < 0:
                if z < -1e-12 * scale:
                    raise ComplexRootsDetected("biquadratic branch has a negative square")
                z = 0.0
            ys += [math.sqrt(z), -math.sqrt(z)]
    else:
        m = _largest_cubic_root(pp, pp * pp / 4.0 - rr, -qq * qq / 8.0)
        if not m > 0:
            raise ComplexRootsDetected(f"resolvent cubic gave non-positive root {m!r}")
        s = math.sqrt(2.0 * m)
        half = pp / 2.0 + m
        ys = _real_quadratic(-s, half + qq / (2.0 * s), scale * scale)
        ys += _real_quadratic(s, half - qq / (2.0 * s), scale * scale)
    return [y - a / 4.0 for y in ys]


def _durand_kerner(coeffs: QuarticCoefficients, iters: int = 500) -> list[complex]:
    c4, c3, c2, c1, c0 = coeffs.as_tuple()
    mono = [c3 / c4, c2 / c4, c1 / c4, c0 / c4]

    def poly(z):
        return (((z + mono[0]) * z + mono[1]) * z + mono[2]) * z + mono[3]

    radius = 1.0 + max(abs(x) for x in mono)
    zs = [radius * cmath.exp(1j * (0.4 + 2.0 * math.pi * k / 4.0)) for k in range(4)]
    for _ in range(iters):
        moved = 0.0
        for i in range(4):
            den = 1.0 + 0j
            for j in range(4):
                if i != j:
                    den *= zs[i] - zs[j]
            if den == 0:
                continue
            step = poly(zs[i]) / den
            zs[i] -= step
            moved = max(moved, abs(step))
        if moved < 1e-16 * radius:
            break
    return zs


def _polish(coeffs: QuarticCoefficients, t: float, steps: int = 12) -> float:
    best, best_res = t, abs(coeffs(t))
    for _ in range(steps):
        f = coeffs(t)
        if f == 0.0:
            return t
        df = coeffs.derivative(t)
        if df == 0.0:
            break
        t_new = t - f / df
        res = abs(coeffs(t_new))
        if res < best_res:
            best, best_res = t_new, res
        if t_new == t:
            break
        t = t_new
    return best


def _entries(coeffs, ts) -> RootSet:
    entries = [RootEntry(t=t, phi=math.atan(t), residual=coeffs.scaled_residual(t)) for t in ts]
    entries.sort(key=lambda e: e.phi)
    return RootSet(tuple(entries))


def solve_quartic(coeffs) -> RootSet:
    """All four real roots of a quartic, polished by Newton steps.

    ``coeffs`` is a :class:`QuarticCoefficients` or any 5-sequence
    (c4, c3, c2, c1, c0).  The closed-form resolvent-cubic route runs first;
    if it fails or leaves a residual above tolerance, Durand-Kerner
    simultaneous iteration takes over.  Non-real roots raise
    :class:`ComplexRootsDetected`.
    """
    if not isinstance(coeffs, QuarticCoefficients):
        coeffs = QuarticCoefficients.from_sequence(coeffs)
    if coeffs.c4 == 0.0 or not math.isfinite(coeffs.c4):
        raise DegenerateLeadingCoefficient(f"leading coefficient is {coeffs.c4!r}")

    try:
        ts = [_polish(coeffs, t) for t in _ferrari(coeffs)]
    except ComplexRootsDetected:
        ts = None
    if ts is not None and max(coeffs.scaled_residual(t) for t in ts) <= RESIDUAL_TOL:
        return _entries(coeffs, ts)

    zs = _durand_kerner(coeffs)
    scale = max(1.0, max(abs(z) for z in zs))
    if any(abs(z.imag) > 1e-7 * scale for z in zs):
        raise ComplexRootsDetected(f"quartic {coeffs.as_tuple()} has non-real roots {zs}")
    ts = [_polish(coeffs, z.real) for z in zs]
    worst = max(coeffs.scaled_residual(t) for t in ts)
    if worst > RESIDUAL_TOL:
        raise NumericalError(f"root polishing stalled at scaled residual {worst!r}")
    return _entries(coeffs, ts)


# -- classification ---------------------------------------------------------


def _branch_residual(scene: SceneConfig, phi: float) -> float:
    """Unsquared specular condition: sin 2phi = (r/r_a) sin(theta+phi) - (r/r_b) sin(theta-phi)."""
    r, th = scene.r, scene.theta
    return math.sin(2.0 * phi) - (r / scene.r_a) * math.sin(th + phi) + (
        r / scene.r_b
    ) * math.sin(th - phi)


def circle_angle(scene: SceneConfig, phi: float) -> float:
    """Which of phi and phi + pi carries the reflection for the line at angle phi."""
    other = normalize_angle(phi + math.pi)
    if abs(_branch_residual(scene, other)) < abs(_branch_residual(scene, phi)):
        return other
    return normalize_angle(phi)


def _kind_at(scene: SceneConfig, circle_phi: float) -> ReflectionType:
    m = scene.surface_point(circle_phi)
    # a ray grazing the surface (tangency scenes) counts as external
    ext_a, ext_b = (
        (x - m).dot(m) > -GRAZING_COS * (x - m).norm * scene.r for x in (scene.a, scene.b)
    )
    return {
        (True, True): ReflectionType.EXTERNAL,
        (True, False): ReflectionType.EXTERNAL_INTERNAL,
        (False, False): ReflectionType.INTERNAL,
        (False, True): ReflectionType.INTERNAL_EXTERNAL,
    }[ext_a, ext_b]


def _angle_at_o(point, m) -> float:
    return math.atan2(abs(point.cross(m)), point.dot(m))


def angle_sum_error(scene: SceneConfig, circle_phi: float, kind: ReflectionType) -> float:
    """Deviation of the angles at O from 2*theta (pure kinds) or pi - 2*theta (mixed).

    Pure kinds put the line OM through the wedge AOB, so the angles from
    OA and OB to the ray OM (or both to its opposite) add up to 2*theta.
    Mixed kinds put the line outside the wedge; then one angle is taken to
    OM and the other to the opposite ray, adding up to pi - 2*theta.  Which
    focal point gets the opposite ray depends on where M sits, not on which
    one reflects internally, so both assignments are tried.
    """
    m = scene.surface_point(circle_phi)
    ang_a = _angle_at_o(scene.a, m)
    ang_b = _angle_at_o(scene.b, m)
    if kind.mixed:
        sums = (ang_a + math.pi - ang_b, math.pi - ang_a + ang_b)
        expected = math.pi - 2.0 * scene.theta
    else:
        sums = (ang_a + ang_b, 2.0 * math.pi - ang_a - ang_b)
        expected = 2.0 * scene.theta
    return min(abs(s - expected) for s in sums)


def classify_root(scene: SceneConfig, phi: float, root_tol: float = 1e-6) -> ReflectionType:
    """Reflection type of the root at line angle ``phi`` (atan of a quartic root).

    The tolerance is on the scaled quartic residual and is loose enough to
    accept roots rounded to about six decimals.
    """
    coeffs = quartic_coefficients(scene)
    res = coeffs.scaled_residual(math.tan(phi))
    if res > root_tol:
        raise NotARoot(f"phi={phi!r} leaves scaled residual {res!r} > {root_tol!r}")
    return _kind_at(scene, circle_angle(scene, phi))


def classify_roots(scene: SceneConfig, roots: RootSet) -> RootSet:
    """Attach kind, circle angle and angle-sum error to every root.

    A repeated root (r_a = r_b or theta = 0 gives a double root at t = 0)
    is realised on both branches, so coincident roots are split between phi
    and phi + pi.
    """
    out = []
    used: list[tuple[float, float]] = []
    for e in roots:
        cphi = circle_angle(scene, e.phi)
        for t_prev, c_prev in used:
            if abs(t_prev - e.t) <= DISTINCT_TOL and abs(normalize_angle(c_prev - cphi)) < 1.0:
                cphi = normalize_angle(cphi + math.pi)
        used.append((e.t, cphi))
        kind = _kind_at(scene, cphi)
        out.append(
            replace(
                e,
                kind=kind,
                circle_phi=cphi,
                angle_sum_error=angle_sum_error(scene, cphi, kind),
            )
        )
    return RootSet(tuple(out))


def scene_roots(scene: SceneConfig) -> RootSet:
    return classify_roots(scene, solve_quartic(quartic_coefficients(scene)))


def select_specular_root(scene: SceneConfig, roots: RootSet, mismatch_tol: float = 1e-10) -> float:
    """The externally reflecting root on the arc between the bisector and A."""
    if any(e.kind is None for e in roots):
        roots = classify_roots(scene, roots)
    upper = phi_upper_bound(scene)
    slack = 1e-12
    found = [
        e
        for e in roots
        if e.kind is ReflectionType.EXTERNAL and -slack <= e.circle_phi <= upper + slack
    ]
    if not found:
        raise NoPhysicalRoot(f"no external root in [0, {upper!r}] among {roots.ts}")
    if len(found) > 1 and max(e.t for e in found) - min(e.t for e in found) > DISTINCT_TOL:
        raise MultiplePhysicalRoots(f"{len(found)} external roots in [0, {upper!r}]")
    phi_m = min(found, key=lambda e: abs(specular_mismatch(scene, e.circle_phi))).circle_phi
    mis = specular_mismatch(scene, phi_m)
    if abs(mis) > mismatch_tol:
        raise NumericalError(f"selected root {phi_m!r} has mismatch {mis!r}")
    return phi_m


def solve_quartic_route(scene: SceneConfig) -> float:
    return select_specular_root(scene, scene_roots(scene))
