"""Ruler-and-compass fixed-point iteration for the specular point.

One step of the construction, starting from a guess M0 = (r, phi):

1. draw the segment M0 -> B;
2. intersect it with the circle of radius r_a, giving A';
3. move the guess to the bisector of angle A O A'.

The step map f sends [0, phi_upper_bound] into itself and at least halves
distances there, so plain iteration converges linearly to the specular
point.  It is increasing only up to b_horizon; see scene.b_horizon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    InsufficientTrace,
    InvalidTolerance,
    MaxIterExceeded,
    NumericalError,
    PreconditionViolated,
)
from .scene import (
    CartesianPoint,
    SceneConfig,
    incidence_angles,
    phi_upper_bound,
    specular_mismatch,
)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 64

# slack on the domain checks, in radians / relative length
_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class IterationTrace:
    phis: tuple[float, ...]
    residuals: tuple[float, ...]
    mismatch: tuple[float, ...]
    converged: bool
    rate_estimate: float = math.nan

    def __len__(self):
        return len(self.phis)


@dataclass(frozen=True)
class SpecularResult:
    phi_m: float
    point: CartesianPoint
    incidence_angle: float
    iterations: int
    final_mismatch: float
    warnings: tuple[str, ...] = ()
    trace: IterationTrace | None = field(default=None, repr=False)


def line_circle_intersection(
    m0: CartesianPoint, b: CartesianPoint, radius: float
) -> CartesianPoint:
    """Point where the segment m0 -> b crosses the circle |x| = radius.

    ``m0`` must lie strictly inside the circle and ``b`` on or outside it,
    which makes the crossing unique.
    """
    if not m0.norm < radius or b.norm < radius * (1.0 - _DOMAIN_SLACK):
        raise PreconditionViolated(
            f"need |m0| < radius <= |b|: |m0|={m0.norm}, radius={radius}, |b|={b.norm}"
        )
    d = b - m0
    qa = d.dot(d)
    qb = 2.0 * m0.dot(d)
    qc = m0.dot(m0) - radius * radius
    disc = math.sqrt(qb * qb - 4.0 * qa * qc)
    # qc < 0, so the roots have opposite signs; pick the positive one without cancellation
    if qb >= 0:
        s = 2.0 * qc / (-qb - disc)
    else:
        s = (-qb + disc) / (2.0 * qa)
    s = min(s, 1.0)
    return CartesianPoint(m0.x + s * d.x, m0.y + s * d.y)


def iterate_once(scene: SceneConfig, phi: float) -> float:
    """One geometric step f(phi), built from Cartesian constructions."""
    m0 = scene.surface_point(phi)
    a_prime = line_circle_intersection(m0, scene.b, scene.r_a)
    return 0.5 * (scene.theta + math.atan2(a_prime.y, a_prime.x))


def _checked_asin(x: float) -> float:
    if not -1.0 - 1e-12 <= x <= 1.0 + 1e-12:
        raise NumericalError(f"asin argument {x!r} outside [-1, 1]")
    return math.asin(max(-1.0, min(1.0, x)))


def closed_form_iterate(scene: SceneConfig, phi: float) -> float:
    """f(phi) from the triangle-area identity, no intersection needed.

    With gamma = theta + phi, the angle A'OB equals the angle at A' of
    triangle OA'B (obtuse, taken as its supplement) minus the angle at B of
    triangle OM0B; both follow from the law of sines.
    """
    r, r_a, r_b = scene.r, scene.r_a, scene.r_b
    gamma = scene.theta + phi
    s = math.sin(gamma)
    r_m0b = math.sqrt(r * r + r_b * r_b - 2.0 * r * r_b * math.cos(gamma))
    at_a_prime = _checked_asin(r * r_b * s / (r_a * r_m0b))
    at_b = _checked_asin(r * s / r_m0b)
    return 0.5 * (at_a_prime - at_b)


def convergence_rate(trace: IterationTrace, last: int = 3) -> float:
    """Linear convergence factor k estimated from a trace.

    Geometric mean of the error ratios |phi_{n+1} - phi*| / |phi_n - phi*|
    over the ``last`` usable steps, where phi* is the final iterate.  Errors
    near round-off are skipped.  A trace that starts on (or lands in one
    step on) the fixed point gives 0.
    """
    phis = trace.phis
    if len(phis) < 2:
        raise InsufficientTrace(f"need at least 2 iterates, got {len(phis)}")
    target = phis[-1]
    floor = 1e-13 * max(1.0, abs(target))
    errors = [abs(p - target) for p in phis[:-1]]

    def usable(limit):
        return [
            errors[i + 1] / errors[i]
            for i in range(len(errors) - 1)
            if errors[i + 1] > limit and errors[i] > limit
        ]

    # the final iterate is itself off by about the last step, so errors of
    # that size carry no ratio information
    last_step = abs(phis[-1] - phis[-2])
    ratios = usable(max(floor, 1e3 * last_step)) or usable(floor)
    if not ratios:
        if errors[0] <= floor or len(errors) == 1 or errors[1] <= floor:
            return 0.0
        raise InsufficientTrace("no error ratios above round-off")
    ratios = ratios[-last:]
    return math.exp(sum(math.log(x) for x in ratios) / len(ratios))


def solve_fixed_point(
    scene: SceneConfig,
    phi0: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SpecularResult:
    """Iterate the construction from ``phi0`` until successive iterates agree to ``tol``.

    Raises :class:`MaxIterExceeded` (carrying the partial trace) when
    ``max_iter`` steps do not reach the tolerance.
    """
    if not (math.isfinite(tol) and tol > 0):
        raise InvalidTolerance(f"tolerance must be positive and finite, got {tol!r}")
    if max_iter < 1:
        raise InvalidTolerance(f"max_iter must be >= 1, got {max_iter!r}")
    upper = phi_upper_bound(scene)
    if not -_DOMAIN_SLACK <= phi0 <= upper + _DOMAIN_SLACK:
        raise PreconditionViolated(f"initial guess {phi0!r} outside [0, {upper!r}]")

    phis = [phi0]
    residuals = []
    converged = False
    for _ in range(max_iter):
        nxt = iterate_once(scene, phis[-1])
        residuals.append(abs(nxt - phis[-1]))
        phis.append(nxt)
        if residuals[-1] <= tol:
            converged = True
            break
    mismatch = tuple(specular_mismatch(scene, p) for p in phis)
    trace = IterationTrace(tuple(phis), tuple(residuals), mismatch, converged)
    if not converged:
        raise MaxIterExceeded(
            f"no convergence to {tol!r} after {max_iter} iterations "
            f"(last step {residuals[-1]!r})",
            trace,
        )
    try:
        rate = convergence_rate(trace)
    except InsufficientTrace:
        rate = math.nan
    trace = IterationTrace(trace.phis, trace.residuals, mismatch, True, rate)

    phi_m = phis[-1]
    warnings = []
    if scene.grazing:
        warnings.append("grazing")
    if abs(mismatch[-1]) > 10.0 * tol:
        warnings.append("mismatch-above-tolerance")
    psi_a, psi_b = incidence_angles(scene, phi_m)
    return SpecularResult(
        phi_m=phi_m,
        point=scene.surface_point(phi_m),
        incidence_angle=0.5 * (psi_a + psi_b),
        iterations=len(residuals),
        final_mismatch=mismatch[-1],
        warnings=tuple(warnings),
        trace=trace,
    )
