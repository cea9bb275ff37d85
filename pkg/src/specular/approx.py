"""Single-iteration (first-order) estimate of the specular angle and its error.

One step of the construction from a guess phi0 already lands close to the
answer.  It has a closed form in terms of two triangle areas and the
distance from the guess to B.  The reference area formula, taken
literally, does not reproduce that step; it is kept so the gap stays
measurable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DenominatorVanishes
from .iterate import closed_form_iterate, solve_fixed_point
from .scene import SceneConfig

# below this |phi_m| the error is reported in absolute terms
DEGENERATE_PHI = 1e-12


@dataclass(frozen=True)
class FirstOrderTerms:
    e_b: float  # area of triangle O, M0, B
    e_a: float  # area of triangle O, M0, F with F on OB at radius r
    r_m0b: float
    gamma: float


def first_order_terms(scene: SceneConfig, phi0: float) -> FirstOrderTerms:
    r, r_b = scene.r, scene.r_b
    gamma = scene.theta + phi0
    s = math.sin(gamma)
    return FirstOrderTerms(
        e_b=0.5 * r * r_b * s,
        e_a=0.5 * r * r * s,
        r_m0b=math.sqrt(r * r + r_b * r_b - 2.0 * r * r_b * math.cos(gamma)),
        gamma=gamma,
    )


def _area_formula(r_a: float, r_m0b: float, e_b: float, e_a: float) -> float:
    k = (r_a * r_m0b) ** 2
    den = k - 4.0 * e_b * e_b - 4.0 * e_a * e_a
    num = 2.0 * e_b * math.sqrt(max(k - 4.0 * e_b * e_b, 0.0)) - 2.0 * e_a * math.sqrt(
        max(k - 4.0 * e_a * e_a, 0.0)
    )
    if abs(den) <= 1e-15 * k:
        raise DenominatorVanishes(
            f"denominator {den!r} vanishes (r_a={r_a!r}, r_m0b={r_m0b!r}, E_B={e_b!r}, E_A={e_a!r})"
        )
    return math.atan(num / den)


def eq2_as_printed(scene: SceneConfig, phi0: float) -> float:
    """Reference area formula, evaluated literally.

    Not used as the first-order value: at the (1, 2, 3, pi/6) instance it
    gives about 0.1273 where one step of the construction gives 0.0320.
    """
    t = first_order_terms(scene, phi0)
    return _area_formula(scene.r_a, t.r_m0b, t.e_b, t.e_a)


def eq2_alternate_reading(scene: SceneConfig, phi0: float) -> float:
    """The area formula with F on the circle of radius r_a, halved.

    With that area, the arctangent yields the full angle A'OB (it is
    tan(x - y) written through sin x and sin y), so halving gives the
    bisector angle.  Matches :func:`first_order_phi` to round-off.
    """
    t = first_order_terms(scene, phi0)
    e_a = 0.5 * scene.r * scene.r_a * math.sin(t.gamma)
    return 0.5 * _area_formula(scene.r_a, t.r_m0b, t.e_b, e_a)


def first_order_phi(scene: SceneConfig, phi0: float) -> float:
    return closed_form_iterate(scene, phi0)


@dataclass(frozen=True)
class FirstOrderError:
    phi0: float
    first_order: float
    phi_m: float
    absolute: float
    relative: float
    # True when phi_m ~ 0 and ``relative`` holds the absolute error instead
    absolute_mode: bool


def first_order_error(scene: SceneConfig, phi0: float, phi_m: float | None = None) -> FirstOrderError:
    if phi_m is None:
        phi_m = solve_fixed_point(scene).phi_m
    approx = first_order_phi(scene, phi0)
    absolute = abs(approx - phi_m)
    if abs(phi_m) < DEGENERATE_PHI:
        return FirstOrderError(phi0, approx, phi_m, absolute, abs(approx), True)
    return FirstOrderError(phi0, approx, phi_m, absolute, absolute / abs(phi_m), False)


def relative_error(scene: SceneConfig, phi0: float) -> float:
    """|first_order_phi - phi_m| / |phi_m|; absolute error when phi_m ~ 0."""
    return first_order_error(scene, phi0).relative
