import math

import numpy as np
import pytest

from specular import (
    DenominatorVanishes,
    eq2_alternate_reading,
    eq2_as_printed,
    first_order_error,
    first_order_phi,
    first_order_terms,
    iterate_once,
    phi_upper_bound,
    relative_error,
    solve_fixed_point,
    theta_max,
    validate_scene,
)
from specular.approx import _area_formula

PHI_M = 0.036119356509677314


def shoelace(*pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return 0.5 * abs(sum(xs[i] * ys[i - 1] - xs[i - 1] * ys[i] for i in range(len(pts))))


def test_terms_pinned(pinned):
    t = first_order_terms(pinned, 0.0)
    b = (pinned.b.x, pinned.b.y)
    assert t.e_b == pytest.approx(0.38822856765378114, abs=1e-15)
    assert t.e_b == pytest.approx(shoelace((0, 0), (1, 0), b), abs=1e-15)
    f = (math.cos(pinned.theta), -math.sin(pinned.theta))
    assert t.e_a == pytest.approx(0.12940952255126038, abs=1e-15)
    assert t.e_a == pytest.approx(shoelace((0, 0), (1, 0), f), abs=1e-15)
    assert t.r_m0b == pytest.approx(2.050474345673603, abs=1e-14)


def test_terms_limits():
    s = validate_scene(1, 2, 3, 0.0)
    t = first_order_terms(s, 0.0)
    assert (t.e_a, t.e_b, t.r_m0b) == (0, 0, 2)
    s = validate_scene(1, 2, 3, math.pi / 4)
    t = first_order_terms(s, math.pi / 4)
    assert t.e_b == pytest.approx(1.5)
    assert t.r_m0b == pytest.approx(math.sqrt(10))


def test_eq2_printed_pinned(pinned):
    assert eq2_as_printed(pinned, 0.0) == pytest.approx(0.12733188414668407, abs=1e-14)
    assert abs(eq2_as_printed(pinned, 0.0) - iterate_once(pinned, 0.0)) > 0.05


def test_eq2_printed_zero_gamma():
    assert eq2_as_printed(validate_scene(1, 2, 3, 0.0), 0.0) == 0.0


def test_eq2_printed_odd_in_phi0_when_collinear():
    s0 = validate_scene(1, 2, 2, 0.0)
    for phi0 in (0.05, 0.1, 0.2):
        assert eq2_as_printed(s0, -phi0) == pytest.approx(-eq2_as_printed(s0, phi0), abs=1e-15)


def test_denominator_vanishes():
    # k - 4 e_b^2 - 4 e_a^2 = 0 with k = 1: e_b = e_a = sqrt(1/8)
    e = math.sqrt(1 / 8)
    with pytest.raises(DenominatorVanishes):
        _area_formula(1.0, 1.0, e, e)


def test_alternate_reading_reproduces_step(scenes200):
    for s in scenes200[:50]:
        ub = phi_upper_bound(s)
        for phi0 in np.linspace(0, ub, 17):
            assert eq2_alternate_reading(s, phi0) == pytest.approx(iterate_once(s, phi0), abs=1e-10)


def test_first_order_phi(pinned):
    assert first_order_phi(pinned, 0.0) == pytest.approx(0.0319621301349117, abs=1e-15)
    assert first_order_phi(pinned, PHI_M) == pytest.approx(PHI_M, abs=1e-15)
    assert first_order_phi(validate_scene(1, 2, 2, 0.3), 0.0) == pytest.approx(0, abs=1e-15)


def test_relative_error_pinned(pinned):
    assert relative_error(pinned, 0.0) == pytest.approx(0.11509691136528927, abs=1e-10)
    assert relative_error(pinned, PHI_M) <= 1e-10


def test_relative_error_degenerate():
    err = first_order_error(validate_scene(1, 2, 2, 0.3), 0.0)
    assert err.absolute_mode
    assert err.relative == pytest.approx(0, abs=1e-15)


def test_error_shrinks_toward_solution(scenes200):
    for s in scenes200[:50]:
        phi_m = solve_fixed_point(s).phi_m
        if phi_m < 1e-9:
            continue
        for start in (0.0, phi_upper_bound(s)):
            guesses = [phi_m + (start - phi_m) * 0.8**k for k in range(40)]
            errs = [relative_error(s, g) for g in guesses]
            assert all(b <= a + 1e-13 for a, b in zip(errs, errs[1:]))
            assert errs[-1] < 1e-3 * max(errs[0], 1e-12) + 1e-12


def test_error_bounded_by_contraction(scenes200):
    for s in scenes200[:50]:
        phi_m = solve_fixed_point(s).phi_m
        if phi_m < 1e-9:
            continue
        for phi0 in np.linspace(0, phi_upper_bound(s), 9):
            bound = 0.5 * abs(phi0 - phi_m) / phi_m
            assert relative_error(s, phi0) <= bound * (1 + 1e-9) + 1e-10


@pytest.mark.parametrize("r_a, r_b", [(2.0, 3.0), (1.5, 9.0), (4.0, 4.5)])
def test_small_angle_limit(r_a, r_b):
    # linearizing f at theta = 0: relative error -> f'(0), which is not zero
    limit = (r_b - r_a) / (2 * r_a * (r_b - 1))
    top = theta_max(1, r_a, r_b)
    errs = [first_order_error(validate_scene(1, r_a, r_b, top * 10.0**-k / 2), 0.0) for k in (2, 4, 6)]
    assert all(abs(e.relative - limit) < 1e-4 for e in errs)
    # the absolute error does shrink linearly with the angle
    assert errs[1].absolute < 2e-2 * errs[0].absolute
    assert errs[2].absolute < 2e-2 * errs[1].absolute
