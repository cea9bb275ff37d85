import math

import numpy as np
import pytest

from specular import oracle

from specular import (
    NoSignChange,
    brute_force_specular,
    scene_roots,
    select_specular_root,
    solve_fixed_point,
    specular_mismatch,
    theta_max,
    validate_scene,
)
from specular.errors import PreconditionViolated


def test_pinned(pinned):
    res = brute_force_specular(pinned)
    assert res.phi_star == pytest.approx(0.036119356509677314, abs=1e-14)
    lo, hi = res.bracket
    assert hi - lo <= 1e-14
    assert abs(specular_mismatch(pinned, res.phi_star)) <= 1e-13
    assert res.evaluations > 100_000


def test_symmetric():
    res = brute_force_specular(validate_scene(1, 2, 2, 0.7))
    assert abs(res.phi_star) <= 1e-14


def test_small_angle_pinch():
    s = validate_scene(1, 2, 3, 0.5e-6)
    assert 0 <= brute_force_specular(s).phi_star <= 1e-6


def test_grazing_root_at_end_of_arc():
    s = validate_scene(1, 1.01, 1.02, theta_max(1, 1.01, 1.02) / 2)
    res = brute_force_specular(s)
    assert res.phi_star == pytest.approx(solve_fixed_point(s).phi_m, abs=1e-12)


def test_grid_minimum(pinned):
    with pytest.raises(PreconditionViolated):
        brute_force_specular(pinned, 999)


def test_no_sign_change_is_reported(pinned, monkeypatch):
    monkeypatch.setattr(oracle, "_mismatch_grid", lambda scene, phis: np.ones_like(phis))
    with pytest.raises(NoSignChange):
        brute_force_specular(pinned, 1000)


def test_three_routes(scenes200):
    for s in scenes200:
        ref = brute_force_specular(s, 20_000).phi_star
        assert abs(ref - select_specular_root(s, scene_roots(s))) <= 1e-9
        assert abs(ref - solve_fixed_point(s).phi_m) <= 1e-9
        assert abs(specular_mismatch(s, ref)) <= 1e-13
