"""Brute-force specular point: grid scan plus bisection on the angle mismatch.

Deliberately naive.  It uses nothing but the definition (equal angles with
the surface normal) and serves as the referee for the quartic and
fixed-point routes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSignChange, PreconditionViolated
from .scene import SceneConfig, phi_upper_bound, specular_mismatch

DEFAULT_GRID = 100_000
BRACKET_WIDTH = 1e-14
ENDPOINT_TOL = 1e-10


@dataclass(frozen=True)
class OracleResult:
    phi_star: float
    bracket: tuple[float, float]
    evaluations: int


def _mismatch_grid(scene: SceneConfig, phis: np.ndarray) -> np.ndarray:
    mx, my = scene.r * np.cos(phis), scene.r * np.sin(phis)
    # oriented angles from the outward normal: A counter-clockwise, B clockwise
    out = []
    for fx, fy in ((scene.a.x, scene.a.y), (scene.b.x, scene.b.y)):
        dx, dy = fx - mx, fy - my
        out.append(np.arctan2(mx * dy - my * dx, mx * dx + my * dy))
    return out[0] + out[1]


def brute_force_specular(scene: SceneConfig, grid_n: int = DEFAULT_GRID) -> OracleResult:
    if grid_n < 1000:
        raise PreconditionViolated(f"grid_n must be >= 1000, got {grid_n}")
    upper = phi_upper_bound(scene)
    if upper <= 0.0:
        # bisector is the only admissible point (r_a = r_b or collinear)
        return OracleResult(0.0, (0.0, 0.0), 1)

    grid = np.linspace(0.0, upper, grid_n + 1)
    values = _mismatch_grid(scene, grid)
    evaluations = grid.size
    exact = np.flatnonzero(values == 0.0)
    if exact.size:
        phi = float(grid[exact[0]])
        return OracleResult(phi, (phi, phi), evaluations)
    flips = np.flatnonzero(np.signbit(values[:-1]) != np.signbit(values[1:]))
    if flips.size == 0:
        # tangency scenes put the root on the end of the arc
        if abs(values[-1]) <= ENDPOINT_TOL:
            return OracleResult(upper, (upper, upper), evaluations)
        raise NoSignChange(f"mismatch keeps one sign on [0, {upper!r}] for {scene}")

    i = int(flips[0])
    lo, hi = float(grid[i]), float(grid[i + 1])
    f_lo = specular_mismatch(scene, lo)
    while hi - lo > BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = specular_mismatch(scene, mid)
        evaluations += 1
        if f_mid == 0.0:
            lo = hi = mid
            break
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return OracleResult(0.5 * (lo + hi), (lo, hi), evaluations)
