"""Specular reflection point on a sphere for two external focal points.

Three routes to the same angle: roots of a quartic in tan(phi), a
ruler-and-compass fixed-point iteration, and a brute-force scan used as
referee.  A single iteration doubles as a closed-form approximation.
"""
from .approx import (
    FirstOrderError,
    FirstOrderTerms,
    eq2_alternate_reading,
    eq2_as_printed,
    first_order_error,
    first_order_phi,
    first_order_terms,
    relative_error,
)
from .errors import *  # noqa: F401,F403
from .iterate import (
    IterationTrace,
    SpecularResult,
    closed_form_iterate,
    convergence_rate,
    iterate_once,
    line_circle_intersection,
    solve_fixed_point,
)
from .oracle import OracleResult, brute_force_specular
from .quartic import (
    QuarticCoefficients,
    ReflectionType,
    RootEntry,
    RootSet,
    classify_root,
    classify_roots,
    quartic_coefficients,
    scene_roots,
    select_specular_root,
    solve_quartic,
    solve_quartic_route,
)
from .scene import (
    CartesianPoint,
    PolarPoint,
    SceneConfig,
    b_horizon,
    focal_separation,
    incidence_angles,
    monotone_upper_bound,
    phi_upper_bound,
    specular_mismatch,
    theta_max,
    to_cartesian,
    validate_scene,
)

__version__ = "0.1.0"
