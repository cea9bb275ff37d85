"""Command-line front end.

Every subcommand prints one table (CSV or JSON) to stdout, diagnostics go
to stderr.  Exit codes: 0 ok, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import approx, iterate, oracle, quartic, scene as sc
from .errors import NumericalError, SpecularError, ValidationError

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3

# how many rows of a sweep --verify re-checks against the oracle
VERIFY_SAMPLE = 8


class Table:
    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, **values):
        self.rows.append([values[c] for c in self.columns])


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        data = {c: [_json_value(row[i]) for row in table.rows] for i, c in enumerate(table.columns)}
        return json.dumps({"columns": table.columns, "data": data}, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _linspace(lo, hi, n):
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n - 1)] + [hi]


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _scene(args):
    return sc.validate_scene(args.r, args.ra, args.rb, 0.5 * _angle(args, args.angle2))


def _verify(scene, phi_m):
    ref = oracle.brute_force_specular(scene)
    mis = sc.specular_mismatch(scene, phi_m)
    if abs(ref.phi_star - phi_m) > 1e-9 or abs(mis) > 1e-10:
        raise NumericalError(
            f"verify failed: phi_m={phi_m!r}, oracle={ref.phi_star!r}, mismatch={mis!r}"
        )
    return ref.phi_star


def _verify_sample(pairs, stderr):
    if not pairs:
        return
    idx = sorted({round(i * (len(pairs) - 1) / max(VERIFY_SAMPLE - 1, 1)) for i in range(VERIFY_SAMPLE)})
    for i in idx:
        _verify(*pairs[i])
    print(f"verify: {len(idx)} rows agree with the brute-force oracle", file=stderr)


# -- subcommands ------------------------------------------------------------


def cmd_solve(args, stderr) -> Table:
    scene = _scene(args)
    res = iterate.solve_fixed_point(scene, _angle(args, args.phi0), args.tol, args.max_iter)
    phi_q = quartic.solve_quartic_route(scene)
    phi_o = oracle.brute_force_specular(scene).phi_star
    if args.verify:
        _verify(scene, res.phi_m)
        print("verify: fixed-point answer agrees with the brute-force oracle", file=stderr)
    out = scene.to_input_frame
    table = Table(
        [
            "phi_m", "phi_m_deg", "x", "y", "incidence_angle", "iterations", "rate",
            "mismatch_fixed_point", "phi_quartic", "mismatch_quartic", "phi_oracle",
            "mismatch_oracle", "quartic_minus_fixed_point", "oracle_minus_fixed_point",
            "swapped", "warnings",
        ]
    )
    table.add(
        phi_m=out(res.phi_m),
        phi_m_deg=math.degrees(out(res.phi_m)),
        x=res.point.x,
        y=out(res.point.y),
        incidence_angle=res.incidence_angle,
        iterations=res.iterations,
        rate=res.trace.rate_estimate,
        mismatch_fixed_point=res.final_mismatch,
        phi_quartic=out(phi_q),
        mismatch_quartic=sc.specular_mismatch(scene, phi_q),
        phi_oracle=out(phi_o),
        mismatch_oracle=sc.specular_mismatch(scene, phi_o),
        quartic_minus_fixed_point=out(phi_q - res.phi_m),
        oracle_minus_fixed_point=out(phi_o - res.phi_m),
        swapped=scene.swapped,
        warnings=";".join(res.warnings),
    )
    return table


def cmd_roots(args, stderr) -> Table:
    table = Table(["t", "phi", "circle_phi", "kind", "residual", "angle_sum_check", "physical"])
    if args.coeffs is not None:
        roots = quartic.solve_quartic([float(c) for c in args.coeffs.split(",")])
        for e in roots:
            table.add(t=e.t, phi=e.phi, circle_phi=math.nan, kind="", residual=e.residual,
                      angle_sum_check=math.nan, physical=False)
        return table
    if args.ra is None or args.rb is None or args.angle2 is None:
        raise ValidationError("roots needs --r --ra --rb --angle2, or --coeffs")
    scene = _scene(args)
    roots = quartic.scene_roots(scene)
    phi_m = quartic.select_specular_root(scene, roots)
    if args.verify:
        _verify(scene, phi_m)
    physical = min(roots, key=lambda e: (e.kind is not quartic.ReflectionType.EXTERNAL,
                                         abs(e.circle_phi - phi_m)))
    out = scene.to_input_frame
    rows = []
    for e in roots:
        rows.append(dict(t=out(e.t), phi=out(e.phi), circle_phi=sc.normalize_angle(out(e.circle_phi)),
                         kind=e.kind.value, residual=e.residual,
                         angle_sum_check=e.angle_sum_error, physical=e is physical))
    for row in sorted(rows, key=lambda d: (d["phi"], d["circle_phi"])):
        table.add(**row)
    return table


def cmd_sweep_theta(args, stderr) -> Table:
    scene0 = sc.validate_scene(args.r, args.ra, args.rb, 0.0)
    top = sc.theta_max(scene0.r, scene0.r_a, scene0.r_b)
    if args.max_angle2 is not None:
        top = min(top, _angle(args, args.max_angle2))
    table = Table(["theta2", "phi_m", "iterations", "rate", "grazing"])
    checks = []
    for theta2 in _linspace(0.0, top, args.grid):
        scene = sc.validate_scene(args.r, args.ra, args.rb, 0.5 * theta2)
        res = iterate.solve_fixed_point(scene, 0.0, args.tol, args.max_iter)
        checks.append((scene, res.phi_m))
        table.add(theta2=theta2, phi_m=scene.to_input_frame(res.phi_m), iterations=res.iterations,
                  rate=res.trace.rate_estimate, grazing=scene.grazing)
    if args.verify:
        _verify_sample(checks, stderr)
    return table


def cmd_iterate_map(args, stderr) -> Table:
    scene = _scene(args)
    upper = sc.phi_upper_bound(scene)
    table = Table(["phi", "f_phi", "diagonal_gap"])
    for phi in _linspace(0.0, upper, args.grid):
        f_phi = iterate.iterate_once(scene, phi)
        out = scene.to_input_frame
        table.add(phi=out(phi), f_phi=out(f_phi), diagonal_gap=out(f_phi - phi))
    if args.verify:
        _verify(scene, iterate.solve_fixed_point(scene, 0.0, args.tol, args.max_iter).phi_m)
    return table


def _eq2_columns(scene, phi0):
    values = {}
    for name, fn in (("eq2_printed_value", approx.eq2_as_printed),
                     ("eq2_alternate_reading", approx.eq2_alternate_reading)):
        try:
            values[name] = fn(scene, phi0)
        except NumericalError:
            values[name] = math.nan
    return values


def cmd_error_sweep(args, stderr) -> Table:
    common = ["first_order", "phi_m", "rel_error", "abs_error", "absolute_mode",
              "eq2_printed_value", "eq2_alternate_reading", "eq2_printed_gap"]
    phi0_in = _angle(args, args.phi0)
    checks = []

    def record(scene, phi0):
        res = iterate.solve_fixed_point(scene, 0.0, args.tol, args.max_iter)
        checks.append((scene, res.phi_m))
        err = approx.first_order_error(scene, phi0, res.phi_m)
        out = scene.to_input_frame
        row = {"phi0": out(phi0), "first_order": out(err.first_order), "phi_m": out(err.phi_m),
               "rel_error": err.relative, "abs_error": err.absolute,
               "absolute_mode": err.absolute_mode}
        row.update({k: out(v) for k, v in _eq2_columns(scene, phi0).items()})
        # signed gap between the printed formula and the construction, kept visible on purpose
        row["eq2_printed_gap"] = row["eq2_printed_value"] - row["first_order"]
        return row

    if args.vary == "theta":
        scene0 = sc.validate_scene(args.r, args.ra, args.rb, 0.0)
        top = sc.theta_max(scene0.r, scene0.r_a, scene0.r_b)
        if args.max_angle2 is not None:
            top = min(top, _angle(args, args.max_angle2))
        table = Table(["theta2", "phi0"] + common)
        for theta2 in _linspace(0.0, top, args.grid):
            scene = sc.validate_scene(args.r, args.ra, args.rb, 0.5 * theta2)
            # a fixed guess is clipped into each scene's admissible arc
            phi0 = min(max(scene.to_input_frame(phi0_in), 0.0), sc.phi_upper_bound(scene))
            table.add(theta2=theta2, **record(scene, phi0))
    else:
        scene = _scene(args)
        grid = _linspace(0.0, sc.phi_upper_bound(scene), args.grid)
        if args.include_solution:
            phi_m = iterate.solve_fixed_point(scene, 0.0, args.tol, args.max_iter).phi_m
            grid = sorted(set(grid) | {phi_m})
        table = Table(["phi0"] + common)
        rows = [record(scene, phi0) for phi0 in grid]
        for row in sorted(rows, key=lambda row: row["phi0"]):
            table.add(**row)
    if args.verify:
        _verify_sample(checks, stderr)
    return table


COMMANDS = {
    "solve": cmd_solve,
    "roots": cmd_roots,
    "sweep-theta": cmd_sweep_theta,
    "iterate-map": cmd_iterate_map,
    "error-sweep": cmd_error_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specular",
        description="Specular reflection point on a sphere for two external focal points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scene_args(p, need_angle=True, need_radii=True):
        p.add_argument("--r", type=float, default=1.0, help="sphere radius")
        p.add_argument("--ra", type=float, required=need_radii, help="distance O->A")
        p.add_argument("--rb", type=float, required=need_radii, help="distance O->B")
        if need_angle:
            p.add_argument("--angle2", type=float, required=True, help="full angle AOB (2*theta)")
        p.add_argument("--degrees", action="store_true", help="angle inputs are in degrees")
        p.add_argument("--phi0", type=float, default=0.0, help="initial guess")
        p.add_argument("--tol", type=float, default=iterate.DEFAULT_TOL)
        p.add_argument("--max-iter", type=int, default=iterate.DEFAULT_MAX_ITER)
        p.add_argument("--grid", type=int, default=256, help="number of grid points")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--verify", action="store_true",
                       help="re-check answers against the brute-force oracle")
        p.add_argument("--out", help="write output to this file instead of stdout")

    scene_args(sub.add_parser("solve", help="specular point, cross-checked by all routes"))

    p = sub.add_parser("roots", help="the four roots of the quartic, classified")
    scene_args(p, need_angle=False, need_radii=False)
    p.add_argument("--angle2", type=float, help="full angle AOB (2*theta)")
    p.add_argument("--coeffs", help="solve c4,c3,c2,c1,c0 directly instead of a scene")

    for name, help_text in (("sweep-theta", "specular angle against the angle AOB"),
                            ("error-sweep", "first-order error against angle AOB or initial guess")):
        p = sub.add_parser(name, help=help_text)
        scene_args(p, need_angle=False)
        p.add_argument("--max-angle2", type=float, help="cap on the swept full angle")
        if name == "error-sweep":
            p.add_argument("--angle2", type=float, help="full angle AOB (for --vary phi0)")
            p.add_argument("--vary", choices=("phi0", "theta"), default="phi0")
            p.add_argument("--include-solution", action="store_true",
                           help="add the exact specular angle to the phi0 grid")

    scene_args(sub.add_parser("iterate-map", help="one-step map f(phi) over the admissible arc"))
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.grid < 1:
            raise ValidationError(f"--grid must be >= 1, got {args.grid}")
        if args.command == "error-sweep" and args.vary == "phi0" and args.angle2 is None:
            raise ValidationError("error-sweep --vary phi0 needs --angle2")
        table = COMMANDS[args.command](args, stderr)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_VALIDATION
    except SpecularError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_NUMERICAL
    text = render(table, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
