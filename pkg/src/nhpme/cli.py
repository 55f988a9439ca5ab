"""Command-line entry point: ``nhpme run | list-scenarios | calibrate | figure1``.

Exit codes: 0 pass, 1 threshold failure, 2 hypothesis violation,
3 numerical abort, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import scenarios as sc
from .core import DomainError, Grid1D, build_initial_field
from .profiles import (CalibrationError, calibrate_C0, calibrate_s0, k_of_M0,
                       solve_heaviside_profile)
from .solvers import SolverError

logger = logging.getLogger("nhpme")


def _parse_params(items):
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise sc.HypothesisViolation(f"parameter {item!r} is not key=value")
        try:
            out[key] = float(val)
        except ValueError:
            out[key] = val
    return out


def _calibrate(profile, params):
    m = float(params.get("m", 2.0))
    if profile == "C0":
        return {"C0": calibrate_C0(float(params["mass"]), m)}
    if profile == "k":
        return {"k": k_of_M0(float(params["M0"]), m)}
    if profile == "xi_star":
        table = solve_heaviside_profile(m, float(params.get("tol", 1e-6)))
        return {"xi_star": table.xi_star, "f_left": float(table.f[0])}
    if profile == "s0":
        spec = {"kind": params.get("datum", "plateau")}
        spec.update({k: v for k, v in params.items()
                     if k not in ("datum", "m", "s_min", "s_max", "n_cells")})
        datum = sc.make_datum(spec, m)
        grid = Grid1D(float(params.get("s_min", -30.0)), float(params.get("s_max", 140.0)),
                      int(params.get("n_cells", 3400)))
        K = float(datum.origin_value)
        s0 = calibrate_s0(build_initial_field(datum, grid), K, m)
        return {"s0": s0, "x0": math.exp(s0), "K": K, "c": K ** (m - 1.0)}
    raise sc.HypothesisViolation(f"unknown profile {profile!r} (C0, k, xi_star, s0)")


def _execute(cfg, out_override, plots=True):
    result = sc.run_scenario(cfg)
    directory = sc.output_dir(result.config, out_override)
    sc.write_outputs(result, directory, plots=plots)
    for name, ok in result.checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(f"wrote {directory}")
    return result.exit_code


def build_parser():
    p = argparse.ArgumentParser(prog="nhpme", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario from a JSON config")
    r.add_argument("config")
    r.add_argument("--out", help=f"output root (overrides ${sc.OUTPUT_ENV})")
    r.add_argument("--no-plots", action="store_true")
    sub.add_parser("list-scenarios", help="list scenario names")
    c = sub.add_parser("calibrate", help="calibrate a profile constant")
    c.add_argument("profile", choices=["C0", "k", "xi_star", "s0"])
    c.add_argument("params", nargs="*", help="key=value pairs, e.g. mass=1 m=2")
    f = sub.add_parser("figure1", help="u0 = 0.1 (0.5 - x^2)_+, m = 3, N = 1")
    f.add_argument("config", nargs="?", help="optional JSON overrides")
    f.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "list-scenarios":
            for name, text in sc.describe_scenarios():
                print(f"{name:22s} {text}")
            return sc.EXIT_PASS
        if args.command == "calibrate":
            res = _calibrate(args.profile, _parse_params(args.params))
            print(json.dumps(res, sort_keys=True))
            return sc.EXIT_PASS
        if args.command == "run":
            return _execute(sc.load_config(args.config), args.out, not args.no_plots)
        if args.command == "figure1":
            over = {}
            if args.config:
                with open(args.config) as fh:
                    over = json.load(fh)
            return _execute(sc.figure1_config(over), args.out)
    except (sc.HypothesisViolation, DomainError, CalibrationError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return sc.EXIT_HYPOTHESIS
    except SolverError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return sc.EXIT_ABORT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return sc.EXIT_IO
    return sc.EXIT_HYPOTHESIS


if __name__ == "__main__":
    sys.exit(main())
