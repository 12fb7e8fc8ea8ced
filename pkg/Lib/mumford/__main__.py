# __main__.py
# -*- coding: utf-8 -*-
#
# The python script in this file is part of mumford, a toolkit for Mumford systems
# on singular hyperelliptic curves and their generalized Jacobians.
#
# Copyright (C) 2024-2026 The mumford contributors
#
# This code is free software; you can redistribute it and/or modify it under
# the terms of the GNU General Public License as published by the Free Software
# Foundation; either version 2 of the License, or (at your option) any later
# version.
#
# You should have received a copy of the GNU General Public License along with
# this file; if not, write to the Free Software Foundation, Inc., 51 Franklin
# Street, Fifth Floor, Boston, MA  02110-1301, USA

# ----------------------------------------------------------------------------

"""
This is the top level script for experiments with Mumford systems on singular hyperelliptic curves. Every command
prints (or writes with --out) a JSON report which embeds its configuration; trajectories are written as CSV.

Exit codes: 0 when every check of the report passes, 1 when one fails, 2 on malformed input.
"""

import argparse
import json
import logging
import sys
import time
from typing import Any, Dict, List, Optional, Tuple

from . import constants
from .codec import (class_from_json, class_to_json, curve_to_json, divisor_from_json, divisor_to_json,
                    load_json_argument, matrix_from_json, matrix_to_json, poly_from_json, poly_to_json,
                    read_trajectory_csv, write_json, write_trajectory_csv)
from .curve import CurveData, analyze_curve
from .gen_jacobian import (DivisorCountMismatch, DivisorOnCPrime, GJClass, class_add, class_eq, class_neg,
                           is_m_equivalent, kernel_structure, phi_direct_data, phi_map, phi_map_direct, theta)
from .lax_dynamics import field_rank, flow_rk4, isospectral_drift, linearization_report
from .mumford_phase import gcd_structure, in_fiber, matrix_to_divisor, sample_fiber, stratum_index
from .riemann_roch import riemann_roch_dimensions
from .settings import RunConfig, add_common_arguments, run_config_from_args, tolerance
from .suite import checks, run_suite

Check = Tuple[str, bool, Dict[str, Any]]


def _curve(args) -> CurveData:
    h = poly_from_json(load_json_argument(args.h))
    if args.backend == constants.backend_approx:
        h = h.to_approx()
    return analyze_curve(h, args.tol)


def _report(config: RunConfig, start: float, result: Optional[Dict[str, Any]], report_checks: List[Check]
            ) -> Dict[str, Any]:
    return {
        "config": config.as_dict(),
        "result": result,
        "checks": [{"name": name, "status": "pass" if passed else "fail", "measured": measured}
                   for name, passed, measured in report_checks],
        "passed": all(passed for _, passed, _ in report_checks),
        "wall_time": time.perf_counter() - start,
    }


def _finish(config: RunConfig, report: Dict[str, Any]) -> int:
    write_json(report, config.output)
    return 0 if report["passed"] else 1


# Commands

def cmd_curve(args) -> int:
    start: float = time.perf_counter()
    config: RunConfig = run_config_from_args(args, h=args.h)
    c: CurveData = _curve(args)
    ranks = kernel_structure(c, args.seed)
    result: Dict[str, Any] = dict(curve_to_json(c), kernel=list(ranks))
    return _finish(config, _report(config, start, result, [
        ("delta_equals_n", c.delta == c.n, {"delta": c.delta, "n": c.n}),
        ("pi_equals_g", c.pi == c.g, {"pi": c.pi, "g": c.g}),
    ]))


def cmd_fiber(args) -> int:
    start: float = time.perf_counter()
    config: RunConfig = run_config_from_args(args, h=args.h, q=args.q)
    c: CurveData = _curve(args)

    if args.action == "sample":
        q = None if args.q is None else poly_from_json(load_json_argument(args.q))
        A = sample_fiber(c, args.seed, backend=None if args.backend == constants.backend_exact else args.backend,
                         q=q, tol=args.tol)
        write_json(matrix_to_json(A), config.output)
        return 0

    if args.matrix is None:
        raise ValueError("fiber check needs --matrix")
    A = matrix_from_json(load_json_argument(args.matrix))
    Q, verified = gcd_structure(A, c, args.tol)
    points = matrix_to_divisor(A, c, args.tol)
    rank: int = field_rank(A)
    result: Dict[str, Any] = {
        "matrix": matrix_to_json(A),
        "Q": poly_to_json(Q),
        "divisor": divisor_to_json(_as_divisor(points)),
        "field_rank": rank,
        "field_rank_full": rank == c.g,
    }
    return _finish(config, _report(config, start, result, [
        ("in_fiber", in_fiber(A, c.h, args.tol), {}),
        ("maximal_stratum", stratum_index(A, args.tol) == 0, {}),
        ("gcd_structure", verified, {"deg_Q": int(Q.degree)}),
    ]))


def _field_index(value: str, g: int) -> int:
    value = value.replace(" ", "")
    if value.startswith("g"):
        return g + int(value[1:] or 0)
    return int(value)


def cmd_flow(args) -> int:
    start: float = time.perf_counter()
    config: RunConfig = run_config_from_args(args, h=args.h, field=args.field, dt=args.dt, t_end=args.t_end)
    c: CurveData = _curve(args)

    if args.action == "run":
        A = matrix_from_json(load_json_argument(args.matrix)) if args.matrix is not None else \
            sample_fiber(c, args.seed, backend=constants.backend_approx, tol=args.tol)
        traj = flow_rk4(A, _field_index(args.field, A.g), args.t_end, args.dt)
        logging.info(f"Moment drift along the flow: {isospectral_drift(traj, c.h):.3e}")
        write_trajectory_csv(traj, c.h, config.output)
        return 0

    if args.traj is None:
        raise ValueError("flow report needs --traj")
    traj = read_trajectory_csv(args.traj)
    report = linearization_report(traj, c)
    drift: float = isospectral_drift(traj, c.h)
    return _finish(config, _report(config, start, report.as_dict(), [
        ("isospectral", drift <= 1e-6, {"drift": drift}),
        ("linearization", report.passed(1e-3), {"max_deviations": report.deviations()}),
    ]))


def _as_divisor(points) -> DivisorOnCPrime:
    return DivisorOnCPrime.of((p, 1) for p in points)


def _classes(args, c: CurveData) -> List[GJClass]:
    out: List[GJClass] = [class_from_json(load_json_argument(item), c) for item in args.classes or []]
    out.extend(theta(divisor_from_json(load_json_argument(item)), c, tol=args.tol) for item in args.divisors or [])
    return out


def _need(items: list, count: int, action: str) -> None:
    if len(items) != count:
        raise ValueError(f"jac {action} needs {count} classes or divisors, got {len(items)}")


def cmd_jac(args) -> int:
    start: float = time.perf_counter()
    config: RunConfig = run_config_from_args(args, h=args.h, divisors=args.divisors, classes=args.classes,
                                             matrix=args.matrix, direct=args.direct)
    c: CurveData = _curve(args)
    action: str = args.action
    report_checks: List[Check] = []

    if action == "theta":
        items: List[GJClass] = _classes(args, c)
        _need(items, 1, action)
        result: Dict[str, Any] = class_to_json(items[0], c)
    elif action == "add":
        items = _classes(args, c)
        _need(items, 2, action)
        result = class_to_json(class_add(items[0], items[1], c, args.tol), c)
    elif action == "neg":
        items = _classes(args, c)
        _need(items, 1, action)
        result = class_to_json(class_neg(items[0], c, args.tol), c)
    elif action == "eq":
        if args.divisors and len(args.divisors) == 2 and not args.classes:
            D1, D2 = (divisor_from_json(load_json_argument(item)) for item in args.divisors)
            equal: bool = is_m_equivalent(D1, D2, c, args.tol) if D1.degree == D2.degree else \
                class_eq(theta(D1, c, tol=args.tol), theta(D2, c, tol=args.tol), c, args.tol)
        else:
            items = _classes(args, c)
            _need(items, 2, action)
            equal = class_eq(items[0], items[1], c, args.tol)
        result = {"equal": equal}
    elif action == "rr":
        _need(args.divisors or [], 1, action)
        D = divisor_from_json(load_json_argument(args.divisors[0]))
        l_dim, i_dim = riemann_roch_dimensions(D, c)
        expected: int = D.degree + 1 - c.pi
        result = {"l": l_dim, "i": i_dim, "degree": D.degree, "pi": c.pi}
        report_checks.append(("riemann_roch", l_dim - i_dim == expected, {"l-i": l_dim - i_dim,
                                                                         "deg+1-pi": expected}))
    elif action == "kernel":
        ranks = kernel_structure(c, args.seed)
        result = {"mult_rank": ranks[0], "add_rank": ranks[1]}
    elif action == "phi":
        if args.matrix is None:
            raise ValueError("jac phi needs --matrix")
        A = matrix_from_json(load_json_argument(args.matrix))
        if args.direct:
            try:
                data = phi_direct_data(A, c, args.tol)
            except DivisorCountMismatch as error:
                report_checks.append(("divisor_counts", False, {"error": str(error)}))
                return _finish(config, _report(config, start, None, report_checks))
            result = dict(class_to_json(phi_map_direct(A, c, args.tol), c),
                          zeros=divisor_to_json(data.zeros), pole_order=data.pole_order)
            report_checks.append(("zero_count", data.zeros.degree == data.expected_zeros,
                                  {"zeros": data.zeros.degree, "expected": data.expected_zeros}))
            report_checks.append(("pole_order", data.pole_order == data.expected_pole_order,
                                  {"pole_order": data.pole_order, "expected": data.expected_pole_order}))
        else:
            result = class_to_json(phi_map(A, c, args.tol), c)
    else:
        assert False, f"Unknown jac action <{action}>"

    return _finish(config, _report(config, start, result, report_checks))


def cmd_suite(args) -> int:
    config: RunConfig = run_config_from_args(args, trials=args.trials, dt=args.dt, t_end=args.t_end,
                                             checks=args.checks)
    report: Dict[str, Any] = run_suite(config, args.checks)
    return _finish(config, report)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mumford", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest="command", required=True)

    def _with_curve(sub: argparse.ArgumentParser, required: bool = True) -> None:
        sub.add_argument('--h', dest='h', required=required,
                         help="Curve polynomial h as an ascending JSON coefficient list, or a JSON file.")
        add_common_arguments(sub)

    sub = commands.add_parser("curve", help="Analyze a curve.")
    sub.add_argument('action', choices=["analyze"], help="What to do with the curve.")
    _with_curve(sub)
    sub.set_defaults(handler=cmd_curve)

    sub = commands.add_parser("fiber", help="Sample and check matrices of an isospectral fiber.")
    sub.add_argument('action', choices=["sample", "check"], help="Draw a matrix, or check one.")
    sub.add_argument('--matrix', dest='matrix', default=None,
                     help="Matrix JSON {g, u, v, w}, a JSON file, or - for standard input.")
    sub.add_argument('--q', dest='q', default=None,
                     help="Monic divisor Q of P, as a JSON coefficient list, giving gcd(P, u, v) = Q.")
    _with_curve(sub)
    sub.set_defaults(handler=cmd_fiber)

    sub = commands.add_parser("flow", help="Integrate a Lax flow, or report on a trajectory.")
    sub.add_argument('action', nargs="?", choices=["run", "report"], default="run",
                     help="Integrate (the default), or analyze a trajectory CSV.")
    sub.add_argument('--matrix', dest='matrix', default=None,
                     help="Initial matrix; a seeded sample of the fiber when omitted.")
    sub.add_argument('--field', dest='field', default="0",
                     help="Index i of the field D_i; g-1 and similar are accepted.")
    sub.add_argument('--dt', dest='dt', type=float, default=1e-3, help="Step of the RK4 integrator.")
    sub.add_argument('--t-end', dest='t_end', type=float, default=1., help="Final time of the flow.")
    sub.add_argument('--traj', dest='traj', default=None, help="Trajectory CSV written by flow run.")
    _with_curve(sub)
    sub.set_defaults(handler=cmd_flow)

    sub = commands.add_parser("jac", help="Generalized Jacobian operations.")
    sub.add_argument('action', choices=["theta", "add", "eq", "neg", "rr", "kernel", "phi"],
                     help="Operation to perform.")
    sub.add_argument('--divisor', dest='divisors', action='append', default=None,
                     help="Divisor JSON [{x, z, mult}] (x = \"inf\" for infinity); may be repeated.")
    sub.add_argument('--class', dest='classes', action='append', default=None,
                     help="Class JSON {u, v, jets}; may be repeated.")
    sub.add_argument('--matrix', dest='matrix', default=None, help="Matrix JSON for jac phi.")
    sub.add_argument('--direct', dest='direct', action='store_true',
                     help="Compute phi through the zeros of its defining function.")
    _with_curve(sub)
    sub.set_defaults(handler=cmd_jac)

    sub = commands.add_parser("suite", help="Run the acceptance suite over the built-in corpus.")
    sub.add_argument('--trials', dest='trials', type=int, default=None,
                     help="Trial count for every randomized check (default: the full acceptance counts).")
    sub.add_argument('--dt', dest='dt', type=float, default=1e-3, help="Step of the isospectrality flows.")
    sub.add_argument('--t-end', dest='t_end', type=float, default=1., help="Final time of the isospectrality flows.")
    sub.add_argument('--check', dest='checks', action='append', choices=list(checks), default=None,
                     help="Run only this check; may be repeated.")
    add_common_arguments(sub)
    sub.set_defaults(handler=cmd_suite)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.basicConfig(level=logging.INFO)

    try:
        tolerance(args.tol)
        return args.handler(args)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as error:
        sys.stderr.write(f"mumford: {type(error).__name__}: {error}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
