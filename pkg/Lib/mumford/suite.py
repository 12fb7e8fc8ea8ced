# suite.py
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
The acceptance suite: every structural property of the toolkit checked over the built-in curve corpus, with the
measured values recorded in a JSON report.
"""

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from . import constants
from .curve import CurveData, PointOnCPrime, analyze_curve
from .gen_jacobian import (BranchSelectionAmbiguous, DivisorCountMismatch, DivisorOnCPrime, GJClass, SupportCollision,
                           class_add, class_eq, class_neg, identity, is_m_equivalent, kernel_structure,
                           phi_direct_data, phi_map, theta)
from .lax_dynamics import (StateExplosion, TrackingAmbiguity, flow_rk4, isospectral_drift, linearization_report,
                           vector_field)
from .mumford_phase import (DivisorError, MumfordMatrix, NonGeneric, SamplerExhausted, divisor_to_matrix,
                            gcd_structure, matrix_to_divisor, random_affine_points, random_rational_points,
                            sample_fiber)
from .riemann_roch import riemann_roch_dimensions
from .scalar_poly import Poly, rational_roots
from .settings import RunConfig

logger = logging.getLogger(__name__)

# Trial counts of the full acceptance run
default_trials: Dict[str, int] = {
    "gcd_structure": 200,
    "riemann_roch": 100,
    "group_axioms": 100,
    "m_equivalence": 50,
    "phi_consistency": 50,
    "injectivity": 50,
    "top_field": 100,
}

# Band for the ratio of RK4 drifts at dt and dt / 2
convergence_band: Tuple[float, float] = (12., 20.)


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    measured: Dict[str, Any] = field(default_factory=dict)

    def fail(self, reason: str) -> None:
        self.passed = False
        self.measured.setdefault("failures", []).append(reason)
        logger.info(f"Check {self.name}: {reason}")

    def as_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "measured": self.measured}


def corpus_curves(names: Optional[List[str]] = None) -> Dict[str, CurveData]:
    names = list(constants.corpus) if names is None else names
    return {name: analyze_curve(Poly([Fraction(c) for c in constants.corpus[name]])) for name in names}


def _trials(config: RunConfig, name: str) -> int:
    override: Optional[int] = config.options.get("trials")
    return default_trials[name] if override is None else int(override)


def _q_choices(c: CurveData) -> List[Optional[Poly]]:
    """
    Monic divisors Q of P with deg Q <= g / 2, built from the rational roots of P.
    """
    choices: List[Optional[Poly]] = [None]
    if c.n == 0:
        return choices
    roots: List[Tuple[Fraction, int]] = rational_roots(c.P)
    for exponents in itertools.product(*[range(m + 1) for _, m in roots]):
        if sum(exponents) == 0 or 2 * sum(exponents) > c.g:
            continue
        q: Poly = Poly.one()
        for (root, _), e in zip(roots, exponents):
            q = q * Poly((-root, 1)) ** e
        choices.append(q)
    return choices


# ----------------------------------------------------------------------------
# Checks
# ----------------------------------------------------------------------------

def check_delta_pi(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("delta_pi")
    for name, c in curves.items():
        result.measured[name] = {"delta": c.delta, "n": c.n, "pi": c.pi, "g": c.g}
        if c.delta != c.n or c.pi != c.g:
            result.fail(f"{name}: delta={c.delta}, n={c.n}, pi={c.pi}, g={c.g}")
    return result


def check_gcd_structure(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("gcd_structure")
    trials: int = _trials(config, "gcd_structure")
    for name, c in curves.items():
        choices: List[Optional[Poly]] = _q_choices(c)
        counts: Dict[str, int] = {"exact": 0, "approx": 0, "deep": 0}
        seen: set = set()
        for trial in range(trials):
            q: Optional[Poly] = choices[trial % len(choices)]
            try:
                A: MumfordMatrix = sample_fiber(c, config.seed * 100003 + trial, q=q)
            except SamplerExhausted:
                continue
            Q, verified = gcd_structure(A, c)
            counts[A.backend] += 1
            counts["deep"] += int(Q.degree > 0)
            seen.add(A)
            if not verified:
                result.fail(f"{name}: gcd structure fails for trial {trial}")
        counts["distinct"] = len(seen)
        result.measured[name] = counts
        sampled: int = counts["exact"] + counts["approx"]
        if 2 * len(seen) < sampled:
            result.fail(f"{name}: only {len(seen)} distinct matrices among {sampled} samples")
    return result


def _drift(A: MumfordMatrix, c: CurveData, i: int, t_end: float, dt: float) -> float:
    return isospectral_drift(flow_rk4(A, i, t_end, dt), c.h)


def _convergence_ratio(A: MumfordMatrix, c: CurveData, i: int) -> Optional[float]:
    """
    Ratio of the drifts at dt and dt / 2, with dt halved from 0.05 until the drift is small enough to lie in the
    asymptotic regime; None when the finer drift is at roundoff level.
    """
    dt: float = 0.05
    t_end: float = 0.2
    for _ in range(8):
        try:
            coarse: float = _drift(A, c, i, t_end, dt)
        except StateExplosion:
            dt /= 2
            continue
        if coarse < 1e-3:
            fine: float = _drift(A, c, i, t_end, dt / 2)
            return None if fine < 1e-11 else coarse / fine
        dt /= 2
    return None


def check_isospectral(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("isospectral")
    dt: float = config.options.get("dt") or 1e-3
    t_end: float = config.options.get("t_end") or 1.
    for name, c in curves.items():
        A: MumfordMatrix = sample_fiber(c, config.seed, backend=constants.backend_approx)
        rows: List[Dict[str, Any]] = []
        for i in range(c.g):
            drift: float = _drift(A, c, i, t_end, dt)
            ratio: Optional[float] = _convergence_ratio(A, c, i)
            rows.append({"field": i, "drift": drift, "ratio": ratio})
            if drift > 1e-6:
                result.fail(f"{name}: drift {drift:.3e} under D_{i}")
            if ratio is not None and not convergence_band[0] <= ratio <= convergence_band[1]:
                result.fail(f"{name}: drift ratio {ratio:.2f} under D_{i}")
        result.measured[name] = rows
    return result


def check_linearization(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("linearization")
    c: CurveData = curves.get("node_genus_two") or corpus_curves(["node_genus_two"])["node_genus_two"]
    seed: int = config.seed
    for i in (c.g - 1, 0):
        for attempt in range(10):
            A: MumfordMatrix = sample_fiber(c, seed + attempt, backend=constants.backend_approx)
            try:
                report = linearization_report(flow_rk4(A, i, 0.02, 1e-4), c)
            except (TrackingAmbiguity, NonGeneric) as error:
                logger.debug(f"Linearization sample {attempt} rejected: {error}")
                continue
            deviations: List[float] = report.deviations()
            measured: Dict[str, Any] = {"max_deviations": deviations,
                                        "top_sign_constant": report.top_sign_constant()}
            if i == c.g - 1:
                top: List[complex] = report.sums[report.top_index]
                measured["top_modulus"] = [min(abs(s) for s in top), max(abs(s) for s in top)]
                if any(abs(abs(s) - 2) > 1e-3 for s in top):
                    result.fail(f"|top sum| leaves 2 +- 1e-3 under D_{i}")
            if not report.passed(1e-3):
                result.fail(f"linearization sums deviate under D_{i}: {deviations}")
            result.measured[f"D_{i}"] = measured
            break
        else:
            result.fail(f"no trackable trajectory under D_{i}")
    return result


def _random_divisor(c: CurveData, rng: np.random.Generator, max_degree: int = 6) -> DivisorOnCPrime:
    """
    Random divisor supported on rational points and infinity when the curve has rational coefficients, so that the
    Riemann-Roch spaces can be computed exactly; on the complex grid otherwise.
    """
    count: int = int(rng.integers(1, 4))
    if c.backend == constants.backend_exact:
        points: List[PointOnCPrime] = random_rational_points(c, count, rng)
    else:
        points = random_affine_points(c, count, rng)
    terms: List[Tuple[PointOnCPrime, int]] = [(p, int(rng.choice([-2, -1, 1, 2]))) for p in points]
    affine: int = sum(m for _, m in terms)
    target: int = int(rng.integers(-max_degree, max_degree + 1))
    terms.append((PointOnCPrime.infinity(), target - affine))
    return DivisorOnCPrime.of(terms)


def check_riemann_roch(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("riemann_roch")
    trials: int = _trials(config, "riemann_roch")
    rng: np.random.Generator = np.random.default_rng(config.seed)
    for name, c in curves.items():
        agree: int = 0
        for trial in range(trials):
            D: DivisorOnCPrime = _random_divisor(c, rng)
            l_dim, i_dim = riemann_roch_dimensions(D, c)
            if l_dim - i_dim == D.degree + 1 - c.pi:
                agree += 1
            else:
                result.fail(f"{name}: l={l_dim}, i={i_dim} for deg {D.degree}, pi={c.pi}")
        result.measured[name] = {"trials": trials, "agree": agree}
    return result


def check_kernel(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("kernel_structure")
    for name, c in curves.items():
        ranks: Tuple[int, int] = kernel_structure(c, config.seed)
        result.measured[name] = list(ranks)
        expected = constants.corpus_kernel_ranks.get(name, (c.k - c.d, c.n - c.k + c.d))
        if tuple(ranks) != tuple(expected):
            result.fail(f"{name}: ranks {ranks}, expected {expected}")
    return result


def random_class(c: CurveData, rng: np.random.Generator) -> GJClass:
    count: int = int(rng.integers(1, c.gprime + 3))
    points: List[PointOnCPrime] = random_affine_points(c, count, rng)
    return theta(DivisorOnCPrime.of((p, int(rng.choice([-1, 1]))) for p in points), c)


def check_group_axioms(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("group_axioms")
    trials: int = _trials(config, "group_axioms")
    rng: np.random.Generator = np.random.default_rng(config.seed)
    for name, c in curves.items():
        if c.is_smooth:
            continue
        counts: Dict[str, int] = {"triples": 0, "non_generic": 0}
        for trial in range(trials):
            try:
                a, b, d = (random_class(c, rng) for _ in range(3))
                zero: GJClass = identity(c)
                axioms: Dict[str, bool] = {
                    "identity": class_eq(class_add(a, zero, c), a, c),
                    "inverse": class_eq(class_add(a, class_neg(a, c), c), zero, c),
                    "commutativity": class_eq(class_add(a, b, c), class_add(b, a, c), c),
                    "associativity": class_eq(class_add(class_add(a, b, c), d, c),
                                              class_add(a, class_add(b, d, c), c), c),
                }
            except NonGeneric:
                counts["non_generic"] += 1
                continue
            counts["triples"] += 1
            for axiom, holds in axioms.items():
                if not holds:
                    result.fail(f"{name}: {axiom} fails on triple {trial}")
        result.measured[name] = counts
        if counts["triples"] < max(1, trials // 2):
            result.fail(f"{name}: only {counts['triples']} of {trials} triples were checked")
    return result


def cusp_point(z: Fraction) -> PointOnCPrime:
    return PointOnCPrime(z * z, z)


def node_point(z: Fraction) -> PointOnCPrime:
    return PointOnCPrime(z * z + 1, z)


def _small_parameter_divisors(count: int) -> List[List[Tuple[Fraction, int]]]:
    values: List[Fraction] = [Fraction(v) for v in (1, -1, 2, -2, 3, -3)] + [Fraction(1, 2), Fraction(-1, 2),
                                                                             Fraction(1, 3), Fraction(-1, 3)]
    out: List[List[Tuple[Fraction, int]]] = []
    for size in (1, 2, 3):
        for chosen in itertools.combinations(values, size):
            for mults in itertools.product((-1, 1, 2), repeat=size):
                out.append(list(zip(chosen, mults)))
    # Deterministic spread, half of it cusp-equivalent cases such as z, -z
    equivalent = [d for d in out if sum(m / z for z, m in d) == 0]
    others = [d for d in out if sum(m / z for z, m in d) != 0]
    kept: int = min(len(equivalent), count // 2)
    rest: int = count - kept
    step: int = max(len(others) // max(rest, 1), 1)
    return equivalent[:kept] + others[::step][:rest]


def check_m_equivalence(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    """
    On the cusp z^2 = x the divisor sum n_i (z_i^2, z_i) is m-equivalent to its degree times infinity exactly when
    sum n_i / z_i = 0; on the node z^2 = x - 1 exactly when prod ((i - z_k) / (-i - z_k))^n_k = 1.
    """
    result = CheckResult("m_equivalence")
    count: int = _trials(config, "m_equivalence")
    cases = _small_parameter_divisors(count)
    all_curves: Dict[str, CurveData] = dict(curves)
    for name in ("cusp", "node"):
        if name not in all_curves:
            all_curves.update(corpus_curves([name]))

    for name, to_point in (("cusp", cusp_point), ("node", node_point)):
        c: CurveData = all_curves[name]
        agree, positives = 0, 0
        for case in cases:
            D: DivisorOnCPrime = DivisorOnCPrime.of((to_point(z), m) for z, m in case)
            reference: DivisorOnCPrime = DivisorOnCPrime.of([(PointOnCPrime.infinity(), D.degree)])
            if name == "cusp":
                expected: bool = sum(Fraction(m) / z for z, m in case) == 0
            else:
                ratio: complex = complex(np.prod([((1j - complex(z)) / (-1j - complex(z))) ** m for z, m in case]))
                expected = abs(ratio - 1) < 1e-9
            found: bool = is_m_equivalent(D, reference, c)
            positives += int(expected)
            if found == expected:
                agree += 1
            else:
                result.fail(f"{name}: {case} gives {found}, expected {expected}")
        result.measured[name] = {"cases": len(cases), "agree": agree, "equivalent_cases": positives}
    return result


def check_phi_consistency(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("phi_consistency")
    trials: int = _trials(config, "phi_consistency")
    for name, c in curves.items():
        if c.is_smooth:
            continue
        choices: List[Optional[Poly]] = _q_choices(c)
        counts: Dict[str, int] = {"agree": 0, "deep": 0, "skipped": 0}
        for trial in range(2 * trials):
            if counts["agree"] >= trials and (counts["deep"] > 0 or len(choices) == 1):
                break
            q: Optional[Poly] = choices[trial % len(choices)]
            try:
                A: MumfordMatrix = sample_fiber(c, config.seed * 7919 + trial, backend=constants.backend_approx, q=q)
                data = phi_direct_data(A, c)
                direct: GJClass = theta(data.zeros, c)
                via_points: GJClass = phi_map(A, c)
            except DivisorCountMismatch as error:
                result.fail(f"{name}: sample {trial} with q = <{q}>: {error}")
                continue
            except (NonGeneric, BranchSelectionAmbiguous, SupportCollision, SamplerExhausted) as error:
                logger.debug(f"Phi sample {trial} on {name} skipped: {error}")
                counts["skipped"] += 1
                continue
            if not class_eq(direct, via_points, c):
                result.fail(f"{name}: phi_map and its direct form disagree on sample {trial} with q = <{q}>")
                continue
            counts["agree"] += 1
            counts["deep"] += int(q is not None)
        result.measured[name] = counts
        if counts["agree"] < trials // 2:
            result.fail(f"{name}: only {counts['agree']} usable samples")
        if len(choices) > 1 and counts["deep"] == 0:
            result.fail(f"{name}: no sample with a nontrivial gcd(P, u, v) was checked")
    return result


def _match_points(first: List[PointOnCPrime], second: List[PointOnCPrime], tol: float) -> bool:
    if len(first) != len(second):
        return False
    remaining: List[PointOnCPrime] = list(second)
    for p in first:
        match = next((q for q in remaining if p.close(q, tol)), None)
        if match is None:
            return False
        remaining.remove(match)
    return True


def check_injectivity(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    result = CheckResult("injectivity")
    trials: int = _trials(config, "injectivity")
    rng: np.random.Generator = np.random.default_rng(config.seed)
    for name, c in curves.items():
        counts: Dict[str, int] = {"distinct_pairs": 0, "roundtrips": 0, "skipped": 0}
        for trial in range(2 * trials):
            try:
                points: List[PointOnCPrime] = random_affine_points(c, c.g, rng)
                A: MumfordMatrix = divisor_to_matrix(c, points)
                if not _match_points(points, matrix_to_divisor(A, c), 1e-6):
                    result.fail(f"{name}: divisor roundtrip fails on draw {trial}")
                counts["roundtrips"] += 1
                if c.is_smooth or counts["distinct_pairs"] >= trials:
                    continue
                B: MumfordMatrix = divisor_to_matrix(c, random_affine_points(c, c.g, rng))
                if A.close(B, 1e-6):
                    continue
                if class_eq(phi_map(A, c), phi_map(B, c), c):
                    result.fail(f"{name}: two distinct matrices share a class on draw {trial}")
                counts["distinct_pairs"] += 1
            except (NonGeneric, DivisorError, SupportCollision) as error:
                logger.debug(f"Injectivity draw {trial} on {name} skipped: {error}")
                counts["skipped"] += 1
        result.measured[name] = counts
    return result


def check_top_field(curves: Dict[str, CurveData], config: RunConfig) -> CheckResult:
    """
    The u-component of D_{g-1} is 2v, exactly, on random rational matrices.
    """
    result = CheckResult("top_field")
    trials: int = _trials(config, "top_field")
    rng: np.random.Generator = np.random.default_rng(config.seed)
    checked: int = 0
    for trial in range(trials):
        g: int = int(rng.integers(1, 5))
        values: List[Fraction] = [Fraction(int(a), int(b)) for a, b in
                                  zip(rng.integers(-9, 10, size=3 * g + 1), rng.integers(1, 5, size=3 * g + 1))]
        A: MumfordMatrix = MumfordMatrix.from_free_coefficients(values, g, constants.backend_exact)
        if vector_field(A, g - 1).du != A.v * 2:
            result.fail(f"du of D_{g - 1} differs from 2v on trial {trial}")
        checked += 1
    result.measured["matrices"] = checked
    return result


checks: Dict[str, Callable[[Dict[str, CurveData], RunConfig], CheckResult]] = {
    "delta_pi": check_delta_pi,
    "gcd_structure": check_gcd_structure,
    "isospectral": check_isospectral,
    "linearization": check_linearization,
    "riemann_roch": check_riemann_roch,
    "kernel_structure": check_kernel,
    "group_axioms": check_group_axioms,
    "m_equivalence": check_m_equivalence,
    "phi_consistency": check_phi_consistency,
    "injectivity": check_injectivity,
    "top_field": check_top_field,
}


def run_suite(config: RunConfig, names: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Run the selected checks (all by default) over the corpus and assemble the report.

    :param config:
        Run configuration; options may carry trials, dt and t_end
    :param names:
        Names of the checks to run
    :return:
        Report dictionary with the configuration, one entry per check and the wall time
    """
    start: float = time.perf_counter()
    curves: Dict[str, CurveData] = corpus_curves()
    results: List[Dict[str, Any]] = []
    for name in (names or list(checks)):
        if name not in checks:
            raise ValueError(f"Unknown check <{name}>")
        logger.info(f"Running check <{name}>")
        outcome: CheckResult = checks[name](curves, config)
        logger.info(f"Check <{name}>: {'pass' if outcome.passed else 'fail'}")
        results.append(outcome.as_dict())
    return {
        "config": config.as_dict(),
        "checks": results,
        "passed": all(item["status"] == "pass" for item in results),
        "wall_time": time.perf_counter() - start,
    }
