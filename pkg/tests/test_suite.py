# test_suite.py
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

# ----------------------------------------------------------------------------

import pytest

from mumford import constants
from mumford.settings import RunConfig
from mumford.suite import _q_choices, _small_parameter_divisors, checks, corpus_curves, run_suite


@pytest.fixture(scope="module")
def small() -> RunConfig:
    return RunConfig(command="suite", seed=1, options={"trials": 3})


def test_every_check_is_registered():
    assert set(checks) == {"delta_pi", "gcd_structure", "isospectral", "linearization", "riemann_roch",
                           "kernel_structure", "group_axioms", "m_equivalence", "phi_consistency", "injectivity",
                           "top_field"}


def test_corpus_is_analyzed():
    assert set(corpus_curves()) == set(constants.corpus)


def test_oracle_cases_mix_both_outcomes():
    cases = _small_parameter_divisors(50)
    assert len(cases) == 50
    equivalent = [case for case in cases if sum(m / z for z, m in case) == 0]
    assert 0 < len(equivalent) < len(cases)


@pytest.mark.parametrize("name", ["delta_pi", "gcd_structure", "riemann_roch", "kernel_structure", "group_axioms",
                                  "m_equivalence", "phi_consistency", "injectivity", "top_field"])
def test_checks_pass_on_a_small_run(small, name):
    report = run_suite(small, [name])
    (result,) = report["checks"]
    assert result["status"] == "pass", result["measured"]
    assert report["passed"]


def test_unknown_check(small):
    with pytest.raises(ValueError):
        run_suite(small, ["nonsense"])


def test_phi_consistency_covers_nontrivial_gcd(small):
    report = run_suite(small, ["phi_consistency"])
    (result,) = report["checks"]
    curves = corpus_curves()
    assert "failures" not in result["measured"]
    for name, counts in result["measured"].items():
        if len(_q_choices(curves[name])) > 1:
            assert counts["deep"] > 0, name


def test_group_axioms_checks_enough_triples(small):
    report = run_suite(small, ["group_axioms"])
    (result,) = report["checks"]
    assert result["measured"] and "failures" not in result["measured"]
    for name, counts in result["measured"].items():
        assert counts["triples"] >= 1, name


def test_gcd_structure_counts_distinct_samples(small):
    report = run_suite(small, ["gcd_structure"])
    (result,) = report["checks"]
    for name in constants.corpus:
        counts = result["measured"][name]
        assert 2 * counts["distinct"] >= counts["exact"] + counts["approx"], name
