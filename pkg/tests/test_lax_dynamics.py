# test_lax_dynamics.py
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

import cmath
from fractions import Fraction

import numpy as np
import pytest

from mumford import constants
from mumford.curve import PointOnCPrime
from mumford.lax_dynamics import (commutation_defect, field_rank, flow_rk4, invariant_ladder, isospectral_drift,
                                  linearization_report, vector_field, vector_field_at_parameter)
from mumford.mumford_phase import MumfordMatrix, divisor_to_matrix
from mumford.suite import _convergence_ratio

from conftest import exact_poly


@pytest.fixture
def genus_two_matrix(corpus) -> MumfordMatrix:
    # Divisor points over x = 4 and x = -1 on z^2 = (x-1)(x-2)(x-3)
    c = corpus["node_genus_two"]
    return divisor_to_matrix(c, [PointOnCPrime(4 + 0j, cmath.sqrt(6)), PointOnCPrime(-1 + 0j, cmath.sqrt(-24))])


def test_worked_field(e1):
    tangent = vector_field(e1, 0)
    assert tangent.du == exact_poly(4)
    assert tangent.dv == exact_poly(-8)
    assert tangent.dw == exact_poly(-12, -4)


def test_generating_field_in_genus_one(e1):
    for t in (Fraction(0), Fraction(3), Fraction(-1, 2)):
        assert vector_field_at_parameter(e1, t) == vector_field(e1, 0)


def test_generating_field_in_genus_two(genus_two_matrix):
    A = genus_two_matrix
    t = 0.7 - 0.2j
    combined = vector_field_at_parameter(A, t)
    fields = [vector_field(A, i) for i in range(A.g)]
    for part in ("du", "dv", "dw"):
        expected = getattr(fields[0], part) + getattr(fields[1], part) * t
        assert getattr(combined, part).close(expected, 1e-9)


def test_top_field_moves_u_by_twice_v():
    rng = np.random.default_rng(11)
    for g in (1, 2, 3, 4):
        values = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, size=3 * g + 1),
                                                           rng.integers(1, 5, size=3 * g + 1))]
        A = MumfordMatrix.from_free_coefficients(values, g, constants.backend_exact)
        assert vector_field(A, g - 1).du == A.v * 2


def test_field_index_is_checked(e1):
    with pytest.raises(IndexError):
        vector_field(e1, 1)
    with pytest.raises(IndexError):
        flow_rk4(e1, -1, 0.1, 0.01)


def test_flow_keeps_the_spectral_curve(node, e1):
    traj = flow_rk4(e1, 0, 0.1, 1e-3)
    assert len(traj) == 101
    assert traj.times[-1] == pytest.approx(0.1)
    assert isospectral_drift(traj, node.h) < 1e-8


def test_flow_rejects_bad_steps(e1):
    with pytest.raises(ValueError):
        flow_rk4(e1, 0, 0.1, 0.)
    with pytest.raises(ValueError):
        flow_rk4(e1, 0, 0.01, 0.1)


def test_drift_decays_at_fourth_order(corpus, genus_two_matrix):
    ratio = _convergence_ratio(genus_two_matrix, corpus["node_genus_two"], 1)
    assert ratio is None or 10. <= ratio <= 25.


def test_fields_are_independent_on_the_maximal_stratum(genus_two_matrix, e1):
    assert field_rank(e1) == 1
    assert field_rank(genus_two_matrix) == 2


def test_flows_commute(genus_two_matrix):
    assert commutation_defect(genus_two_matrix, 0, 1, 0.01, 1e-3) < 1e-6


def test_invariant_ladder_has_one_differential_per_field(corpus):
    for c in corpus.values():
        ladder = invariant_ladder(c)
        assert len(ladder) == c.g
        assert ladder[-1][1].degree == c.g - 1


def test_worked_linearization(node, e1):
    # x_1 moves at speed -4 and 1 / v = 1 / 2
    report = linearization_report(flow_rk4(e1, 0, 0.05, 1e-3), node)
    assert report.expected == [-2]
    assert report.passed(1e-4)


@pytest.mark.parametrize("i", [0, 1])
def test_linearization_on_the_genus_two_node(corpus, genus_two_matrix, i):
    c = corpus["node_genus_two"]
    report = linearization_report(flow_rk4(genus_two_matrix, i, 0.02, 1e-4), c)
    assert report.passed(1e-3)
    if i == c.g - 1:
        assert all(abs(abs(s) - 2) < 1e-3 for s in report.sums[report.top_index])


@pytest.mark.parametrize("i", [0, 1])
def test_linearization_on_a_rational_normalization(corpus, i):
    # z^2 = x - 5 on the curve with two nodes; the ladder comes from the partial denominators of P
    c = corpus["two_nodes"]
    assert c.gprime == 0
    A = divisor_to_matrix(c, [PointOnCPrime(6 + 0j, 1 + 0j), PointOnCPrime(9 + 0j, 2 + 0j)])
    report = linearization_report(flow_rk4(A, i, 0.02, 1e-4), c)
    assert len(report.expected) == c.g
    assert report.passed(1e-3)
    if i == c.g - 1:
        assert report.expected[report.top_index] == -2
        assert all(abs(s + 2) < 1e-3 for s in report.sums[report.top_index])
