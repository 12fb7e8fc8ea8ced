# test_mumford_phase.py
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

from fractions import Fraction

import numpy as np
import pytest

from mumford import constants
from mumford.curve import PointOnCPrime, on_curve
from mumford.mumford_phase import (DivisorError, InvalidMatrix, MumfordMatrix, divisor_to_matrix, gcd_structure,
                                   in_fiber, matrix_to_divisor, moment, q_decomposition, random_affine_points,
                                   random_rational_points, sample_fiber, stratum_index)
from mumford.suite import _q_choices

from conftest import exact_poly


def test_worked_matrix(node, e1):
    assert moment(e1) == node.h
    assert in_fiber(e1, node.h)
    assert stratum_index(e1) == 0
    Q, verified = gcd_structure(e1, node)
    assert Q == exact_poly(1)
    assert verified


def test_worked_matrix_divisor(node, e1):
    (point,) = matrix_to_divisor(e1, node)
    assert point == PointOnCPrime(Fraction(2), Fraction(1))
    assert divisor_to_matrix(node, [point]) == e1


@pytest.mark.parametrize("u, v, w", [
    ([-2, 2], [2], [2, 1, 1]),
    ([-2, 1], [2, 1], [2, 1, 1]),
    ([-2, 1], [2], [2, 1]),
])
def test_malformed_matrices(u, v, w):
    with pytest.raises(InvalidMatrix):
        MumfordMatrix(u=exact_poly(*u), v=exact_poly(*v), w=exact_poly(*w), g=1)


def test_free_coefficients(e1):
    values = e1.free_coefficients()
    assert values == [-2, 2, 2, 1]
    assert MumfordMatrix.from_free_coefficients(values, 1, constants.backend_exact) == e1
    with pytest.raises(InvalidMatrix):
        MumfordMatrix.from_free_coefficients(values[:-1], 1, constants.backend_exact)


def test_rejected_divisors(node):
    with pytest.raises(DivisorError):
        divisor_to_matrix(node, [])
    with pytest.raises(DivisorError):
        divisor_to_matrix(node, [PointOnCPrime(Fraction(0), 1j)])
    with pytest.raises(DivisorError):
        divisor_to_matrix(node, [PointOnCPrime(Fraction(1), Fraction(0))])
    with pytest.raises(DivisorError):
        divisor_to_matrix(node, [PointOnCPrime(Fraction(5), Fraction(3))])


def test_repeated_x_is_rejected(corpus):
    c = corpus["node_genus_two"]
    p = PointOnCPrime(Fraction(4), 6 ** 0.5 + 0j)
    with pytest.raises(DivisorError):
        divisor_to_matrix(c, [p, p])


@pytest.mark.parametrize("name", list(constants.corpus))
def test_sampled_matrices_have_the_gcd_structure(corpus, name):
    c = corpus[name]
    for q in _q_choices(c):
        for seed in range(3):
            A = sample_fiber(c, seed, q=q)
            assert in_fiber(A, c.h, 1e-8)
            assert stratum_index(A, 1e-8) == 0
            Q, verified = gcd_structure(A, c, 1e-8)
            assert verified
            expected = exact_poly(1) if q is None else q
            assert Q.close(expected.to_backend(Q.backend), 1e-6)
            assert len(matrix_to_divisor(A, c, 1e-8)) == c.g - 2 * int(Q.degree)


def test_sampling_is_deterministic(corpus):
    c = corpus["two_nodes"]
    assert sample_fiber(c, 7, backend=constants.backend_approx) == sample_fiber(c, 7, backend=constants.backend_approx)


def test_q_decomposition_of_a_deep_matrix(corpus):
    c = corpus["cusp_node"]
    A = sample_fiber(c, 0, q=exact_poly(0, 1))
    Q, u_q2, v_q, P_q = q_decomposition(A, c)
    assert Q == exact_poly(0, 1)
    assert u_q2.degree == 0
    assert P_q == exact_poly(-1, 1)


def test_divisor_roundtrip_on_random_points(corpus):
    rng = np.random.default_rng(3)
    for name in ("node_genus_two", "two_nodes", "smooth"):
        c = corpus[name]
        points = random_affine_points(c, c.g, rng)
        assert all(on_curve(p, c, 1e-9) for p in points)
        found = matrix_to_divisor(divisor_to_matrix(c, points), c)
        for p in points:
            assert any(p.close(q, 1e-6) for q in found)


@pytest.mark.parametrize("name", ["cusp", "node", "two_nodes"])
def test_rational_points_on_a_rational_normalization(corpus, name):
    c = corpus[name]
    points = random_rational_points(c, 3, np.random.default_rng(13))
    assert len(points) == 3
    assert len({p.x for p in points}) == 3
    for p in points:
        assert p.is_exact
        assert p.z * p.z == c.hprime(p.x)
        assert c.P(p.x) != 0


def test_rational_points_of_the_smooth_cubic_are_weierstrass(corpus):
    # y^2 = x^3 - x has no rational points off the x-axis
    points = random_rational_points(corpus["smooth"], 5, np.random.default_rng(3))
    assert len(points) <= 3
    assert all(p.z == 0 and p.x in (-1, 0, 1) for p in points)


@pytest.mark.parametrize("name", ["cusp_node", "two_nodes"])
def test_exact_samples_are_mostly_distinct(corpus, name):
    c = corpus[name]
    samples = [sample_fiber(c, seed, backend=constants.backend_exact) for seed in range(20)]
    assert all(A.backend == constants.backend_exact for A in samples)
    assert len(set(samples)) >= 15
    denominators = {coefficient.denominator for A in samples for coefficient in A.v.coeffs}
    assert max(denominators) > 1
