# test_riemann_roch.py
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
from mumford.curve import PointOnCPrime
from mumford.gen_jacobian import DivisorOnCPrime, valuation_at_infinity
from mumford.mumford_phase import DivisorError
from mumford.riemann_roch import (DegreeCapExceeded, im_space, lm_space, riemann_roch_check,
                                  riemann_roch_dimensions, space_backend)
from mumford.suite import _random_divisor

INF = PointOnCPrime.infinity()


def at_infinity(m: int) -> DivisorOnCPrime:
    return DivisorOnCPrime.of([(INF, m)])


@pytest.mark.parametrize("name, m, dims", [
    ("cusp", 0, (1, 1)),
    ("cusp", 1, (1, 0)),
    ("cusp", 2, (2, 0)),
    ("node", 0, (1, 1)),
    ("node", 1, (1, 0)),
    ("node", 2, (2, 0)),
    ("smooth", 0, (1, 1)),
    ("smooth", 2, (2, 0)),
    ("node_genus_two", 0, (1, 2)),
    ("cusp", -1, (0, 1)),
])
def test_dimensions_at_infinity(corpus, name, m, dims):
    c = corpus[name]
    assert riemann_roch_dimensions(at_infinity(m), c) == dims
    assert riemann_roch_check(at_infinity(m), c)


def test_basis_respects_the_pole_bound(cusp):
    basis = lm_space(at_infinity(2), cusp)
    assert len(basis) == 2
    assert all(valuation_at_infinity(f, cusp) >= -2 for f in basis)
    assert min(valuation_at_infinity(f, cusp) for f in basis) == -2


def test_affine_poles(node):
    # 1 / (x - 5) has poles on both sheets over x = 5
    p = PointOnCPrime(Fraction(5), Fraction(2))
    D = DivisorOnCPrime.of([(p, 1)])
    l_dim, i_dim = riemann_roch_dimensions(D, node)
    assert l_dim - i_dim == D.degree + 1 - node.pi
    both = DivisorOnCPrime.of([(p, 1), (PointOnCPrime(Fraction(5), Fraction(-2)), 1)])
    assert len(lm_space(both, node)) == 2
    assert riemann_roch_check(both, node)


def test_differentials_exist_in_the_right_number(corpus):
    c = corpus["node_genus_two"]
    assert len(im_space(DivisorOnCPrime.zero(), c)) == c.pi


def test_degree_cap(node):
    with pytest.raises(DegreeCapExceeded):
        lm_space(at_infinity(constants.max_rr_degree + 1), node)


def test_divisor_on_the_modulus(node):
    with pytest.raises(DivisorError):
        lm_space(DivisorOnCPrime.of([(PointOnCPrime(Fraction(0), 1j), 1)]), node)


@pytest.mark.parametrize("name", list(constants.corpus))
def test_random_divisors(corpus, name):
    c = corpus[name]
    rng = np.random.default_rng(29)
    for _ in range(6):
        D = _random_divisor(c, rng, max_degree=4)
        assert riemann_roch_check(D, c), f"{D}"


def test_rational_data_selects_the_exact_backend(corpus):
    D = DivisorOnCPrime.of([(PointOnCPrime(Fraction(4), Fraction(2)), 1), (INF, 1)])
    assert space_backend(D, corpus["cusp"]) == constants.backend_exact
    assert space_backend(D, corpus["cusp_node"]) == constants.backend_exact
    # The modulus of the node sits at (0, +-i)
    assert space_backend(D, corpus["node"]) == constants.backend_approx
    complex_point = DivisorOnCPrime.of([(PointOnCPrime(4 + 0j, 2 + 0j), 1)])
    assert space_backend(complex_point, corpus["cusp"]) == constants.backend_approx


@pytest.mark.parametrize("name", ["cusp", "cusp_node"])
def test_exact_and_approximate_dimensions_agree(corpus, name):
    c = corpus[name]
    exact = DivisorOnCPrime.of([(PointOnCPrime(Fraction(4), Fraction(2)), 2),
                                (PointOnCPrime(Fraction(9), Fraction(-3)), -1), (INF, 1)])
    approx = DivisorOnCPrime.of([(PointOnCPrime(4 + 0j, 2 + 0j), 2), (PointOnCPrime(9 + 0j, -3 + 0j), -1), (INF, 1)])
    assert riemann_roch_dimensions(exact, c) == riemann_roch_dimensions(approx, c)
    basis = lm_space(exact, c) + [omega.coefficient for omega in im_space(exact, c)]
    assert basis
    assert all(f.a.is_exact and f.b.is_exact and f.cden.is_exact for f in basis)
    assert riemann_roch_check(exact, c)


@pytest.mark.parametrize("name", ["cusp", "cusp_node", "smooth"])
def test_random_divisors_have_rational_support(corpus, name):
    c = corpus[name]
    rng = np.random.default_rng(31)
    for _ in range(4):
        D = _random_divisor(c, rng, max_degree=4)
        assert all(p.is_exact for p, _ in D.affine_terms)
        assert space_backend(D, c) == constants.backend_exact
        assert riemann_roch_check(D, c), f"{D}"
