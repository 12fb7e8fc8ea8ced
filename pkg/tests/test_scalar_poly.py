# test_scalar_poly.py
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

import pytest

from mumford import constants
from mumford.scalar_poly import (BackendMismatch, Poly, PolynomialError, Series, SeriesError, max_quadratic_divisor,
                                 null_space, parse_scalar, poly_divrem, poly_gcd_monic, poly_interpolate, poly_roots,
                                 poly_xgcd, principal_sqrt, rational_roots, refine_root, scalar_to_json,
                                 squarefree_decomposition)
from mumford.settings import tolerance

from conftest import exact_poly


def test_trailing_zeros_are_dropped():
    p = Poly([1, 2, 0, 0])
    assert p.degree == 1
    assert p.backend == constants.backend_exact
    assert Poly([]).is_zero


def test_backends_do_not_mix():
    with pytest.raises(BackendMismatch):
        Poly([1, 2]) + Poly([1., 2.])
    with pytest.raises(BackendMismatch):
        Poly([1.5j]).to_backend(constants.backend_exact)


def test_exact_division():
    q, r = poly_divrem(exact_poly(-1, 0, 1), exact_poly(-1, 1))
    assert q == exact_poly(1, 1)
    assert r.is_zero
    with pytest.raises(PolynomialError):
        poly_divrem(exact_poly(1, 1), Poly.zero())


def test_gcd_and_xgcd():
    a = exact_poly(-1, 1) * exact_poly(-2, 1)
    b = exact_poly(-1, 1) * exact_poly(3, 1)
    assert poly_gcd_monic(a, b) == exact_poly(-1, 1)
    g, s, t = poly_xgcd(a, b)
    assert g == exact_poly(-1, 1)
    assert s * a + t * b == g


def test_approximate_gcd_sees_a_perturbed_common_root():
    a = Poly.from_roots([1. + 1e-12, 2.])
    b = Poly.from_roots([1., -3.])
    assert poly_gcd_monic(a, b, 1e-8).degree == 1


def test_squarefree_decomposition():
    # x^2 (x - 1)
    factors = squarefree_decomposition(exact_poly(0, 0, -1, 1))
    assert factors == [(exact_poly(-1, 1), 1), (exact_poly(0, 1), 2)]


@pytest.mark.parametrize("coeffs, P, hprime", [
    ([0, 0, 0, 1, -2, 1], [0, -1, 1], [0, 1]),
    ([0, 0, -1, 1], [0, 1], [-1, 1]),
    ([0, -1, 0, 1], [1], [0, -1, 0, 1]),
])
def test_max_quadratic_divisor(coeffs, P, hprime):
    found_P, found_hprime = max_quadratic_divisor(exact_poly(*coeffs))
    assert found_P == exact_poly(*P)
    assert found_hprime == exact_poly(*hprime)


def test_max_quadratic_divisor_needs_odd_degree():
    with pytest.raises(PolynomialError):
        max_quadratic_divisor(exact_poly(0, 0, 1))


def test_roots_carry_multiplicities():
    roots = sorted((round(r.real, 8), m) for r, m in poly_roots(exact_poly(0, 0, -1, 1)))
    assert roots == [(0., 2), (1., 1)]
    assert sorted(r for r, _ in rational_roots(exact_poly(0, -1, 0, 1))) == [-1, 0, 1]


def test_interpolation():
    p = poly_interpolate([(Fraction(0), Fraction(1)), (Fraction(1), Fraction(3)), (Fraction(2), Fraction(7))])
    assert p == exact_poly(1, 1, 1)
    with pytest.raises(PolynomialError):
        poly_interpolate([(Fraction(1), Fraction(0)), (Fraction(1), Fraction(2))])


def test_series_inverse_and_square_root():
    one_plus_t = Series([1, 1, 0, 0])
    assert one_plus_t.inv().coeffs == (1, -1, 1, -1)
    root = one_plus_t.sqrt()
    assert root.coeffs[:3] == (1, Fraction(1, 2), Fraction(-1, 8))
    with pytest.raises(SeriesError):
        Series([0, 1]).inv()


def test_series_reversion():
    # t + t^2 reverted is t - t^2 + 2 t^3
    r = Series([0, 1, 1, 0]).reverse()
    assert r.coeffs == (0, 1, -1, 2)


def test_series_coefficient_beyond_known_order():
    with pytest.raises(SeriesError):
        Series([1, 2]).coefficient(5)


def test_exact_null_space():
    basis = null_space([[1, 1, 0], [0, 0, 1]], 3, constants.backend_exact)
    assert basis == [[Fraction(-1), Fraction(1), Fraction(0)]]


def test_approximate_null_space():
    basis = null_space([[1., 1., 0.], [0., 0., 1.]], 3, constants.backend_approx)
    assert len(basis) == 1
    x = basis[0]
    assert abs(x[0] + x[1]) < 1e-12 and abs(x[2]) < 1e-12


def test_scalar_codec():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar(2) == Fraction(2)
    assert parse_scalar([1., 2.]) == 1 + 2j
    assert scalar_to_json(Fraction(-1, 3)) == "-1/3"
    assert scalar_to_json(1j) == [0., 1.]
    with pytest.raises(ValueError):
        parse_scalar(True)


def test_principal_sqrt():
    assert principal_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert principal_sqrt(Fraction(-1)) == 1j


def test_tolerance_resolution(monkeypatch):
    monkeypatch.delenv(constants.tolerance_env_var, raising=False)
    assert tolerance() == constants.default_tolerance
    monkeypatch.setenv(constants.tolerance_env_var, "1e-6")
    assert tolerance() == 1e-6
    assert tolerance(1e-3) == 1e-3
    monkeypatch.setenv(constants.tolerance_env_var, "loose")
    with pytest.raises(ValueError):
        tolerance()
    with pytest.raises(ValueError):
        tolerance(-1.)


def test_rational_roots_with_large_denominators():
    p = Poly.from_roots([Fraction(7, 97), Fraction(-13, 5), Fraction(-13, 5)]) * exact_poly(2, 0, 1)
    assert rational_roots(p) == [(Fraction(-13, 5), 2), (Fraction(7, 97), 1)]
    assert refine_root(p, complex(7 / 97) + 1e-12) == Fraction(7, 97)
    assert isinstance(refine_root(p, 1.4142135623730951j), complex)


def test_xgcd_of_coprime_polynomials_is_exact():
    a = exact_poly(Fraction(1, 3), 0, -2, 1)
    b = exact_poly(5, Fraction(-7, 2), 1)
    g, s, t = poly_xgcd(a, b)
    assert g == Poly.one()
    assert s * a + t * b == Poly.one()
    assert all(isinstance(c, Fraction) for c in s.coeffs + t.coeffs)


def test_squarefree_decomposition_sorts_by_multiplicity():
    # (x + 1)^3 (x - 1/2)^2 (x - 3)
    h = exact_poly(1, 1) ** 3 * exact_poly(Fraction(-1, 2), 1) ** 2 * exact_poly(-3, 1)
    assert squarefree_decomposition(h) == [(exact_poly(-3, 1), 1), (exact_poly(Fraction(-1, 2), 1), 2),
                                           (exact_poly(1, 1), 3)]


def test_exact_composition_and_taylor_shift():
    p = exact_poly(1, 0, 1)
    assert p.compose(exact_poly(Fraction(1, 2), 2)) == exact_poly(Fraction(5, 4), 2, 4)
    assert p.taylor_shift(Fraction(1, 3)) == exact_poly(Fraction(10, 9), Fraction(2, 3), 1)


def test_exact_series_stay_rational():
    s = Series([1, Fraction(1, 2), Fraction(-1, 3), 0])
    product = s * s.inv()
    assert product.coeffs == (1, 0, 0, 0)
    assert all(isinstance(c, Fraction) for c in s.sqrt().coeffs)
    # (t + t^2) o (t - t^2) = t - 2 t^3 + t^4
    inner = Series([0, 1, -1, 0, 0])
    assert Series([0, 1, 1, 0, 0]).compose(inner).coeffs == (0, 1, 0, -2, 1)
