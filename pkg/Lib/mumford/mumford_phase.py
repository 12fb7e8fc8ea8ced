# mumford_phase.py
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
The phase space M_g of matrices [[v, u], [w, -v]], the moment map A -> v^2 + u w, membership of fibers and strata,
and the translation between matrices of the maximal stratum and divisors of the normalized curve.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import constants
from .curve import CurveData, PointOnCPrime, is_on_modulus, is_weierstrass, on_curve
from .scalar_poly import (Poly, PolynomialError, Scalar, absolute_bound, exact_quotient, poly_eval, poly_gcd_many,
                          poly_gcd_monic, poly_interpolate, poly_roots, principal_sqrt, rational_roots, refine_root,
                          scalar_close, to_scalar)
from .settings import tolerance

logger = logging.getLogger(__name__)


class InvalidMatrix(ValueError):
    pass


class DivisorError(ValueError):
    pass


class NonGeneric(ValueError):
    pass


class SamplerExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class MumfordMatrix:
    """
    A point of M_g: u monic of degree g, deg v <= g - 1, w monic of degree g + 1.
    """
    u: Poly
    v: Poly
    w: Poly
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise InvalidMatrix(f"The order g must be positive, got {self.g}")
        if len({self.u.backend, self.v.backend, self.w.backend}) != 1:
            raise InvalidMatrix("u, v and w must share one backend")
        if self.u.degree != self.g or not self.u.is_monic():
            raise InvalidMatrix(f"u must be monic of degree {self.g}, got <{self.u}>")
        if self.v.degree > self.g - 1:
            raise InvalidMatrix(f"v must have degree at most {self.g - 1}, got <{self.v}>")
        if self.w.degree != self.g + 1 or not self.w.is_monic():
            raise InvalidMatrix(f"w must be monic of degree {self.g + 1}, got <{self.w}>")

    @property
    def backend(self) -> str:
        return self.u.backend

    def free_coefficients(self) -> List[Scalar]:
        """
        The 3g+1 coordinates u_0..u_{g-1}, v_0..v_{g-1}, w_0..w_g.
        """
        g: int = self.g
        return [self.u[i] for i in range(g)] + [self.v[i] for i in range(g)] + [self.w[i] for i in range(g + 1)]

    @classmethod
    def from_free_coefficients(cls, values: Sequence, g: int, backend: str) -> "MumfordMatrix":
        values = list(values)
        if len(values) != 3 * g + 1:
            raise InvalidMatrix(f"Expected {3 * g + 1} coordinates, got {len(values)}")
        return cls(u=Poly(values[:g] + [1], backend),
                   v=Poly(values[g:2 * g], backend),
                   w=Poly(values[2 * g:] + [1], backend),
                   g=g)

    def to_approx(self) -> "MumfordMatrix":
        return MumfordMatrix(self.u.to_approx(), self.v.to_approx(), self.w.to_approx(), self.g)

    def close(self, other: "MumfordMatrix", tol: Optional[float] = None) -> bool:
        return self.g == other.g and self.u.close(other.u, tol) and self.v.close(other.v, tol) and \
            self.w.close(other.w, tol)


@dataclass(frozen=True)
class Tangent:
    du: Poly
    dv: Poly
    dw: Poly

    def free_coefficients(self, g: int) -> List[Scalar]:
        return [self.du[i] for i in range(g)] + [self.dv[i] for i in range(g)] + [self.dw[i] for i in range(g + 1)]


def moment(A: MumfordMatrix) -> Poly:
    return A.v * A.v + A.u * A.w


def in_fiber(A: MumfordMatrix, h: Poly, tol: Optional[float] = None) -> bool:
    if h.degree != 2 * A.g + 1:
        return False
    return moment(A).close(h.to_backend(A.backend) if A.backend != h.backend else h, tol)


def stratum_index(A: MumfordMatrix, tol: Optional[float] = None) -> int:
    """
    Degree of gcd(u, v, w); zero exactly on the maximal stratum.
    """
    return int(poly_gcd_many([A.u, A.v, A.w], tol).degree)


def _curve_poly(p: Poly, A: MumfordMatrix) -> Poly:
    return p.to_backend(A.backend)


def gcd_structure(A: MumfordMatrix, c: CurveData, tol: Optional[float] = None) -> Tuple[Poly, bool]:
    """
    Q = gcd(P, u, v) together with the check gcd(P^2, u) = Q^2 and gcd(P^2, w) = gcd(P, w, v)^2.

    :param A:
        Matrix of the maximal stratum of the fiber over c.h
    :param c:
        Analyzed curve
    :return:
        (Q, verified)
    """
    if stratum_index(A, tol) != 0:
        raise InvalidMatrix("gcd(u, v, w) is not trivial: the matrix is not in the maximal stratum")
    P: Poly = _curve_poly(c.P, A)
    P2: Poly = P * P
    Q: Poly = poly_gcd_many([P, A.u, A.v], tol)
    lhs_u: Poly = poly_gcd_monic(P2, A.u, tol)
    lhs_w: Poly = poly_gcd_monic(P2, A.w, tol)
    rhs_w: Poly = poly_gcd_many([P, A.w, A.v], tol)
    verified: bool = lhs_u.close(Q * Q, tol) and lhs_w.close(rhs_w * rhs_w, tol)
    return Q, verified


def q_decomposition(A: MumfordMatrix, c: CurveData, tol: Optional[float] = None) -> Tuple[Poly, Poly, Poly, Poly]:
    """
    Cancel Q = gcd(P, u, v): returns (Q, u / Q^2, v / Q, P / Q).
    """
    P: Poly = _curve_poly(c.P, A)
    Q: Poly = poly_gcd_many([P, A.u, A.v], tol)
    try:
        u_q2: Poly = exact_quotient(A.u, Q * Q, tol)
        v_q: Poly = exact_quotient(A.v, Q, tol)
        P_q: Poly = exact_quotient(P, Q, tol)
    except PolynomialError as error:
        raise NonGeneric(f"Cancellation of Q = <{Q}> failed: {error}")
    return Q, u_q2, v_q, P_q


def matrix_to_divisor(A: MumfordMatrix, c: CurveData, tol: Optional[float] = None) -> List[PointOnCPrime]:
    """
    The points (x_i, v_Q(x_i) / P_Q(x_i)) over the roots of u / Q^2.

    :param A:
        Matrix of the maximal stratum
    :param c:
        Analyzed curve
    :return:
        List of g - 2 deg Q points of the normalized curve
    """
    Q, u_q2, v_q, P_q = q_decomposition(A, c, tol)
    if u_q2.degree <= 0:
        return []
    if poly_gcd_monic(u_q2, u_q2.derivative(), tol).degree > 0:
        raise NonGeneric(f"u / Q^2 = <{u_q2}> has repeated roots")
    if c.n > 0 and poly_gcd_monic(u_q2, _curve_poly(c.P, A), tol).degree > 0:
        raise NonGeneric(f"u / Q^2 = <{u_q2}> has a root on the support of the modulus")

    points: List[PointOnCPrime] = []
    for root, _ in poly_roots(u_q2, tol):
        x = refine_root(u_q2, root)
        z = poly_eval(v_q, x) / poly_eval(P_q, x)
        point = PointOnCPrime(x, z)
        if not on_curve(point, c, max(tolerance(tol), 1e-7)):
            raise NonGeneric(f"Recovered point <{point}> is not on the normalized curve")
        points.append(point)
    return points


def _distinct(xs: Sequence, tol: Optional[float]) -> bool:
    for i in range(len(xs)):
        for j in range(i):
            if scalar_close(xs[i], xs[j], tol):
                return False
    return True


def divisor_to_matrix(c: CurveData, D: Sequence[PointOnCPrime], tol: Optional[float] = None) -> MumfordMatrix:
    """
    Build the matrix of the maximal stratum whose divisor is D.

    :param c:
        Analyzed curve
    :param D:
        g points of the normalized curve with distinct x, none of them on the modulus or a Weierstrass point
    :return:
        MumfordMatrix
    """
    if len(D) != c.g:
        raise DivisorError(f"Expected {c.g} points, got {len(D)}")
    for p in D:
        if p.is_infinity:
            raise DivisorError("The point at infinity cannot be used")
        if is_on_modulus(p, c, tol):
            raise DivisorError(f"Point <{p}> lies on the support of the modulus")
        if is_weierstrass(p, c, tol):
            raise DivisorError(f"Point <{p}> is a Weierstrass point")
        if not on_curve(p, c, max(tolerance(tol), 1e-7)):
            raise DivisorError(f"Point <{p}> is not on the normalized curve")
    xs: List[Scalar] = [p.x for p in D]
    if not _distinct(xs, tol):
        raise DivisorError("The points must have pairwise distinct x coordinates")

    exact: bool = c.backend == constants.backend_exact and all(p.is_exact for p in D)
    backend: str = constants.backend_exact if exact else constants.backend_approx
    P: Poly = c.P.to_backend(backend)
    h: Poly = c.h.to_backend(backend)

    u: Poly = Poly.from_roots(xs if exact else [complex(x) for x in xs], backend)
    v: Poly = poly_interpolate([(p.x if exact else complex(p.x), poly_eval(P, p.x) * p.z) for p in D], tol)
    v = v.to_backend(backend)
    try:
        w: Poly = exact_quotient(h - v * v, u, tol)
    except PolynomialError:
        raise DivisorError("u does not divide h - v^2: the points do not form a generic divisor")
    return MumfordMatrix(u=u, v=v, w=w, g=c.g)


# ----------------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------------

def _grid_point(rng: np.random.Generator) -> complex:
    bound: int = constants.sampler_half_width * constants.sampler_grid_step
    re, im = rng.integers(-bound, bound + 1, size=2)
    return complex(int(re), int(im)) / constants.sampler_grid_step


def random_affine_points(c: CurveData, count: int, rng: np.random.Generator,
                          tol: Optional[float] = None) -> List[PointOnCPrime]:
    """
    count points of the normalized curve with distinct x drawn from the complex grid, away from the modulus and
    from Weierstrass points.
    """
    hp: Poly = c.hprime.to_approx()
    P: Poly = c.P.to_approx()
    points: List[PointOnCPrime] = []
    for _ in range(constants.sampler_max_retries * max(count, 1)):
        if len(points) == count:
            break
        x: complex = _grid_point(rng)
        value: complex = hp(x)
        if abs(value) <= 1e-6 * max(1., absolute_bound(hp, x)):
            continue
        if c.n > 0 and abs(P(x)) <= 1e-6 * max(1., absolute_bound(P, x)):
            continue
        if any(abs(x - complex(p.x)) < 1e-9 for p in points):
            continue
        points.append(PointOnCPrime(x, principal_sqrt(value)))
    if len(points) < count:
        raise SamplerExhausted(f"Could not draw {count} generic points")
    return points


def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-constants.sampler_height, constants.sampler_height + 1)),
                    int(rng.integers(1, constants.sampler_denominator + 1)))


def random_rational_points(c: CurveData, count: int, rng: np.random.Generator) -> List[PointOnCPrime]:
    """
    Up to count rational points of the normalized curve with distinct x, away from the modulus.

    When h' is linear the curve is parameterized by z; otherwise x runs over rationals of bounded height and is
    kept when h'(x) is a square. Weierstrass points are included. Fewer than count points come back when the search
    finds too few, possibly none.
    """
    if c.backend != constants.backend_exact:
        raise SamplerExhausted("Rational points need a curve with rational coefficients")
    hp: Poly = c.hprime
    points: List[PointOnCPrime] = []
    for _ in range(constants.sampler_max_retries * max(count, 1)):
        if len(points) == count:
            break
        if hp.degree == 1:
            z: Fraction = _random_rational(rng)
            x: Fraction = (z * z - hp[0]) / hp[1]
        else:
            x = _random_rational(rng)
            z = principal_sqrt(hp(x))
            if not isinstance(z, Fraction):
                continue
        if c.n > 0 and c.P(x) == 0:
            continue
        if any(p.x == x for p in points):
            continue
        points.append(PointOnCPrime(x, z if rng.random() < 0.5 else -z))
    logger.debug(f"Found {len(points)} of {count} rational points on <{c.h}>")
    return points


def _random_poly(rng: np.random.Generator, degree: int, backend: str, leading_nonzero: bool = True) -> Poly:
    """
    Random polynomial of the given degree: rational coefficients of bounded height in the exact backend, small
    integers in the approximate one.
    """
    if degree < 0:
        return Poly.zero(backend)
    if backend == constants.backend_exact:
        numerators = rng.integers(-constants.sampler_height, constants.sampler_height + 1, size=degree + 1)
        denominators = rng.integers(1, constants.sampler_denominator + 1, size=degree + 1)
        values: list = [Fraction(int(p), int(q)) for p, q in zip(numerators, denominators)]
    else:
        values = [complex(int(c)) for c in rng.integers(-3, 4, size=degree + 1)]
    if leading_nonzero and values[-1] == 0:
        values[-1] = to_scalar(1, backend)
    return Poly(values, backend)


def _exact_pair(c: CurveData, degree: int, P_q: Poly, rng: np.random.Generator) -> Tuple[Poly, Poly]:
    """
    A rational Mumford pair (U, V) of the given degree for the curve y^2 = P_q^2 h', cut out on the normalized
    curve by a function z - V(x) whose other zeros are rational Weierstrass points.
    """
    backend: str = constants.backend_exact
    if degree == 0:
        return Poly.one(backend), Poly.zero(backend)
    hp: Poly = c.hprime
    top: int = int(hp.degree)
    weierstrass: List[Fraction] = [r for r, _ in rational_roots(hp)]

    options: List[Tuple[int, int]] = []
    for s in range(len(weierstrass) + 1):
        if (degree + s) % 2 == 0:
            m: int = (degree + s) // 2
            if m >= s and degree > top - s:
                options.append((s, m))
        if degree == top - s:
            options.extend((s, m) for m in range(s, (degree + s + 1) // 2) if 2 * m - s < degree)
    if not options:
        raise SamplerExhausted(f"No rational construction of degree {degree} on <{c.h}>")

    for attempt in range(constants.sampler_max_retries):
        s, m = options[int(rng.integers(len(options)))]
        chosen: List[int] = sorted(int(i) for i in rng.choice(len(weierstrass), size=s, replace=False)) if s else []
        S: Poly = Poly.from_roots([weierstrass[i] for i in chosen], backend)
        V1: Poly = _random_poly(rng, m - s, backend)
        R: Poly = exact_quotient(hp, S) - S * V1 * V1
        if R.degree != degree:
            continue
        U: Poly = R.monic()
        if poly_gcd_monic(U, U.derivative()).degree > 0 or poly_gcd_monic(U, hp).degree > 0:
            continue
        if c.n > 0 and poly_gcd_monic(U, c.P).degree > 0:
            continue
        return U, (P_q * S * V1) % U
    raise SamplerExhausted(f"Rational construction of degree {degree} on <{c.h}> kept failing")


def _approx_pair(c: CurveData, degree: int, P_q: Poly, rng: np.random.Generator,
                 tol: Optional[float] = None) -> Tuple[Poly, Poly]:
    backend: str = constants.backend_approx
    if degree == 0:
        return Poly.one(backend), Poly.zero(backend)
    points: List[PointOnCPrime] = random_affine_points(c, degree, rng, tol)
    U: Poly = Poly.from_roots([p.x for p in points], backend)
    V: Poly = poly_interpolate([(p.x, P_q(p.x) * p.z) for p in points], tol).to_backend(backend)
    return U, V


def _assemble(c: CurveData, Q: Poly, U: Poly, V: Poly, s: Poly, tol: Optional[float]) -> Optional[MumfordMatrix]:
    backend: str = U.backend
    u: Poly = Q * Q * U
    v: Poly = Q * (V + U * s)
    try:
        w: Poly = exact_quotient(c.h.to_backend(backend) - v * v, u, tol)
        A: MumfordMatrix = MumfordMatrix(u=u, v=v, w=w, g=c.g)
    except (PolynomialError, InvalidMatrix):
        return None
    if stratum_index(A, tol) != 0:
        return None
    if not poly_gcd_many([c.P.to_backend(backend), u, v], tol).close(Q, tol):
        return None
    return A


def sample_fiber(c: CurveData, seed: int, backend: Optional[str] = None, q: Optional[Poly] = None,
                 tol: Optional[float] = None) -> MumfordMatrix:
    """
    Draw a matrix of the maximal stratum of the fiber over c.h, deterministically from the seed.

    The exact backend builds rational matrices; the approximate backend draws points on a complex grid. With no
    backend given the exact construction is tried first. A monic divisor q of P produces matrices with
    gcd(P, u, v) = q.

    :param c:
        Analyzed curve
    :param seed:
        Seed of the random draws
    :param backend:
        constants.backend_exact, constants.backend_approx or None
    :param q:
        Optional monic divisor of P
    :return:
        MumfordMatrix
    """
    if backend is None:
        if c.backend == constants.backend_exact:
            try:
                return sample_fiber(c, seed, constants.backend_exact, q, tol)
            except SamplerExhausted:
                logger.debug(f"No rational sample on <{c.h}>, drawing on the complex grid")
        return sample_fiber(c, seed, constants.backend_approx, q, tol)

    rng: np.random.Generator = np.random.default_rng(seed)
    if backend == constants.backend_exact and c.backend != constants.backend_exact:
        raise SamplerExhausted("Rational samples need a curve with rational coefficients")

    Q: Poly = Poly.one(backend) if q is None else q.to_backend(backend)
    if not Q.is_monic() or not (c.P.to_backend(backend) % Q).is_zero:
        raise ValueError(f"q = <{q}> must be a monic divisor of P = <{c.P}>")
    j: int = int(Q.degree)
    degree: int = c.g - 2 * j
    if degree < 0:
        raise ValueError(f"deg q = {j} is too large for g = {c.g}")
    P_q: Poly = exact_quotient(c.P.to_backend(backend), Q)

    for attempt in range(constants.sampler_max_retries):
        if q is None and backend == constants.backend_approx:
            try:
                return divisor_to_matrix(c, random_affine_points(c, c.g, rng, tol), tol)
            except (DivisorError, InvalidMatrix) as error:
                logger.debug(f"Sample {attempt} rejected: {error}")
                continue
        if backend == constants.backend_exact:
            U, V = _exact_pair(c, degree, P_q, rng)
        else:
            U, V = _approx_pair(c, degree, P_q, rng, tol)
        A: Optional[MumfordMatrix] = _assemble(c, Q, U, V, _random_poly(rng, j - 1, backend, False), tol)
        if A is not None:
            return A
        logger.debug(f"Sample {attempt} rejected: not in the maximal stratum with gcd(P, u, v) = q")
    raise SamplerExhausted(f"No sample found after {constants.sampler_max_retries} attempts")
