# gen_jacobian.py
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
Divisors and rational functions on the normalized curve C', jets at the modulus, and the generalized Jacobian
Jac_m(C') with base point at infinity.

A class is stored as a reduced Mumford pair (U, V) on C' together with a jet record. The pair describes an effective
divisor E of degree at most g'; the class of a degree-zero divisor D is represented by (E, jet(F)) where
D = E - deg(E) inf + (F). Two jet records describe the same class when they agree in the local ring of the singular
curve C at every singular point: split points compare the ratio of the two branches, branch points compare
f(z) / f(-z).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import numpy as np

from . import constants
from .curve import SPLIT, CurveData, PointOnCPrime, involution, is_on_modulus, local_expansion
from .mumford_phase import (DivisorError, MumfordMatrix, NonGeneric, matrix_to_divisor, q_decomposition,
                            random_affine_points)
from .scalar_poly import (Poly, Scalar, Series, absolute_bound, poly_divrem, poly_eval, poly_gcd_many,
                          poly_gcd_monic, poly_roots, poly_xgcd, principal_sqrt, refine_root, series_of_poly_at,
                          squarefree_decomposition, to_scalar)
from .settings import tolerance

logger = logging.getLogger(__name__)


class SupportCollision(ValueError):
    pass


class BranchSelectionAmbiguous(ValueError):
    pass


class DivisorCountMismatch(ValueError):
    """
    The zeros or the pole of a constructed function disagree with the counts the construction predicts.
    """
    pass


# ----------------------------------------------------------------------------
# Divisors
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorOnCPrime:
    """
    A finite formal sum of points of C' with non-zero integer multiplicities.
    """
    terms: Tuple[Tuple[PointOnCPrime, int], ...] = ()

    @classmethod
    def of(cls, terms: Iterable[Tuple[PointOnCPrime, int]], tol: Optional[float] = None) -> "DivisorOnCPrime":
        merged: List[List] = []
        for point, multiplicity in terms:
            for item in merged:
                if item[0].close(point, tol):
                    item[1] += multiplicity
                    break
            else:
                merged.append([point, multiplicity])
        return cls(tuple((point, m) for point, m in merged if m != 0))

    @classmethod
    def zero(cls) -> "DivisorOnCPrime":
        return cls(())

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.terms)

    @property
    def infinity_multiplicity(self) -> int:
        return sum(m for p, m in self.terms if p.is_infinity)

    @property
    def affine_terms(self) -> List[Tuple[PointOnCPrime, int]]:
        return [(p, m) for p, m in self.terms if not p.is_infinity]

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def multiplicity(self, point: PointOnCPrime, tol: Optional[float] = None) -> int:
        return sum(m for p, m in self.terms if p.close(point, tol))

    def __add__(self, other: "DivisorOnCPrime") -> "DivisorOnCPrime":
        return DivisorOnCPrime.of(list(self.terms) + list(other.terms))

    def __neg__(self) -> "DivisorOnCPrime":
        return DivisorOnCPrime(tuple((p, -m) for p, m in self.terms))

    def __sub__(self, other: "DivisorOnCPrime") -> "DivisorOnCPrime":
        return self + (-other)

    def coprime_to_modulus(self, c: CurveData, tol: Optional[float] = None) -> bool:
        return not any(is_on_modulus(p, c, tol) for p, _ in self.affine_terms)

    def same_as(self, other: "DivisorOnCPrime", tol: Optional[float] = None) -> bool:
        return (self - other).is_zero if tol is None else DivisorOnCPrime.of(
            list(self.terms) + [(p, -m) for p, m in other.terms], tol).is_zero

    def __str__(self) -> str:
        return " + ".join(f"{m}*{p}" for p, m in self.terms) if self.terms else "0"


# ----------------------------------------------------------------------------
# Rational functions
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFunctionRep:
    """
    The function (a(x) + b(x) z) / cden(x) on C'.
    """
    a: Poly
    b: Poly
    cden: Poly

    def __post_init__(self):
        if self.cden.is_zero:
            raise ValueError("The denominator of a rational function cannot vanish")
        if len({self.a.backend, self.b.backend, self.cden.backend}) != 1:
            raise ValueError("a, b and cden must share one backend")

    @classmethod
    def make(cls, a: Poly, b: Poly, cden: Poly, tol: Optional[float] = None) -> "RationalFunctionRep":
        """
        Normalize: cden monic and gcd(a, b, cden) = 1.
        """
        backend: str = constants.backend_approx if constants.backend_approx in (a.backend, b.backend, cden.backend) \
            else constants.backend_exact
        a, b, cden = a.to_backend(backend), b.to_backend(backend), cden.to_backend(backend)
        common: Poly = poly_gcd_many([a, b, cden], tol)
        if common.degree > 0:
            a, b, cden = (poly_divrem(p, common, tol)[0] for p in (a, b, cden))
        inv = 1 / cden.leading
        return cls(a * inv, b * inv, cden * inv)

    @classmethod
    def constant(cls, value, backend: str = constants.backend_exact) -> "RationalFunctionRep":
        return cls(Poly((value,), backend), Poly.zero(backend), Poly.one(backend))

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunctionRep":
        return cls(p, Poly.zero(p.backend), Poly.one(p.backend))

    @property
    def backend(self) -> str:
        return self.a.backend

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero and self.b.is_zero

    def mul(self, other: "RationalFunctionRep", c: CurveData) -> "RationalFunctionRep":
        backend: str = constants.backend_approx if constants.backend_approx in (self.backend, other.backend) \
            else constants.backend_exact
        f, g = self.to_backend(backend), other.to_backend(backend)
        hp: Poly = c.hprime.to_backend(backend)
        return RationalFunctionRep.make(f.a * g.a + f.b * g.b * hp, f.a * g.b + f.b * g.a, f.cden * g.cden)

    def norm(self, c: CurveData) -> Poly:
        return self.a * self.a - self.b * self.b * c.hprime.to_backend(self.backend)

    def inverse(self, c: CurveData) -> "RationalFunctionRep":
        if self.is_zero:
            raise ZeroDivisionError("The zero function has no inverse")
        return RationalFunctionRep.make(self.cden * self.a, -(self.cden * self.b), self.norm(c))

    def to_backend(self, backend: str) -> "RationalFunctionRep":
        return RationalFunctionRep(self.a.to_backend(backend), self.b.to_backend(backend),
                                   self.cden.to_backend(backend))

    def evaluate(self, p: PointOnCPrime):
        if p.is_infinity:
            raise ValueError("Evaluate at infinity through divisor_of")
        return (poly_eval(self.a, p.x) + poly_eval(self.b, p.x) * p.z) / poly_eval(self.cden, p.x)

    def __str__(self) -> str:
        return f"(({self.a}) + ({self.b}) z) / ({self.cden})"


def _series_backend(f: RationalFunctionRep, x_series: Series) -> str:
    if f.backend == constants.backend_approx or x_series.backend == constants.backend_approx:
        return constants.backend_approx
    return constants.backend_exact


def numerator_series(f: RationalFunctionRep, x_series: Series, z_series: Series) -> Series:
    """
    The series of a(x) + b(x) z along a local expansion.
    """
    backend: str = _series_backend(f, x_series)
    if backend == constants.backend_approx:
        x_series, z_series = x_series.to_approx(), z_series.to_approx()
    out: Series = series_of_poly_at(f.a.to_backend(backend), x_series)
    if not f.b.is_zero:
        out = out + series_of_poly_at(f.b.to_backend(backend), x_series) * z_series
    return out


def function_series(f: RationalFunctionRep, x_series: Series, z_series: Series) -> Series:
    """
    The series of f along a local expansion at a point where cden does not vanish.
    """
    backend: str = _series_backend(f, x_series)
    den: Series = series_of_poly_at(f.cden.to_backend(backend),
                                    x_series.to_approx() if backend == constants.backend_approx else x_series)
    return numerator_series(f, x_series, z_series) * den.inv()


def _numerator_valuation(f: RationalFunctionRep, p: PointOnCPrime, c: CurveData, bound: int) -> int:
    """
    Valuation of a + b z at p, known to be at most bound.
    """
    if bound <= 0:
        return 0
    x_series, z_series = local_expansion(p, c, bound)
    series: Series = numerator_series(f, x_series, z_series)
    scale: float = absolute_bound(f.a, p.x) + absolute_bound(f.b, p.x) * abs(complex(p.z))
    threshold: float = 1e-7 * max(1., scale)
    for exponent in range(0, bound + 1):
        value = series.coefficient(exponent)
        if isinstance(value, Fraction):
            if value != 0:
                return exponent
        elif abs(value) > threshold:
            return exponent
    return bound


def _zero_point(x: Scalar) -> PointOnCPrime:
    return PointOnCPrime(x, Fraction(0) if isinstance(x, Fraction) else 0j)


def divisor_of(f: RationalFunctionRep, c: CurveData, tol: Optional[float] = None) -> DivisorOnCPrime:
    """
    The divisor of a non-zero rational function.

    Affine zeros and poles lie over the roots of the norm a^2 - b^2 h' and of cden. Over a root x0 which is not a
    Weierstrass point the norm multiplicity mu splits between (x0, z0) and (x0, -z0); the first share is read off a
    local expansion. At infinity the valuation follows from the degrees.

    :param f:
        Non-zero rational function
    :param c:
        Analyzed curve
    :return:
        DivisorOnCPrime of degree zero
    """
    if f.is_zero:
        raise DivisorError("The zero function has no divisor")
    norm: Poly = f.norm(c)

    # Entries [x0, multiplicity in the norm, multiplicity in cden]
    roots: List[List] = []

    def _register(x0: Scalar, column: int, multiplicity: int) -> None:
        for entry in roots:
            if abs(complex(entry[0]) - complex(x0)) <= 1e-7 * max(1., abs(complex(x0))):
                entry[column] += multiplicity
                return
        entry = [x0, 0, 0]
        entry[column] = multiplicity
        roots.append(entry)

    for root, multiplicity in poly_roots(norm, tol):
        _register(refine_root(norm, root), 1, multiplicity)
    if f.cden.degree > 0:
        for root, multiplicity in poly_roots(f.cden, tol):
            _register(refine_root(f.cden, root), 2, multiplicity)

    terms: List[Tuple[PointOnCPrime, int]] = []
    for x0, mu_norm, mu_den in roots:
        value = poly_eval(c.hprime, x0)
        weierstrass: bool = value == 0 if isinstance(value, Fraction) else \
            abs(value) <= 1e-7 * max(1., absolute_bound(c.hprime, x0))
        if weierstrass:
            terms.append((_zero_point(x0), mu_norm - 2 * mu_den))
            continue
        z0 = principal_sqrt(value)
        plus: PointOnCPrime = PointOnCPrime(x0, z0)
        share: int = _numerator_valuation(f, plus, c, mu_norm)
        terms.append((plus, share - mu_den))
        terms.append((involution(plus), mu_norm - share - mu_den))

    odd: float = -2 * f.b.degree - (2 * c.gprime + 1)
    at_infinity: float = min(-2 * f.a.degree, odd) + 2 * f.cden.degree
    terms.append((PointOnCPrime.infinity(), int(at_infinity)))

    divisor: DivisorOnCPrime = DivisorOnCPrime.of(terms)
    assert divisor.degree == 0, f"Divisor of <{f}> has degree {divisor.degree}"
    return divisor


def valuation_at_infinity(f: RationalFunctionRep, c: CurveData, order: int = 8) -> int:
    """
    Valuation of f at infinity read off the Laurent expansions of x and z.
    """
    x_series, z_series = local_expansion(PointOnCPrime.infinity(), c, order)
    num: Optional[int] = numerator_series(f, x_series, z_series).leading_valuation()
    den: Optional[int] = series_of_poly_at(f.cden.to_backend(x_series.backend), x_series).leading_valuation()
    if num is None or den is None:
        raise ValueError(f"Expansion order {order} is too small to see the valuation of <{f}>")
    return num - den


# ----------------------------------------------------------------------------
# Jets
# ----------------------------------------------------------------------------

MULTIPLICATIVE: str = "mult"
ADDITIVE: str = "add"


@dataclass(frozen=True)
class JetRecord:
    """
    Unit series at every modulus point, truncated below the multiplicity of the point.
    """
    series: Tuple[Series, ...]

    @classmethod
    def trivial(cls, c: CurveData) -> "JetRecord":
        return cls(tuple(Series([1] + [0] * (item.multiplicity - 1), 0, constants.backend_approx)
                         for item in c.modulus))

    def __mul__(self, other: "JetRecord") -> "JetRecord":
        return JetRecord(tuple(a * b for a, b in zip(self.series, other.series)))

    def inv(self) -> "JetRecord":
        return JetRecord(tuple(s.inv() for s in self.series))

    def scaled(self, value: complex) -> "JetRecord":
        return JetRecord(tuple(s * complex(value) for s in self.series))

    def invariants(self, c: CurveData) -> List[Tuple[str, complex]]:
        """
        Coordinates of the record in the local rings of the singular curve, each tagged as multiplicative or
        additive. Scalars, one global scalar in particular, do not change them.
        """
        out: List[Tuple[str, complex]] = []
        for orbit, item in enumerate(c.branch_points):
            indices: List[int] = [i for i, m in enumerate(c.modulus) if m.orbit == orbit]
            if item.kind == SPLIT:
                plus, minus = (self.series[i] for i in sorted(indices, key=lambda i: -c.modulus[i].sheet))
                ratio: Series = plus * minus.inv()
                out.append((MULTIPLICATIVE, complex(ratio.coefficient(0))))
                out.extend((ADDITIVE, complex(ratio.coefficient(e))) for e in range(1, item.ell))
            else:
                s: Series = self.series[indices[0]]
                flipped: Series = Series([coeff * (-1) ** e for e, coeff in enumerate(s.coeffs)], s.valuation,
                                         s.backend)
                ratio = s * flipped.inv()
                out.extend((ADDITIVE, complex(ratio.coefficient(e))) for e in range(1, 2 * item.ell, 2))
        return out

    def equivalent(self, other: "JetRecord", c: CurveData, rtol: Optional[float] = None) -> bool:
        rtol = constants.jet_rtol if rtol is None else rtol
        for (_, a), (_, b) in zip(self.invariants(c), other.invariants(c)):
            if abs(a - b) > rtol * max(1., abs(a), abs(b)):
                return False
        return True

    def is_trivial(self, c: CurveData, rtol: Optional[float] = None) -> bool:
        return self.equivalent(JetRecord.trivial(c), c, rtol)


def jet_at(f: RationalFunctionRep, c: CurveData, tol: Optional[float] = None) -> JetRecord:
    """
    The jet of f at the modulus: its series at every modulus point, truncated below the multiplicity.

    :param f:
        Function with neither zero nor pole on the support of the modulus
    :param c:
        Analyzed curve
    :return:
        JetRecord
    """
    threshold: float = tolerance(tol)
    series: List[Series] = []
    for index, item in enumerate(c.modulus):
        order: int = item.multiplicity - 1
        x_series, z_series = c.modulus_expansion(index, order)
        x0, z0 = item.point.x, item.point.z
        num: Series = numerator_series(f.to_backend(constants.backend_approx), x_series, z_series)
        den: Series = series_of_poly_at(f.cden.to_approx(), x_series)
        num_scale: float = absolute_bound(f.a, x0) + absolute_bound(f.b, x0) * abs(complex(z0))
        if abs(complex(num.coefficient(0))) <= threshold * max(1., num_scale):
            raise SupportCollision(f"<{f}> vanishes at the modulus point {item.point}")
        if abs(complex(den.coefficient(0))) <= threshold * max(1., absolute_bound(f.cden, x0)):
            raise SupportCollision(f"<{f}> has a pole at the modulus point {item.point}")
        series.append(num * den.inv())
    return JetRecord(tuple(series))


# ----------------------------------------------------------------------------
# Mumford pairs on C'
# ----------------------------------------------------------------------------

def _common(*polys: Poly) -> List[Poly]:
    if any(p.backend == constants.backend_approx for p in polys):
        return [p.to_approx() for p in polys]
    return list(polys)


def cantor_compose(U1: Poly, V1: Poly, U2: Poly, V2: Poly, hprime: Poly, tol: Optional[float] = None
                   ) -> Tuple[Poly, Poly, Poly]:
    """
    Composition of two Mumford pairs on z^2 = h'(x).

    :return:
        (U, V, d) with E1 + E2 = E + div(d(x)) + 2 deg(d) inf
    """
    U1, V1, U2, V2, hprime = _common(U1, V1, U2, V2, hprime)
    d1, e1, e2 = poly_xgcd(U1, U2, tol)
    W: Poly = V1 + V2
    if W.backend == constants.backend_approx:
        W = W.trimmed(tolerance(tol) * max(1., V1.norm(), V2.norm()))
    d, c1, c2 = poly_xgcd(d1, W, tol)
    s1, s2, s3 = c1 * e1, c1 * e2, c2
    U: Poly = poly_divrem(U1 * U2, d * d, tol)[0]
    V: Poly = poly_divrem(s1 * U1 * V2 + s2 * U2 * V1 + s3 * (V1 * V2 + hprime), d, tol)[0]
    V = poly_divrem(V, U, tol)[1]
    return U, V, d


def cantor_reduce_step(U: Poly, V: Poly, hprime: Poly, tol: Optional[float] = None) -> Tuple[Poly, Poly]:
    """
    One reduction step: E - deg(U) inf = E' - deg(U') inf + div((z - V) / U').
    """
    U, V, hprime = _common(U, V, hprime)
    U_next: Poly = poly_divrem(hprime - V * V, U, tol)[0].monic()
    V_next: Poly = poly_divrem(-V, U_next, tol)[1]
    return U_next, V_next


def cantor_reduce(U: Poly, V: Poly, hprime: Poly, gprime: int, tol: Optional[float] = None) -> Tuple[Poly, Poly]:
    while U.degree > gprime:
        U, V = cantor_reduce_step(U, V, hprime, tol)
    return U, V


def mumford_pair_of_divisor(D: DivisorOnCPrime, c: CurveData, tol: Optional[float] = None) -> Tuple[Poly, Poly]:
    """
    The reduced pair of D - deg(D) inf in Jac(C'), computed without jets.
    """
    backend: str = c.backend
    U, V = Poly.one(backend), Poly.zero(backend)
    for p, m in D.affine_terms:
        q: PointOnCPrime = p if m > 0 else involution(p)
        exact: bool = backend == constants.backend_exact and q.is_exact
        b: str = constants.backend_exact if exact else constants.backend_approx
        Up, Vp = Poly((-to_scalar(q.x, b), 1), b), Poly((to_scalar(q.z, b),), b)
        for _ in range(abs(m)):
            U, V, _d = cantor_compose(U, V, Up, Vp, c.hprime, tol)
            U, V = cantor_reduce(U, V, c.hprime, c.gprime, tol)
    return U, V


# ----------------------------------------------------------------------------
# Classes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GJClass:
    reduced_u: Poly
    reduced_v: Poly
    jet: JetRecord

    @property
    def pair(self) -> Tuple[Poly, Poly]:
        return self.reduced_u, self.reduced_v


def _relation_jet(f: RationalFunctionRep, c: CurveData) -> JetRecord:
    try:
        return jet_at(f, c)
    except SupportCollision as error:
        raise NonGeneric(f"Relation function touches the modulus: {error}")


def _reduce_class(U: Poly, V: Poly, jet: JetRecord, c: CurveData, tol: Optional[float] = None) -> GJClass:
    hp: Poly = c.hprime
    while U.degree > c.gprime:
        U_next, V_next = cantor_reduce_step(U, V, hp, tol)
        backend: str = U_next.backend
        jet = jet * _relation_jet(RationalFunctionRep(-V, Poly.one(backend), U_next), c)
        U, V = U_next, V_next
    if c.n > 0 and U.degree > 0 and poly_gcd_monic(U, c.P.to_backend(U.backend), tol).degree > 0:
        raise NonGeneric(f"Reduced divisor <{U}> meets the support of the modulus")
    return GJClass(reduced_u=U, reduced_v=V, jet=jet)


def identity(c: CurveData) -> GJClass:
    return GJClass(Poly.one(c.backend), Poly.zero(c.backend), JetRecord.trivial(c))


def class_add(c1: GJClass, c2: GJClass, c: CurveData, tol: Optional[float] = None) -> GJClass:
    """
    Sum of two classes: compose the pairs, multiply the jets by the jet of the composition function, reduce.
    """
    U, V, d = cantor_compose(c1.reduced_u, c1.reduced_v, c2.reduced_u, c2.reduced_v, c.hprime, tol)
    jet: JetRecord = c1.jet * c2.jet
    if d.degree > 0:
        jet = jet * _relation_jet(RationalFunctionRep.from_poly(d), c)
    return _reduce_class(U, V, jet, c, tol)


def class_neg(c1: GJClass, c: CurveData, tol: Optional[float] = None) -> GJClass:
    """
    Negation: the involution on the pair, and the jet of 1 / (U(x) F).
    """
    U: Poly = c1.reduced_u
    V: Poly = poly_divrem(-c1.reduced_v, U, tol)[1] if U.degree > 0 else c1.reduced_v
    jet: JetRecord = c1.jet
    if U.degree > 0:
        jet = jet * _relation_jet(RationalFunctionRep.from_poly(U), c)
    return GJClass(reduced_u=U, reduced_v=V, jet=jet.inv())


def class_eq(c1: GJClass, c2: GJClass, c: CurveData, tol: Optional[float] = None) -> bool:
    U1, V1, U2, V2 = _common(c1.reduced_u, c1.reduced_v, c2.reduced_u, c2.reduced_v)
    scaled_tol: float = max(tolerance(tol), 1e-7)
    if not (U1.close(U2, scaled_tol) and V1.close(V2, scaled_tol)):
        return False
    return c1.jet.equivalent(c2.jet, c)


def tau(c1: GJClass) -> Tuple[Poly, Poly]:
    return c1.reduced_u, c1.reduced_v


def _point_class(p: PointOnCPrime, negative: bool, c: CurveData, tol: Optional[float] = None) -> GJClass:
    # p - inf, or -(p - inf) = i(p) - inf + div(1 / (x - x_p))
    q: PointOnCPrime = involution(p) if negative else p
    exact: bool = c.backend == constants.backend_exact and q.is_exact
    backend: str = constants.backend_exact if exact else constants.backend_approx
    U: Poly = Poly((-to_scalar(q.x, backend), 1), backend)
    V: Poly = Poly((to_scalar(q.z, backend),), backend)
    jet: JetRecord = JetRecord.trivial(c)
    if negative:
        jet = _relation_jet(RationalFunctionRep.from_poly(U), c).inv()
    return _reduce_class(U, V, jet, c, tol)


def theta(D: DivisorOnCPrime, c: CurveData, auxiliary_seed: Optional[int] = None,
          tol: Optional[float] = None) -> GJClass:
    """
    The class of D - deg(D) inf in Jac_m(C').

    With an auxiliary seed the class is computed as theta(D + E) - theta(E) for a random generic divisor E, which
    gives the same class.

    :param D:
        Divisor coprime to the modulus
    :param c:
        Analyzed curve
    :param auxiliary_seed:
        Optional seed of the auxiliary divisor
    :return:
        GJClass
    """
    if not D.coprime_to_modulus(c, tol):
        raise NonGeneric(f"Divisor <{D}> meets the support of the modulus")
    if auxiliary_seed is not None:
        rng: np.random.Generator = np.random.default_rng(auxiliary_seed)
        count: int = 1 + int(rng.integers(0, c.gprime + 2))
        E: DivisorOnCPrime = DivisorOnCPrime.of((p, 1) for p in random_affine_points(c, count, rng, tol))
        return class_add(theta(D + E, c, tol=tol), class_neg(theta(E, c, tol=tol), c, tol), c, tol)

    out: GJClass = identity(c)
    for p, m in D.affine_terms:
        base: GJClass = _point_class(p, m < 0, c, tol)
        for _ in range(abs(m)):
            out = class_add(out, base, c, tol)
    return out


def is_m_equivalent(D1: DivisorOnCPrime, D2: DivisorOnCPrime, c: CurveData, tol: Optional[float] = None) -> bool:
    """
    True when D1 - D2 is the divisor of a function which is one scalar in the local ring at every singular point.
    """
    if D1.degree != D2.degree:
        raise DivisorError(f"Degrees differ: {D1.degree} and {D2.degree}")
    for D in (D1, D2):
        if not D.coprime_to_modulus(c, tol):
            raise DivisorError(f"Divisor <{D}> meets the support of the modulus")
    return class_eq(theta(D1 - D2, c, tol=tol), identity(c), c, tol)


# ----------------------------------------------------------------------------
# Kernel of Jac_m(C') -> Jac(C')
# ----------------------------------------------------------------------------

def kernel_structure(c: CurveData, seed: int = 0) -> Tuple[int, int]:
    """
    Ranks (multiplicative, additive) of the kernel of tau, counted from the coordinates of jet records and checked
    against (k - d, n - k + d).
    """
    rng: np.random.Generator = np.random.default_rng(seed)
    sample: JetRecord = JetRecord(tuple(
        Series([complex(*rng.normal(size=2)) + 2.] + [complex(*rng.normal(size=2)) for _ in range(m.multiplicity - 1)],
               0, constants.backend_approx)
        for m in c.modulus))
    coordinates: List[Tuple[str, complex]] = sample.invariants(c)
    mult_rank: int = sum(1 for kind, _ in coordinates if kind == MULTIPLICATIVE)
    add_rank: int = sum(1 for kind, _ in coordinates if kind == ADDITIVE)

    # The jet group modulo the units of the local rings has dimension sum(mult) - delta = n
    if mult_rank + add_rank != sum(m.multiplicity for m in c.modulus) - c.delta:
        raise RuntimeError(f"Jet coordinates ({mult_rank}, {add_rank}) do not match the modulus of <{c.h}>")
    if not sample.equivalent(sample.scaled(complex(*rng.normal(size=2)) + 3.), c):
        raise RuntimeError("Jet coordinates are not invariant under scalars")
    expected: Tuple[int, int] = (c.k - c.d, c.n - c.k + c.d)
    if (mult_rank, add_rank) != expected:
        raise RuntimeError(f"Jet coordinates ({mult_rank}, {add_rank}) disagree with (k-d, n-k+d) = {expected}")
    return mult_rank, add_rank


# ----------------------------------------------------------------------------
# The map from the maximal stratum
# ----------------------------------------------------------------------------

def phi_map(A: MumfordMatrix, c: CurveData, tol: Optional[float] = None) -> GJClass:
    """
    theta of the divisor points of A, minus their number times infinity.
    """
    points: List[PointOnCPrime] = matrix_to_divisor(A, c, tol)
    return theta(DivisorOnCPrime.of((p, 1) for p in points), c, tol=tol)


@dataclass(frozen=True)
class PhiDirectData:
    """
    The function F = R (P z + v) / u + 1 of the direct construction, its zero divisor and its pole order at
    infinity, with the counts the construction predicts.
    """
    function: RationalFunctionRep
    zeros: DivisorOnCPrime
    pole_order: int
    expected_zeros: int
    expected_pole_order: int


def _radical(P: Poly) -> Poly:
    out: Poly = Poly.one(P.backend)
    for factor, _ in squarefree_decomposition(P):
        out = out * factor
    return out


def phi_direct_data(A: MumfordMatrix, c: CurveData, tol: Optional[float] = None) -> PhiDirectData:
    """
    Zeros of F = R_Q (P_Q z + v_Q) / u_Q2 + 1 with R = prod (x - a_i)^(l_i + 1).

    The zeros lie over the roots of N = (R_Q v_Q + u_Q2)^2 - R_Q^2 P_Q^2 h', less one root per root of u_Q2; on
    each fibre the sheet is the one where the numerator of F vanishes.
    """
    Q, u_q2, v_q, P_q = q_decomposition(A, c, tol)
    backend: str = A.backend
    P: Poly = c.P.to_backend(backend)
    R: Poly = P * _radical(P) if c.n > 0 else Poly.one(backend)
    R_q: Poly = poly_divrem(R, Q, tol)[0]
    a: Poly = R_q * v_q + u_q2
    b: Poly = R_q * P_q
    F: RationalFunctionRep = RationalFunctionRep(a, b, u_q2)
    norm: Poly = F.norm(c)

    remaining: List[List] = [[root, m] for root, m in poly_roots(norm, tol)]
    if u_q2.degree > 0:
        for root, _ in poly_roots(u_q2, tol):
            nearest: List = min(remaining, key=lambda entry: abs(entry[0] - root))
            nearest[1] -= 1
        remaining = [entry for entry in remaining if entry[1] > 0]

    terms: List[Tuple[PointOnCPrime, int]] = []
    for root, multiplicity in remaining:
        x0 = refine_root(norm, root)
        value = poly_eval(c.hprime, x0)
        if abs(complex(value)) <= 1e-7 * max(1., absolute_bound(c.hprime, x0)):
            terms.append((_zero_point(x0), multiplicity))
            continue
        z0 = principal_sqrt(value)
        plus, minus = PointOnCPrime(x0, z0), PointOnCPrime(x0, -z0)
        m_plus: float = abs(complex(poly_eval(a, x0) + poly_eval(b, x0) * z0))
        m_minus: float = abs(complex(poly_eval(a, x0) - poly_eval(b, x0) * z0))
        small, large = min(m_plus, m_minus), max(m_plus, m_minus)
        if large == 0 or (small > 0 and large / small < constants.branch_selection_ratio):
            raise BranchSelectionAmbiguous(f"|F| is comparable on both sheets over x = {x0}")
        terms.append((plus if m_plus < m_minus else minus, multiplicity))

    zeros: DivisorOnCPrime = DivisorOnCPrime.of(terms)
    j: int = int(Q.degree)
    data = PhiDirectData(function=F, zeros=zeros, pole_order=-valuation_at_infinity(F, c),
                         expected_zeros=c.g + 2 * (c.n + c.k - j) + 1,
                         expected_pole_order=2 * (c.k + c.n) + 1)
    if zeros.degree != data.expected_zeros:
        raise DivisorCountMismatch(f"F has {zeros.degree} zeros, expected {data.expected_zeros}")
    if data.pole_order != data.expected_pole_order:
        raise DivisorCountMismatch(f"F has a pole of order {data.pole_order} at infinity, expected "
                                   f"{data.expected_pole_order}")
    return data


def phi_map_direct(A: MumfordMatrix, c: CurveData, tol: Optional[float] = None) -> GJClass:
    """
    theta((F)_0 - deg inf) for the function F of the direct construction; equal to phi_map(A).
    """
    data: PhiDirectData = phi_direct_data(A, c, tol)
    logger.debug(f"Direct form: {data.zeros.degree} zeros, pole order {data.pole_order} at infinity")
    return theta(data.zeros, c, tol=tol)
