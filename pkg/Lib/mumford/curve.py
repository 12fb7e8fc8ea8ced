# curve.py
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
The singular curve C: y^2 = h(x) and its normalization C': z^2 = h'(x), where h = P^2 h'. The map C' -> C sends
(x, z) to (x, P(x) z). The singularities of C lie over the roots a_i of P; each one is either a branch point of C'
(h'(a_i) = 0) or splits into the two points (a_i, +b_i) and (a_i, -b_i).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import constants
from .scalar_poly import (Poly, PolynomialError, Scalar, Series, absolute_bound, exact_quotient, max_quadratic_divisor,
                          poly_eval, poly_gcd_monic, poly_roots, principal_sqrt, refine_root, scalar_is_zero,
                          squarefree_decomposition, to_scalar)
from .settings import tolerance

logger = logging.getLogger(__name__)

# Kinds of singular point
BRANCH: str = "branch"
SPLIT: str = "split"

# Order at which expansions at the modulus points are cached
cached_expansion_order: int = 16


class CurveError(ValueError):
    pass


class AmbiguousBranch(CurveError):
    pass


@dataclass(frozen=True)
class PointOnCPrime:
    """
    A point (x, z) of the normalized curve, or the point at infinity when both coordinates are None.
    """
    x: Optional[Scalar] = None
    z: Optional[Scalar] = None

    @classmethod
    def infinity(cls) -> "PointOnCPrime":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def is_exact(self) -> bool:
        return isinstance(self.x, Fraction) and isinstance(self.z, Fraction)

    def close(self, other: "PointOnCPrime", tol: Optional[float] = None) -> bool:
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        threshold: float = tolerance(tol) * max(1., abs(complex(self.x)), abs(complex(self.z)))
        return abs(complex(self.x) - complex(other.x)) <= threshold and \
            abs(complex(self.z) - complex(other.z)) <= threshold

    def __str__(self) -> str:
        return "inf" if self.is_infinity else f"({self.x}, {self.z})"


@dataclass(frozen=True)
class BranchDatum:
    a: Scalar
    ell: int
    kind: str
    b: Optional[Scalar] = None


@dataclass(frozen=True)
class ModulusPoint:
    """
    One point of the support of the modulus. Points of the same singularity share the orbit index; split points
    carry sheet +1 or -1, branch points sheet 0.
    """
    point: PointOnCPrime
    multiplicity: int
    local_param: str
    orbit: int
    sheet: int


@dataclass(frozen=True)
class CurveData:
    h: Poly
    g: int
    P: Poly
    hprime: Poly
    gprime: int
    n: int
    branch_points: Tuple[BranchDatum, ...]
    k: int
    d: int
    delta: int
    pi: int
    modulus: Tuple[ModulusPoint, ...]
    expansions: Dict[int, Tuple[Series, Series]] = field(default_factory=dict, compare=False, repr=False)

    @property
    def backend(self) -> str:
        return self.h.backend

    @property
    def is_smooth(self) -> bool:
        return self.n == 0

    def modulus_expansion(self, index: int, order: int) -> Tuple[Series, Series]:
        """
        Complex local expansion at the modulus point of the given index, served from the cache when possible.
        """
        if order <= cached_expansion_order and index in self.expansions:
            x_series, z_series = self.expansions[index]
            return x_series.truncated(order), z_series.truncated(z_series.valuation + order)
        x_series, z_series = local_expansion(self.modulus[index].point, self, max(order, 1))
        return x_series.to_approx().truncated(order), z_series.to_approx().truncated(z_series.valuation + order)

    def as_dict(self) -> dict:
        from .codec import curve_to_json
        return curve_to_json(self)


def _branch_roots(factor: Poly, hprime: Poly, tol: Optional[float]) -> Tuple[List[Scalar], List[Scalar]]:
    """
    Split the roots of a square-free factor of P into those which are roots of h' and the others.
    """
    if factor.is_exact:
        common: Poly = poly_gcd_monic(factor, hprime)
        rest: Poly = exact_quotient(factor, common)
        branch: List[Scalar] = [refine_root(common, r) for r, _ in poly_roots(common)] if common.degree > 0 else []
        split: List[Scalar] = [refine_root(rest, r) for r, _ in poly_roots(rest)] if rest.degree > 0 else []
        return branch, split

    threshold: float = tolerance(tol)
    branch, split = [], []
    for root, _ in poly_roots(factor, tol):
        value: float = abs(poly_eval(hprime, root))
        if value <= threshold:
            branch.append(root)
        elif value < constants.gray_zone_factor * threshold:
            raise AmbiguousBranch(f"|h'({root})| = {value:.3e} lies in the gray zone of the branch classification")
        else:
            split.append(root)
    return branch, split


def analyze_curve(h: Poly, tol: Optional[float] = None) -> CurveData:
    """
    Normalize the curve y^2 = h(x) and compute its discrete invariants and modulus.

    :param h:
        Monic polynomial of odd degree at least 3
    :param tol:
        Tolerance used by the approximate backend
    :return:
        CurveData
    """
    if h.is_zero or not h.is_monic(tol):
        raise CurveError(f"The curve polynomial must be monic, got <{h}>")
    if h.degree < 3 or h.degree % 2 != 1:
        raise CurveError(f"The curve polynomial must have odd degree at least 3, got degree {h.degree}")

    try:
        P, hprime = max_quadratic_divisor(h, tol)
    except PolynomialError as error:
        raise CurveError(str(error))

    g: int = (int(h.degree) - 1) // 2
    gprime: int = (int(hprime.degree) - 1) // 2
    n: int = int(P.degree)

    branch_points: List[BranchDatum] = []
    if n > 0:
        for factor, ell in squarefree_decomposition(P, tol):
            branch, split = _branch_roots(factor, hprime, tol)
            branch_points.extend(BranchDatum(a=a, ell=ell, kind=BRANCH) for a in branch)
            branch_points.extend(BranchDatum(a=a, ell=ell, kind=SPLIT, b=principal_sqrt(poly_eval(hprime, a)))
                                 for a in split)

    # Branch points first, as in the usual ordering a_1..a_d, a_{d+1}..a_k
    branch_points.sort(key=lambda item: item.kind != BRANCH)

    modulus: List[ModulusPoint] = []
    for orbit, item in enumerate(branch_points):
        if item.kind == BRANCH:
            modulus.append(ModulusPoint(point=PointOnCPrime(item.a, to_scalar(0, constants.backend_exact)
                                                            if isinstance(item.a, Fraction) else 0j),
                                        multiplicity=2 * item.ell, local_param="z", orbit=orbit, sheet=0))
        else:
            for sheet in (1, -1):
                modulus.append(ModulusPoint(point=PointOnCPrime(item.a, sheet * item.b),
                                            multiplicity=item.ell, local_param="x-a", orbit=orbit, sheet=sheet))

    k: int = len(branch_points)
    d: int = sum(1 for item in branch_points if item.kind == BRANCH)
    delta: int = sum(item.ell for item in branch_points)

    curve = CurveData(h=h, g=g, P=P, hprime=hprime, gprime=gprime, n=n, branch_points=tuple(branch_points),
                      k=k, d=d, delta=delta, pi=gprime + delta, modulus=tuple(modulus))

    for index, item in enumerate(modulus):
        x_series, z_series = local_expansion(item.point, curve, cached_expansion_order)
        curve.expansions[index] = (x_series.to_approx(), z_series.to_approx())

    logger.info(f"Curve <{h}>: g={g}, g'={gprime}, n={n}, k={k}, d={d}, delta={delta}, pi={curve.pi}")
    return curve


def modulus_of(c: CurveData) -> List[ModulusPoint]:
    return list(c.modulus)


def project_to_C(p: PointOnCPrime, c: CurveData) -> Tuple[Scalar, Scalar]:
    if p.is_infinity:
        raise CurveError("The point at infinity has no affine image")
    return p.x, poly_eval(c.P, p.x) * p.z


def involution(p: PointOnCPrime) -> PointOnCPrime:
    if p.is_infinity:
        return p
    return PointOnCPrime(p.x, -p.z)


def on_curve(p: PointOnCPrime, c: CurveData, tol: Optional[float] = None) -> bool:
    if p.is_infinity:
        return True
    residual = p.z * p.z - poly_eval(c.hprime, p.x)
    if isinstance(residual, Fraction):
        return residual == 0
    return abs(residual) <= tolerance(tol) * max(1., absolute_bound(c.hprime, p.x))


def is_weierstrass(p: PointOnCPrime, c: CurveData, tol: Optional[float] = None) -> bool:
    if p.is_infinity:
        return False
    if isinstance(p.z, Fraction):
        return p.z == 0
    return abs(p.z) <= tolerance(tol) * max(1., abs(complex(p.x)))


def is_on_modulus(p: PointOnCPrime, c: CurveData, tol: Optional[float] = None) -> bool:
    """
    True when p lies over a root of P, i.e. in the support of the modulus.
    """
    if p.is_infinity or c.n == 0:
        return False
    value = poly_eval(c.P, p.x)
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= tolerance(tol) * max(1., absolute_bound(c.P, p.x))


def _backend_of_point(p: PointOnCPrime, c: CurveData) -> str:
    if c.backend == constants.backend_exact and isinstance(p.x, Fraction) and isinstance(p.z, Fraction):
        return constants.backend_exact
    return constants.backend_approx


def local_expansion(p: PointOnCPrime, c: CurveData, order: int) -> Tuple[Series, Series]:
    """
    Expand x and z in a local parameter t at p.

    At a point with z != 0 the parameter is t = x - x0. At a Weierstrass point it is t = z, and x is obtained by
    reverting t^2 = h'(x). At infinity x = t^-2 and z = t^-(2g'+1) times a unit series; both are returned as series
    with negative valuation.

    :param p:
        Point of the normalized curve
    :param c:
        Analyzed curve
    :param order:
        Truncation order of the regular parts
    :return:
        (x_series, z_series)
    """
    if order < 1:
        raise CurveError(f"Expansion order must be at least 1, got {order}")
    if order > constants.max_expansion_order:
        raise CurveError(f"Expansion order {order} exceeds the cap of {constants.max_expansion_order}")

    if p.is_infinity:
        hp: Poly = c.hprime
        top: int = int(hp.degree)
        # Reversed h' as a series in t^2
        coeffs: List[Scalar] = [to_scalar(0, hp.backend)] * (order + 1)
        for m in range(0, min(top, order // 2) + 1):
            coeffs[2 * m] = hp[top - m]
        unit: Series = Series(coeffs, 0, hp.backend).sqrt()
        x_series: Series = Series([1] + [0] * order, -2, hp.backend)
        return x_series, Series(unit.coeffs, -top, hp.backend)

    backend: str = _backend_of_point(p, c)
    hp = c.hprime.to_backend(backend)
    x0 = to_scalar(p.x, backend)

    if is_weierstrass(p, c):
        shifted: Poly = hp.taylor_shift(x0)
        if not scalar_is_zero(shifted[0]):
            raise CurveError(f"Point <{p}> has z = 0 but h'(x) does not vanish there")
        half: int = order // 2
        zero = to_scalar(0, backend)
        # t^2 = h'(x0 + s) = s q(s); revert in s
        phi_coeffs: List[Scalar] = [zero] + [shifted[i] for i in range(1, max(half, 1) + 1)]
        s_of_tau: Series = Series(phi_coeffs, 0, backend).reverse()
        x_coeffs: List[Scalar] = [zero] * (order + 1)
        x_coeffs[0] = x0
        for m in range(1, half + 1):
            x_coeffs[2 * m] = s_of_tau.coefficient(m)
        z_coeffs: List[Scalar] = [zero] * (order + 1)
        z_coeffs[1] = to_scalar(1, backend)
        return Series(x_coeffs, 0, backend), Series(z_coeffs, 0, backend)

    z0 = to_scalar(p.z, backend) if backend == constants.backend_exact else complex(p.z)
    shifted = hp.taylor_shift(x0)
    ratio: Series = Series.from_poly(shifted, order) * (1 / shifted[0])
    z_series: Series = ratio.sqrt() * z0
    x_series = Series([x0, 1] + [0] * (order - 1), 0, backend)
    return x_series, z_series
