# riemann_roch.py
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
Riemann-Roch spaces relative to the modulus.

L_m(D) is the space of functions f with (f) >= -D which lie in the local ring of the singular curve C at every
singular point. I_m(D) is the space of differentials omega with (omega) >= D - m whose residues against that local
ring vanish. Both are computed by linear algebra on the ansatz (a(x) + b(x) z) / cden(x).

When the curve, the points of D and the points of the modulus are all rational the conditions are rational and the
null space is computed exactly; otherwise the coefficients are complex and the null space comes from an SVD.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import constants
from .curve import BRANCH, CurveData, PointOnCPrime, involution, is_weierstrass, local_expansion
from .gen_jacobian import DivisorOnCPrime, RationalFunctionRep
from .mumford_phase import DivisorError
from .scalar_poly import Poly, Scalar, Series, SeriesError, null_space, scalar_close, to_scalar

logger = logging.getLogger(__name__)


class DegreeCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class DifferentialRep:
    """
    The differential (p(x) + q(x) z) / cden(x) dx/z on C'.
    """
    p: Poly
    q: Poly
    cden: Poly

    @property
    def coefficient(self) -> RationalFunctionRep:
        return RationalFunctionRep(self.p, self.q, self.cden)


def space_backend(D: DivisorOnCPrime, c: CurveData) -> str:
    """
    constants.backend_exact when the curve, every affine point of D and every point of the modulus are rational.
    """
    if c.backend != constants.backend_exact:
        return constants.backend_approx
    points: List[PointOnCPrime] = [p for p, _ in D.affine_terms] + [m.point for m in c.modulus]
    return constants.backend_exact if all(p.is_exact for p in points) else constants.backend_approx


@dataclass
class _Fibre:
    """
    The points of D over one x-coordinate.
    """
    x: Scalar
    z: Scalar
    weierstrass: bool
    m_plus: int = 0
    m_minus: int = 0

    @property
    def points(self) -> List[Tuple[PointOnCPrime, int]]:
        plus: PointOnCPrime = PointOnCPrime(self.x, self.z)
        if self.weierstrass:
            return [(plus, self.m_plus)]
        return [(plus, self.m_plus), (involution(plus), self.m_minus)]

    def pole_exponent(self, sign: int) -> int:
        """
        Exponent of (x - x0) in the denominator allowing the poles of sign * D over this fibre.
        """
        if self.weierstrass:
            return max(-((-sign * self.m_plus) // 2), 0)
        return max(sign * self.m_plus, sign * self.m_minus, 0)


def _same(a: Scalar, b: Scalar) -> bool:
    return scalar_close(a, b, 1e-9 * max(1., abs(complex(a))))


def _fibres(D: DivisorOnCPrime, c: CurveData, backend: str) -> List[_Fibre]:
    out: List[_Fibre] = []
    for p, m in D.affine_terms:
        x0, z0 = to_scalar(p.x, backend), to_scalar(p.z, backend)
        for fibre in out:
            if _same(fibre.x, x0):
                if fibre.weierstrass or _same(fibre.z, z0):
                    fibre.m_plus += m
                else:
                    fibre.m_minus += m
                break
        else:
            weierstrass: bool = is_weierstrass(p, c)
            out.append(_Fibre(x=x0, z=to_scalar(0, backend) if weierstrass else z0, weierstrass=weierstrass,
                              m_plus=m))
    return out


def _check_divisor(D: DivisorOnCPrime, c: CurveData) -> None:
    if abs(D.degree) > constants.max_rr_degree:
        raise DegreeCapExceeded(f"|deg D| = {abs(D.degree)} exceeds the cap of {constants.max_rr_degree}")
    if not D.coprime_to_modulus(c):
        raise DivisorError(f"Divisor <{D}> meets the support of the modulus")


def _factor_poly(factors: Sequence[Tuple[Scalar, int]], backend: str) -> Poly:
    out: Poly = Poly.one(backend)
    for root, exponent in factors:
        out = out * Poly((-root, 1), backend) ** exponent
    return out


def _linear_series(x_series: Series, root: Scalar) -> Series:
    """
    Series of x - root; when root is the centre of the expansion the vanishing constant term is dropped exactly.
    """
    shifted: Series = x_series - root
    if not _same(x_series.coefficient(0), root):
        return shifted
    coeffs: List[Scalar] = list(shifted.coeffs)
    first: Optional[int] = next((i for i in range(1, len(coeffs)) if coeffs[i] != 0), None)
    if first is None:
        raise SeriesError("Expansion order too small to see the vanishing order of x - x0")
    return Series(coeffs[first:], shifted.valuation + first, x_series.backend)


def _denominator_series(factors: Sequence[Tuple[Scalar, int]], x_series: Series) -> Series:
    out: Series = Series.constant(to_scalar(1, x_series.backend), x_series.precision, x_series.backend)
    for root, exponent in factors:
        out = out * _linear_series(x_series, root) ** exponent
    return out


class _Ansatz:
    """
    Unknown coefficients of a(x) + b(x) z. In the approximate backend the x^j columns are scaled by rho^-j.
    """

    def __init__(self, bound: int, gprime: int, backend: str, rho: float = 1., extra: int = 0):
        self.a_count: int = max(bound // 2 + 1, 0)
        self.b_count: int = max((bound - 2 * gprime - 1) // 2 + 1, 0)
        self.backend: str = backend
        self.rho: float = rho if backend == constants.backend_approx else 1.
        self.extra: int = extra

    @property
    def function_columns(self) -> int:
        return self.a_count + self.b_count

    @property
    def columns(self) -> int:
        return self.function_columns + self.extra

    def zeros(self, count: int) -> List[Scalar]:
        return [to_scalar(0, self.backend)] * count

    def column_series(self, x_series: Series, z_series: Series) -> List[Series]:
        scaled: Series = x_series if self.rho == 1. else x_series * complex(1 / self.rho)
        powers: List[Series] = [Series.constant(to_scalar(1, self.backend), x_series.precision, self.backend)]
        for _ in range(1, max(self.a_count, self.b_count)):
            powers.append(powers[-1] * scaled)
        return powers[:self.a_count] + [power * z_series for power in powers[:self.b_count]]

    def _unscaled(self, values: Sequence[Scalar]) -> List[Scalar]:
        if self.rho == 1.:
            return list(values)
        return [value * self.rho ** -j for j, value in enumerate(values)]

    def polys(self, vector: Sequence[Scalar]) -> Tuple[Poly, Poly]:
        a: List[Scalar] = self._unscaled(vector[:self.a_count])
        b: List[Scalar] = self._unscaled(vector[self.a_count:self.function_columns])
        return Poly(a, self.backend), Poly(b, self.backend)


def _expansion(p: PointOnCPrime, c: CurveData, order: int, backend: str) -> Tuple[Series, Series]:
    x_series, z_series = local_expansion(p, c, max(order, 1))
    if backend == constants.backend_approx:
        return x_series.to_approx(), z_series.to_approx()
    return x_series, z_series


def _modulus_expansion(c: CurveData, index: int, order: int, backend: str) -> Tuple[Series, Series]:
    if backend == constants.backend_approx:
        return c.modulus_expansion(index, order)
    x_series, z_series = local_expansion(c.modulus[index].point, c, max(order, 1))
    return x_series.truncated(order), z_series.truncated(z_series.valuation + order)


def _valuation_rows(ansatz: _Ansatz, conditions: Sequence[Tuple[PointOnCPrime, int]], c: CurveData
                    ) -> List[List[Scalar]]:
    """
    Rows forcing a + b z to vanish to the given order at each point.
    """
    rows: List[List[Scalar]] = []
    for p, order in conditions:
        if order <= 0:
            continue
        x_series, z_series = _expansion(p, c, order, ansatz.backend)
        columns: List[Series] = ansatz.column_series(x_series, z_series)
        for exponent in range(order):
            rows.append([s.coefficient(exponent) for s in columns] + ansatz.zeros(ansatz.extra))
    return rows


def _scale(D: DivisorOnCPrime, c: CurveData) -> float:
    values: List[float] = [abs(complex(p.x)) for p, _ in D.affine_terms]
    values.extend(abs(complex(item.a)) for item in c.branch_points)
    return max([1.] + values)


def _orbits(c: CurveData) -> List[Tuple[int, List[int]]]:
    return [(orbit, [i for i, m in enumerate(c.modulus) if m.orbit == orbit]) for orbit in range(c.k)]


def _split_pair(c: CurveData, indices: List[int]) -> Tuple[int, int]:
    plus, minus = sorted(indices, key=lambda i: -c.modulus[i].sheet)
    return plus, minus


def _solve(rows: List[List[Scalar]], ansatz: _Ansatz) -> List[List[Scalar]]:
    return null_space(rows, ansatz.columns, ansatz.backend, rtol=constants.rank_rtol)


def lm_space(D: DivisorOnCPrime, c: CurveData) -> List[RationalFunctionRep]:
    """
    A basis of L_m(D).

    The denominator allows the poles of D at affine points, the degrees of a and b allow the pole at infinity.
    Over every fibre of D the numerator must vanish to the order that makes (f) >= -D. At a split singular point the
    values of f on both sheets equal one unknown c and their higher coefficients agree below the multiplicity; at a
    branch point the odd coefficients of f(z) vanish below the multiplicity.

    :param D:
        Divisor coprime to the modulus
    :param c:
        Analyzed curve
    :return:
        List of RationalFunctionRep, with exact coefficients when space_backend(D, c) is exact
    """
    _check_divisor(D, c)
    backend: str = space_backend(D, c)
    fibres: List[_Fibre] = _fibres(D, c, backend)
    factors: List[Tuple[Scalar, int]] = [(f.x, f.pole_exponent(1)) for f in fibres if f.pole_exponent(1) > 0]
    cden: Poly = _factor_poly(factors, backend)
    bound: int = 2 * int(cden.degree) + D.infinity_multiplicity
    split_orbits: List[int] = [orbit for orbit, item in enumerate(c.branch_points) if item.kind != BRANCH]
    ansatz = _Ansatz(bound, c.gprime, backend, _scale(D, c), extra=len(split_orbits))
    if ansatz.function_columns == 0:
        return []

    conditions: List[Tuple[PointOnCPrime, int]] = []
    for fibre in fibres:
        e: int = fibre.pole_exponent(1) * (2 if fibre.weierstrass else 1)
        conditions.extend((p, e - m) for p, m in fibre.points)
    rows: List[List[Scalar]] = _valuation_rows(ansatz, conditions, c)

    for orbit, indices in _orbits(c):
        item = c.branch_points[orbit]
        if item.kind == BRANCH:
            index: int = indices[0]
            x_series, z_series = _modulus_expansion(c, index, c.modulus[index].multiplicity - 1, backend)
            unit: Series = _denominator_series(factors, x_series).inv()
            values: List[Series] = [s * unit for s in ansatz.column_series(x_series, z_series)]
            for exponent in range(1, 2 * item.ell, 2):
                rows.append([s.coefficient(exponent) for s in values] + ansatz.zeros(ansatz.extra))
            continue

        column: int = ansatz.function_columns + split_orbits.index(orbit)
        sheets: List[List[Series]] = []
        for index in _split_pair(c, indices):
            x_series, z_series = _modulus_expansion(c, index, item.ell - 1, backend)
            unit = _denominator_series(factors, x_series).inv()
            sheets.append([s * unit for s in ansatz.column_series(x_series, z_series)])
        for values in sheets:
            row: List[Scalar] = [s.coefficient(0) for s in values] + ansatz.zeros(ansatz.extra)
            row[column] = to_scalar(-1, backend)
            rows.append(row)
        for exponent in range(1, item.ell):
            rows.append([p.coefficient(exponent) - m.coefficient(exponent) for p, m in zip(*sheets)]
                        + ansatz.zeros(ansatz.extra))

    out: List[RationalFunctionRep] = []
    for vector in _solve(rows, ansatz):
        a, b = ansatz.polys(vector)
        out.append(RationalFunctionRep(a, b, cden))
    logger.debug(f"l_m({D}) = {len(out)} from {len(rows)} {backend} conditions on {ansatz.columns} unknowns")
    return out


def _differential_series(ansatz: _Ansatz, factors: Sequence[Tuple[Scalar, int]], index: int, c: CurveData
                         ) -> List[Series]:
    """
    Laurent series of every column of the ansatz times dx / (z cden) at a modulus point, in its local parameter.
    """
    order: int = c.modulus[index].multiplicity + 3
    x_series, z_series = _modulus_expansion(c, index, order, ansatz.backend)
    if c.modulus[index].local_param == "z":
        dx: Series = x_series.derivative()
        dx_over_z: Series = Series(dx.coeffs, dx.valuation - 1, ansatz.backend)
    else:
        dx_over_z = z_series.inv()
    factor: Series = _denominator_series(factors, x_series).inv() * dx_over_z
    return [s * factor for s in ansatz.column_series(x_series, z_series)]


def im_space(D: DivisorOnCPrime, c: CurveData) -> List[DifferentialRep]:
    """
    A basis of I_m(D): differentials omega = (p + q z) / cden dx/z with (omega) >= D - m and vanishing residues
    against the local ring of C at every singular point.

    Since dx/z has divisor (2g' - 2) inf, the pole allowed at infinity is 2g' - 2 - D(inf); cden is P times the
    factors allowing the poles of -D.
    """
    _check_divisor(D, c)
    backend: str = space_backend(D, c)
    fibres: List[_Fibre] = _fibres(D, c, backend)
    factors: List[Tuple[Scalar, int]] = [(f.x, f.pole_exponent(-1)) for f in fibres if f.pole_exponent(-1) > 0]
    factors.extend((to_scalar(item.a, backend), item.ell) for item in c.branch_points)
    cden: Poly = _factor_poly(factors, backend)
    bound: int = 2 * int(cden.degree) + 2 * c.gprime - 2 - D.infinity_multiplicity
    ansatz = _Ansatz(bound, c.gprime, backend, _scale(D, c))
    if ansatz.function_columns == 0:
        return []

    conditions: List[Tuple[PointOnCPrime, int]] = []
    for fibre in fibres:
        e: int = fibre.pole_exponent(-1) * (2 if fibre.weierstrass else 1)
        conditions.extend((p, e + m) for p, m in fibre.points)
    rows: List[List[Scalar]] = _valuation_rows(ansatz, conditions, c)

    for orbit, indices in _orbits(c):
        item = c.branch_points[orbit]
        if item.kind == BRANCH:
            values: List[Series] = _differential_series(ansatz, factors, indices[0], c)
            for m in range(item.ell):
                rows.append([s.coefficient(-1 - 2 * m) for s in values])
            continue
        plus, minus = (_differential_series(ansatz, factors, i, c) for i in _split_pair(c, indices))
        for k in range(item.ell):
            rows.append([p.coefficient(-1 - k) + q.coefficient(-1 - k) for p, q in zip(plus, minus)])

    out: List[DifferentialRep] = []
    for vector in _solve(rows, ansatz):
        p, q = ansatz.polys(vector)
        out.append(DifferentialRep(p, q, cden))
    logger.debug(f"i_m({D}) = {len(out)} from {len(rows)} {backend} conditions on {ansatz.columns} unknowns")
    return out


def riemann_roch_dimensions(D: DivisorOnCPrime, c: CurveData) -> Tuple[int, int]:
    return len(lm_space(D, c)), len(im_space(D, c))


def riemann_roch_check(D: DivisorOnCPrime, c: CurveData) -> bool:
    """
    True when l_m(D) - i_m(D) = deg D + 1 - pi.
    """
    l_dim, i_dim = riemann_roch_dimensions(D, c)
    expected: int = D.degree + 1 - c.pi
    if l_dim - i_dim != expected:
        logger.info(f"Riemann-Roch fails for <{D}>: l={l_dim}, i={i_dim}, deg+1-pi={expected}")
        return False
    return True
