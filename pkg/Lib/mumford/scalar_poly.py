# scalar_poly.py
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
Field-generic scalars, dense univariate polynomials and truncated power series.

Two scalar backends are supported. Exact coefficients are :class:`fractions.Fraction` values and every exact
algorithm runs in sympy over QQ: polynomial division, gcds and square-free parts through :class:`sympy.Poly`, series
inversion, roots and reversion through :mod:`sympy.polys.ring_series`, kernels through :class:`sympy.Matrix`.
Approximate coefficients are Python complex numbers, handled with numpy and compared with the working tolerance.

A polynomial or a series carries its backend, and arithmetic between different backends raises
:class:`BackendMismatch` rather than converting silently. Conversion is always explicit, through ``to_approx()``.
"""

import cmath
import functools
import logging
import math
from fractions import Fraction
from numbers import Complex, Integral, Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.polynomial.polynomial as npoly
import scipy.linalg
import sympy
from sympy import QQ
from sympy.polys.polyfuncs import interpolate
from sympy.polys.ring_series import rs_mul, rs_nth_root, rs_series_inversion, rs_series_reversion, rs_subs
from sympy.polys.rings import ring

from . import constants
from .settings import tolerance

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, complex]

# Degree of the zero polynomial
ZERO_DEGREE: float = -math.inf

# Variable of exact polynomials
_X = sympy.Symbol("x")

# Exact series live in QQ[t, s]; s is only the variable of reverted series
_SERIES_RING, _T, _S = ring("t, s", QQ)


class BackendMismatch(TypeError):
    pass


class PolynomialError(ValueError):
    pass


class SeriesError(ValueError):
    pass


# ----------------------------------------------------------------------------
# Scalars
# ----------------------------------------------------------------------------

def backend_of_value(value) -> str:
    """
    The backend a bare Python or numpy number belongs to.

    :param value:
        int, Fraction, float or complex
    :return:
        constants.backend_exact or constants.backend_approx
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not scalars")
    if isinstance(value, (Integral, Rational)):
        return constants.backend_exact
    if isinstance(value, Complex):
        return constants.backend_approx
    raise TypeError(f"Unsupported scalar <{value!r}>")


def to_scalar(value, backend: str) -> Scalar:
    """
    Convert a number into a scalar of the given backend. Integers are accepted by both backends; exact rationals
    are accepted by the approximate backend only through this explicit call.
    """
    if backend == constants.backend_exact:
        if backend_of_value(value) != constants.backend_exact:
            raise BackendMismatch(f"Cannot store inexact value <{value!r}> in the exact backend")
        return Fraction(value)
    if backend == constants.backend_approx:
        return complex(value)
    raise ValueError(f"Unknown backend <{backend}>")


def scalar_is_zero(value: Scalar, tol: Optional[float] = None) -> bool:
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= tolerance(tol)


def scalar_close(a: Scalar, b: Scalar, tol: Optional[float] = None) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(complex(a) - complex(b)) <= tolerance(tol)


def principal_sqrt(value: Scalar) -> Scalar:
    """
    Principal square root. Exact rationals stay exact when they are perfect squares; otherwise the result is
    complex.
    """
    if isinstance(value, Fraction):
        root = sympy.sqrt(_rational(value))
        if root.is_Rational:
            return _fraction(root)
        return cmath.sqrt(complex(value))
    return cmath.sqrt(value)


def parse_scalar(obj) -> Scalar:
    """
    Decode a scalar from its JSON form: "p/q" strings and integers are exact; [re, im] pairs and floats are
    approximate.
    """
    if isinstance(obj, bool):
        raise ValueError(f"Not a scalar: <{obj!r}>")
    if isinstance(obj, str):
        return Fraction(obj.strip())
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, float):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ValueError(f"Not a scalar: <{obj!r}>")


def scalar_to_json(value: Scalar):
    if isinstance(value, Fraction):
        return str(value)
    value = complex(value)
    return [value.real, value.imag]


def _rational(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _from_qq(value) -> Fraction:
    return _fraction(QQ.to_sympy(value))


def _to_qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


# ----------------------------------------------------------------------------
# Polynomials
# ----------------------------------------------------------------------------

def _infer_backend(values: Sequence) -> str:
    backends = {backend_of_value(c) for c in values}
    if constants.backend_approx in backends:
        return constants.backend_approx
    return constants.backend_exact


class Poly:
    """
    A dense univariate polynomial with ascending coefficients (index = degree). The zero polynomial has no
    coefficients and degree ZERO_DEGREE.

    Polynomials are immutable; every operation returns a new object. Exact products, quotients and compositions are
    computed by sympy, approximate ones by numpy.polynomial.
    """

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs: Iterable = (), backend: Optional[str] = None):
        values: list = list(coeffs)
        if backend is None:
            backend = _infer_backend(values)
        converted: List[Scalar] = [to_scalar(c, backend) for c in values]
        while converted and converted[-1] == 0:
            converted.pop()
        self.coeffs: Tuple[Scalar, ...] = tuple(converted)
        self.backend: str = backend

    # Constructors

    @classmethod
    def zero(cls, backend: str = constants.backend_exact) -> "Poly":
        return cls((), backend)

    @classmethod
    def one(cls, backend: str = constants.backend_exact) -> "Poly":
        return cls((1,), backend)

    @classmethod
    def x(cls, backend: str = constants.backend_exact) -> "Poly":
        return cls((0, 1), backend)

    @classmethod
    def constant(cls, value, backend: Optional[str] = None) -> "Poly":
        return cls((value,), backend)

    @classmethod
    def monomial(cls, degree: int, value=1, backend: Optional[str] = None) -> "Poly":
        return cls([0] * degree + [value], backend)

    @classmethod
    def from_roots(cls, roots: Iterable, backend: Optional[str] = None) -> "Poly":
        roots = list(roots)
        if backend is None:
            backend = _infer_backend(roots)
        if backend == constants.backend_approx:
            return cls(npoly.polyfromroots([complex(r) for r in roots]) if roots else (1,), backend)
        return _from_sympy(sympy.Poly(sympy.prod([_X - _rational(r) for r in roots]), _X, domain=QQ))

    # Inspection

    @property
    def degree(self) -> Union[int, float]:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.backend == constants.backend_exact

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else to_scalar(0, self.backend)

    def is_monic(self, tol: Optional[float] = None) -> bool:
        if self.is_zero:
            return False
        return scalar_close(self.leading, to_scalar(1, self.backend), tol)

    def __getitem__(self, index: int) -> Scalar:
        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]
        return to_scalar(0, self.backend)

    def norm(self) -> float:
        return max((abs(complex(c)) for c in self.coeffs), default=0.)

    def as_sympy(self) -> sympy.Poly:
        """
        The exact polynomial as a sympy Poly in x over QQ.
        """
        if not self.is_exact:
            raise BackendMismatch("Only exact polynomials convert to sympy")
        return sympy.Poly.from_list([_rational(c) for c in reversed(self.coeffs)] or [0], _X, domain=QQ)

    # Backend handling

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.backend != self.backend:
                raise BackendMismatch(f"Cannot combine {self.backend} and {other.backend} polynomials")
            return other
        if isinstance(other, bool):
            raise TypeError("Booleans are not scalars")
        if not isinstance(other, Integral) and backend_of_value(other) != self.backend:
            raise BackendMismatch(f"Cannot combine a {self.backend} polynomial with <{other!r}>")
        return Poly((other,), self.backend)

    def to_approx(self) -> "Poly":
        return Poly([complex(c) for c in self.coeffs], constants.backend_approx)

    def to_backend(self, backend: str) -> "Poly":
        if backend == self.backend:
            return self
        if backend == constants.backend_approx:
            return self.to_approx()
        raise BackendMismatch("Approximate polynomials cannot be converted to the exact backend")

    # Arithmetic

    def __add__(self, other) -> "Poly":
        other = self._lift(other)
        size: int = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(size)], self.backend)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.backend)

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._lift(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.backend)
        if self.is_exact:
            return _from_sympy(self.as_sympy() * other.as_sympy())
        return Poly(npoly.polymul(self.coeffs, other.coeffs), self.backend)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise PolynomialError("Negative powers of polynomials are not polynomials")
        if self.is_exact:
            return _from_sympy(self.as_sympy() ** exponent)
        if exponent == 0:
            return Poly.one(self.backend)
        return Poly(npoly.polypow(self.coeffs, exponent) if self.coeffs else (), self.backend)

    def __divmod__(self, other) -> Tuple["Poly", "Poly"]:
        return poly_divrem(self, self._lift(other))

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, value):
        if isinstance(value, Poly):
            return self.compose(value)
        if self.is_exact and backend_of_value(value) != constants.backend_exact:
            raise BackendMismatch(f"Evaluate an exact polynomial at <{value!r}> through to_approx()")
        out = to_scalar(0, backend_of_value(value) if not self.is_exact else self.backend)
        for c in reversed(self.coeffs):
            out = out * value + c
        return out

    def compose(self, inner: "Poly") -> "Poly":
        inner = self._lift(inner)
        if self.is_exact:
            return _from_sympy(self.as_sympy().compose(inner.as_sympy()))
        out: Poly = Poly.zero(self.backend)
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def taylor_shift(self, a) -> "Poly":
        """
        The polynomial p(x + a).
        """
        return self.compose(Poly((a, 1), self.backend))

    def derivative(self) -> "Poly":
        if self.is_exact:
            return _from_sympy(self.as_sympy().diff(_X))
        return Poly(npoly.polyder(self.coeffs) if len(self.coeffs) > 1 else (), self.backend)

    def monic(self) -> "Poly":
        if self.is_zero:
            raise PolynomialError("The zero polynomial has no monic associate")
        if self.is_exact:
            return _from_sympy(self.as_sympy().monic())
        inv = 1 / self.leading
        return Poly([c * inv for c in self.coeffs], self.backend)

    def scale(self, value) -> "Poly":
        return self * value

    def shift_down(self, places: int) -> "Poly":
        """
        Polynomial part of p(x) / x^places.
        """
        return Poly(self.coeffs[places:], self.backend)

    def truncate(self, size: int) -> "Poly":
        return Poly(self.coeffs[:size], self.backend)

    def trimmed(self, tol: Optional[float] = None) -> "Poly":
        """
        Drop leading coefficients whose modulus is at most the tolerance. Exact polynomials are returned unchanged.
        """
        if self.is_exact:
            return self
        threshold: float = tolerance(tol)
        values: List[Scalar] = list(self.coeffs)
        while values and abs(values[-1]) <= threshold:
            values.pop()
        return Poly(values, self.backend)

    # Comparison

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.backend == other.backend and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.backend, self.coeffs))

    def close(self, other: "Poly", tol: Optional[float] = None) -> bool:
        """
        Coefficientwise comparison; exact for two exact polynomials, within the tolerance otherwise (scaled by
        the larger norm when it exceeds one).
        """
        if self.is_exact and other.is_exact:
            return self == other
        threshold: float = tolerance(tol) * max(1., self.norm(), other.norm())
        size: int = max(len(self.coeffs), len(other.coeffs))
        return all(abs(complex(self[i]) - complex(other[i])) <= threshold for i in range(size))

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r}, {self.backend!r})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms: List[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            monomial: str = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if monomial and c == 1:
                terms.append(monomial)
            else:
                terms.append(f"{c}{'*' if monomial else ''}{monomial}")
        return " + ".join(terms)


def _from_sympy(p: sympy.Poly) -> Poly:
    return Poly([_fraction(c) for c in reversed(p.all_coeffs())], constants.backend_exact)


def _common_backend(*polys: Poly) -> str:
    backends = {p.backend for p in polys}
    if len(backends) != 1:
        raise BackendMismatch(f"Mixed backends {sorted(backends)}")
    return backends.pop()


def poly_divrem(a: Poly, b: Poly, tol: Optional[float] = None) -> Tuple[Poly, Poly]:
    """
    Euclidean division a = q b + r with deg r < deg b.

    In the approximate backend the leading remainder coefficients which are below the tolerance, relative to the
    norm of the dividend, are dropped.

    :param a:
        Dividend
    :param b:
        Divisor, not the zero polynomial
    :return:
        (quotient, remainder)
    """
    backend: str = _common_backend(a, b)
    if b.is_zero:
        raise PolynomialError("Division by the zero polynomial")
    if a.degree < b.degree:
        return Poly.zero(backend), a

    if backend == constants.backend_exact:
        q, r = a.as_sympy().div(b.as_sympy())
        return _from_sympy(q), _from_sympy(r)
    q, r = npoly.polydiv(np.array(a.coeffs, dtype=complex), np.array(b.coeffs, dtype=complex))
    remainder: Poly = Poly(r[:int(b.degree)], backend).trimmed(tolerance(tol) * max(1., a.norm()))
    return Poly(q, backend), remainder


def exact_quotient(a: Poly, b: Poly, tol: Optional[float] = None) -> Poly:
    """
    The quotient a / b, which must leave no remainder.
    """
    q, r = poly_divrem(a, b, tol)
    if not r.is_zero:
        raise PolynomialError(f"<{b}> does not divide <{a}>")
    return q


def divides(b: Poly, a: Poly, tol: Optional[float] = None) -> bool:
    return poly_divrem(a, b, tol)[1].is_zero


def poly_gcd_monic(a: Poly, b: Poly, tol: Optional[float] = None) -> Poly:
    """
    Monic greatest common divisor.

    The exact backend asks sympy. The approximate backend runs Euclid's algorithm, makes every remainder monic
    before the next step and treats coefficients below the tolerance, relative to the current dividend, as zero.

    :param a:
        First polynomial
    :param b:
        Second polynomial; a and b must not both be zero
    :return:
        The monic gcd
    """
    backend: str = _common_backend(a, b)
    if a.is_zero and b.is_zero:
        raise PolynomialError("gcd(0, 0) is undefined")
    if backend == constants.backend_exact:
        return _from_sympy(a.as_sympy().gcd(b.as_sympy()).monic())

    a, b = a.trimmed(tol), b.trimmed(tol)
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    a, b = a.monic(), b.monic()
    while not b.is_zero:
        r = poly_divrem(a, b, tol)[1]
        a, b = b, r.monic() if not r.is_zero else r
    return a.monic()


def poly_gcd_many(polys: Iterable[Poly], tol: Optional[float] = None) -> Poly:
    nonzero: List[Poly] = [p for p in polys if not p.is_zero]
    if not nonzero:
        raise PolynomialError("gcd of zero polynomials is undefined")
    out: Poly = nonzero[0].monic()
    for p in nonzero[1:]:
        if out.degree == 0:
            break
        out = poly_gcd_monic(out, p, tol)
    return out


def poly_xgcd(a: Poly, b: Poly, tol: Optional[float] = None) -> Tuple[Poly, Poly, Poly]:
    """
    Extended Euclid: returns (g, s, t) with s a + t b = g and g monic.
    """
    backend: str = _common_backend(a, b)
    if a.is_zero and b.is_zero:
        raise PolynomialError("gcd(0, 0) is undefined")
    if backend == constants.backend_exact:
        s, t, g = a.as_sympy().gcdex(b.as_sympy())
        return _from_sympy(g), _from_sympy(s), _from_sympy(t)

    r0, r1 = a, b
    s0, s1 = Poly.one(backend), Poly.zero(backend)
    t0, t1 = Poly.zero(backend), Poly.one(backend)
    while not r1.is_zero:
        q, r = poly_divrem(r0, r1, tol)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.leading
    return r0 * inv, s0 * inv, t0 * inv


def squarefree_decomposition(h: Poly, tol: Optional[float] = None) -> List[Tuple[Poly, int]]:
    """
    Square-free decomposition h = c * prod f_i^{m_i}, with the f_i monic, square-free and pairwise coprime.

    Exact polynomials use sympy's sqf_list; approximate ones run Yun's algorithm with tolerant gcds.

    :param h:
        Non-zero polynomial
    :return:
        List of (factor, multiplicity) with increasing multiplicity
    """
    if h.is_zero:
        raise PolynomialError("The zero polynomial has no square-free decomposition")
    if h.is_exact:
        _, factors = h.as_sympy().sqf_list()
        return sorted(((_from_sympy(f.monic()), k) for f, k in factors), key=lambda item: item[1])

    f: Poly = h.monic()
    if f.degree == 0:
        return []
    out: List[Tuple[Poly, int]] = []
    fp: Poly = f.derivative()
    a0: Poly = poly_gcd_monic(f, fp, tol)
    b: Poly = exact_quotient(f, a0, tol)
    d: Poly = exact_quotient(fp, a0, tol) - b.derivative()
    multiplicity: int = 1
    while b.degree > 0:
        a = b if d.trimmed(tol).is_zero else poly_gcd_monic(b, d, tol)
        b = exact_quotient(b, a, tol)
        d = exact_quotient(d, a, tol) - b.derivative()
        if a.degree > 0:
            out.append((a, multiplicity))
        multiplicity += 1
    return out


def max_quadratic_divisor(h: Poly, tol: Optional[float] = None) -> Tuple[Poly, Poly]:
    """
    Split h = P^2 h' with P monic of maximal degree, so that h' is square-free.

    :param h:
        Monic polynomial of odd degree
    :return:
        (P, h')
    """
    if h.is_zero or not h.is_monic(tol):
        raise PolynomialError(f"Expected a monic polynomial, got <{h}>")
    if h.degree % 2 != 1:
        raise PolynomialError(f"Expected odd degree, got degree {h.degree}")

    P: Poly = Poly.one(h.backend)
    for factor, multiplicity in squarefree_decomposition(h, tol):
        P = P * factor ** (multiplicity // 2)
    hprime: Poly = exact_quotient(h, P * P, tol)
    return P, hprime


def poly_roots(p: Poly, tol: Optional[float] = None) -> List[Tuple[complex, int]]:
    """
    All complex roots with their multiplicities. Multiplicities come from the square-free decomposition; the roots
    of every square-free factor are the eigenvalues of its companion matrix, polished by two Newton steps.

    :param p:
        Non-zero polynomial, of either backend
    :return:
        List of (root, multiplicity)
    """
    if p.is_zero:
        raise PolynomialError("The zero polynomial has no finite list of roots")
    out: List[Tuple[complex, int]] = []
    for factor, multiplicity in squarefree_decomposition(p, tol):
        coeffs = np.array(factor.to_approx().coeffs, dtype=complex)
        slope = npoly.polyder(coeffs)
        for root in npoly.polyroots(coeffs):
            for _ in range(2):
                step = npoly.polyval(root, slope)
                if abs(step) < 1e-14:
                    break
                root = root - npoly.polyval(root, coeffs) / step
            out.append((complex(root), multiplicity))
    return out


@functools.lru_cache(maxsize=512)
def rational_roots(p: Poly) -> List[Tuple[Fraction, int]]:
    """
    The rational roots of an exact polynomial with their multiplicities, from sympy's factorization over QQ.
    """
    if not p.is_exact:
        raise BackendMismatch("rational_roots() needs an exact polynomial")
    if p.degree < 1:
        return []
    found = p.as_sympy().ground_roots()
    return sorted(((_fraction(r), int(m)) for r, m in found.items()), key=lambda item: item[0])


def poly_eval(p: Poly, value) -> Scalar:
    """
    Evaluate p at a value of either backend; an exact polynomial at an inexact value is evaluated in complex
    arithmetic.
    """
    if p.is_exact and backend_of_value(value) != constants.backend_exact:
        return p.to_approx()(complex(value))
    if not p.is_exact:
        return p(complex(value))
    return p(Fraction(value))


def absolute_bound(p: Poly, value) -> float:
    """
    sum |c_k| |value|^k, the scale against which rounding errors of p(value) are measured.
    """
    r: float = abs(complex(value))
    return sum(abs(complex(c)) * r ** k for k, c in enumerate(p.coeffs))


def refine_root(p: Poly, root: complex) -> Scalar:
    """
    Replace a numerical root of an exact polynomial by the exact rational root it approximates, when there is
    one. Otherwise the complex value is returned unchanged.
    """
    root = complex(root)
    if not p.is_exact:
        return root
    for candidate, _ in rational_roots(p):
        if abs(complex(candidate) - root) <= constants.rational_root_match * max(1., abs(root)):
            return candidate
    return root


def poly_interpolate(points: Sequence[Tuple[Scalar, Scalar]], tol: Optional[float] = None) -> Poly:
    """
    The unique polynomial of degree below len(points) through all the given (x, y) pairs.
    """
    values: list = [c for pair in points for c in pair]
    backend: str = _infer_backend(values) if values else constants.backend_exact
    xs: List[Scalar] = [to_scalar(x, backend) for x, _ in points]
    ys: List[Scalar] = [to_scalar(y, backend) for _, y in points]
    for i in range(len(xs)):
        for j in range(i):
            if scalar_close(xs[i], xs[j], tol):
                raise PolynomialError(f"Repeated interpolation node <{xs[i]}>")
    if not xs:
        return Poly.zero(backend)

    if backend == constants.backend_exact:
        expr = interpolate([(_rational(x), _rational(y)) for x, y in zip(xs, ys)], _X)
        return _from_sympy(sympy.Poly(expr, _X, domain=QQ))

    out: Poly = Poly.zero(backend)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        others: List[Scalar] = [xj for j, xj in enumerate(xs) if j != i]
        basis: Poly = Poly.from_roots(others, backend)
        out = out + basis * (yi / basis(xi))
    return out


# ----------------------------------------------------------------------------
# Truncated power series
# ----------------------------------------------------------------------------

def _to_ring(values: Sequence[Scalar]):
    return _SERIES_RING.from_dict({(k, 0): _to_qq(c) for k, c in enumerate(values) if c != 0})


def _from_ring(element, size: int, variable: int = 0) -> List[Fraction]:
    out: List[Fraction] = []
    for k in range(size):
        monomial: Tuple[int, int] = (k, 0) if variable == 0 else (0, k)
        out.append(_from_qq(element.get(monomial, QQ.zero)))
    return out


class Series:
    """
    A truncated Laurent series t^valuation * (c_0 + c_1 t + ... + c_N t^N), known up to the absolute order
    valuation + N inclusive. Arithmetic never extends the known order.

    Exact series compute products, inverses, roots, compositions and reversions with sympy's ring_series on
    QQ[t]; approximate series use the usual coefficient recurrences on complex numbers.
    """

    __slots__ = ("coeffs", "valuation", "backend")

    def __init__(self, coeffs: Iterable, valuation: int = 0, backend: Optional[str] = None):
        values: list = list(coeffs)
        if not values:
            raise SeriesError("A series needs at least one coefficient")
        if backend is None:
            backend = _infer_backend(values)
        self.coeffs: Tuple[Scalar, ...] = tuple(to_scalar(c, backend) for c in values)
        self.valuation: int = valuation
        self.backend: str = backend

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "Series":
        return cls([p[i] for i in range(order + 1)], 0, p.backend)

    @classmethod
    def constant(cls, value, order: int, backend: Optional[str] = None) -> "Series":
        backend = backend or backend_of_value(value)
        return cls([value] + [0] * order, 0, backend)

    @classmethod
    def variable(cls, order: int, backend: str = constants.backend_exact) -> "Series":
        return cls([0, 1] + [0] * (order - 1), 0, backend)

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    @property
    def order(self) -> int:
        return self.valuation + self.precision

    @property
    def is_exact(self) -> bool:
        return self.backend == constants.backend_exact

    def coefficient(self, exponent: int) -> Scalar:
        index: int = exponent - self.valuation
        if index < 0:
            return to_scalar(0, self.backend)
        if index > self.precision:
            raise SeriesError(f"Coefficient of t^{exponent} is beyond the known order {self.order}")
        return self.coeffs[index]

    def _lift(self, other) -> "Series":
        if isinstance(other, Series):
            if other.backend != self.backend:
                raise BackendMismatch(f"Cannot combine {self.backend} and {other.backend} series")
            return other
        if isinstance(other, Poly):
            if other.backend != self.backend:
                raise BackendMismatch(f"Cannot combine a {self.backend} series with a {other.backend} polynomial")
            return Series.from_poly(other, max(self.order, 0))
        if not isinstance(other, Integral) and backend_of_value(other) != self.backend:
            raise BackendMismatch(f"Cannot combine a {self.backend} series with <{other!r}>")
        return Series.constant(to_scalar(other, self.backend), max(self.order, 0), self.backend)

    def to_approx(self) -> "Series":
        return Series([complex(c) for c in self.coeffs], self.valuation, constants.backend_approx)

    def expanded(self) -> "Series":
        """
        Same series with valuation zero; only defined when the valuation is not negative.
        """
        if self.valuation < 0:
            raise SeriesError("Cannot expand a series with a pole")
        zero = to_scalar(0, self.backend)
        return Series([zero] * self.valuation + list(self.coeffs), 0, self.backend)

    def normalized(self, tol: Optional[float] = None) -> "Series":
        """
        Move leading zero coefficients into the valuation.
        """
        values: List[Scalar] = list(self.coeffs)
        valuation: int = self.valuation
        while len(values) > 1 and scalar_is_zero(values[0], tol):
            values.pop(0)
            valuation += 1
        return Series(values, valuation, self.backend)

    def leading_valuation(self, tol: Optional[float] = None) -> Optional[int]:
        """
        Exponent of the first coefficient which is not zero, or None when every known coefficient vanishes.
        """
        for i, c in enumerate(self.coeffs):
            if not scalar_is_zero(c, tol):
                return self.valuation + i
        return None

    def __add__(self, other) -> "Series":
        other = self._lift(other)
        low: int = min(self.valuation, other.valuation)
        high: int = min(self.order, other.order)
        if high < low:
            raise SeriesError("Sum of series has no known coefficients")
        return Series([self.coefficient(k) + other.coefficient(k) for k in range(low, high + 1)], low, self.backend)

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs], self.valuation, self.backend)

    def __sub__(self, other) -> "Series":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Series":
        return self._lift(other) - self

    def __mul__(self, other) -> "Series":
        if not isinstance(other, (Series, Poly)):
            if not isinstance(other, Integral) and backend_of_value(other) != self.backend:
                raise BackendMismatch(f"Cannot scale a {self.backend} series by <{other!r}>")
            value = to_scalar(other, self.backend)
            return Series([c * value for c in self.coeffs], self.valuation, self.backend)
        other = self._lift(other)
        size: int = min(self.precision, other.precision) + 1
        if self.is_exact:
            product = rs_mul(_to_ring(self.coeffs[:size]), _to_ring(other.coeffs[:size]), _T, size)
            out: list = _from_ring(product, size)
        else:
            out = list(np.convolve(self.coeffs[:size], other.coeffs[:size])[:size])
        return Series(out, self.valuation + other.valuation, self.backend)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Series":
        if isinstance(other, (Series, Poly)):
            return self * self._lift(other).inv()
        return self * (1 / to_scalar(other, self.backend))

    def __pow__(self, exponent: int) -> "Series":
        if exponent < 0:
            return self.inv() ** (-exponent)
        out: Series = Series.constant(to_scalar(1, self.backend), self.precision, self.backend)
        for _ in range(exponent):
            out = out * self
        return out

    def inv(self, tol: Optional[float] = None) -> "Series":
        """
        Multiplicative inverse; the leading coefficient must not vanish.
        """
        a = self.coeffs
        if scalar_is_zero(a[0], tol):
            raise SeriesError("Cannot invert a series whose leading coefficient vanishes")
        if self.is_exact:
            return Series(_from_ring(rs_series_inversion(_to_ring(a), _T, len(a)), len(a)), -self.valuation,
                          self.backend)
        inv0 = 1 / a[0]
        out: List[Scalar] = [inv0]
        for k in range(1, len(a)):
            out.append(-sum(a[j] * out[k - j] for j in range(1, k + 1)) * inv0)
        return Series(out, -self.valuation, self.backend)

    def sqrt(self, tol: Optional[float] = None) -> "Series":
        """
        Square root on the principal branch of the leading coefficient. The valuation must be even.
        """
        s: Series = self.normalized(tol)
        if s.valuation % 2 != 0:
            raise SeriesError("Square root of a series of odd valuation")
        a = s.coeffs
        if scalar_is_zero(a[0], tol):
            raise SeriesError("Square root of a series with no non-zero coefficient")
        root0 = principal_sqrt(a[0])
        if s.is_exact:
            if not isinstance(root0, Fraction):
                raise SeriesError(f"{a[0]} is not a rational square; use the approximate backend")
            unit = rs_nth_root(_to_ring([c / a[0] for c in a]), 2, _T, len(a))
            return Series([root0 * c for c in _from_ring(unit, len(a))], s.valuation // 2, s.backend)
        out: List[Scalar] = [root0]
        for k in range(1, len(a)):
            out.append((a[k] - sum(out[j] * out[k - j] for j in range(1, k))) / (2 * root0))
        return Series(out, s.valuation // 2, s.backend)

    def derivative(self) -> "Series":
        values: List[Scalar] = [(self.valuation + j) * c for j, c in enumerate(self.coeffs)]
        if self.valuation == 0:
            if len(values) == 1:
                return Series([0], 0, self.backend)
            return Series(values[1:], 0, self.backend)
        return Series(values, self.valuation - 1, self.backend)

    def compose(self, inner: "Series") -> "Series":
        """
        The series self(inner(t)); inner must have no constant term.
        """
        inner = self._lift(inner).expanded()
        if inner.coeffs[0] != 0:
            raise SeriesError("Inner series of a composition must have no constant term")
        outer: Series = self.expanded()
        size: int = min(outer.precision, inner.precision)
        if self.is_exact:
            composed = rs_subs(_to_ring(outer.coeffs[:size + 1]), {_T: _to_ring(inner.coeffs[:size + 1])}, _T,
                               size + 1)
            return Series(_from_ring(composed, size + 1), 0, self.backend)
        out: Series = Series.constant(outer.coeffs[size], size, self.backend)
        for k in range(size - 1, -1, -1):
            out = out * inner + outer.coeffs[k]
        return Series(out.coeffs[:size + 1], 0, self.backend)

    def reverse(self, tol: Optional[float] = None) -> "Series":
        """
        Compositional inverse: the series r with self(r(t)) = t to the known order.
        """
        s: Series = self.expanded()
        if s.coeffs[0] != 0:
            raise SeriesError("Reversion needs a series without constant term")
        if s.precision < 1 or scalar_is_zero(s.coeffs[1], tol):
            raise SeriesError("Reversion needs a non-zero linear term")
        size: int = s.precision + 1
        if s.is_exact:
            reverted = rs_series_reversion(_to_ring(s.coeffs), _T, size, _S)
            return Series(_from_ring(reverted, size, variable=1), 0, s.backend)
        zero = to_scalar(0, s.backend)
        c1 = s.coeffs[1]
        r: List[Scalar] = [zero, 1 / c1] + [zero] * (size - 2)
        for k in range(2, size):
            r[k] = -s.compose(Series(r, 0, s.backend)).coeffs[k] / c1
        return Series(r, 0, s.backend)

    def truncated(self, order: int) -> "Series":
        keep: int = order - self.valuation + 1
        if keep < 1:
            raise SeriesError(f"Truncation order {order} is below the valuation {self.valuation}")
        return Series(self.coeffs[:keep], self.valuation, self.backend)

    def close(self, other: "Series", tol: Optional[float] = None) -> bool:
        low: int = min(self.valuation, other.valuation)
        high: int = min(self.order, other.order)
        return all(scalar_close(self.coefficient(k), other.coefficient(k), tol) for k in range(low, high + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (self.backend, self.valuation, self.coeffs) == (other.backend, other.valuation, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.backend, self.valuation, self.coeffs))

    def __repr__(self) -> str:
        return f"Series({list(self.coeffs)!r}, valuation={self.valuation}, backend={self.backend!r})"


def series_of_poly_at(p: Poly, x_series: Series) -> Series:
    """
    Expand p(x(t)) for a polynomial p and a regular series x(t).
    """
    p = p.to_backend(x_series.backend)
    out: Series = Series.constant(to_scalar(0, x_series.backend), x_series.precision, x_series.backend)
    for c in reversed(p.coeffs):
        out = out * x_series + c
    return out


# ----------------------------------------------------------------------------
# Linear algebra
# ----------------------------------------------------------------------------

def _identity_basis(ncols: int, backend: str) -> List[List[Scalar]]:
    return [[to_scalar(int(i == j), backend) for i in range(ncols)] for j in range(ncols)]


def null_space(rows: Sequence[Sequence[Scalar]], ncols: int, backend: str,
               rtol: Optional[float] = None) -> List[List[Scalar]]:
    """
    A basis of the right null space of a matrix given by its rows.

    The exact backend uses sympy's row reduction over the rationals. The approximate backend normalises every row
    and calls scipy's SVD-based null space with a relative singular value threshold.

    :param rows:
        Matrix rows, each of length ncols
    :param ncols:
        Number of unknowns
    :param backend:
        Scalar backend of the entries
    :param rtol:
        Relative threshold for the approximate backend
    :return:
        List of basis vectors
    """
    if ncols == 0:
        return []
    if not rows:
        return _identity_basis(ncols, backend)
    if backend == constants.backend_exact:
        matrix = sympy.Matrix([[_rational(c) for c in row] for row in rows])
        return [[_fraction(v) for v in vector] for vector in matrix.nullspace()]

    matrix = np.array([[complex(c) for c in row] for row in rows], dtype=complex)
    norms = np.linalg.norm(matrix, axis=1)
    keep = norms > 0
    if not keep.any():
        return _identity_basis(ncols, backend)
    matrix = matrix[keep] / norms[keep][:, None]
    basis = scipy.linalg.null_space(matrix, rcond=constants.rank_rtol if rtol is None else rtol)
    return [list(basis[:, j]) for j in range(basis.shape[1])]


def matrix_rank(rows: Sequence[Sequence[Scalar]], ncols: int, backend: str, rtol: Optional[float] = None) -> int:
    return ncols - len(null_space(rows, ncols, backend, rtol))
