#!/usr/bin/env python3
"""
Univariate polynomials with exact (rational) or complex-float coefficients
"""
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from numpy.polynomial import polynomial as P

from ..common.exceptions import DomainError
from ..common.numeric_utils import DIVISION_TOL, all_exact

X = sympy.Symbol("x")


def to_sympy_rational(value: Any) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def from_sympy_rational(value: Any) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


class Polynomial:
    """Polynomial with ascending coefficients; exact polynomials use Fraction"""

    def __init__(self, coeffs: Sequence[Any], exact: Optional[bool] = None):
        """
        Initialize a polynomial

        Args:
            coeffs: Ascending coefficients c_0, c_1, ...
            exact: Keep rational coefficients (defaults to exact when every coefficient is rational)
        """
        coeffs = list(coeffs)
        if exact is None:
            exact = all_exact(coeffs)
        self.exact = exact
        if exact:
            values: List[Any] = [Fraction(c) for c in coeffs]
            while values and values[-1] == 0:
                values.pop()
        else:
            values = [complex(c) for c in coeffs]
            while values and values[-1] == 0:
                values.pop()
        self.coeffs: Tuple[Any, ...] = tuple(values)

    @classmethod
    def from_roots(cls, roots: Sequence[Any]) -> "Polynomial":
        """Monic polynomial prod (x - r)"""
        if all_exact(roots):
            poly = cls([1], exact=True)
            for r in roots:
                poly = poly * cls([-Fraction(r), 1], exact=True)
            return poly
        if len(roots) == 0:
            return cls([1], exact=False)
        return cls(P.polyfromroots(np.asarray([complex(r) for r in roots], dtype=complex)), exact=False)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "Polynomial":
        return cls([from_sympy_rational(c) for c in reversed(poly.all_coeffs())], exact=True)

    @classmethod
    def constant(cls, value: Any, exact: bool = True) -> "Polynomial":
        return cls([value], exact=exact)

    def to_sympy(self) -> sympy.Poly:
        if not self.exact:
            raise DomainError("Only exact polynomials convert to sympy")
        if self.is_zero():
            return sympy.Poly(0, X, domain="QQ")
        return sympy.Poly([to_sympy_rational(c) for c in reversed(self.coeffs)], X, domain="QQ")

    def to_float(self) -> "Polynomial":
        return Polynomial([complex(c) for c in self.coeffs], exact=False)

    def array(self) -> np.ndarray:
        """Ascending complex coefficient array (at least one entry)"""
        if not self.coeffs:
            return np.zeros(1, dtype=complex)
        return np.asarray([complex(c) for c in self.coeffs], dtype=complex)

    @property
    def degree(self) -> int:
        """Degree (-1 for the zero polynomial)"""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, power: int) -> Any:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0) if self.exact else 0j

    @property
    def leading(self) -> Any:
        if self.is_zero():
            return Fraction(0) if self.exact else 0j
        return self.coeffs[-1]

    def norm(self) -> float:
        """Max-norm of the coefficients"""
        if self.is_zero():
            return 0.0
        return float(np.max(np.abs(self.array())))

    def trimmed(self, tol: float) -> "Polynomial":
        """Drop leading coefficients below tol * norm (float polynomials only)"""
        if self.exact or self.is_zero():
            return self
        scale = self.norm()
        values = list(self.coeffs)
        while values and abs(values[-1]) <= tol * scale:
            values.pop()
        return Polynomial(values, exact=False)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise DomainError("The zero polynomial has no monic form")
        lead = self.leading
        return Polynomial([c / lead for c in self.coeffs], exact=self.exact)

    def _coerce(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other], exact=self.exact and all_exact([other]))

    def _combine_exact(self, other: "Polynomial") -> bool:
        return self.exact and other.exact

    def __add__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self.coefficient(i) + other.coefficient(i) for i in range(size)],
                          exact=self._combine_exact(other))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], exact=self.exact)

    def __sub__(self, other: Any) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([], exact=self._combine_exact(other))
        if self._combine_exact(other):
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out, exact=True)
        return Polynomial(P.polymul(self.array(), other.array()), exact=False)

    __rmul__ = __mul__

    def __call__(self, x: Any) -> Any:
        if self.exact and all_exact([x]):
            value = Fraction(0)
            for c in reversed(self.coeffs):
                value = value * Fraction(x) + c
            return value
        return complex(P.polyval(complex(x), self.array()))

    def derivative(self, order: int = 1) -> "Polynomial":
        out = self
        for _ in range(order):
            out = Polynomial([i * c for i, c in enumerate(out.coeffs)][1:], exact=out.exact)
        return out

    def integral(self, constant: Any = 0) -> "Polynomial":
        """Antiderivative with the given value at 0"""
        if self.exact and all_exact([constant]):
            return Polynomial([Fraction(constant)] + [c / (i + 1) for i, c in enumerate(self.coeffs)], exact=True)
        return Polynomial([complex(constant)] + [complex(c) / (i + 1) for i, c in enumerate(self.coeffs)], exact=False)

    def divmod(self, divisor: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """
        Euclidean division

        Args:
            divisor: Nonzero polynomial

        Returns:
            (quotient, remainder) with deg remainder < deg divisor
        """
        if divisor.is_zero():
            raise DomainError("Division by the zero polynomial")
        if self._combine_exact(divisor):
            q, r = sympy.div(self.to_sympy(), divisor.to_sympy())
            return Polynomial.from_sympy(q), Polynomial.from_sympy(r)
        if self.is_zero():
            return Polynomial([], exact=False), Polynomial([], exact=False)
        q, r = P.polydiv(self.array(), divisor.array())
        remainder = Polynomial(r, exact=False)
        if remainder.degree >= divisor.degree:
            remainder = Polynomial(list(r)[:divisor.degree], exact=False)
        return Polynomial(q, exact=False), remainder

    def roots(self) -> np.ndarray:
        """Complex roots (companion matrix eigenvalues)"""
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return np.asarray(P.polyroots(self.array()), dtype=complex)

    def exact_roots(self) -> List[Fraction]:
        """Rational roots with multiplicity (exact polynomials only)"""
        roots: List[Fraction] = []
        for root, mult in sympy.roots(self.to_sympy(), filter="Q").items():
            roots.extend([from_sympy_rational(root)] * mult)
        return roots

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"Polynomial({list(self.coeffs)!r}, {kind})"


PolyLike = Union[Polynomial, Sequence[Any]]


def sylvester_matrix(f: Polynomial, g: Polynomial) -> np.ndarray:
    """Sylvester matrix of f and g (complex)"""
    p, q = f.degree, g.degree
    if p < 0 or q < 0:
        raise DomainError("Sylvester matrix of the zero polynomial")
    size = p + q
    mat = np.zeros((size, size), dtype=complex)
    fd = f.array()[::-1]
    gd = g.array()[::-1]
    for row in range(q):
        mat[row, row:row + p + 1] = fd
    for row in range(p):
        mat[q + row, row:row + q + 1] = gd
    return mat


def has_common_root(f: Polynomial, g: Polynomial, tol: float = DIVISION_TOL) -> bool:
    """
    Whether f and g share a root

    Args:
        f: Polynomial
        g: Polynomial
        tol: Relative singular value threshold for float inputs

    Returns:
        Exact gcd test for rational input, Sylvester rank test otherwise
    """
    if f.is_zero() or g.is_zero():
        return True
    if f.degree == 0 or g.degree == 0:
        return False
    if f.exact and g.exact:
        return sympy.gcd(f.to_sympy(), g.to_sympy()).degree() > 0
    sv = np.linalg.svd(sylvester_matrix(f, g), compute_uv=False)
    return bool(sv[-1] <= tol * sv[0])


def has_multiple_roots(p: Polynomial, tol: float = DIVISION_TOL) -> bool:
    """Whether p has a repeated root"""
    if p.degree < 2:
        return False
    return has_common_root(p, p.derivative(), tol)


def polynomial_gcd(polys: Sequence[Polynomial]) -> Polynomial:
    """Exact monic gcd of rational polynomials"""
    result = None
    for poly in polys:
        current = poly.to_sympy()
        result = current if result is None else sympy.gcd(result, current)
    if result is None:
        raise DomainError("gcd of an empty family")
    return Polynomial.from_sympy(result).monic() if not result.is_zero else Polynomial([], exact=True)
