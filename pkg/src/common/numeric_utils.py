"""
Common numeric utility functions
"""
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DomainError

Scalar = Union[int, Fraction, float, complex]

# Default tolerances shared by the solver, the Fuchsian side and the verifier
NEWTON_TOL = 1e-12
DEDUP_TOL = 1e-6
LINE_TOL = 1e-9
DIVISION_TOL = 1e-8
VERIFY_TOL = 1e-8
ARRANGEMENT_MARGIN = 1e-8


def is_exact(value: object) -> bool:
    """
    Determine if value is an exact rational scalar

    Args:
        value: Any scalar

    Returns:
        True for int / Fraction (bool excluded)
    """
    return isinstance(value, Rational) and not isinstance(value, bool)


def all_exact(values: Iterable[object]) -> bool:
    """Whether every value is an exact rational scalar"""
    return all(is_exact(v) for v in values)


def to_fraction(value: Union[str, int, float, Fraction]) -> Fraction:
    """
    Convert a config token to an exact rational

    Args:
        value: "p/q" string, integer, float or Fraction

    Returns:
        Fraction (floats go through their shortest decimal repr, so 0.1 -> 1/10)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"Not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not np.isfinite(value):
            raise DomainError(f"Not a finite number: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"Not a rational number: {value!r}") from e
    raise DomainError(f"Not a rational number: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Render a rational as "p/q" (or "p" when integral)"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def complex_pair(value: Scalar) -> Tuple[float, float]:
    """Split a scalar into its [re, im] float pair"""
    c = complex(value)
    return (float(c.real), float(c.imag))


def diameter(points: Sequence[Scalar]) -> float:
    """
    Largest pairwise distance of a point set in the complex plane

    Args:
        points: Complex (or real) coordinates

    Returns:
        0.0 for fewer than two points
    """
    if len(points) < 2:
        return 0.0
    arr = np.asarray([complex(p) for p in points], dtype=complex)
    return float(np.max(np.abs(arr[:, None] - arr[None, :])))


def closest_pair(points: Sequence[Scalar]) -> Tuple[float, Optional[Tuple[int, int]]]:
    """
    Smallest pairwise distance and the indices realising it

    Args:
        points: Complex (or real) coordinates

    Returns:
        (distance, (i, j)) with i < j, or (inf, None) for fewer than two points
    """
    if len(points) < 2:
        return float("inf"), None
    arr = np.asarray([complex(p) for p in points], dtype=complex)
    dist = np.abs(arr[:, None] - arr[None, :])
    dist[np.diag_indices(len(arr))] = np.inf
    i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
    i, j = int(min(i, j)), int(max(i, j))
    return float(dist[i, j]), (i, j)


def require_distinct(z: Sequence[Scalar], label: str = "z") -> None:
    """
    Raise DomainError when two coordinates coincide

    Args:
        z: Configuration to check
        label: Name used in the error message
    """
    if all_exact(z):
        seen = {}
        for idx, value in enumerate(z):
            if value in seen:
                raise DomainError(f"Coincident points {label}_{seen[value] + 1} = {label}_{idx + 1} = {value}")
            seen[value] = idx
        return
    dist, pair = closest_pair(z)
    if pair is not None and dist == 0.0:
        i, j = pair
        raise DomainError(f"Coincident points {label}_{i + 1} = {label}_{j + 1} = {complex(z[i])}")


def sort_key(value: Scalar) -> Tuple[float, float]:
    """Ordering by real part, then imaginary part"""
    c = complex(value)
    return (c.real, c.imag)


def relative_error(a: Scalar, b: Scalar) -> float:
    """|a - b| / max(|a|, |b|), 0 when both vanish"""
    scale = max(abs(complex(a)), abs(complex(b)))
    if scale == 0.0:
        return 0.0
    return abs(complex(a) - complex(b)) / scale


def as_complex_array(values: Iterable[Scalar]) -> np.ndarray:
    """Pack scalars into a complex128 vector"""
    return np.asarray([complex(v) for v in values], dtype=complex)


def fractions_from_floats(values: Sequence[Scalar], max_denominator: int = 10**6,
                          tol: float = 1e-10) -> Optional[List[Fraction]]:
    """
    Recognise real values that sit on simple rationals

    Args:
        values: Complex or real numbers
        max_denominator: Largest denominator tried
        tol: Allowed distance (relative to max(1, |value|))

    Returns:
        List of Fractions, or None if any value is not near-rational
    """
    out = []
    for v in values:
        c = complex(v)
        scale = max(1.0, abs(c))
        if abs(c.imag) > tol * scale:
            return None
        frac = Fraction(c.real).limit_denominator(max_denominator)
        if abs(float(frac) - c.real) > tol * scale:
            return None
        out.append(frac)
    return out
