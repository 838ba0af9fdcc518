#!/usr/bin/env python3
"""
The master function Phi_{k,n}(t; z, m) = prod (t_i - z_l)^{-m_l} prod_{i<j} (t_i - t_j)^2

Only logarithmic derivatives are evaluated; Phi itself is never formed.
"""
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from numpy.polynomial import polynomial as P

from .models import CriticalPoint, N2Solution, ProblemInstance, RegimeKind, RegimeLabel
from .representation import multiplicity_w
from ..common.exceptions import ArrangementError, DomainError
from ..common.numeric_utils import (
    ARRANGEMENT_MARGIN,
    DEDUP_TOL,
    all_exact,
    as_complex_array,
    diameter,
    sort_key,
    to_fraction,
)


def arrangement_gap(t: Sequence[Any], z: Sequence[Any]) -> Tuple[float, Optional[Tuple[str, str]]]:
    """
    Relative distance of t to the hyperplanes t_i = z_l and t_i = t_j

    Args:
        t: Point in C^k
        z: Configuration

    Returns:
        (distance / diameter(z u t), names of the closest pair)
    """
    tt = as_complex_array(t)
    zz = as_complex_array(z)
    scale = diameter(list(tt) + list(zz)) or 1.0
    best, pair = float("inf"), None
    if len(tt) and len(zz):
        dist = np.abs(tt[:, None] - zz[None, :])
        i, l = np.unravel_index(int(np.argmin(dist)), dist.shape)
        best, pair = float(dist[i, l]), (f"t_{i + 1}", f"z_{l + 1}")
    if len(tt) > 1:
        dist = np.abs(tt[:, None] - tt[None, :])
        dist[np.diag_indices(len(tt))] = np.inf
        i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
        if dist[i, j] < best:
            best, pair = float(dist[i, j]), (f"t_{min(i, j) + 1}", f"t_{max(i, j) + 1}")
    return best / scale, pair


def check_arrangement(t: Sequence[Any], z: Sequence[Any], margin: float = ARRANGEMENT_MARGIN) -> None:
    """
    Raise ArrangementError if t lies within margin * diameter(z u t) of the arrangement

    Args:
        t: Point in C^k (exact rationals are compared exactly)
        z: Configuration
        margin: Relative margin
    """
    if all_exact(t) and all_exact(z):
        for i, ti in enumerate(t):
            for l, zl in enumerate(z):
                if ti == zl:
                    raise ArrangementError("Point lies on the arrangement", (f"t_{i + 1}", f"z_{l + 1}"))
            for j in range(i + 1, len(t)):
                if ti == t[j]:
                    raise ArrangementError("Point lies on the arrangement", (f"t_{i + 1}", f"t_{j + 1}"))
        return
    gap, pair = arrangement_gap(t, z)
    if pair is not None and gap <= margin:
        raise ArrangementError(f"Point within relative distance {gap:.3g} of the arrangement", pair)


def _inverse_differences(t: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    inv_tz = 1.0 / (t[:, None] - z[None, :])
    diff = t[:, None] - t[None, :]
    mask = ~np.eye(len(t), dtype=bool)
    inv_tt = np.zeros_like(diff)
    np.divide(1.0, diff, out=inv_tt, where=mask)
    return inv_tz, inv_tt


def residual_at(t: np.ndarray, z: np.ndarray, m: np.ndarray) -> np.ndarray:
    """r_i = sum_l -m_l / (t_i - z_l) + sum_{j != i} 2 / (t_i - t_j), no validation"""
    inv_tz, inv_tt = _inverse_differences(t, z)
    return -(inv_tz * m[None, :]).sum(axis=1) + 2.0 * inv_tt.sum(axis=1)


def residual_scale(t: np.ndarray, z: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Per-equation sum of term magnitudes"""
    inv_tz, inv_tt = _inverse_differences(t, z)
    return (np.abs(inv_tz) * np.abs(m)[None, :]).sum(axis=1) + 2.0 * np.abs(inv_tt).sum(axis=1)


def relative_residual(t: np.ndarray, z: np.ndarray, m: np.ndarray) -> float:
    """max_i |r_i| / sum_terms |term_i|"""
    if len(t) == 0:
        return 0.0
    r = np.abs(residual_at(t, z, m))
    scale = residual_scale(t, z, m)
    return float(np.max(r / np.where(scale > 0, scale, 1.0)))


def hessian_at(t: np.ndarray, z: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Hessian of ln Phi (= Jacobian of the residual), no validation"""
    inv_tz, inv_tt = _inverse_differences(t, z)
    off = 2.0 * inv_tt ** 2
    hess = off.copy()
    diag = (inv_tz ** 2 * m[None, :]).sum(axis=1) - off.sum(axis=1)
    hess[np.diag_indices(len(t))] = diag
    return hess


def residual_z_derivative(t: np.ndarray, z: np.ndarray, m: np.ndarray) -> np.ndarray:
    """d r_i / d z_l = -m_l / (t_i - z_l)^2 as a k x n matrix"""
    inv_tz = 1.0 / (t[:, None] - z[None, :])
    return -(inv_tz ** 2) * m[None, :]


def _instance_arrays(inst: ProblemInstance) -> Tuple[np.ndarray, np.ndarray]:
    return as_complex_array(inst.z), np.asarray(inst.m, dtype=float)


def bethe_residual(t: Sequence[Any], inst: ProblemInstance, margin: float = ARRANGEMENT_MARGIN) -> np.ndarray:
    """
    Logarithmic derivatives of Phi at t

    Args:
        t: k complex coordinates
        inst: Problem instance
        margin: Arrangement margin

    Returns:
        Complex vector r of length k
    """
    if len(t) != inst.k:
        raise DomainError(f"Expected {inst.k} coordinates, got {len(t)}")
    check_arrangement(t, inst.z, margin)
    z, m = _instance_arrays(inst)
    return residual_at(as_complex_array(t), z, m)


def bethe_residual_exact(t: Sequence[Any], inst: ProblemInstance) -> List[Fraction]:
    """Exact residual for rational t and rational z"""
    if inst.config.exact is None:
        raise DomainError("Exact residual needs a rational configuration")
    tt = [to_fraction(v) for v in t]
    z = inst.config.exact
    check_arrangement(tt, z)
    out = []
    for i, ti in enumerate(tt):
        r = sum((Fraction(-ml) / (ti - zl) for ml, zl in zip(inst.m, z)), Fraction(0))
        r += sum((Fraction(2) / (ti - tj) for j, tj in enumerate(tt) if j != i), Fraction(0))
        out.append(r)
    return out


def hessian_ln_phi(t: Sequence[Any], inst: ProblemInstance, margin: float = ARRANGEMENT_MARGIN) -> np.ndarray:
    """
    Matrix of second derivatives of ln Phi

    Args:
        t: k complex coordinates
        inst: Problem instance
        margin: Arrangement margin

    Returns:
        Symmetric complex k x k matrix
    """
    check_arrangement(t, inst.z, margin)
    z, m = _instance_arrays(inst)
    return hessian_at(as_complex_array(t), z, m)


def log_abs_master(t: Sequence[float], inst: ProblemInstance) -> float:
    """ln |Phi(t)|"""
    tt = as_complex_array(t)
    z, m = _instance_arrays(inst)
    value = -(np.log(np.abs(tt[:, None] - z[None, :])) * m[None, :]).sum()
    for i in range(len(tt)):
        for j in range(i + 1, len(tt)):
            value += 2.0 * np.log(abs(tt[i] - tt[j]))
    return float(value)


def elementary_symmetric(t: Sequence[Any]) -> Tuple[Any, ...]:
    """
    lambda_1 = sum t_i, ..., lambda_k = prod t_i

    Args:
        t: Coordinates (exact rationals stay exact)

    Returns:
        Tuple (lambda_1, ..., lambda_k)
    """
    if all_exact(t):
        coeffs = [Fraction(1)]
        for ti in t:
            shifted = coeffs + [Fraction(0)]
            for idx in range(1, len(shifted)):
                shifted[idx] += Fraction(ti) * coeffs[idx - 1]
            coeffs = shifted
        return tuple(coeffs[1:])
    if len(t) == 0:
        return ()
    poly = np.poly(as_complex_array(t))
    return tuple(complex(((-1) ** i) * poly[i]) for i in range(1, len(t) + 1))


def lambda_to_ascending(lam: Sequence[Any]) -> List[Any]:
    """Ascending coefficients of x^k - lambda_1 x^{k-1} + ... + (-1)^k lambda_k"""
    k = len(lam)
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    for i, value in enumerate(lam, start=1):
        coeffs[k - i] = value if i % 2 == 0 else -value
    return coeffs


def roots_from_lambda(lam: Sequence[Any]) -> np.ndarray:
    """Roots of x^k - lambda_1 x^{k-1} + ... + (-1)^k lambda_k (companion matrix eigenvalues)"""
    if len(lam) == 0:
        return np.zeros(0, dtype=complex)
    return np.asarray(P.polyroots(as_complex_array(lambda_to_ascending(lam))), dtype=complex)


def canonical_orbit(t: Sequence[Any], residual_norm: Optional[float] = None,
                    hessian_det: Optional[complex] = None, hessian_cond: Optional[float] = None) -> CriticalPoint:
    """
    Sorted representative of the S_k-orbit of t

    Args:
        t: Coordinates
        residual_norm: Relative residual to record
        hessian_det: Hessian determinant to record
        hessian_cond: Hessian condition number to record

    Returns:
        CriticalPoint with t sorted by (real, imag) and lambda attached
    """
    ordered = tuple(sorted((complex(v) for v in t), key=sort_key))
    return CriticalPoint(
        t=ordered,
        lam=tuple(complex(v) for v in elementary_symmetric(ordered)),
        residual_norm=residual_norm,
        hessian_det=hessian_det,
        hessian_cond=hessian_cond,
    )


def orbit_distance(a: CriticalPoint, b: CriticalPoint) -> float:
    """Max-norm distance of the lambda vectors, relative to max(1, |lambda|)"""
    la, lb = as_complex_array(a.lam), as_complex_array(b.lam)
    if la.shape != lb.shape:
        return float("inf")
    if la.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(la))), float(np.max(np.abs(lb))))
    return float(np.max(np.abs(la - lb))) / scale


def same_orbit(a: CriticalPoint, b: CriticalPoint, tol: float = DEDUP_TOL) -> bool:
    return orbit_distance(a, b) <= tol


def orbit_sort_key(point: CriticalPoint) -> Tuple[float, ...]:
    """Deterministic ordering on lambda (rounded so noise does not reorder)"""
    key: List[float] = []
    for value in point.lam:
        re, im = sort_key(value)
        key.extend((round(re, 8), round(im, 8)))
    return tuple(key)


def dedup_orbits(points: Sequence[CriticalPoint], tol: float = DEDUP_TOL) -> Tuple[List[CriticalPoint], int]:
    """
    Merge points that represent the same orbit

    Args:
        points: Candidate orbit representatives
        tol: Relative lambda tolerance

    Returns:
        (distinct orbits sorted by lambda, number of merged duplicates)
    """
    kept: List[CriticalPoint] = []
    merged = 0
    for point in points:
        if any(same_orbit(point, other, tol) for other in kept):
            merged += 1
            continue
        kept.append(point)
    return sorted(kept, key=orbit_sort_key), merged


def classify_regime(m: Sequence[int], k: int) -> RegimeLabel:
    """
    Regime of (m, k) from the sign of l(m) + 1 - 2k

    Args:
        m: Positive integer exponents
        k: Number of variables

    Returns:
        RegimeLabel with the predicted number of orbits (or lines)
    """
    total = sum(int(v) for v in m)
    dual = total + 1 - k
    if dual > k:
        return RegimeLabel(kind=RegimeKind.ISOLATED_POINTS, expected_count=multiplicity_w(m, k), dual_k=dual)
    if dual == k:
        return RegimeLabel(kind=RegimeKind.NO_CRITICAL_EQUAL_EXPONENTS, expected_count=0, dual_k=dual)
    if dual >= 0:
        return RegimeLabel(kind=RegimeKind.CRITICAL_LINES, expected_count=multiplicity_w(m, dual), dual_k=dual)
    return RegimeLabel(kind=RegimeKind.NO_CRITICAL_NEGATIVE_DUAL, expected_count=0, dual_k=dual)


def _n2_case(m1: Fraction, m2: Fraction, k: int) -> Optional[str]:
    """Case label for positive integer exponents"""
    if not all(e.denominator == 1 and e > 0 for e in (m1, m2)):
        return None
    above = (k > m1) + (k > m2)
    if above == 0:
        return "i"
    if above == 1:
        return "ii"
    if k <= m1 + m2 + 1:
        return "iii"
    return "iv"


def _lambda_in_arrangement(lam: Sequence[sympy.Rational]) -> bool:
    """Whether x^k - lambda_1 x^{k-1} + ... has a root at 0, at 1, or a repeated root"""
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(lambda_to_ascending(list(lam)))), x, domain="QQ")
    if poly.eval(0) == 0 or poly.eval(1) == 0:
        return True
    return sympy.gcd(poly, poly.diff(x)).degree() > 0


def n2_closed_form(m1: Any, m2: Any, k: int) -> N2Solution:
    """
    Solve the n = 2 critical point system in symmetric coordinates, z = (0, 1)

    (p + 1)(p - m1) lambda_{k-p-1} = (k - p)(k + p - 1 - m1 - m2) lambda_{k-p}, p = 0..k-1, lambda_0 = 1

    Args:
        m1: Exponent at 0
        m2: Exponent at 1
        k: Number of variables

    Returns:
        N2Solution with the case label, rank and the unique lambda or the solution line;
        consistent=False when no lambda satisfies the recursion
    """
    a, b = to_fraction(m1), to_fraction(m2)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if k == 0:
        return N2Solution(case="i", rank=0, lam=())
    A = sympy.zeros(k, k)
    rhs = sympy.zeros(k, 1)
    ra, rb = sympy.Rational(a.numerator, a.denominator), sympy.Rational(b.numerator, b.denominator)
    for row, p in enumerate(range(k)):
        low = (p + 1) * (p - ra)
        high = (k - p) * (k + p - 1 - ra - rb)
        # unknown lambda_j sits in column j - 1
        A[row, k - p - 1] += -high
        if k - p - 1 == 0:
            rhs[row] = -low
        else:
            A[row, k - p - 2] += low
    rank = A.rank()
    case = _n2_case(a, b, k)
    try:
        solution, params = A.gauss_jordan_solve(rhs)
    except ValueError:
        # the recursion forces a nonzero constant to vanish
        return N2Solution(case=case or "none", rank=rank, consistent=False)

    def as_fraction(value: sympy.Expr) -> Fraction:
        value = sympy.Rational(value)
        return Fraction(int(value.p), int(value.q))

    if params.shape[0] == 0:
        lam = [sympy.Rational(v) for v in solution]
        in_arr = _lambda_in_arrangement(lam)
        if case is None:
            case = "ii" if in_arr else "i"
        return N2Solution(case=case, rank=rank, lam=tuple(as_fraction(v) for v in lam), in_arrangement=in_arr)

    free = {sym: 0 for sym in params}
    base = solution.subs(free)
    first = params[0]
    direction = solution.diff(first)
    return N2Solution(
        case=case or "iii",
        rank=rank,
        line_base=tuple(as_fraction(v) for v in base),
        line_direction=tuple(as_fraction(v) for v in direction),
    )


def n2_seed_roots(m1: Any, m2: Any, k: int) -> np.ndarray:
    """Roots u of the unique n = 2 critical orbit at z = (0, 1)"""
    solution = n2_closed_form(m1, m2, k)
    if solution.lam is None:
        raise DomainError(f"No isolated critical point for exponents ({m1}, {m2}) and k={k} (case {solution.case})")
    return roots_from_lambda([complex(v) for v in solution.lam])
