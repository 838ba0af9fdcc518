#!/usr/bin/env python3
"""
Second-order Fuchsian equations F u'' + G u' + H u = 0 with F = prod (x - z_j)
and G / F = sum -m_j / (x - z_j)
"""
import cmath
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.linalg import null_space

from .master_function import lambda_to_ascending, relative_residual
from .models import CriticalPoint, ExponentTable, FuchsianEquation, NondegeneracyReport, SolutionSpace
from .polynomial import (
    Polynomial,
    from_sympy_rational,
    has_common_root,
    has_multiple_roots,
    polynomial_gcd,
    to_sympy_rational,
)
from .representation import multiplicity_w
from ..common.console_utils import log
from ..common.exceptions import DomainError, VerificationError
from ..common.numeric_utils import (
    ARRANGEMENT_MARGIN,
    DIVISION_TOL,
    VERIFY_TOL,
    all_exact,
    as_complex_array,
    diameter,
    fractions_from_floats,
    require_distinct,
    sort_key,
)

# Float-mode rank threshold relative to the largest singular value
RANK_RCOND = 1e-8


def build_fg(z: Sequence[Any], m: Sequence[int], exact: Optional[bool] = None) -> Tuple[Polynomial, Polynomial]:
    """
    The pair (F, G) of the equation for a configuration

    Args:
        z: Pairwise distinct points
        m: Exponents
        exact: Rational arithmetic (defaults to exact for rational z)

    Returns:
        F = prod (x - z_j) and G = -sum_j m_j prod_{l != j} (x - z_l)
    """
    require_distinct(z)
    if len(z) != len(m):
        raise DomainError(f"len(m)={len(m)} does not match len(z)={len(z)}")
    if exact is None:
        exact = all_exact(z)
    points = [Fraction(v) for v in z] if exact else [complex(v) for v in z]
    F = Polynomial.from_roots(points) if exact else Polynomial.from_roots(points).to_float()
    G = Polynomial([0], exact=exact)
    for j, mj in enumerate(m):
        others = points[:j] + points[j + 1:]
        factor = Polynomial.from_roots(others)
        if not exact:
            factor = factor.to_float()
        G = G - factor * (Fraction(mj) if exact else float(mj))
    return F, G


def _defining_polynomial(t0: Any, lam: Optional[Sequence[Any]], exact: bool) -> Polynomial:
    if lam is not None:
        poly = Polynomial(lambda_to_ascending(list(lam)), exact=exact and all_exact(lam))
    else:
        roots = t0.t if isinstance(t0, CriticalPoint) else list(t0)
        poly = Polynomial.from_roots(roots if exact else [complex(r) for r in roots])
    if exact and not poly.exact:
        raise DomainError("Exact equation needs rational symmetric coordinates")
    return poly if exact else poly.to_float()


def associated_equation(t0: Any, z: Sequence[Any], m: Sequence[int], exact: bool = False,
                        tol: float = DIVISION_TOL, lam: Optional[Sequence[Any]] = None) -> FuchsianEquation:
    """
    The equation whose polynomial solution has roots t0

    Args:
        t0: CriticalPoint or coordinates
        z: Configuration
        m: Exponents
        exact: Rational arithmetic (z and lam must be rational)
        tol: Relative remainder tolerance in float mode
        lam: Symmetric coordinates to use instead of the roots

    Returns:
        FuchsianEquation with H = -(F u'' + G u') / u
    """
    F, G = build_fg(z, m, exact=exact)
    u = _defining_polynomial(t0, lam, exact)
    k = u.degree
    numerator = -(F * u.derivative(2) + G * u.derivative())
    H, remainder = numerator.divmod(u)
    if exact:
        if not remainder.is_zero():
            raise VerificationError("Not a critical point: nonzero remainder in exact division",
                                    {"remainder": remainder.norm()})
    else:
        scale = max(numerator.norm(), 1e-300)
        rel = remainder.norm() / scale
        if rel > tol:
            raise VerificationError(f"Not a critical point: relative remainder {rel:.3e} exceeds {tol:.1e}",
                                    {"remainder": rel})
        H = H.trimmed(tol)
    n = len(m)
    if H.degree > n - 2:
        raise VerificationError(f"deg H = {H.degree} exceeds n - 2 = {n - 2}", {"degree": H.degree})
    points = tuple(Fraction(v) for v in z) if exact else tuple(complex(v) for v in z)
    return FuchsianEquation(F=F, G=G, H=H, z=points, m=tuple(int(v) for v in m), k=k, exact=exact)


def indicial_roots(p0: Any, q0: Any) -> Tuple[Any, Any]:
    """
    Roots of rho^2 + (p0 - 1) rho + q0 = 0

    Args:
        p0: Leading coefficient of p at the point
        q0: Leading coefficient of q at the point

    Returns:
        Both roots ordered by (real, imag); rational when they are
    """
    if all_exact([p0, q0]):
        b, c = Fraction(p0) - 1, Fraction(q0)
        disc = b * b - 4 * c
        if disc >= 0:
            num, den = disc.numerator, disc.denominator
            rn, rd = sympy.integer_nthroot(num, 2), sympy.integer_nthroot(den, 2)
            if rn[1] and rd[1]:
                root = Fraction(int(rn[0]), int(rd[0]))
                return tuple(sorted(((-b - root) / 2, (-b + root) / 2)))
    b, c = complex(p0) - 1, complex(q0)
    root = cmath.sqrt(b * b - 4 * c)
    pair = sorted(((-b - root) / 2, (-b + root) / 2), key=sort_key)
    return pair[0], pair[1]


def expected_exponents(m: Sequence[int], k: int) -> ExponentTable:
    """(0, m_j + 1) at z_j and (-k, k - l(m) - 1) at infinity"""
    total = sum(int(v) for v in m)
    finite = [(Fraction(0), Fraction(v + 1)) for v in m]
    at_inf = tuple(sorted((Fraction(-k), Fraction(k - total - 1))))
    fuchs = sum((a + b for a, b in finite), Fraction(0)) + at_inf[0] + at_inf[1]
    return ExponentTable(finite=finite, infinity=at_inf, fuchs_sum=fuchs, fuchs_ok=fuchs == len(m) - 1)


def exponents(e: FuchsianEquation) -> ExponentTable:
    """
    Exponents of e at every singular point

    Args:
        e: Equation with F squarefree of degree n

    Returns:
        ExponentTable with the Fuchs relation checked (sum = n - 1)
    """
    dF = e.F.derivative()
    finite = []
    for zj in e.z:
        # H / F has at most a simple pole, so q0 = 0
        p0 = e.G(zj) / dF(zj)
        finite.append(indicial_roots(p0, 0))
    lead = e.F.leading
    p_inf = e.G.coefficient(e.n - 1) / lead
    q_inf = e.H.coefficient(e.n - 2) / lead if e.n >= 2 else (Fraction(0) if e.exact else 0j)
    at_inf = indicial_roots(2 - p_inf, q_inf)
    total = sum((a + b for a, b in finite), Fraction(0) if e.exact else 0j) + at_inf[0] + at_inf[1]
    if e.exact:
        ok = total == e.n - 1
    else:
        ok = abs(complex(total) - (e.n - 1)) <= 1e-8 * max(1.0, float(e.n))
    return ExponentTable(finite=finite, infinity=at_inf, fuchs_sum=total, fuchs_ok=ok)


def _operator_matrix(e: FuchsianEquation, d: int) -> List[Polynomial]:
    """Images of x^0, ..., x^d under u -> F u'' + G u' + H u"""
    columns = []
    for j in range(d + 1):
        monomial = Polynomial([0] * j + [1], exact=e.exact)
        if not e.exact:
            monomial = monomial.to_float()
        columns.append(e.F * monomial.derivative(2) + e.G * monomial.derivative() + e.H * monomial)
    return columns


def _float_degree_echelon(rows: np.ndarray, tol: float) -> List[np.ndarray]:
    """Reduced echelon form with pivots taken from the highest degree down"""
    rows = [np.asarray(r, dtype=complex) for r in rows]
    pivots = []
    remaining = list(range(len(rows)))
    width = rows[0].shape[0] if rows else 0
    scale = max((float(np.max(np.abs(r))) for r in rows), default=1.0)
    for col in range(width - 1, -1, -1):
        if not remaining:
            break
        best = max(remaining, key=lambda r: abs(rows[r][col]))
        if abs(rows[best][col]) <= tol * scale:
            continue
        rows[best] = rows[best] / rows[best][col]
        for other in range(len(rows)):
            if other != best:
                rows[other] = rows[other] - rows[other][col] * rows[best]
        remaining.remove(best)
        pivots.append(best)
    return [rows[p] for p in pivots]


def polynomial_solutions(e: FuchsianEquation, d: int) -> List[Polynomial]:
    """
    Basis of the polynomial solutions of degree <= d

    Args:
        e: Fuchsian equation
        d: Degree bound

    Returns:
        Echelon basis (each element monic, distinct degrees), ordered by ascending degree
    """
    if d < 0:
        return []
    columns = _operator_matrix(e, d)
    height = max(max(c.degree for c in columns) + 1, 1)
    if e.exact:
        A = sympy.Matrix(height, d + 1, lambda r, c: to_sympy_rational(columns[c].coefficient(r)))
        kernel = A.nullspace()
        if not kernel:
            return []
        reversed_rows = sympy.Matrix([[vec[j] for j in range(d, -1, -1)] for vec in kernel])
        rref, pivots = reversed_rows.rref()
        basis = []
        for r in range(len(pivots)):
            coeffs = [rref[r, d - j] for j in range(d + 1)]
            basis.append(Polynomial([from_sympy_rational(c) for c in coeffs], exact=True))
    else:
        A = np.zeros((height, d + 1), dtype=complex)
        for c, poly in enumerate(columns):
            A[:len(poly.coeffs), c] = poly.array()[:len(poly.coeffs)]
        kernel = null_space(A, rcond=RANK_RCOND)
        if kernel.shape[1] == 0:
            return []
        rows = _float_degree_echelon(kernel.T, RANK_RCOND)
        basis = [Polynomial(r, exact=False).trimmed(RANK_RCOND) for r in rows]
    return sorted(basis, key=lambda p: p.degree)


def wronskian(f: Polynomial, g: Polynomial) -> Polynomial:
    """W(f, g) = f' g - f g'"""
    return f.derivative() * g - f * g.derivative()


def _wronskian_target(e: FuchsianEquation) -> Polynomial:
    target = Polynomial([1], exact=e.exact)
    for zl, ml in zip(e.z, e.m):
        factor = Polynomial([-zl, 1], exact=e.exact)
        for _ in range(ml):
            target = target * factor
    return target if e.exact else target.to_float()


def verify_all_polynomial(e: FuchsianEquation, k: Optional[int] = None, tol: float = VERIFY_TOL,
                          seed: int = 0) -> SolutionSpace:
    """
    Check that every solution of e is a polynomial

    Args:
        e: Associated equation
        k: Degree of the defining solution (defaults to e.k)
        tol: Relative Wronskian tolerance in float mode
        seed: Seed of the random basis combination used for the simple-root check

    Returns:
        SolutionSpace with u1 of degree max(k, l(m)+1-k) and monic u2 of degree min(k, l(m)+1-k)
    """
    k = e.k if k is None else k
    total = sum(e.m)
    k1, k2 = max(k, total + 1 - k), min(k, total + 1 - k)
    if k2 < 0 or k1 == k2:
        raise VerificationError(f"No two-dimensional polynomial space for k={k}, l(m)={total}",
                                {"k1": k1, "k2": k2})
    basis = polynomial_solutions(e, k1)
    degrees = [p.degree for p in basis]
    if len(basis) < 2 or k1 not in degrees or k2 not in degrees:
        raise VerificationError(f"Missing second polynomial solution: found degrees {degrees}, expected {k2} and {k1}",
                                {"degrees": degrees})
    u1 = basis[degrees.index(k1)]
    u2 = basis[degrees.index(k2)].monic()

    W = wronskian(u1, u2)
    if not e.exact:
        W = W.trimmed(RANK_RCOND)
    if W.is_zero():
        raise VerificationError("Wronskian vanishes identically", {"wronskian": 0.0})
    W = W.monic()
    target = _wronskian_target(e)
    if e.exact:
        error = 0.0 if W == target else float("inf")
    else:
        diff = (W - target).norm()
        error = diff / max(target.norm(), 1e-300)
    if W.degree != total or error > tol:
        raise VerificationError(f"Wronskian mismatch: degree {W.degree} (expected {total}), relative error {error:.3e}",
                                {"wronskian": error})

    rng = np.random.default_rng(seed)
    if e.exact:
        c = Fraction(int(rng.integers(1, 997)), int(rng.integers(1, 997)))
    else:
        c = complex(rng.standard_normal(), rng.standard_normal())
    simple = not has_multiple_roots(u1 + u2 * c)
    if not simple:
        log(f"[yellow]Generic solution has a repeated root (c = {c})[/yellow]")
    return SolutionSpace(u1=u1, u2=u2, wronskian=W, k1=k1, k2=k2, wronskian_error=error,
                         generic_simple_roots=simple)


def nondegenerate_check(space: SolutionSpace, z: Sequence[Any], margin: float = ARRANGEMENT_MARGIN) -> NondegeneracyReport:
    """
    Nondegeneracy of a solution space

    Args:
        space: Verified solution space
        z: Configuration
        margin: Relative distance below which a root of u2 counts as hitting z

    Returns:
        NondegeneracyReport listing every failed condition
    """
    reasons = []
    u1, u2 = space.u1, space.u2
    if u1.exact and u2.exact:
        if polynomial_gcd([u1, u2]).degree > 0:
            reasons.append("basis has a common zero")
    elif has_common_root(u1, u2):
        reasons.append("basis has a common zero")
    if u2.degree > 0:
        roots = u2.roots()
        scale = diameter(list(roots) + [complex(v) for v in z]) or 1.0
        for idx, zl in enumerate(z):
            dist = float(np.min(np.abs(roots - complex(zl))))
            if dist <= margin * scale:
                reasons.append(f"u2 has a root at z_{idx + 1}")
    return NondegeneracyReport(ok=not reasons, reasons=reasons)


def dual_critical_point(space: SolutionSpace, e: FuchsianEquation, seed: int = 0) -> Tuple[Optional[np.ndarray], float]:
    """
    Roots of a solution of degree l(m) + 1 - k and their relative Bethe residual

    Args:
        space: Verified solution space of e
        e: Associated equation
        seed: Seed of the combination u1 + c u2 when the dual degree is the generic one

    Returns:
        (roots, residual); roots is None when the chosen solution has a repeated root
        or a root on z
    """
    dual_degree = sum(e.m) + 1 - e.k
    if dual_degree == space.k2:
        poly = space.u2
    else:
        rng = np.random.default_rng(seed)
        poly = space.u1.to_float() + space.u2.to_float() * complex(rng.standard_normal(), rng.standard_normal())
    if poly.degree < 1:
        return np.zeros(0, dtype=complex), 0.0
    if has_multiple_roots(poly):
        return None, float("nan")
    roots = poly.roots()
    z = as_complex_array(e.z)
    scale = diameter(list(roots) + list(z)) or 1.0
    if float(np.min(np.abs(roots[:, None] - z[None, :]))) <= ARRANGEMENT_MARGIN * scale:
        return None, float("nan")
    return roots, relative_residual(roots, z, np.asarray(e.m, dtype=float))


def recognize_rational(point: CriticalPoint, z: Sequence[Any], m: Sequence[int],
                       tol: float = 1e-10) -> Optional[List[Fraction]]:
    """
    Rational symmetric coordinates of a critical point, confirmed exactly

    Args:
        point: Numerical critical point
        z: Configuration (must be rational for a confirmation)
        m: Exponents
        tol: Distance to the candidate rationals

    Returns:
        lambda as Fractions when exact division confirms it, else None
    """
    if not all_exact(z):
        return None
    lam = fractions_from_floats(point.lam, tol=tol)
    if lam is None:
        return None
    try:
        associated_equation(point, z, m, exact=True, lam=lam)
    except (VerificationError, DomainError):
        return None
    return lam


def count_univalued_equations(finite: Sequence[Tuple[Any, Any]], infinity: Tuple[Any, Any]) -> int:
    """
    Number of Fuchsian equations with only univalued solutions for the given exponents

    Args:
        finite: Exponent pairs at z_1, ..., z_n
        infinity: Exponent pair at infinity

    Returns:
        w(m, l(m) + 1 - k) for the translated (m, k), or 0 in the vanishing cases
    """
    n = len(finite)
    pairs = [tuple(sorted((Fraction(a), Fraction(b)))) for a, b in finite]
    at_inf = tuple(sorted((Fraction(infinity[0]), Fraction(infinity[1]))))
    total = sum((a + b for a, b in pairs), Fraction(0)) + at_inf[0] + at_inf[1]
    if total != n - 1:
        raise DomainError(f"Exponents violate the Fuchs relation: sum = {total}, expected {n - 1}")
    m = []
    for idx, (a, b) in enumerate(pairs):
        diff = b - a
        if diff.denominator != 1 or diff < 1:
            raise DomainError(f"Exponent difference at z_{idx + 1} is not a positive integer: {diff}")
        m.append(int(diff) - 1)
    k = -at_inf[0] - sum((a for a, _ in pairs), Fraction(0))
    if k.denominator != 1:
        raise DomainError(f"Translated k = {k} is not an integer")
    k = int(k)
    dual = sum(m) + 1 - k
    if dual < 0 or k <= dual:
        return 0
    return multiplicity_w(m, dual)


def count_nondegenerate_spaces(m: Sequence[int], k1: int, k2: int) -> int:
    """
    Number of nondegenerate spaces V with W_V = prod (x - z_l)^{m_l} and degrees k1 > k2

    Args:
        m: Wronskian multiplicities
        k1: Generic degree
        k2: Special degree

    Returns:
        Multiplicity of L_{k1 - k2 - 1} in L_{m_1} (x) ... (x) L_{m_n}
    """
    if k1 <= k2 or k2 < 0:
        raise DomainError(f"Need k1 > k2 >= 0, got k1={k1}, k2={k2}")
    if sum(m) != k1 + k2 - 1:
        raise DomainError(f"Wronskian degree l(m)={sum(m)} must equal k1 + k2 - 1 = {k1 + k2 - 1}")
    return multiplicity_w(m, k2)


def equation_distance(a: FuchsianEquation, b: FuchsianEquation) -> float:
    """Max-norm distance of the H coefficients"""
    size = max(len(a.H.coeffs), len(b.H.coeffs), 1)
    ha = np.asarray([complex(a.H.coefficient(i)) for i in range(size)])
    hb = np.asarray([complex(b.H.coefficient(i)) for i in range(size)])
    return float(np.max(np.abs(ha - hb)))
