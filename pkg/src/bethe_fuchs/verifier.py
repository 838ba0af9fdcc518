#!/usr/bin/env python3
"""
Bethe vectors v(t0, z) = sum_J A_J(t0, z) f_J v and the checks they must pass
"""
import math
from fractions import Fraction
from typing import Any, Optional, Sequence, Tuple

import numpy as np
import sympy
from sympy.utilities.iterables import multiset_permutations

from .fuchsian import (
    associated_equation,
    dual_critical_point,
    expected_exponents,
    exponents,
    nondegenerate_check,
    recognize_rational,
    verify_all_polynomial,
)
from .gaudin import hamiltonian_matrices
from .master_function import bethe_residual_exact, check_arrangement, classify_regime, hessian_ln_phi
from .models import (
    BasisCheck,
    BetheVector,
    CriticalPoint,
    NormIdentityResult,
    ProblemInstance,
    RegimeKind,
    RoundTripResult,
    TensorVector,
    WeightIndex,
)
from .representation import generator_matrix, shapovalov_diagonal, singular_basis, vector_to_array, weight_basis
from ..common.console_utils import log
from ..common.exceptions import ArrangementError, DomainError, VerificationError
from ..common.numeric_utils import VERIFY_TOL, all_exact

# Hessian condition number above which the norm identity is not judged
NORM_DEGENERATE_COND = 1e10
# |det| / prod(column norms) below which Bethe vectors do not form a basis
BASIS_THRESHOLD = 1e-6


def a_coefficient(index: WeightIndex, t: Sequence[Any], z: Sequence[Any]) -> Any:
    """
    A_J(t, z) = sum over assignments sigma of prod_i 1 / (t_i - z_sigma(i))

    Args:
        index: J = (j_1, ..., j_n), sum j_l = k
        t: Coordinates t_1, ..., t_k
        z: Configuration

    Returns:
        Sum over the k! / (j_1! ... j_n!) assignments (exact for rational input)
    """
    if sum(index) != len(t):
        raise DomainError(f"Index {tuple(index)} does not have weight k={len(t)}")
    for i, ti in enumerate(t):
        for l, zl in enumerate(z):
            if ti == zl:
                raise ArrangementError("Coordinate coincides with a site", (f"t_{i + 1}", f"z_{l + 1}"))
    labels = [l for l, j in enumerate(index) for _ in range(j)]
    exact = all_exact(t) and all_exact(z)
    inverse = [[(Fraction(1) / (Fraction(ti) - Fraction(zl))) if exact else 1.0 / (complex(ti) - complex(zl))
                for zl in z] for ti in t]
    total: Any = Fraction(0) if exact else 0j
    for assignment in multiset_permutations(labels):
        term: Any = Fraction(1) if exact else 1 + 0j
        for i, l in enumerate(assignment):
            term *= inverse[i][l]
        total += term
    return total


def bethe_tensor(t: Sequence[Any], inst: ProblemInstance) -> TensorVector:
    """v(t, z) over weight_basis(m, k)"""
    z = inst.config.exact if (all_exact(t) and inst.config.exact is not None) else inst.z
    coeffs = {}
    for index in weight_basis(inst.m, inst.k):
        value = a_coefficient(index, t, z)
        if value != 0:
            coeffs[index] = value
    return TensorVector(m=inst.m, k=inst.k, coeffs=coeffs)


def _bilinear(gram_diag: np.ndarray, x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.sum(gram_diag * x * y))


def bethe_vector(point: CriticalPoint, inst: ProblemInstance, tol: float = VERIFY_TOL,
                 raise_on_failure: bool = True) -> BetheVector:
    """
    Build v(t0, z) and check that it is a singular simultaneous eigenvector

    Args:
        point: Critical point
        inst: Problem instance
        tol: Relative tolerance for every check
        raise_on_failure: Raise VerificationError when a check fails

    Returns:
        BetheVector with Rayleigh-quotient eigenvalues mu_i = S(v, H_i v) / S(v, v)
    """
    t = list(point.t)
    check_arrangement(t, inst.z)
    v = bethe_tensor(t, inst)
    basis = weight_basis(inst.m, inst.k)
    vec = vector_to_array(v, basis)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise VerificationError("Bethe vector vanishes", {"norm": 0.0})
    gram = np.asarray(shapovalov_diagonal(inst.m, inst.k), dtype=float)
    s_norm = _bilinear(gram, vec, vec)

    e_image = generator_matrix("e", inst.m, inst.k, exact=False) @ vec
    e_residual = float(np.linalg.norm(e_image)) / norm

    eigenvalues, residuals = [], []
    for ham in hamiltonian_matrices(inst.z, inst.m, inst.k, exact=False):
        hv = ham.entries @ vec
        mu = _bilinear(gram, vec, hv) / s_norm if s_norm != 0 else complex("nan")
        eigenvalues.append(mu)
        residuals.append(float(np.linalg.norm(hv - mu * vec)) / norm)

    passed = e_residual < tol and all(r < tol for r in residuals)
    if not passed:
        details = {"e_residual": e_residual, "eigen_residuals": residuals}
        if raise_on_failure:
            raise VerificationError(f"Bethe vector checks failed (e residual {e_residual:.3e}, "
                                    f"eigen residual {max(residuals, default=0.0):.3e})", details)
        log(f"[yellow]Bethe vector checks failed: {details}[/yellow]")
    return BetheVector(
        v=v,
        source=point,
        eigenvalues=tuple(eigenvalues),
        e_residual=e_residual,
        eigen_residuals=tuple(residuals),
        shapovalov_norm=s_norm,
        passed=passed,
    )


def eigenvalue_sum_gap(bv: BetheVector, inst: ProblemInstance) -> float:
    """|sum_i mu_i - Rayleigh quotient of sum_i H_i|"""
    basis = weight_basis(inst.m, inst.k)
    vec = vector_to_array(bv.v, basis)
    gram = np.asarray(shapovalov_diagonal(inst.m, inst.k), dtype=float)
    total = sum(h.entries for h in hamiltonian_matrices(inst.z, inst.m, inst.k, exact=False))
    quotient = _bilinear(gram, vec, total @ vec) / bv.shapovalov_norm
    return abs(sum(bv.eigenvalues) - quotient)


def norm_identity_check(bv: BetheVector, inst: ProblemInstance) -> NormIdentityResult:
    """
    Compare S(v, v) with det of the Hessian of ln Phi at t0

    Args:
        bv: Bethe vector
        inst: Problem instance

    Returns:
        NormIdentityResult; degenerate points are flagged instead of judged
    """
    hess = hessian_ln_phi(list(bv.source.t), inst)
    det = complex(np.linalg.det(hess))
    cond = float(np.linalg.cond(hess))
    if det == 0 or cond > NORM_DEGENERATE_COND:
        log(f"[yellow]Hessian nearly singular (cond {cond:.3e}); norm identity not judged[/yellow]")
        return NormIdentityResult(relative_error=float("nan"), shapovalov_norm=bv.shapovalov_norm,
                                  hessian_det=det, degenerate=True)
    error = abs(bv.shapovalov_norm - det) / abs(det)
    return NormIdentityResult(relative_error=error, shapovalov_norm=bv.shapovalov_norm, hessian_det=det)


def exact_norm_identity(t: Sequence[Any], inst: ProblemInstance) -> Tuple[Fraction, Fraction]:
    """
    S(v, v) and the Hessian determinant at a rational critical point, exactly

    Args:
        t: Rational coordinates with zero exact residual
        inst: Problem instance with rational z

    Returns:
        (S(v, v), det)
    """
    tt = [Fraction(v) for v in t]
    if any(r != 0 for r in bethe_residual_exact(tt, inst)):
        raise VerificationError("Not an exact critical point", {"t": [str(v) for v in tt]})
    v = bethe_tensor(tt, inst)
    dims = inst.m
    s_norm = Fraction(0)
    for index, c in v.coeffs.items():
        weight = math.prod(
            math.prod(i * (a - i + 1) for i in range(1, j + 1)) for a, j in zip(dims, index)
        )
        s_norm += weight * c * c
    z = inst.config.exact
    k = len(tt)
    entries = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i != j:
                entries[i][j] = Fraction(2) / (tt[i] - tt[j]) ** 2
        entries[i][i] = sum((Fraction(ml) / (tt[i] - zl) ** 2 for ml, zl in zip(inst.m, z)), Fraction(0)) \
            - sum(entries[i][j] for j in range(k) if j != i)
    det = sympy.Matrix(k, k, lambda r, c: sympy.Rational(entries[r][c].numerator, entries[r][c].denominator)).det()
    det = sympy.Rational(det)
    return s_norm, Fraction(int(det.p), int(det.q))


def basis_check(orbits: Sequence[CriticalPoint], inst: ProblemInstance,
                vectors: Optional[Sequence[BetheVector]] = None) -> BasisCheck:
    """
    Whether the Bethe vectors form a basis of the singular weight space

    Args:
        orbits: One representative per critical orbit
        inst: Problem instance in the isolated-points regime
        vectors: Precomputed Bethe vectors (built when omitted)

    Returns:
        BasisCheck with the determinant of the coordinate matrix
    """
    regime = classify_regime(inst.m, inst.k)
    if regime.kind != RegimeKind.ISOLATED_POINTS:
        raise DomainError(f"Basis check needs isolated critical points, regime is {regime.kind.value}")
    if len(orbits) != regime.expected_count:
        raise DomainError(f"Found {len(orbits)} orbits, expected {regime.expected_count}; basis check skipped")
    basis = weight_basis(inst.m, inst.k)
    singular = singular_basis(inst.m, inst.k)
    B = np.stack([vector_to_array(s, basis) for s in singular], axis=1)
    if vectors is None:
        vectors = [bethe_vector(p, inst, raise_on_failure=False) for p in orbits]
    columns = []
    for bv in vectors:
        coords, *_ = np.linalg.lstsq(B, vector_to_array(bv.v, basis), rcond=None)
        columns.append(coords)
    C = np.stack(columns, axis=1)
    det = complex(np.linalg.det(C))
    product = float(np.prod([np.linalg.norm(c) for c in columns]))
    return BasisCheck(determinant=det, column_norm_product=product, is_basis=abs(det) > BASIS_THRESHOLD * product)


def fuchsian_round_trip(point: CriticalPoint, inst: ProblemInstance, tol: float = VERIFY_TOL,
                        seed: int = 0) -> RoundTripResult:
    """
    Associated equation, polynomial solution space and dual critical point of an orbit

    Args:
        point: Critical point
        inst: Problem instance
        tol: Tolerance for the Wronskian and the dual residual
        seed: Seed for the random solution combinations

    Returns:
        RoundTripResult (never raises on a failed check; the reason is recorded)
    """
    lam = recognize_rational(point, inst.config.exact, inst.m) if inst.config.exact is not None else None
    try:
        if lam is not None:
            equation = associated_equation(point, inst.config.exact, inst.m, exact=True, lam=lam)
        else:
            equation = associated_equation(point, inst.z, inst.m)
    except VerificationError as e:
        return RoundTripResult(equation=None, reason=str(e))

    table = exponents(equation)
    expected = expected_exponents(inst.m, inst.k)
    if equation.exact:
        exponents_ok = table.finite == expected.finite and tuple(table.infinity) == tuple(expected.infinity)
    else:
        got = [complex(v) for pair in table.finite for v in pair] + [complex(v) for v in table.infinity]
        want = [complex(v) for pair in expected.finite for v in pair] + [complex(v) for v in expected.infinity]
        exponents_ok = bool(np.allclose(got, want, rtol=0, atol=1e-6))
    exponents_ok = exponents_ok and table.fuchs_ok

    try:
        space = verify_all_polynomial(equation, inst.k, tol=tol, seed=seed)
    except VerificationError as e:
        return RoundTripResult(equation=equation, exact=equation.exact, exponents_ok=exponents_ok, reason=str(e))

    roots, residual = dual_critical_point(space, equation, seed=seed)
    report = nondegenerate_check(space, inst.z)
    reason = ""
    if roots is None:
        reason = "dual solution has a repeated root or a root on z; dual check skipped"
        passed = exponents_ok
    else:
        passed = exponents_ok and residual < tol
        if residual >= tol:
            reason = f"dual residual {residual:.3e} exceeds {tol:.1e}"
    if not exponents_ok:
        reason = reason or "exponent table mismatch"
    return RoundTripResult(
        equation=equation,
        space=space,
        exact=equation.exact,
        exponents_ok=exponents_ok,
        dual_roots=tuple(complex(r) for r in roots) if roots is not None else None,
        dual_residual=residual if roots is not None else None,
        nondegenerate=report,
        passed=passed,
        reason=reason,
    )
