#!/usr/bin/env python3
"""
Casimir operator and Gaudin Hamiltonians on weight subspaces
"""
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import sympy

from .models import Configuration, ExponentVector, HamiltonianMatrix, TensorVector, WeightIndex
from .polynomial import to_sympy_rational
from .representation import _act_on_factor, as_matrix, basis_vector, weight_basis
from ..common.exceptions import DomainError
from ..common.numeric_utils import require_distinct


def _casimir_on_basis(index: WeightIndex, dims: Sequence[int], i: int, j: int) -> Dict[WeightIndex, Fraction]:
    """Omega^{(i,j)} = 1/2 h (x) h + e (x) f + f (x) e applied to f_J v"""
    out: Dict[WeightIndex, Fraction] = {}
    h_i = dims[i] - 2 * index[i]
    h_j = dims[j] - 2 * index[j]
    if h_i * h_j:
        out[index] = Fraction(h_i * h_j, 2)
    for up, down in ((i, j), (j, i)):
        raised = _act_on_factor("e", dims[up], index[up])
        lowered = _act_on_factor("f", dims[down], index[down])
        if raised is None or lowered is None:
            continue
        target = list(index)
        target[up], target[down] = raised[0], lowered[0]
        target = tuple(target)
        out[target] = out.get(target, Fraction(0)) + raised[1] * lowered[1]
    return {key: c for key, c in out.items() if c != 0}


def casimir_pair(v: TensorVector, i: int, j: int, m: Any = None) -> TensorVector:
    """
    Apply Omega in the factors (i, j), identity elsewhere

    Args:
        v: Vector in L^{(x)m}
        i: First factor (0-based)
        j: Second factor (0-based), j != i
        m: Exponents (defaults to v.m)

    Returns:
        Omega^{(i,j)} v
    """
    dims = ExponentVector.of(m).ints() if m is not None else v.m
    if i == j:
        raise DomainError(f"Casimir needs two distinct factors, got i = j = {i}")
    if not (0 <= i < len(dims) and 0 <= j < len(dims)):
        raise DomainError(f"Factor indices ({i}, {j}) out of range for n={len(dims)}")
    out: Dict[WeightIndex, Any] = {}
    for index, coeff in v.coeffs.items():
        for target, c in _casimir_on_basis(index, dims, i, j).items():
            out[target] = out.get(target, 0) + c * coeff
    return TensorVector(m=tuple(dims), k=v.k, coeffs={key: c for key, c in out.items() if c != 0})


def casimir_matrix(m: Any, k: int, i: int, j: int, exact: bool = True) -> Any:
    """Matrix of Omega^{(i,j)} on weight_basis(m, k)"""
    basis = weight_basis(m, k)
    dims = ExponentVector.of(m).ints()
    position = {index: r for r, index in enumerate(basis)}
    rows: List[List[Any]] = [[Fraction(0)] * len(basis) for _ in basis]
    for col, index in enumerate(basis):
        image = casimir_pair(basis_vector(dims, index), i, j, dims)
        for target, c in image.coeffs.items():
            rows[position[target]][col] = c
    return as_matrix(rows, exact, (len(basis), len(basis)))


def hamiltonian_matrix(i: int, z: Any, m: Any, k: int, exact: Optional[bool] = None) -> HamiltonianMatrix:
    """
    Matrix of H_i(z) = sum_{j != i} Omega^{(i,j)} / (z_i - z_j)

    Args:
        i: Site (0-based)
        z: Configuration or sequence of points
        m: Positive integer exponents
        k: Depth
        exact: Force the scalar kind; defaults to exact when z is rational

    Returns:
        HamiltonianMatrix over weight_basis(m, k)
    """
    config = Configuration.of(z) if not isinstance(z, Configuration) else z
    require_distinct(config.z)
    dims = ExponentVector.of(m).ints()
    if len(dims) != config.n:
        raise DomainError(f"len(m)={len(dims)} does not match len(z)={config.n}")
    if exact is None:
        exact = config.exact is not None
    points = config.values(exact)
    basis = tuple(weight_basis(dims, k))
    size = len(basis)
    if exact:
        total = sympy.zeros(size, size)
        for j in range(len(dims)):
            if j != i:
                total += casimir_matrix(dims, k, i, j, exact=True) / to_sympy_rational(points[i] - points[j])
    else:
        total = np.zeros((size, size), dtype=complex)
        for j in range(len(dims)):
            if j != i:
                total += casimir_matrix(dims, k, i, j, exact=False) / (points[i] - points[j])
    return HamiltonianMatrix(i=i, entries=total, exact=exact, basis=basis)


def hamiltonian_matrices(z: Any, m: Any, k: int, exact: Optional[bool] = None) -> List[HamiltonianMatrix]:
    """H_1(z), ..., H_n(z)"""
    n = ExponentVector.of(m).n
    return [hamiltonian_matrix(i, z, m, k, exact) for i in range(n)]


def commutator(a: Any, b: Any) -> Any:
    """[A, B] = AB - BA for sympy or numpy matrices"""
    if isinstance(a, sympy.MatrixBase):
        return a * b - b * a
    return a @ b - b @ a


def is_shapovalov_symmetric(h: Any, gram: Any) -> bool:
    """S(Hx, y) == S(x, Hy), i.e. H^T S == S H (exact for sympy input)"""
    if isinstance(h, sympy.MatrixBase):
        return (h.T * gram - gram * h).is_zero_matrix
    return bool(np.allclose(h.T @ gram, gram @ h, rtol=1e-10, atol=1e-12))
