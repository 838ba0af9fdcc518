#!/usr/bin/env python3
"""
Exact sl2 representation theory on tensor products L_{m_1} (x) ... (x) L_{m_n}

Weight bases, generator actions, Shapovalov forms, singular vectors and the
combinatorial counts w(m, k), d(m, k) and the alternating binomial sum.
All arithmetic is exact (int / Fraction / sympy Rational).
"""
import itertools
import math
import random
from fractions import Fraction
from typing import Any, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .models import ExponentVector, GoodPairReport, TensorVector, WeightIndex
from .polynomial import from_sympy_rational, to_sympy_rational
from ..common.exceptions import DomainError

GENERATORS = ("e", "f", "h")


def _bound(entry: Fraction, k: int) -> int:
    """Largest j_l allowed at weight depth k (unbounded for non-dominant entries)"""
    if entry.denominator == 1 and entry >= 0:
        return min(int(entry), k)
    return k


def _compositions(bounds: Sequence[int], k: int) -> Iterator[WeightIndex]:
    """J with sum k and 0 <= j_l <= bounds[l], in ascending lexicographic order"""
    if not bounds:
        if k == 0:
            yield ()
        return
    rest_capacity = sum(bounds[1:])
    low = max(0, k - rest_capacity)
    for j in range(low, min(bounds[0], k) + 1):
        for tail in _compositions(bounds[1:], k - j):
            yield (j,) + tail


def weight_basis(m: Any, k: int) -> List[WeightIndex]:
    """
    Basis labels of the weight subspace L^{(x)m}[l(m) - 2k]

    Args:
        m: Exponents (nonnegative integers bound j_l)
        k: Depth below the highest weight

    Returns:
        All J with sum(J) = k and 0 <= j_l <= m_l, lexicographically ascending
    """
    if k < 0:
        return []
    exps = ExponentVector.of(m)
    return list(_compositions([_bound(e, k) for e in exps.entries], k))


def weight_space_dim(m: Any, k: int) -> int:
    """dim L^{(x)m}[l(m) - 2k] (0 for k < 0)"""
    return len(weight_basis(m, k))


def difference_d(m: Any, k: int) -> int:
    """d(m, k) = dim[l(m) - 2k] - dim[l(m) - 2k + 2]; may be negative"""
    return weight_space_dim(m, k) - weight_space_dim(m, k - 1)


def multiplicity_w(m: Any, k: int) -> int:
    """
    Multiplicity of L_{l(m)-2k} in L_{m_1} (x) ... (x) L_{m_n}

    Args:
        m: Nonnegative integer exponents
        k: Depth (nonnegative)

    Returns:
        w(m, k), zero when l(m) - 2k < 0
    """
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    exps = ExponentVector.of(m)
    if not exps.is_nonnegative_integral:
        raise DomainError(f"w(m, k) needs nonnegative integer exponents, got {exps.display()}")
    if exps.total - 2 * k < 0:
        return 0
    return difference_d(exps, k)


def _binomial(p: int, q: int) -> int:
    # C(p, -1) only appears for n = 1, where it is the indicator of p = -1
    if q == -1:
        return 1 if p == -1 else 0
    if p < 0 or p < q:
        return 0
    return math.comb(p, q)


def sharp_count(k: int, n: int, int_exponents: Sequence[int]) -> int:
    """
    Alternating binomial sum over subsets of the integral exponents

    Args:
        k: Depth
        n: Number of tensor factors
        int_exponents: The integral exponents m_1, ..., m_a (a <= n)

    Returns:
        sum_q (-1)^q sum_{i_1<...<i_q} C(k + n - 2 - m_{i_1} - ... - m_{i_q} - q, n - 2)
    """
    exps = [int(e) for e in int_exponents]
    if len(exps) > n:
        raise DomainError(f"a={len(exps)} integral exponents exceed n={n}")
    total = 0
    for q in range(len(exps) + 1):
        sign = -1 if q % 2 else 1
        for subset in itertools.combinations(exps, q):
            total += sign * _binomial(k + n - 2 - sum(subset) - q, n - 2)
    return total


def _act_on_factor(g: str, a: int, j: int) -> Optional[Tuple[int, int]]:
    """Action of g on f^j v_a: (new j, integer coefficient) or None when zero"""
    if g == "e":
        if j == 0:
            return None
        return j - 1, j * (a - j + 1)
    if g == "f":
        if j + 1 > a:
            return None
        return j + 1, 1
    if g == "h":
        return j, a - 2 * j
    raise DomainError(f"Unknown generator {g!r}; expected one of {GENERATORS}")


def _target_depth(g: str, k: int) -> int:
    return {"e": k - 1, "f": k + 1, "h": k}[g]


def apply_generator(g: str, v: TensorVector, m: Any = None) -> TensorVector:
    """
    Apply e, f or h (acting through the coproduct) to a tensor vector

    Args:
        g: "e", "f" or "h"
        v: Vector in a weight space of L^{(x)m}
        m: Exponents (defaults to v.m)

    Returns:
        Image vector (exact when v is exact)
    """
    dims = tuple(ExponentVector.of(m).ints()) if m is not None else v.m
    if g not in GENERATORS:
        raise DomainError(f"Unknown generator {g!r}; expected one of {GENERATORS}")
    out = {}
    for index, coeff in v.coeffs.items():
        if coeff == 0:
            continue
        if g == "h":
            eigen = sum(a - 2 * j for a, j in zip(dims, index))
            if eigen:
                out[index] = out.get(index, 0) + eigen * coeff
            continue
        for pos, (a, j) in enumerate(zip(dims, index)):
            action = _act_on_factor(g, a, j)
            if action is None:
                continue
            new_j, factor = action
            target = index[:pos] + (new_j,) + index[pos + 1:]
            out[target] = out.get(target, 0) + factor * coeff
    return TensorVector(m=dims, k=_target_depth(g, v.k), coeffs={j: c for j, c in out.items() if c != 0})


def basis_vector(m: Any, index: WeightIndex, coeff: Any = 1) -> TensorVector:
    """The vector coeff * f_J v"""
    dims = ExponentVector.of(m).ints()
    return TensorVector(m=dims, k=sum(index), coeffs={tuple(index): coeff})


def vector_to_array(v: TensorVector, basis: Sequence[WeightIndex], exact: bool = False) -> Any:
    """Coefficient column over an ordered basis (sympy Matrix or complex ndarray)"""
    values = [v.coefficient(j) for j in basis]
    if exact:
        return sympy.Matrix([to_sympy_rational(c) for c in values])
    return np.asarray([complex(c) for c in values], dtype=complex)


def vector_from_array(m: Any, k: int, basis: Sequence[WeightIndex], values: Sequence[Any]) -> TensorVector:
    """Inverse of vector_to_array"""
    dims = ExponentVector.of(m).ints()
    coeffs = {tuple(j): c for j, c in zip(basis, values) if c != 0}
    return TensorVector(m=dims, k=k, coeffs=coeffs)


def as_matrix(rows: List[List[Any]], exact: bool, shape: Tuple[int, int]) -> Any:
    """Wrap nested rows as a sympy Matrix (exact) or a complex ndarray"""
    if exact:
        if not (shape[0] and shape[1]):
            return sympy.zeros(*shape)
        return sympy.Matrix(shape[0], shape[1], [to_sympy_rational(c) for row in rows for c in row])
    return np.asarray([[complex(c) for c in row] for row in rows], dtype=complex).reshape(shape)


def generator_matrix(g: str, m: Any, k: int, exact: bool = True) -> Any:
    """
    Matrix of g from weight depth k to its target depth

    Args:
        g: "e", "f" or "h"
        m: Nonnegative integer exponents
        k: Source depth
        exact: sympy Matrix when True, complex ndarray otherwise

    Returns:
        Matrix with rows over weight_basis(m, k') and columns over weight_basis(m, k)
    """
    source = weight_basis(m, k)
    target = weight_basis(m, _target_depth(g, k))
    position = {j: r for r, j in enumerate(target)}
    rows = [[0] * len(source) for _ in target]
    for col, index in enumerate(source):
        image = apply_generator(g, basis_vector(m, index), m)
        for j, c in image.coeffs.items():
            rows[position[j]][col] = c
    return as_matrix(rows, exact, (len(target), len(source)))


def shapovalov_weight(a: int, j: int) -> int:
    """S_a(f^j v_a, f^j v_a) = prod_{i=1}^{j} i (a - i + 1)"""
    value = 1
    for i in range(1, j + 1):
        value *= i * (a - i + 1)
    return value


def shapovalov_diagonal(m: Any, k: int) -> List[int]:
    """Diagonal of the tensor Shapovalov form on weight_basis(m, k)"""
    dims = ExponentVector.of(m).ints()
    return [math.prod(shapovalov_weight(a, j) for a, j in zip(dims, index)) for index in weight_basis(m, k)]


def shapovalov_gram(m: Any, k: int, exact: bool = True) -> Any:
    """
    Gram matrix of S = S_{m_1} (x) ... (x) S_{m_n} on weight_basis(m, k)

    Args:
        m: Positive integer exponents
        k: Depth
        exact: sympy Matrix when True, complex ndarray otherwise

    Returns:
        Diagonal matrix with positive entries
    """
    diag = shapovalov_diagonal(m, k)
    if exact:
        return sympy.diag(*diag) if diag else sympy.zeros(0, 0)
    return np.diag(np.asarray(diag, dtype=complex))


def shapovalov_form(x: TensorVector, y: TensorVector) -> Any:
    """Bilinear S(x, y); vectors of different weights are orthogonal"""
    if x.m != y.m:
        raise DomainError("Vectors live in different tensor products")
    if x.k != y.k:
        return 0
    total = 0
    for index, cx in x.coeffs.items():
        cy = y.coefficient(index)
        if cy:
            total += math.prod(shapovalov_weight(a, j) for a, j in zip(x.m, index)) * cx * cy
    return total


def singular_basis(m: Any, k: int) -> List[TensorVector]:
    """
    Exact basis of Sing(L^{(x)m})_k = ker(e) on the weight space l(m) - 2k

    Args:
        m: Positive integer exponents
        k: Depth

    Returns:
        Fraction-valued vectors; empty when l(m) - 2k < 0
    """
    exps = ExponentVector.of(m)
    if k < 0 or exps.total - 2 * k < 0:
        return []
    basis = weight_basis(exps, k)
    if k == 0:
        return [vector_from_array(exps, 0, basis, [Fraction(1)])]
    kernel = generator_matrix("e", exps, k, exact=True).nullspace()
    return [vector_from_array(exps, k, basis, [from_sympy_rational(c) for c in vec]) for vec in kernel]


def _has_integer_block_sum(values: Sequence[Fraction]) -> bool:
    for i in range(len(values)):
        acc = Fraction(0)
        for j in range(i, len(values)):
            acc += values[j]
            if acc.denominator == 1:
                return True
    return False


def classify_good_pair(m: Any, k: int) -> GoodPairReport:
    """
    Decide whether {m, k} is a good pair

    Args:
        m: Rational exponents
        k: Integer depth

    Returns:
        GoodPairReport with the block sizes (a, b, c) and the reordering used
    """
    exps = ExponentVector.of(m).entries
    integral = [i for i, e in enumerate(exps) if e.denominator == 1 and e >= 0]
    fractional = [i for i, e in enumerate(exps) if e.denominator != 1 and e > 0]
    negative = [i for i, e in enumerate(exps) if e.denominator == 1 and e < 0]
    partition = (len(integral), len(fractional), len(negative))

    if sum(exps, Fraction(0)) < 2 * k:
        return GoodPairReport(is_good=False, partition=partition, reason="l(m) < 2k")
    if len(integral) + len(fractional) + len(negative) != len(exps):
        return GoodPairReport(is_good=False, partition=partition, reason="negative non-integer exponent")

    for order in itertools.permutations(fractional):
        if not _has_integer_block_sum([exps[i] for i in order]):
            return GoodPairReport(
                is_good=True,
                partition=partition,
                witness=tuple(integral) + tuple(order) + tuple(negative),
            )
    return GoodPairReport(is_good=False, partition=partition,
                          reason="every ordering of the non-integer block has an integral consecutive sum")


def induction_step_holds(m: Sequence[Any], j: int, p: int, k: int) -> Optional[bool]:
    """
    Check the induction step on good pairs for one instance

    Args:
        m: Exponents; entry j is replaced by p - 1
        j: Position (0-based)
        p: Positive integer with p < k
        k: Depth

    Returns:
        None when the premise fails, otherwise whether the reduced pair is good
    """
    if not 1 <= p < k:
        return None
    premise = list(ExponentVector.of(m).entries)
    premise[j] = Fraction(p - 1)
    if not classify_good_pair(premise, k).is_good:
        return None
    reduced = premise[:j] + premise[j + 1:] + [Fraction(-p - 1)]
    return classify_good_pair(reduced, k - p).is_good


def random_exponents(rng: random.Random, n: int) -> List[Fraction]:
    """Random mix of positive integers, positive non-integers and negative integers"""
    out = []
    for _ in range(n):
        kind = rng.random()
        if kind < 0.5:
            out.append(Fraction(rng.randint(0, 5)))
        elif kind < 0.8:
            out.append(Fraction(rng.randint(1, 19), rng.choice([2, 3, 5, 7])))
        else:
            out.append(Fraction(-rng.randint(1, 4)))
    return out
