"""
Tests for the Casimir operator and the Gaudin Hamiltonians
"""
import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy

from src.bethe_fuchs.gaudin import (
    casimir_matrix,
    casimir_pair,
    commutator,
    hamiltonian_matrices,
    hamiltonian_matrix,
    is_shapovalov_symmetric,
)
from src.bethe_fuchs.representation import basis_vector, generator_matrix, shapovalov_gram, singular_basis
from src.common.exceptions import DomainError

Z3 = (Fraction(0), Fraction(1, 2), Fraction(3))


def sweep():
    for m in itertools.product(range(1, 3), repeat=3):
        for k in range(0, 4):
            if 2 * k <= sum(m) + 2:
                yield m, k


class TestCasimir:
    def test_highest_weight_pair(self):
        top = basis_vector((2, 3), (0, 0))
        assert casimir_pair(top, 0, 1).coeffs == {(0, 0): Fraction(3)}

    def test_lowered_first_factor(self):
        image = casimir_pair(basis_vector((1, 1), (1, 0)), 0, 1)
        assert image.coeffs == {(1, 0): Fraction(-1, 2), (0, 1): Fraction(1)}

    def test_singular_vector_eigenvalue(self):
        v = basis_vector((1, 1), (1, 0)) - basis_vector((1, 1), (0, 1))
        assert casimir_pair(v, 0, 1) == v.scaled(Fraction(-3, 2))

    def test_symmetric_in_factors(self):
        for m, k in sweep():
            assert casimir_matrix(m, k, 0, 2) == casimir_matrix(m, k, 2, 0)

    def test_same_factor_rejected(self):
        with pytest.raises(DomainError):
            casimir_pair(basis_vector((1, 1), (1, 0)), 1, 1)

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            casimir_pair(basis_vector((1, 1), (1, 0)), 0, 2)


class TestHamiltonians:
    def test_two_site_matrix(self):
        h1 = hamiltonian_matrix(0, (0, 1), (1, 1), 1)
        assert h1.exact
        assert h1.basis == ((0, 1), (1, 0))
        # column of f v (x) v is (-1, 1/2) over the basis ((0,1), (1,0))
        assert h1.entries == sympy.Matrix([[sympy.Rational(1, 2), -1], [-1, sympy.Rational(1, 2)]])

    def test_two_sites_are_opposite(self):
        h1, h2 = hamiltonian_matrices((0, Fraction(5, 2)), (2, 3), 2)
        assert h1.entries == -h2.entries

    def test_eigenvalue_on_singular_vector(self):
        h1 = hamiltonian_matrix(0, (0, 1), (1, 1), 1).entries
        (v,) = singular_basis((1, 1), 1)
        column = sympy.Matrix([sympy.Rational(v.coefficient(j).numerator, v.coefficient(j).denominator)
                               for j in ((0, 1), (1, 0))])
        assert h1 * column == sympy.Rational(3, 2) * column

    def test_coincident_points_rejected(self):
        with pytest.raises(DomainError):
            hamiltonian_matrix(0, (0, 0, 1), (1, 1, 1), 1)

    def test_length_mismatch_rejected(self):
        with pytest.raises(DomainError):
            hamiltonian_matrix(0, (0, 1), (1, 1, 1), 1)

    def test_float_mode_matches_exact(self):
        exact = hamiltonian_matrix(1, Z3, (2, 1, 2), 2).entries
        numeric = hamiltonian_matrix(1, [complex(v) for v in Z3], (2, 1, 2), 2).entries
        assert np.allclose(np.asarray(exact.evalf(), dtype=complex), numeric)

    def test_commuting_family(self):
        for m, k in sweep():
            hs = [h.entries for h in hamiltonian_matrices(Z3, m, k)]
            for a, b in itertools.combinations(hs, 2):
                assert commutator(a, b).is_zero_matrix, (m, k)

    def test_commute_with_e_and_h(self):
        for m, k in sweep():
            if k == 0:
                continue
            e = generator_matrix("e", m, k)
            h = generator_matrix("h", m, k)
            upper = hamiltonian_matrices(Z3, m, k - 1)
            for lower, up in zip(hamiltonian_matrices(Z3, m, k), upper):
                assert e * lower.entries == up.entries * e, (m, k)
                assert commutator(lower.entries, h).is_zero_matrix, (m, k)

    def test_shapovalov_symmetry(self):
        for m, k in sweep():
            gram = shapovalov_gram(m, k)
            for h in hamiltonian_matrices(Z3, m, k):
                assert is_shapovalov_symmetric(h.entries, gram), (m, k, h.i)

    def test_sum_vanishes(self):
        total = sum((h.entries for h in hamiltonian_matrices(Z3, (1, 2, 2), 2)), sympy.zeros(5, 5))
        assert total.is_zero_matrix
