"""
Tests for Fuchsian equations and their polynomial solutions
"""
from fractions import Fraction

import numpy as np
import pytest

from src.bethe_fuchs.fuchsian import (
    associated_equation,
    build_fg,
    count_nondegenerate_spaces,
    count_univalued_equations,
    dual_critical_point,
    equation_distance,
    expected_exponents,
    exponents,
    indicial_roots,
    nondegenerate_check,
    polynomial_solutions,
    recognize_rational,
    verify_all_polynomial,
    wronskian,
)
from src.bethe_fuchs.master_function import canonical_orbit, roots_from_lambda
from src.bethe_fuchs.models import FuchsianEquation, SolutionSpace
from src.bethe_fuchs.polynomial import Polynomial
from src.common.exceptions import DomainError, VerificationError

HALF = Fraction(1, 2)
Z2 = (Fraction(0), Fraction(1))


@pytest.fixture
def worked_equation():
    """x(x - 1) u'' - (2x - 1) u' + 2u = 0"""
    return associated_equation([HALF], Z2, (1, 1), exact=True)


def space_of(u1, u2):
    return SolutionSpace(u1=u1, u2=u2, wronskian=wronskian(u1, u2).monic(), k1=u1.degree, k2=u2.degree)


class TestBuildFG:
    def test_two_points(self):
        F, G = build_fg(Z2, (1, 1))
        assert F.coeffs == (0, -1, 1)
        assert G.coeffs == (1, -2)

    def test_three_points(self):
        F, G = build_fg((0, 1, 3), (1, 1, 1))
        assert F == Polynomial.from_roots([0, 1, 3])
        assert G.coeffs == (-3, 8, -3)

    def test_float_mode(self):
        F, G = build_fg((0, 1, 2j), (2, 1, 1))
        assert not F.exact
        assert G(0.5) == pytest.approx(-F(0.5) * (2 / 0.5 + 1 / (0.5 - 1) + 1 / (0.5 - 2j)))

    def test_coincident_points(self):
        with pytest.raises(DomainError):
            build_fg((0, 0), (1, 1))


class TestAssociatedEquation:
    def test_worked_instance(self, worked_equation):
        assert worked_equation.exact
        assert worked_equation.H.coeffs == (2,)
        assert worked_equation.k == 1

    def test_three_points_quotient(self):
        c = 2.0
        z = (0.0, 1.0, c)
        alpha = (3 + np.sqrt(3)) / 3
        e = associated_equation([alpha], z, (1, 1, 1))
        _, G = build_fg(z, (1, 1, 1))
        expected, _ = (-G).divmod(Polynomial([-alpha, 1], exact=False))
        assert np.allclose(e.H.array(), expected.array())
        assert e.H.degree <= 1

    def test_not_a_critical_point(self):
        with pytest.raises(VerificationError):
            associated_equation([Fraction(1, 4)], Z2, (1, 1), exact=True)
        with pytest.raises(VerificationError):
            associated_equation([0.25], (0.0, 1.0), (1, 1))

    def test_lambda_input(self):
        e = associated_equation(None, Z2, (2, 2), exact=True, lam=(Fraction(1), Fraction(1, 3)))
        assert e.k == 2
        assert e.H.degree <= 0


class TestExponents:
    def test_indicial_roots(self):
        assert indicial_roots(-3, 0) == (0, 4)
        assert indicial_roots(1, 0) == (0, 0)
        low, high = indicial_roots(0.5, 1.0)
        assert complex(low) + complex(high) == pytest.approx(0.5)

    def test_expected_table(self):
        table = expected_exponents((1, 1), 1)
        assert table.finite == [(0, 2), (0, 2)]
        assert table.infinity == (-2, -1)
        assert table.fuchs_ok

    def test_computed_table(self, worked_equation):
        table = exponents(worked_equation)
        assert table.finite == [(0, 2), (0, 2)]
        assert table.infinity == (-2, -1)
        assert table.fuchs_sum == 1
        assert table.fuchs_ok

    def test_float_table_satisfies_fuchs_relation(self):
        alpha = (3 - np.sqrt(3)) / 3
        table = exponents(associated_equation([alpha], (0.0, 1.0, 2.0), (1, 1, 1)))
        assert table.fuchs_ok
        assert sorted(complex(v).real for v in table.infinity) == pytest.approx([-3, -1])


class TestPolynomialSolutions:
    def test_degree_one(self, worked_equation):
        (u,) = polynomial_solutions(worked_equation, 1)
        assert u == Polynomial([-HALF, 1])

    def test_degree_two(self, worked_equation):
        basis = polynomial_solutions(worked_equation, 2)
        assert basis == [Polynomial([-HALF, 1]), Polynomial([0, 0, 1])]

    def test_perturbed_equation_has_no_linear_solution(self, worked_equation):
        wrong = FuchsianEquation(F=worked_equation.F, G=worked_equation.G, H=Polynomial([3]),
                                 z=Z2, m=(1, 1), k=1, exact=True)
        assert polynomial_solutions(wrong, 1) == []

    def test_float_solutions(self):
        e = associated_equation([0.5], (0.0, 1.0), (1, 1))
        basis = polynomial_solutions(e, 2)
        assert [p.degree for p in basis] == [1, 2]
        assert np.allclose(basis[0].array(), [-0.5, 1])
        assert np.allclose(basis[1].array(), [0, 0, 1], atol=1e-10)


class TestSolutionSpace:
    def test_worked_space(self, worked_equation):
        space = verify_all_polynomial(worked_equation)
        assert space.u1 == Polynomial([0, 0, 1])
        assert space.u2 == Polynomial([-HALF, 1])
        assert space.wronskian == Polynomial([0, -1, 1])
        assert (space.k1, space.k2) == (2, 1)
        assert space.wronskian_error == 0.0

    def test_missing_second_solution(self, worked_equation):
        wrong = FuchsianEquation(F=worked_equation.F, G=worked_equation.G, H=Polynomial([2]),
                                 z=Z2, m=(1, 2), k=1, exact=True)
        with pytest.raises(VerificationError):
            verify_all_polynomial(wrong)

    def test_float_three_point_space(self):
        alpha = (3 + np.sqrt(3)) / 3
        e = associated_equation([alpha], (0.0, 1.0, 2.0), (1, 1, 1))
        space = verify_all_polynomial(e)
        assert (space.k1, space.k2) == (3, 1)
        assert space.u2.roots()[0] == pytest.approx(alpha)
        assert space.wronskian_error < 1e-8

    def test_nondegenerate(self):
        x2 = Polynomial([0, 0, 1])
        assert nondegenerate_check(space_of(x2, Polynomial([-HALF, 1])), Z2).ok

    def test_common_zero(self):
        report = nondegenerate_check(space_of(Polynomial([0, 0, 1]), Polynomial([0, 1])), Z2)
        assert not report.ok
        assert "basis has a common zero" in report.reasons

    def test_root_on_configuration(self):
        report = nondegenerate_check(space_of(Polynomial([0, 0, 1]), Polynomial([-1, 1])), Z2)
        assert not report.ok
        assert report.reasons == ["u2 has a root at z_2"]

    def test_dual_point_lies_on_the_line(self, worked_equation):
        space = verify_all_polynomial(worked_equation)
        roots, residual = dual_critical_point(space, worked_equation, seed=3)
        assert roots is not None
        assert len(roots) == 2
        assert residual < 1e-10


class TestRecognition:
    def test_rational_orbit(self):
        point = canonical_orbit(roots_from_lambda((1.0, 1 / 3)))
        assert recognize_rational(point, Z2, (2, 2)) == [Fraction(1), Fraction(1, 3)]

    def test_irrational_orbit(self):
        point = canonical_orbit([(3 + np.sqrt(3)) / 3])
        assert recognize_rational(point, (0, 1, 2), (1, 1, 1)) is None

    def test_float_configuration(self):
        point = canonical_orbit([0.5])
        assert recognize_rational(point, (0.0, 1.0), (1, 1)) is None


class TestCounts:
    def test_three_points_dual(self):
        finite = [(0, 2)] * 3
        assert count_univalued_equations(finite, (-3, -1)) == 2

    def test_equal_exponents_at_infinity(self):
        assert count_univalued_equations([(0, 2)] * 3, (-2, -2)) == 0

    def test_two_points(self):
        for m1, m2 in ((2, 3), (4, 4), (1, 5)):
            for k in range(1, min(m1, m2) + 1):
                table = expected_exponents((m1, m2), k)
                assert count_univalued_equations(table.finite, table.infinity) == 1

    def test_fuchs_relation_enforced(self):
        with pytest.raises(DomainError):
            count_univalued_equations([(0, 2)] * 3, (-3, 0))

    def test_nondegenerate_spaces(self):
        assert count_nondegenerate_spaces((1, 1, 1), 3, 1) == 2
        assert count_nondegenerate_spaces((1, 1), 2, 1) == 1
        with pytest.raises(DomainError):
            count_nondegenerate_spaces((1, 1), 3, 1)
        with pytest.raises(DomainError):
            count_nondegenerate_spaces((1, 1), 1, 2)

    def test_equation_distance(self, worked_equation):
        assert equation_distance(worked_equation, worked_equation) == 0.0
