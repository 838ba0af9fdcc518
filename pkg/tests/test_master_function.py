"""
Tests for the master function, its derivatives and the regime classifier
"""
from fractions import Fraction

import numpy as np
import pytest

from src.bethe_fuchs.master_function import (
    bethe_residual,
    bethe_residual_exact,
    canonical_orbit,
    classify_regime,
    dedup_orbits,
    elementary_symmetric,
    hessian_ln_phi,
    log_abs_master,
    n2_closed_form,
    relative_residual,
    roots_from_lambda,
    same_orbit,
)
from src.bethe_fuchs.models import ProblemInstance, RegimeKind
from src.common.exceptions import ArrangementError, DomainError


def safe_point(rng, z, k, gap=0.2):
    while True:
        t = rng.uniform(-1.5, 2.5, k) + 1j * rng.uniform(-1.0, 1.0, k)
        pts = list(t) + list(z)
        dist = min(abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
        if dist > gap:
            return t


class TestResidual:
    def test_symmetric_point(self):
        inst = ProblemInstance.create((1, 1), 1, (0, 1))
        assert bethe_residual_exact([Fraction(1, 2)], inst) == [0]
        assert abs(bethe_residual([0.5], inst)[0]) < 1e-15

    def test_direct_evaluation(self):
        inst = ProblemInstance.create((1, 1), 1, (0, 1))
        assert bethe_residual_exact([Fraction(1, 4)], inst) == [Fraction(-8, 3)]
        assert bethe_residual([0.25], inst)[0] == pytest.approx(-8 / 3)

    @pytest.mark.parametrize("c", [2, 0.3 + 0.8j, -1.7])
    def test_three_points_quadratic(self, c):
        inst = ProblemInstance.create((1, 1, 1), 1, (0, 1, c))
        for root in np.roots([3, -2 * (c + 1), c]):
            r = bethe_residual([root], inst)
            assert relative_residual(np.asarray([root]), np.asarray([0, 1, c], dtype=complex),
                                     np.ones(3)) < 1e-12
            assert abs(r[0]) < 1e-10

    def test_arrangement_violation_names_pair(self):
        inst = ProblemInstance.create((1, 1), 1, (0, 1))
        with pytest.raises(ArrangementError) as info:
            bethe_residual_exact([Fraction(0)], inst)
        assert info.value.pair == ("t_1", "z_1")
        with pytest.raises(ArrangementError):
            bethe_residual([0.25, 0.25], inst.with_k(2))

    def test_wrong_length(self):
        inst = ProblemInstance.create((1, 1), 2, (0, 1))
        with pytest.raises(DomainError):
            bethe_residual([0.3], inst)

    def test_gradient_of_log_master(self):
        rng = np.random.default_rng(11)
        z = (0, 1, 0.5 + 1.2j)
        inst = ProblemInstance.create((2, 1, 3), 2, z)
        h = 1e-5
        for _ in range(100):
            t = safe_point(rng, [complex(v) for v in z], 2)
            r = bethe_residual(list(t), inst)
            for i in range(2):
                step = np.zeros(2)
                step[i] = h
                fd = (log_abs_master(t + step, inst) - log_abs_master(t - step, inst)) / (2 * h)
                assert fd == pytest.approx(r[i].real, abs=1e-6 * max(1.0, abs(r[i])))

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(5)
        inst = ProblemInstance.create((1, 2, 1), 3, (0, 1, -1j))
        for _ in range(20):
            t = safe_point(rng, [0, 1, -1j], 3)
            perm = rng.permutation(3)
            assert np.allclose(bethe_residual(list(t[perm]), inst), bethe_residual(list(t), inst)[perm],
                               rtol=1e-13, atol=1e-13)


class TestHessian:
    def test_single_variable(self):
        inst = ProblemInstance.create((1, 1), 1, (0, 1))
        hess = hessian_ln_phi([0.5], inst)
        assert hess.shape == (1, 1)
        assert hess[0, 0] == pytest.approx(8.0)

    def test_off_diagonal(self):
        inst = ProblemInstance.create((1, 1, 1), 2, (0, 1, 5))
        hess = hessian_ln_phi([0.3, 0.7], inst)
        assert hess[0, 1] == pytest.approx(12.5)
        assert hess[1, 0] == pytest.approx(12.5)

    def test_jacobian_of_residual(self):
        rng = np.random.default_rng(3)
        z = (0, 1, 2j, -1)
        inst = ProblemInstance.create((1, 2, 1, 1), 3, z)
        h = 1e-6
        for _ in range(100):
            t = safe_point(rng, [complex(v) for v in z], 3)
            hess = hessian_ln_phi(list(t), inst)
            for j in range(3):
                step = np.zeros(3, dtype=complex)
                step[j] = h
                column = (bethe_residual(list(t + step), inst) - bethe_residual(list(t - step), inst)) / (2 * h)
                assert np.allclose(column, hess[:, j], rtol=1e-6, atol=1e-6)


class TestSymmetricCoordinates:
    def test_exact_values(self):
        assert elementary_symmetric((2, 3)) == (5, 6)
        assert elementary_symmetric((1, 1, 1)) == (3, 3, 1)

    def test_vieta(self):
        roots = np.roots([1, -1, 1 / 3])
        lam = elementary_symmetric(list(roots))
        assert lam[0] == pytest.approx(1)
        assert lam[1] == pytest.approx(1 / 3)

    def test_roots_from_lambda(self):
        roots = sorted(roots_from_lambda((5, 6)).real)
        assert roots == pytest.approx([2, 3])


class TestOrbits:
    def test_sorted_representative(self):
        assert canonical_orbit((0.7, 0.3)).t == (0.3 + 0j, 0.7 + 0j)

    def test_permutations_agree(self):
        a = canonical_orbit((1 + 2j, -0.5, 3j))
        b = canonical_orbit((3j, 1 + 2j, -0.5))
        assert a.t == b.t
        assert same_orbit(a, b)

    def test_near_duplicates_merge(self):
        a = canonical_orbit((0.3, 0.7))
        b = canonical_orbit((0.3 + 1e-10, 0.7 - 1e-10))
        c = canonical_orbit((0.1, 0.7))
        kept, merged = dedup_orbits([c, a, b])
        assert merged == 1
        assert len(kept) == 2
        assert kept[0].lam[0].real < kept[1].lam[0].real


class TestRegimes:
    @pytest.mark.parametrize("m,k,kind,expected", [
        ((1, 1, 1), 1, RegimeKind.ISOLATED_POINTS, 2),
        ((1, 1, 1), 2, RegimeKind.NO_CRITICAL_EQUAL_EXPONENTS, 0),
        ((1, 1), 4, RegimeKind.NO_CRITICAL_NEGATIVE_DUAL, 0),
        ((1, 1, 1), 3, RegimeKind.CRITICAL_LINES, 2),
        ((1, 1), 2, RegimeKind.CRITICAL_LINES, 1),
        ((1, 2), 4, RegimeKind.CRITICAL_LINES, 1),
    ])
    def test_examples(self, m, k, kind, expected):
        label = classify_regime(m, k)
        assert label.kind == kind
        assert label.expected_count == expected
        assert label.dual_k == sum(m) + 1 - k

    def test_isolated_when_not_too_deep(self):
        for total in range(1, 8):
            for m in ((total,), (1, total), (2, total, 1)):
                for k in range(1, 8):
                    if sum(m) - 2 * k > -2:
                        assert classify_regime(m, k).kind != RegimeKind.CRITICAL_LINES


class TestTwoPoints:
    def test_one_variable(self):
        solution = n2_closed_form(1, 1, 1)
        assert solution.case == "i"
        assert solution.lam == (Fraction(1, 2),)

    def test_two_variables(self):
        solution = n2_closed_form(2, 2, 2)
        assert solution.case == "i"
        assert solution.lam == (Fraction(1), Fraction(1, 3))
        assert not solution.in_arrangement

    def test_line_of_solutions(self):
        solution = n2_closed_form(1, 1, 2)
        assert solution.case == "iii"
        assert solution.rank == 1
        assert solution.lam is None
        b1, b2 = solution.line_base
        d1, d2 = solution.line_direction
        assert -b1 + 2 * b2 == 0
        assert -d1 + 2 * d2 == 0
        assert (d1, d2) != (0, 0)

    def test_rational_exponents(self):
        solution = n2_closed_form(Fraction(1, 2), 1, 1)
        assert solution.lam == (Fraction(1, 3),)

    def test_reconstructed_points_are_critical(self):
        for m1 in range(1, 5):
            for m2 in range(1, 5):
                for k in range(1, min(m1, m2) + 1):
                    solution = n2_closed_form(m1, m2, k)
                    assert solution.case == "i"
                    roots = roots_from_lambda([complex(v) for v in solution.lam])
                    res = relative_residual(roots, np.asarray([0, 1], dtype=complex), np.asarray([m1, m2], float))
                    assert res < 1e-10, (m1, m2, k)

    def test_inconsistent_recursion(self):
        solution = n2_closed_form(1, 3, 3)
        assert solution.case == "ii"
        assert not solution.consistent
        assert solution.lam is None
        assert solution.line_base is None

    def test_no_critical_points_above_an_exponent(self):
        checked = 0
        for m1 in range(1, 5):
            for m2 in range(1, 5):
                for k in range(1, 12):
                    solution = n2_closed_form(m1, m2, k)
                    if solution.case not in ("ii", "iv"):
                        continue
                    checked += 1
                    assert solution.line_base is None, (m1, m2, k)
                    assert solution.in_arrangement or not solution.consistent, (m1, m2, k)
        assert checked >= 20

    def test_unique_solution_is_consistent(self):
        assert n2_closed_form(2, 2, 2).consistent
        assert n2_closed_form(1, 1, 2).consistent

    def test_negative_k_rejected(self):
        with pytest.raises(DomainError):
            n2_closed_form(1, 1, -1)
