"""
Tests for admissible sequences, Newton refinement, path tracking and critical lines
"""
import itertools

import numpy as np
import pytest

from src.bethe_fuchs.config import generic_configuration
from src.bethe_fuchs.master_function import bethe_residual, classify_regime, relative_residual
from src.bethe_fuchs.models import AdmissibleSequence, ProblemInstance, RegimeKind, SolverSettings
from src.bethe_fuchs.representation import multiplicity_w
from src.bethe_fuchs.solver import (
    BetheSolver,
    admissible_sequences,
    admissible_triple,
    line_point,
    line_residual,
    lines_intersect,
    seed_point,
    start_configuration,
)
from src.common.exceptions import DomainError, RegimeError

GENERIC_Z = (0.1 + 0.2j, 1.0, -0.7 + 0.4j, 0.3 - 0.9j)


@pytest.fixture(scope="module")
def solver():
    return BetheSolver()


class TestAdmissible:
    @pytest.mark.parametrize("m1, m2, k, expected", [
        (1, 1, 1, True),
        (1, 1, 2, False),
        (3, 2, 2, True),
        (2, 1, 2, False),
        (0, 1, 0, True),
    ])
    def test_triple(self, m1, m2, k, expected):
        assert admissible_triple(m1, m2, k) is expected

    def test_non_integral_exponent_has_no_cap(self):
        assert admissible_triple(0.5, 4, 2)
        assert not admissible_triple(-1, 1, 1)

    def test_three_sites(self):
        found = [s.indices for s in admissible_sequences((1, 1, 1), 1)]
        assert found == [(0, 1, 0), (0, 0, 1)]

    def test_two_sites(self):
        assert [s.indices for s in admissible_sequences((1, 1), 1)] == [(0, 1)]

    def test_count_matches_multiplicity(self):
        assert len(admissible_sequences((1, 1, 1, 1), 2)) == 2
        assert len(admissible_sequences((2, 2, 2), 2)) == 3

    def test_bad_pair(self):
        with pytest.raises(DomainError):
            admissible_sequences((1, 1), 2)


class TestSeeds:
    def test_start_configuration(self):
        assert np.allclose(start_configuration(3, 10.0), [10, 100, 1000])

    def test_middle_block(self):
        seed = seed_point(AdmissibleSequence(indices=(0, 1, 0)), (1, 1, 1), 1, 100.0)
        assert np.allclose(seed, [5000.0])

    def test_last_block(self):
        seed = seed_point(AdmissibleSequence(indices=(0, 0, 1)), (1, 1, 1), 1, 100.0)
        assert np.allclose(seed, [100.0 ** 3 * 2 / 3])

    def test_seed_is_nearly_critical(self):
        s = 1000.0
        inst = ProblemInstance.create((1, 1, 1), 1, tuple(start_configuration(3, s)))
        for sequence in admissible_sequences(inst.m, inst.k):
            t = seed_point(sequence, inst.m, inst.k, s)
            assert relative_residual(t, np.asarray(inst.z), np.asarray(inst.m, dtype=float)) < 1e-2

    def test_wrong_weight(self):
        with pytest.raises(DomainError):
            seed_point(AdmissibleSequence(indices=(0, 1, 1)), (1, 1, 1), 1, 10.0)


class TestNewton:
    def test_converges(self, solver):
        inst = ProblemInstance.create((1, 1), 1, (0, 1))
        result = solver.newton_refine([0.52], inst)
        assert result.success
        assert result.point.t[0] == pytest.approx(0.5)
        assert result.residual_norm < 1e-12

    def test_start_on_arrangement(self, solver):
        inst = ProblemInstance.create((1, 1), 1, (0, 1))
        result = solver.newton_refine([0.0], inst)
        assert not result.success
        assert "arrangement" in result.reason
        assert result.point is None


class TestTracking:
    def test_fixed_configuration(self, solver):
        result = solver.track_path([0.52], (0, 1), (0, 1), (1, 1))
        assert result.success
        assert result.point.t[0] == pytest.approx(0.5)

    def test_moves_with_configuration(self, solver):
        result = solver.track_path([0.5], (0, 1), (0, 2), (1, 1))
        assert result.success
        assert result.point.t[0] == pytest.approx(1.0)
        assert result.tau == pytest.approx(1.0)


class TestSolveAll:
    def test_three_sites(self, solver):
        report = solver.solve_all(ProblemInstance.create((1, 1, 1), 1, (0, 1, 2)))
        assert report.found == report.expected == 2
        assert not report.genericity_flags
        roots = sorted(p.t[0].real for p in report.orbits)
        assert roots == pytest.approx([(3 - np.sqrt(3)) / 3, (3 + np.sqrt(3)) / 3])

    def test_two_sites_quadratic(self, solver):
        inst = ProblemInstance.create((2, 2), 2, (0, 1))
        report = solver.solve_all(inst)
        assert report.found == 1
        assert np.allclose(report.orbits[0].lam, [1, 1 / 3])
        assert np.max(np.abs(bethe_residual(report.orbits[0].t, inst))) < 1e-10

    def test_generic_four_sites(self, solver):
        inst = ProblemInstance.create((1, 1, 1, 1), 2, GENERIC_Z)
        report = solver.solve_all(inst)
        assert report.found == 2
        assert all(p.residual_norm < 1e-10 for p in report.orbits)

    def test_workers_match_serial(self):
        inst = ProblemInstance.create((1, 1, 1, 1), 2, GENERIC_Z)
        serial = BetheSolver(SolverSettings(seed=3)).solve_all(inst)
        threaded = BetheSolver(SolverSettings(seed=3, workers=4)).solve_all(inst)
        assert np.allclose([p.lam for p in serial.orbits], [p.lam for p in threaded.orbits])

    def test_wrong_regime(self, solver):
        with pytest.raises(RegimeError) as info:
            solver.solve_all(ProblemInstance.create((1, 1), 2, (0, 1)))
        assert info.value.use_instead == "critical_lines"

    def test_no_critical_points(self, solver):
        with pytest.raises(RegimeError):
            solver.solve_all(ProblemInstance.create((1, 1), 3, (0, 1)))

    def test_degenerate_configuration(self, solver):
        roots = tuple(np.exp(2j * np.pi * l / 3) for l in range(3))
        report = solver.solve_all(ProblemInstance.create((1, 1, 1), 1, roots))
        assert report.expected == 2
        assert report.found == 1
        assert abs(report.orbits[0].t[0]) < 1e-4
        assert "count_mismatch" in report.genericity_flags

    @pytest.mark.parametrize("m, k", [((1, 1, 1), 2), ((1, 2), 2), ((1, 1), 4), ((1, 1, 1), 5)])
    def test_multistart_finds_nothing_without_critical_points(self, solver, m, k):
        inst = ProblemInstance.create(m, k, GENERIC_Z[:len(m)])
        assert classify_regime(m, k).expected_count == 0
        assert solver.multistart_search(inst, 200, rng=np.random.default_rng(k)) == []

    @pytest.mark.slow
    def test_count_matches_multiplicity_on_generic_configurations(self, solver):
        mismatches = []
        for n in range(2, 5):
            z = generic_configuration(n, n)
            for m in itertools.product(range(1, 4), repeat=n):
                for k in range(1, sum(m) + 1):
                    regime = classify_regime(m, k)
                    if regime.kind != RegimeKind.ISOLATED_POINTS:
                        continue
                    report = solver.solve_all(ProblemInstance.create(m, k, z))
                    assert report.expected == multiplicity_w(m, k)
                    if report.found != report.expected:
                        mismatches.append((m, k, report.found, report.expected))
        assert mismatches == []

    def test_multistart(self, solver):
        inst = ProblemInstance.create((1, 1, 1), 1, (0, 1, 2))
        found = solver.multistart_search(inst, 20, rng=np.random.default_rng(1))
        assert 1 <= len(found) <= 2
        for point in found:
            assert point.residual_norm < 1e-10


class TestCriticalLines:
    def test_three_sites_three_variables(self, solver):
        inst = ProblemInstance.create((1, 1, 1), 3, (0, 1, 2))
        lines = solver.critical_lines(inst)
        assert len(lines) == 2
        assert not lines_intersect(lines[0], lines[1])
        for line in lines:
            assert line.sample_residual < 1e-9
            assert line_residual(line, inst, 0.37 - 1.1j) < 1e-9
            assert line.source_orbit is not None

    def test_two_sites(self, solver):
        inst = ProblemInstance.create((1, 1), 2, (0, 1))
        lines = solver.critical_lines(inst)
        assert len(lines) == 1
        assert len(line_point(lines[0], 2.0)) == 2
        assert line_residual(lines[0], inst, 2.0) < 1e-9

    def test_antiderivative_line(self, solver):
        inst = ProblemInstance.create((1, 2), 4, (0, 1))
        lines = solver.critical_lines(inst)
        assert len(lines) == 1
        assert lines[0].source_orbit is None
        assert lines[0].sample_residual < 1e-9
        assert line_residual(lines[0], inst, 0.5 + 0.5j) < 1e-9

    def test_wrong_regime(self, solver):
        with pytest.raises(RegimeError):
            solver.critical_lines(ProblemInstance.create((1, 1, 1), 1, (0, 1, 2)))
