#!/usr/bin/env python3
"""
Workbench main module
"""
import time
import traceback
from pathlib import Path
from typing import List, Optional

import numpy as np
from rich.console import Console

from .config import RunConfig
from .fuchsian import count_nondegenerate_spaces, count_univalued_equations, expected_exponents, recognize_rational
from .master_function import classify_regime
from .models import CriticalPoint, RegimeKind
from .report import (
    BasisRecord,
    BetheRecord,
    CountRecord,
    FuchsianRecord,
    LineRecord,
    OrbitRecord,
    RunReport,
    finite,
    pairs,
    polynomial_record,
)
from .representation import (
    classify_good_pair,
    difference_d,
    multiplicity_w,
    sharp_count,
    singular_basis,
)
from .solver import BetheSolver, admissible_sequences, lines_intersect
from .verifier import basis_check, bethe_vector, eigenvalue_sum_gap, fuchsian_round_trip, norm_identity_check
from .display import ReportDisplay
from ..common.exceptions import BetheFuchsError, ConfigError, DomainError, VerificationError

console = Console()

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COUNT_MISMATCH = 3
EXIT_VERIFICATION = 4

# Residual every accepted orbit must meet
ORBIT_RESIDUAL = 1e-10


class BetheWorkbench:
    """Workbench main controller class"""

    def __init__(self, config: RunConfig, out: Optional[Path] = None, quiet: bool = False):
        """
        Initialize

        Args:
            config: Validated run configuration
            out: Report file path (no file when omitted)
            quiet: Skip the human-readable summary
        """
        self.config = config
        self.out = out
        self.quiet = quiet
        self.instance = config.instance()
        self.solver = BetheSolver(config.solver_settings())
        self.display = ReportDisplay()

    def _base_report(self, command: str, regime_kind: str, expected: int, found: int) -> RunReport:
        inst = self.instance
        return RunReport(
            command=command,
            config=self.config,
            config_hash=self.config.config_hash(),
            m=list(inst.m),
            k=inst.k,
            z=pairs(inst.z),
            regime=regime_kind,
            expected=expected,
            found=found,
        )

    def _finish(self, report: RunReport, started: float) -> RunReport:
        if self.out is not None:
            report.save(self.out)
        if not self.quiet:
            self.display.show(report, time.perf_counter() - started)
        return report

    def _orbit_record(self, point: CriticalPoint) -> OrbitRecord:
        lam = None
        if self.instance.config.exact is not None:
            lam = recognize_rational(point, self.instance.config.exact, self.instance.m)
        return OrbitRecord.of(point, lam)

    def count(self) -> RunReport:
        """Exact counts for (m, k)"""
        started = time.perf_counter()
        inst = self.instance
        m, k = list(inst.m), inst.k
        regime = classify_regime(m, k)
        good = classify_good_pair(m, k)
        total = inst.total
        k1, k2 = max(k, total + 1 - k), min(k, total + 1 - k)
        table = expected_exponents(m, k)
        counts = CountRecord(
            w=multiplicity_w(m, k),
            d=difference_d(m, k),
            sharp=sharp_count(k, inst.n, m),
            regime=regime.kind.value,
            expected=regime.expected_count,
            dual_k=regime.dual_k,
            dim_sing=len(singular_basis(m, k)),
            good_pair=good.is_good,
            admissible_sequences=len(admissible_sequences(m, k)) if good.is_good else None,
            univalued_equations=count_univalued_equations(table.finite, table.infinity),
            nondegenerate_spaces=count_nondegenerate_spaces(m, k1, k2) if k1 > k2 >= 0 else None,
        )
        report = self._base_report("count", regime.kind.value, regime.expected_count, regime.expected_count)
        report = report.model_copy(update={"counts": counts, "passed": True, "exit_code": EXIT_OK})
        return self._finish(report, started)

    def solve(self) -> RunReport:
        """Find every critical orbit"""
        started = time.perf_counter()
        if not self.quiet:
            console.print("[blue]🔍 Tracking critical points...[/blue]")
        result = self.solver.solve_all(self.instance)
        orbits = [self._orbit_record(p) for p in result.orbits]
        residual_ok = all(p.residual_norm is not None and p.residual_norm < ORBIT_RESIDUAL for p in result.orbits)
        count_ok = result.found == result.expected
        if not residual_ok:
            code = EXIT_VERIFICATION
        elif not count_ok:
            code = EXIT_COUNT_MISMATCH
        else:
            code = EXIT_OK
        report = self._base_report("solve", result.regime.kind.value, result.expected, result.found)
        report = report.model_copy(update={
            "orbits": orbits,
            "genericity_flags": result.genericity_flags,
            "seeds_used": result.seeds_used,
            "seeds_failed": result.seeds_failed,
            "multistart_added": result.multistart_added,
            "passed": code == EXIT_OK,
            "exit_code": code,
        })
        return self._finish(report, started)

    def verify(self, prior: Optional[RunReport] = None) -> RunReport:
        """
        Bethe and Fuchsian checks for every orbit

        Args:
            prior: Report of an earlier solve to re-verify (solved inline when omitted)

        Returns:
            RunReport with per-orbit Bethe and Fuchsian records
        """
        started = time.perf_counter()
        inst = self.instance
        regime = classify_regime(inst.m, inst.k)
        if prior is not None:
            prior.check_fresh(self.config)
            points = prior.critical_points()
            flags = list(prior.genericity_flags)
            expected = prior.expected
            seeds = (prior.seeds_used, prior.seeds_failed, prior.multistart_added)
        else:
            result = self.solver.solve_all(inst)
            points, flags, expected = result.orbits, list(result.genericity_flags), result.expected
            seeds = (result.seeds_used, result.seeds_failed, result.multistart_added)

        bethe_records: List[BetheRecord] = []
        fuchsian_records: List[FuchsianRecord] = []
        vectors = []
        verify_tol = self.config.tolerances.verify
        for idx, point in enumerate(points):
            bv = bethe_vector(point, inst, tol=verify_tol, raise_on_failure=False)
            vectors.append(bv)
            identity = norm_identity_check(bv, inst)
            identity_ok = identity.degenerate or identity.relative_error < verify_tol
            bethe_records.append(BetheRecord(
                orbit=idx,
                e_residual=bv.e_residual,
                eigenvalues=pairs(bv.eigenvalues),
                eigen_residuals=list(bv.eigen_residuals),
                eigen_sum_gap=finite(eigenvalue_sum_gap(bv, inst)),
                shapovalov_norm=pairs([bv.shapovalov_norm])[0],
                hessian_det=pairs([identity.hessian_det])[0],
                norm_identity_error=finite(identity.relative_error),
                degenerate=identity.degenerate,
                passed=bv.passed and identity_ok,
            ))
            trip = fuchsian_round_trip(point, inst, tol=verify_tol, seed=self.config.seed)
            equation, space = trip.equation, trip.space
            fuchsian_records.append(FuchsianRecord(
                orbit=idx,
                exact=trip.exact,
                F=polynomial_record(equation.F if equation else None),
                G=polynomial_record(equation.G if equation else None),
                H=polynomial_record(equation.H if equation else None),
                u1=polynomial_record(space.u1 if space else None),
                u2=polynomial_record(space.u2 if space else None),
                exponents_ok=trip.exponents_ok,
                wronskian_error=finite(space.wronskian_error) if space else None,
                dual_roots=pairs(trip.dual_roots) if trip.dual_roots is not None else None,
                dual_residual=finite(trip.dual_residual),
                nondegenerate=trip.nondegenerate.ok if trip.nondegenerate else None,
                passed=trip.passed,
                reason=trip.reason,
            ))

        basis = None
        if regime.kind == RegimeKind.ISOLATED_POINTS and len(points) == regime.expected_count and points:
            check = basis_check(points, inst, vectors)
            basis = BasisRecord(determinant=pairs([check.determinant])[0],
                                column_norm_product=check.column_norm_product, is_basis=check.is_basis)

        checks_ok = all(r.passed for r in bethe_records) and all(r.passed for r in fuchsian_records)
        if basis is not None and not basis.is_basis:
            checks_ok = False
        if not checks_ok:
            code = EXIT_VERIFICATION
        elif len(points) != expected:
            code = EXIT_COUNT_MISMATCH
        else:
            code = EXIT_OK
        report = self._base_report("verify", regime.kind.value, expected, len(points))
        report = report.model_copy(update={
            "orbits": [self._orbit_record(p) for p in points],
            "bethe": bethe_records,
            "fuchsian": fuchsian_records,
            "basis": basis,
            "genericity_flags": flags,
            "seeds_used": seeds[0],
            "seeds_failed": seeds[1],
            "multistart_added": seeds[2],
            "passed": code == EXIT_OK,
            "exit_code": code,
        })
        return self._finish(report, started)

    def lines(self) -> RunReport:
        """Critical lines in the non-isolated regime"""
        started = time.perf_counter()
        inst = self.instance
        regime = classify_regime(inst.m, inst.k)
        lines = self.solver.critical_lines(inst)
        records = [
            LineRecord(
                base=pairs(line.base_lambda),
                direction=pairs(line.direction_lambda),
                source_t=pairs(line.source_orbit.t) if line.source_orbit is not None else None,
                H=polynomial_record(line.equation.H if line.equation is not None else None),
                sample_residual=finite(line.sample_residual),
            )
            for line in lines
        ]
        intersecting = sum(
            1 for i in range(len(lines)) for j in range(i + 1, len(lines)) if lines_intersect(lines[i], lines[j])
        )
        residual_ok = all(np.isfinite(line.sample_residual) and line.sample_residual < self.config.tolerances.line
                          for line in lines)
        if not residual_ok or intersecting:
            code = EXIT_VERIFICATION
        elif len(lines) != regime.expected_count:
            code = EXIT_COUNT_MISMATCH
        else:
            code = EXIT_OK
        report = self._base_report("lines", regime.kind.value, regime.expected_count, len(lines))
        report = report.model_copy(update={
            "lines": records,
            "intersecting_lines": intersecting,
            "passed": code == EXIT_OK,
            "exit_code": code,
        })
        return self._finish(report, started)


def load_prior(path: Path, config: Optional[RunConfig]) -> RunReport:
    """Load a report and check that it is not stale"""
    report = RunReport.load(path)
    report.check_fresh(config)
    if report.command not in ("solve", "verify"):
        raise ConfigError(f"Report {path} comes from {report.command!r}, not from solve or verify")
    return report


def exit_code_for(error: BetheFuchsError) -> int:
    """Exit code of a library error"""
    if isinstance(error, (ConfigError, DomainError)):
        return EXIT_USAGE
    if isinstance(error, VerificationError):
        return EXIT_VERIFICATION
    return EXIT_COUNT_MISMATCH


def run_command(workbench: BetheWorkbench, command: str, prior: Optional[RunReport] = None) -> int:
    """
    Run one workbench command and map the outcome to an exit code

    Args:
        workbench: Configured workbench
        command: count, solve, verify or lines
        prior: Earlier report for verify

    Returns:
        Exit code (0 pass, 1 unexpected error, 2 usage, 3 count mismatch, 4 verification failure)
    """
    try:
        if command == "count":
            report = workbench.count()
        elif command == "solve":
            report = workbench.solve()
        elif command == "verify":
            report = workbench.verify(prior)
        elif command == "lines":
            report = workbench.lines()
        else:
            console.print(f"[red]❌ Unknown command: {command}[/red]")
            return EXIT_USAGE
    except BetheFuchsError as e:
        console.print(f"[red]❌ {e}[/red]")
        return exit_code_for(e)
    except KeyboardInterrupt:
        console.print("\n[bold yellow]👋 Interrupted.[/bold yellow]")
        return 130
    except Exception as e:
        console.print(f"[red]❌ An error occurred: {e}[/red]")
        console.print("[red]Stack trace:[/red]")
        console.print(traceback.format_exc())
        return 1
    return report.exit_code
