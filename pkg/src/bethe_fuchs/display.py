#!/usr/bin/env python3
"""
Human-readable summaries of run reports
"""
from typing import List, Optional, Sequence, Tuple

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .report import RunReport

console = Console()


def format_complex(pair: Optional[Tuple[float, float]], digits: int = 10) -> str:
    """Compact rendering of an [re, im] pair"""
    if pair is None:
        return "-"
    re, im = pair
    if abs(im) <= 1e-14 * max(1.0, abs(re)):
        return f"{re:.{digits}g}"
    sign = "+" if im >= 0 else "-"
    return f"{re:.{digits}g}{sign}{abs(im):.{digits}g}i"


def format_vector(values: Sequence[Tuple[float, float]], digits: int = 8) -> str:
    return "(" + ", ".join(format_complex(v, digits) for v in values) + ")"


def format_error(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.2e}"


class ReportDisplay:
    """Renders RunReport sections with rich tables"""

    def show_header(self, report: RunReport) -> None:
        z = format_vector(report.z, 6)
        console.print(Panel.fit(
            f"[bold]{report.command}[/bold]  m={tuple(report.m)}  k={report.k}\nz={z}",
            border_style="blue",
        ))

    def show_counts(self, report: RunReport) -> None:
        counts = report.counts
        if counts is None:
            return
        table = Table(title="Counts", show_header=True, header_style="bold cyan")
        table.add_column("Quantity")
        table.add_column("Value", justify="right")
        rows: List[Tuple[str, str]] = [
            ("w(m, k)", str(counts.w)),
            ("d(m, k)", str(counts.d)),
            ("alternating binomial sum", str(counts.sharp)),
            ("regime", counts.regime),
            ("expected orbits / lines", str(counts.expected)),
            ("l(m) + 1 - k", str(counts.dual_k)),
            ("dim Sing", str(counts.dim_sing)),
            ("good pair", "yes" if counts.good_pair else "no"),
            ("admissible sequences", "-" if counts.admissible_sequences is None else str(counts.admissible_sequences)),
            ("univalued Fuchsian equations", str(counts.univalued_equations)),
            ("nondegenerate spaces", "-" if counts.nondegenerate_spaces is None else str(counts.nondegenerate_spaces)),
        ]
        for name, value in rows:
            table.add_row(name, value)
        console.print(table)

    def show_orbits(self, report: RunReport) -> None:
        if not report.orbits:
            return
        table = Table(title=f"Critical orbits ({report.found} of {report.expected})", header_style="bold cyan")
        table.add_column("#", justify="right")
        table.add_column("t")
        table.add_column("lambda")
        table.add_column("residual", justify="right")
        table.add_column("det Hessian", justify="right")
        for idx, orbit in enumerate(report.orbits, start=1):
            lam = "(" + ", ".join(orbit.lam_exact) + ")" if orbit.lam_exact else format_vector(orbit.lam)
            table.add_row(str(idx), format_vector(orbit.t), lam, format_error(orbit.residual),
                          format_complex(orbit.hessian_det, 6))
        console.print(table)

    def show_bethe(self, report: RunReport) -> None:
        if not report.bethe:
            return
        table = Table(title="Bethe vectors", header_style="bold cyan")
        table.add_column("#", justify="right")
        table.add_column("e-residual", justify="right")
        table.add_column("eigenvalues")
        table.add_column("max eigen residual", justify="right")
        table.add_column("S(v,v)", justify="right")
        table.add_column("norm identity", justify="right")
        table.add_column("ok")
        for record in report.bethe:
            identity = "degenerate" if record.degenerate else format_error(record.norm_identity_error)
            table.add_row(
                str(record.orbit + 1),
                format_error(record.e_residual),
                format_vector(record.eigenvalues, 6),
                format_error(max(record.eigen_residuals, default=0.0)),
                format_complex(record.shapovalov_norm, 6),
                identity,
                "[green]✓[/green]" if record.passed else "[red]✗[/red]",
            )
        console.print(table)
        if report.basis is not None:
            colour = "green" if report.basis.is_basis else "red"
            console.print(f"[{colour}]Bethe basis: |det| = {abs(complex(*report.basis.determinant)):.3e} "
                          f"(column norm product {report.basis.column_norm_product:.3e})[/{colour}]")

    def show_fuchsian(self, report: RunReport) -> None:
        if not report.fuchsian:
            return
        table = Table(title="Associated Fuchsian equations", header_style="bold cyan")
        table.add_column("#", justify="right")
        table.add_column("H")
        table.add_column("exponents")
        table.add_column("Wronskian error", justify="right")
        table.add_column("dual residual", justify="right")
        table.add_column("ok")
        for record in report.fuchsian:
            h = ", ".join(c if isinstance(c, str) else format_complex(c, 6) for c in record.H)
            table.add_row(
                str(record.orbit + 1),
                f"[{h}]",
                "ok" if record.exponents_ok else "mismatch",
                format_error(record.wronskian_error),
                format_error(record.dual_residual),
                "[green]✓[/green]" if record.passed else f"[red]✗ {record.reason}[/red]",
            )
        console.print(table)

    def show_lines(self, report: RunReport) -> None:
        if not report.lines:
            return
        table = Table(title=f"Critical lines ({report.found} of {report.expected})", header_style="bold cyan")
        table.add_column("#", justify="right")
        table.add_column("base lambda")
        table.add_column("direction")
        table.add_column("sample residual", justify="right")
        for idx, line in enumerate(report.lines, start=1):
            table.add_row(str(idx), format_vector(line.base, 6), format_vector(line.direction, 6),
                          format_error(line.sample_residual))
        console.print(table)
        if report.intersecting_lines:
            console.print(f"[red]{report.intersecting_lines} pair(s) of lines intersect[/red]")

    def show_summary(self, report: RunReport, elapsed: Optional[float] = None) -> None:
        if report.genericity_flags:
            console.print(f"[yellow]⚠️  Genericity flags: {', '.join(report.genericity_flags)}[/yellow]")
        timing = f" in {elapsed:.2f}s" if elapsed is not None else ""
        if report.passed:
            console.print(f"[bold green]✅ {report.command} passed{timing}[/bold green]")
        else:
            console.print(f"[bold red]❌ {report.command} failed (exit code {report.exit_code}){timing}[/bold red]")

    def show(self, report: RunReport, elapsed: Optional[float] = None) -> None:
        """Print every section present in the report"""
        self.show_header(report)
        self.show_counts(report)
        self.show_orbits(report)
        self.show_bethe(report)
        self.show_fuchsian(report)
        self.show_lines(report)
        self.show_summary(report, elapsed)
