"""
Bethe/Fuchs workbench CLI
"""
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from ..bethe_fuchs import BetheWorkbench
from ..bethe_fuchs.config import RunConfig
from ..bethe_fuchs.main import EXIT_USAGE, load_prior, run_command
from ..common.console_utils import set_verbose
from ..common.exceptions import ConfigError

app = typer.Typer(
    name="bethe-fuchs",
    help="Critical points of sl2 master functions, Bethe vectors and Fuchsian equations",
    no_args_is_help=True
)

console = Console()

ConfigOption = typer.Option(None, "--config", "-c", help="JSON run configuration (m, k, z, ...)")
OutOption = typer.Option(None, "--out", "-o", help="Write the full JSON report here")
ModeOption = typer.Option(None, "--mode", help="Arithmetic mode: exact or float")
SeedOption = typer.Option(None, "--seed", help="Master RNG seed")
ScaleOption = typer.Option(None, "--s", help="Homotopy start scale (> 1)")
TolNewtonOption = typer.Option(None, "--tol-newton", help="Newton residual tolerance")
TolDedupOption = typer.Option(None, "--tol-dedup", help="Orbit deduplication tolerance")
WorkersOption = typer.Option(None, "--workers", "-w", help="Seeds tracked in parallel")
MultistartOption = typer.Option(None, "--multistart", help="Random starts for the top-up search")
VerboseOption = typer.Option(False, "--verbose", "-v", help="Print solver diagnostics to stderr")


def build_config(
    config: Optional[Path],
    mode: Optional[str] = None,
    seed: Optional[int] = None,
    s: Optional[float] = None,
    tol_newton: Optional[float] = None,
    tol_dedup: Optional[float] = None,
    workers: Optional[int] = None,
    multistart: Optional[int] = None,
    base: Optional[RunConfig] = None,
) -> RunConfig:
    """
    Load the configuration file and apply command-line overrides

    Args:
        config: Path of the JSON configuration
        base: Configuration to start from when no file is given

    Returns:
        Validated RunConfig
    """
    if config is not None:
        loaded = RunConfig.load(config)
    elif base is not None:
        loaded = base
    else:
        raise ConfigError("Missing --config")
    return loaded.with_overrides(
        mode=mode, seed=seed, s=s, tol_newton=tol_newton, tol_dedup=tol_dedup,
        workers=workers, multistart=multistart,
    )


def run_workbench(command: str, config: RunConfig, out: Optional[Path], prior=None) -> None:
    """Run a command and exit with its code"""
    try:
        workbench = BetheWorkbench(config, out=out)
    except ConfigError as e:
        console.print(f"[red]❌ {e}[/red]")
        raise typer.Exit(EXIT_USAGE)
    code = run_command(workbench, command, prior)
    raise typer.Exit(code)


def load_or_exit(**kwargs) -> RunConfig:
    try:
        return build_config(**kwargs)
    except ConfigError as e:
        console.print(f"[red]❌ {e}[/red]")
        raise typer.Exit(EXIT_USAGE)


@app.command()
def count(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    mode: Optional[str] = ModeOption,
    seed: Optional[int] = SeedOption,
    s: Optional[float] = ScaleOption,
    tol_newton: Optional[float] = TolNewtonOption,
    tol_dedup: Optional[float] = TolDedupOption,
    verbose: bool = VerboseOption,
):
    """
    Exact counts: w(m, k), d(m, k), the alternating binomial sum, regime, dim Sing

    Example: bethe-fuchs count --config examples.json
    """
    set_verbose(verbose)
    cfg = load_or_exit(config=config, mode=mode, seed=seed, s=s, tol_newton=tol_newton, tol_dedup=tol_dedup)
    run_workbench("count", cfg, out)


@app.command()
def solve(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    mode: Optional[str] = ModeOption,
    seed: Optional[int] = SeedOption,
    s: Optional[float] = ScaleOption,
    tol_newton: Optional[float] = TolNewtonOption,
    tol_dedup: Optional[float] = TolDedupOption,
    workers: Optional[int] = WorkersOption,
    multistart: Optional[int] = MultistartOption,
    verbose: bool = VerboseOption,
):
    """
    Find every critical orbit of the master function (isolated-points regime)

    Exit codes:
    - 0: found == expected and every residual is small
    - 2: bad configuration, or the instance has critical lines (use 'lines')
    - 3: count mismatch (z is probably not generic)
    """
    set_verbose(verbose)
    cfg = load_or_exit(config=config, mode=mode, seed=seed, s=s, tol_newton=tol_newton, tol_dedup=tol_dedup,
                       workers=workers, multistart=multistart)
    run_workbench("solve", cfg, out)


@app.command()
def verify(
    config: Optional[Path] = ConfigOption,
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Re-verify the orbits of a saved report"),
    out: Optional[Path] = OutOption,
    mode: Optional[str] = ModeOption,
    seed: Optional[int] = SeedOption,
    s: Optional[float] = ScaleOption,
    tol_newton: Optional[float] = TolNewtonOption,
    tol_dedup: Optional[float] = TolDedupOption,
    workers: Optional[int] = WorkersOption,
    multistart: Optional[int] = MultistartOption,
    verbose: bool = VerboseOption,
):
    """
    Bethe vector checks and the Fuchsian round trip for every orbit

    Without --report the orbits are solved first. With --report the saved
    config is used unless --config is given; a stale report exits with 2.
    """
    set_verbose(verbose)
    prior = None
    base = None
    if report is not None:
        try:
            prior = load_prior(report, None)
        except ConfigError as e:
            console.print(f"[red]❌ {e}[/red]")
            raise typer.Exit(EXIT_USAGE)
        base = prior.config
    cfg = load_or_exit(config=config, mode=mode, seed=seed, s=s, tol_newton=tol_newton, tol_dedup=tol_dedup,
                       workers=workers, multistart=multistart, base=base)
    run_workbench("verify", cfg, out, prior)


@app.command()
def lines(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    mode: Optional[str] = ModeOption,
    seed: Optional[int] = SeedOption,
    s: Optional[float] = ScaleOption,
    tol_newton: Optional[float] = TolNewtonOption,
    tol_dedup: Optional[float] = TolDedupOption,
    workers: Optional[int] = WorkersOption,
    verbose: bool = VerboseOption,
):
    """
    Critical lines in lambda-space (critical-lines regime)
    """
    set_verbose(verbose)
    cfg = load_or_exit(config=config, mode=mode, seed=seed, s=s, tol_newton=tol_newton, tol_dedup=tol_dedup,
                       workers=workers)
    run_workbench("lines", cfg, out)


@app.command()
def version():
    """Show version information"""
    console.print("[blue]Bethe/Fuchs workbench v1.0.0[/blue]")


def main():
    """Main function"""
    app()


if __name__ == "__main__":
    main()
