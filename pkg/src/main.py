import json
import logging
from collections.abc import Callable
from datetime import datetime
from pathlib import Path
from typing import TypeVar

import typer
from pydantic import BaseModel, ValidationError

from src import __version__
from src.cli import (
    CommandService,
    FiniteSizeConfig,
    LevelStatsConfig,
    MBLConfig,
    PhaseDiagramConfig,
    SpectrumConfig,
    WindingConfig,
)
from src.cli.services import Outputs
from src.config import settings
from src.dependencies import get_command_service
from src.exceptions import ConfigError, NHAAHError
from src.history import get_history_service
from src.sweep import boundary_v1c

ConfigT = TypeVar("ConfigT", bound=BaseModel)

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="nhaah",
    help="Spectra, phase diagrams, windings and MBL diagnostics of non-Hermitian AAH lattices.",
    no_args_is_help=True,
    add_completion=False,
)


def setup_logging(verbose: bool = False) -> Path:
    """Configure logging to save to timestamped files."""
    log_dir = settings.LOG_DIR
    log_dir.mkdir(parents=True, exist_ok=True)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = log_dir / f"{timestamp}.log"

    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.FileHandler(log_file, encoding="utf-8"),
            logging.StreamHandler(),
        ],
        force=True,
    )
    logger.debug(f"Logging initialized. Log file: {log_file}")
    return log_file


def load_config(
    path: Path, model: type[ConfigT], workers: int | None = None, seed: int | None = None
) -> ConfigT:
    """Read a JSON config and apply the --workers / --seed overrides.

    Overrides land on the embedded sweep when there is one, otherwise on the
    top-level fields of the same name.

    Raises:
        ConfigError: If the file is unreadable or fails validation
    """
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config {path} must hold a JSON object")

    overrides = {"workers": workers, "master_seed": seed}
    target = raw["sweep"] if isinstance(raw.get("sweep"), dict) else raw
    for key, value in overrides.items():
        if value is None:
            continue
        if target is raw and key not in model.model_fields:
            logger.warning(f"--{key.replace('master_', '')} has no effect on {model.__name__}")
            continue
        target[key] = value

    try:
        return model.model_validate(raw)
    except ValidationError as e:
        messages = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
            for error in e.errors()
        )
        raise ConfigError(f"Invalid {model.__name__} config: {messages}") from e


def _run(
    subcommand: str,
    config_path: Path,
    model: type[ConfigT],
    out: Path | None,
    workers: int | None,
    seed: int | None,
    action: Callable[[CommandService, ConfigT, Path], Outputs],
) -> None:
    try:
        config = load_config(config_path, model, workers, seed)
    except ConfigError as e:
        logger.error(str(e))
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1) from e

    out = out or settings.DATA_FOLDER / subcommand
    out.mkdir(parents=True, exist_ok=True)
    service = get_command_service()
    manifest = service.execute(subcommand, config, out, lambda: action(service, config, out))
    if not manifest.success:
        typer.echo(f"Error: {manifest.error_message}", err=True)
        raise typer.Exit(code=1)
    typer.echo(f"Wrote {len(manifest.outputs)} files to {out} ({manifest.duration_s:.1f}s)")


ConfigOption = typer.Option(..., "--config", "-c", help="JSON config file")
OutOption = typer.Option(None, "--out", "-o", help="Output directory")
WorkersOption = typer.Option(None, "--workers", "-w", min=1, help="Worker processes")
SeedOption = typer.Option(None, "--seed", "-s", min=0, help="Master seed for phi samples")
ResumeOption = typer.Option(True, "--resume/--no-resume", help="Reuse cached sweep rows")


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level"),
) -> None:
    setup_logging(verbose)


@app.command()
def version() -> None:
    """Print the tool version."""
    typer.echo(__version__)


@app.command()
def spectrum(
    config: Path = ConfigOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
    seed: int | None = SeedOption,
) -> None:
    """Eigenvalues, optional eigenvectors and a density profile for one parameter point."""
    _run(
        "spectrum",
        config,
        SpectrumConfig,
        out,
        workers,
        seed,
        lambda service, cfg, path: service.spectrum(cfg, path),
    )


@app.command("phase-diagram")
def phase_diagram(
    config: Path = ConfigOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
    seed: int | None = SeedOption,
    resume: bool = ResumeOption,
) -> None:
    """Heat maps of phi-averaged observables over a 1- or 2-axis grid."""
    _run(
        "phase-diagram",
        config,
        PhaseDiagramConfig,
        out,
        workers,
        seed,
        lambda service, cfg, path: service.phase_diagram(cfg, path, resume),
    )


@app.command()
def winding(
    config: Path = ConfigOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
    seed: int | None = SeedOption,
    resume: bool = ResumeOption,
) -> None:
    """Winding numbers per grid point, optionally with determinant trajectories."""
    _run(
        "winding",
        config,
        WindingConfig,
        out,
        workers,
        seed,
        lambda service, cfg, path: service.winding(cfg, path, resume),
    )


@app.command()
def mbl(
    config: Path = ConfigOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
    seed: int | None = SeedOption,
    resume: bool = ResumeOption,
) -> None:
    """Many-body curves per system size with optional scaling collapse."""
    _run(
        "mbl",
        config,
        MBLConfig,
        out,
        workers,
        seed,
        lambda service, cfg, path: service.mbl(cfg, path, resume),
    )


@app.command()
def levelstats(
    config: Path = ConfigOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
    seed: int | None = SeedOption,
    resume: bool = ResumeOption,
) -> None:
    """Nearest-level spacing histogram against the reference distributions."""
    _run(
        "levelstats",
        config,
        LevelStatsConfig,
        out,
        workers,
        seed,
        lambda service, cfg, path: service.levelstats(cfg, path, resume),
    )


@app.command("finite-size")
def finite_size(
    config: Path = ConfigOption,
    out: Path | None = OutOption,
    workers: int | None = WorkersOption,
    seed: int | None = SeedOption,
    resume: bool = ResumeOption,
) -> None:
    """Per-size curves and transition points against 1/L."""
    _run(
        "finite-size",
        config,
        FiniteSizeConfig,
        out,
        workers,
        seed,
        lambda service, cfg, path: service.finite_size(cfg, path, resume),
    )


@app.command()
def boundary(
    g: float = typer.Option(0.0, "--g", help="Nonreciprocity strength"),
    h: float = typer.Option(0.0, "--h", help="Complex potential phase"),
    v2: float = typer.Option(0.0, "--V2", "--v2", help="Hopping modulation amplitude"),
    t: float = typer.Option(1.0, "--t", help="Uniform hopping"),
) -> None:
    """Print the analytic localization boundary V1c."""
    try:
        value = boundary_v1c(g, h, v2, t)
    except NHAAHError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=1) from e
    typer.echo(repr(value))


@app.command()
def history(
    limit: int = typer.Option(10, "--limit", "-n", min=1, help="Runs to list"),
    offset: int = typer.Option(0, "--offset", min=0),
    subcommand: str | None = typer.Option(None, "--subcommand", help="Filter by subcommand"),
) -> None:
    """List recent runs and ledger statistics."""
    service = get_history_service()
    listing = service.list_runs(limit=limit, offset=offset, subcommand=subcommand)
    for run in listing.items:
        status = "ok" if run.success else f"failed: {run.error_message}"
        typer.echo(
            f"{run.created_at:%Y-%m-%d %H:%M:%S}  {run.subcommand:<14} "
            f"{run.spec_hash[:12]}  {run.duration_ms or 0:>8} ms  {status}"
        )
    stats = service.run_statistics()
    typer.echo(
        f"{listing.total_count} runs in ledger, {stats.success_rate_percent}% successful"
    )


if __name__ == "__main__":
    app()
