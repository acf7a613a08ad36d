"""
Service layer behind the CLI subcommands.

Each subcommand method writes its files into the output directory and
returns (written paths, manifest details). `execute` wraps a subcommand with
timing, the manifest file and the run ledger.
"""

import hashlib
import json
import logging
import time
from collections.abc import Callable
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from src import __version__
from src.exceptions import (
    FitConvergenceError,
    IncompleteOutputError,
    NHAAHError,
    ParameterError,
)
from src.history import HistoryService
from src.lattice import build_fock_basis, build_many_body, build_single_particle, hamiltonian_family
from src.observables import (
    ReferenceDistribution,
    ReferenceKind,
    density_profile,
    distribution_distance,
    fit_sub_wigner,
    ground_state_index,
    histogram_residual,
    pool_spacings,
    site_density,
    spacing_histogram,
    spacing_sample,
)
from src.schemas import RunManifest
from src.spectral import complex_fraction, det_trajectory, eig, flux_sensitivity, max_imag
from src.sweep import (
    Observable,
    ResultTable,
    SweepAxis,
    SweepService,
    SweepSpec,
    TransitionCriterion,
    boundary_v1c,
    detect_transition,
    job_params,
    scaling_collapse,
)
from src.writers import (
    write_csv,
    write_eigenvectors,
    write_histogram_csv,
    write_json,
    write_manifest,
    write_spectrum_csv,
)

from .schemas import (
    FiniteSizeConfig,
    LevelStatsConfig,
    MBLConfig,
    PhaseDiagramConfig,
    SpectrumConfig,
    TransitionRequest,
    WindingConfig,
)

logger = logging.getLogger(__name__)

MIN_SPACINGS = 100

Outputs = tuple[list[Path], dict[str, Any]]


def config_hash(config: BaseModel) -> str:
    payload = json.dumps(config.model_dump(mode="json"), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _value_columns(table: ResultTable) -> list[str]:
    return [str(observable) for observable in table.spec.observables]


def write_rows_csv(path: Path, table: ResultTable) -> Path:
    """Per-(grid point, sample) rows of a sweep."""
    axes = [axis.name for axis in table.spec.axes]
    observables = _value_columns(table)
    rows = (
        (
            row.grid_index,
            row.sample,
            row.phi,
            *(row.coords[name] for name in axes),
            *(row.values.get(name) for name in observables),
            row.error or "",
        )
        for row in table.rows
    )
    return write_csv(
        path,
        ["grid_index", "sample", "phi", *axes, *observables, "error"],
        rows,
        {"spec_hash": table.manifest.spec_hash, "master_seed": table.spec.master_seed},
    )


def write_averaged_csv(path: Path, table: ResultTable, metadata: dict | None = None) -> Path:
    """phi-averaged values per grid point, long format."""
    axes = [axis.name for axis in table.spec.axes]
    observables = _value_columns(table)
    rows = (
        (
            *(row.coords[name] for name in axes),
            *(row.means[name] for name in observables),
            *(row.n_valid[name] for name in observables),
        )
        for row in table.averaged
    )
    return write_csv(
        path,
        [*axes, *observables, *(f"n_{name}" for name in observables)],
        rows,
        {
            "spec_hash": table.manifest.spec_hash,
            "L": table.spec.base.L,
            "N": table.spec.base.N,
            "n_phi_samples": table.spec.n_phi_samples,
            **(metadata or {}),
        },
    )


def _sweep_details(table: ResultTable) -> dict[str, Any]:
    manifest = table.manifest
    return {
        "spec_hash": manifest.spec_hash,
        "cache_hits": manifest.cache_hits,
        "computed": manifest.computed,
        "failed": manifest.failed,
        "indeterminate_windings": manifest.indeterminate_windings,
        "degraded": manifest.degraded,
    }


def _transitions(
    curves: dict[int, tuple[np.ndarray, np.ndarray]], request: TransitionRequest
) -> dict[str, float | None]:
    """Transition points per size, or per consecutive size pair for size_crossing."""
    points: dict[str, float | None] = {}
    sizes = sorted(curves)
    if request.criterion == TransitionCriterion.SIZE_CROSSING:
        pairs = [(f"{a}-{b}", curves[a], curves[b]) for a, b in zip(sizes, sizes[1:], strict=False)]
    else:
        pairs = [(str(size), curves[size], None) for size in sizes]
    for key, curve, other in pairs:
        try:
            points[key] = detect_transition(
                curve, request.criterion, other=other, tolerance=request.tolerance
            )
        except NHAAHError as e:
            logger.warning(f"No {request.criterion} transition of {request.observable} ({key}): {e}")
            points[key] = None
    return points


class CommandService:
    def __init__(self, sweep_service: SweepService, history_service: HistoryService):
        self.sweep_service = sweep_service
        self.history_service = history_service

    def execute(
        self,
        subcommand: str,
        config: BaseModel,
        out: Path,
        action: Callable[[], Outputs],
        spec_hash: str | None = None,
    ) -> RunManifest:
        """Run a subcommand, then write manifest.json and record the run in the ledger."""
        started_at = datetime.now(timezone.utc)
        start_time = time.perf_counter()
        outputs: list[Path] = []
        details: dict[str, Any] = {}
        success = True
        error_message = None
        try:
            outputs, details = action()
        except IncompleteOutputError as e:
            outputs, details = e.outputs, e.details
            success = False
            error_message = str(e)
            logger.error(f"{subcommand} is incomplete: {e}")
        except (NHAAHError, ValueError, OSError) as e:
            success = False
            error_message = str(e)
            logger.error(f"{subcommand} failed: {e}")

        manifest = RunManifest(
            subcommand=subcommand,
            config=config.model_dump(mode="json"),
            spec_hash=details.get("spec_hash") or spec_hash or config_hash(config),
            outputs=sorted(str(path.relative_to(out)) for path in outputs),
            started_at=started_at,
            duration_s=time.perf_counter() - start_time,
            tool_version=__version__,
            success=success,
            error_message=error_message,
            details=details,
        )
        try:
            write_manifest(out / "manifest.json", manifest)
        except OSError as e:
            logger.error(f"Failed to write manifest: {e}")
            manifest = manifest.model_copy(update={"success": False, "error_message": str(e)})
        self.history_service.save_run(manifest)
        return manifest

    def spectrum(self, config: SpectrumConfig, out: Path) -> Outputs:
        """Eigenvalues, optional eigenvectors and one density profile."""
        p = config.params
        basis = build_fock_basis(p.L, p.N) if p.is_many_body else None
        matrix = build_many_body(p, basis).matrix if basis else build_single_particle(p).matrix
        spectrum = eig(matrix, params=p)
        metadata = {"param_hash": p.canonical_hash(), "params": p.canonical_json()}

        outputs = [write_spectrum_csv(out / "spectrum.csv", spectrum, metadata)]
        if config.eigenvectors:
            outputs.extend(
                write_eigenvectors(out / "eigenvectors.bin", spectrum.right_vectors, p.canonical_hash())
            )

        index = ground_state_index(spectrum) if config.density_state is None else config.density_state
        if not 0 <= index < spectrum.dim:
            raise ParameterError(f"density_state {index} outside [0, {spectrum.dim})")
        state = spectrum.right_vectors[:, index]
        profile = site_density(state, basis) if basis else density_profile(state)
        energy = spectrum.eigenvalues[index]
        outputs.append(
            write_csv(
                out / "density.csv",
                ["site", "density"],
                enumerate(profile.tolist()),
                {**metadata, "state_index": index, "energy": energy},
            )
        )
        details = {
            "spec_hash": p.canonical_hash(),
            "f_im": complex_fraction(spectrum),
            "epsilon": max_imag(spectrum),
            "residual": spectrum.residual,
            "degraded": spectrum.degraded,
        }
        return outputs, details

    def phase_diagram(self, config: PhaseDiagramConfig, out: Path, resume: bool = True) -> Outputs:
        """Heat-map table per grid point plus the analytic boundary overlay."""
        spec = config.sweep
        table = self.sweep_service.run_sweep(spec, resume=resume)
        axes = [axis.name for axis in spec.axes]
        outputs = [
            write_csv(
                out / f"heatmap_{observable}.csv",
                [*axes, "mean", "n_valid"],
                (
                    (
                        *(row.coords[name] for name in axes),
                        row.means[observable],
                        row.n_valid[observable],
                    )
                    for row in table.averaged
                ),
                {"spec_hash": table.manifest.spec_hash, "shape": "x".join(map(str, spec.shape))},
            )
            for observable in _value_columns(table)
        ]
        outputs.append(write_rows_csv(out / "rows.csv", table))

        if config.boundary_overlay and "V1" in axes:
            others = [axis for axis in spec.axes if axis.name != "V1"]
            base = spec.base.model_dump()
            if others:
                other = others[0]
                points = [{other.name: float(v)} for v in other.values()]
                header = [other.name, "V1c"]
            else:
                points = [{}]
                header = ["V1c"]
            rows = []
            for point in points:
                merged = {**base, **point}
                v1c = boundary_v1c(merged["g"], merged["h"], merged["V2"], merged["t"])
                rows.append((*point.values(), v1c))
            outputs.append(write_csv(out / "boundary.csv", header, rows, {"formula": "V1c(g, h, V2, t)"}))
        return outputs, _sweep_details(table)

    def winding(self, config: WindingConfig, out: Path, resume: bool = True) -> Outputs:
        """Averaged windings per grid point and optional determinant trajectories."""
        spec = config.sweep
        table = self.sweep_service.run_sweep(spec, resume=resume)
        observable = Observable.WINDING_G if config.nu == "g" else Observable.WINDING_H
        axes = [axis.name for axis in spec.axes]
        indeterminate = {
            row.grid_index: 0 for row in table.averaged
        }
        for row in table.rows:
            if str(observable) in row.indeterminate:
                indeterminate[row.grid_index] += 1

        outputs = [
            write_csv(
                out / "winding.csv",
                [*axes, "w_mean", "n_valid", "n_indeterminate"],
                (
                    (
                        *(row.coords[name] for name in axes),
                        row.means[observable],
                        row.n_valid[observable],
                        indeterminate[row.grid_index],
                    )
                    for row in table.averaged
                ),
                {"spec_hash": table.manifest.spec_hash, "nu": config.nu},
            ),
            write_rows_csv(out / "rows.csv", table),
        ]

        skipped = []
        sensitivity: list[tuple[float, ...]] = []
        thetas = np.linspace(0.0, 2.0 * np.pi, config.trajectory_points + 1)
        for grid_index in range(spec.n_points if config.det_trajectory or config.flux_check else 0):
            p = job_params(spec, grid_index, 0)
            basis = build_fock_basis(p.L, p.N) if p.is_many_body else None
            family = hamiltonian_family(p, config.nu, basis)
            if config.flux_check:
                coords = spec.grid()[grid_index]
                sensitivity.append((*(coords[name] for name in axes), flux_sensitivity(family)))
            if not config.det_trajectory:
                continue
            try:
                values = det_trajectory(family, config.trajectory_points)
            except NHAAHError as e:
                logger.warning(f"No determinant trajectory at grid point {grid_index}: {e}")
                skipped.append(grid_index)
                continue
            outputs.append(
                write_csv(
                    out / f"det_trajectory_{grid_index:06d}.csv",
                    ["theta", "re", "im"],
                    zip(thetas.tolist(), values.real.tolist(), values.imag.tolist(), strict=True),
                    {"param_hash": p.canonical_hash(), "nu": config.nu},
                )
            )

        details: dict[str, Any] = {**_sweep_details(table), "trajectory_skipped": skipped}
        if sensitivity:
            largest = max(row[-1] for row in sensitivity)
            logger.info(f"Largest spectral shift along theta_{config.nu}: {largest:.3e}")
            outputs.append(
                write_csv(
                    out / "flux_sensitivity.csv",
                    [*axes, "max_shift"],
                    sensitivity,
                    {"spec_hash": table.manifest.spec_hash, "nu": config.nu},
                )
            )
            details["max_flux_shift"] = largest
        if skipped:
            raise IncompleteOutputError(
                f"no determinant trajectory for grid points {skipped}", outputs, details
            )
        return outputs, details

    def mbl(self, config: MBLConfig, out: Path, resume: bool = True) -> Outputs:
        """Per-size phi-averaged curves with optional collapse and transition points."""
        series = self.sweep_service.run_size_series(
            config.sweep,
            config.sizes,
            half_filling=config.half_filling,
            auto_samples=config.auto_samples,
            resume=resume,
        )
        outputs = [
            write_averaged_csv(out / f"curves_L{size:03d}.csv", table)
            for size, table in sorted(series.items())
        ]
        details: dict[str, Any] = {
            "sizes": {str(size): _sweep_details(table) for size, table in series.items()}
        }

        if config.size_mean:
            axis = config.sweep.axes[0].name
            observables = [str(observable) for observable in config.sweep.observables]
            x = config.sweep.axes[0].values()
            means = {
                name: np.nanmean([table.curve(name)[1] for table in series.values()], axis=0)
                for name in observables
            }
            outputs.append(
                write_csv(
                    out / "curves_mean.csv",
                    [axis, *observables],
                    zip(x.tolist(), *(means[name].tolist() for name in observables), strict=True),
                    {"sizes": " ".join(str(size) for size in sorted(series))},
                )
            )

        if config.collapse is not None:
            request = config.collapse
            curves = {size: table.curve(request.observable) for size, table in series.items()}
            fit = scaling_collapse(curves, request.x_c_range, request.nu_range, request.grid_size)
            outputs.append(write_json(out / "collapse.json", fit.model_dump(mode="json")))
            details["collapse"] = {"x_c": fit.x_c, "nu": fit.nu, "cost": fit.cost}

        if config.transitions:
            transitions = {
                f"{request.observable}:{request.criterion}": _transitions(
                    {size: table.curve(request.observable) for size, table in series.items()},
                    request,
                )
                for request in config.transitions
            }
            outputs.append(write_json(out / "transitions.json", transitions))
            details["transitions"] = transitions
        return outputs, details

    def levelstats(self, config: LevelStatsConfig, out: Path, resume: bool = True) -> Outputs:
        """Pooled spacing histogram against the reference laws, with KS distances."""
        p = config.params
        spec = SweepSpec(
            base=p,
            axes=[SweepAxis(name="V1", min=p.V1, max=p.V1, count=1)],
            observables=[Observable.SPACINGS],
            n_phi_samples=config.n_phi_samples,
            master_seed=config.master_seed,
            workers=config.workers,
        )
        table = self.sweep_service.run_sweep(spec, resume=resume)
        samples = [spacing_sample(row.spacings) for row in table.rows if row.spacings]
        pooled = pool_spacings(samples)
        if len(pooled.normalized) < MIN_SPACINGS:
            logger.warning(f"Only {len(pooled.normalized)} spacings; statistics will be noisy")
        histogram = spacing_histogram(pooled, config.bins)

        details: dict[str, Any] = {**_sweep_details(table), "n_spacings": len(pooled.normalized)}
        references: dict[str, ReferenceDistribution] = {}
        dropped: list[str] = []
        for kind in config.references:
            if kind != ReferenceKind.SUB_WIGNER:
                references[str(kind)] = ReferenceDistribution(kind=kind)
            elif config.sub_wigner is not None:
                references[str(kind)] = ReferenceDistribution.sub_wigner(*config.sub_wigner)
            else:
                try:
                    fit = fit_sub_wigner(histogram)
                except (ParameterError, FitConvergenceError) as e:
                    logger.warning(f"Skipping sub-Wigner reference: {e}")
                    dropped.append(f"{kind}: {e}")
                    continue
                details["sub_wigner_fit"] = fit.model_dump()
                references[str(kind)] = ReferenceDistribution(
                    kind=kind, a=fit.a, b=fit.b, c=fit.c
                )

        details["ks_distance"] = {
            name: distribution_distance(pooled, ref) for name, ref in references.items()
        }
        details["histogram_residual"] = {
            name: histogram_residual(histogram, ref) for name, ref in references.items()
        }
        metadata = {
            "spec_hash": table.manifest.spec_hash,
            "n_spacings": len(pooled.normalized),
            "n_degenerate": pooled.n_degenerate,
        }
        outputs = [
            write_histogram_csv(out / "levelstats.csv", histogram, references, metadata),
            write_csv(
                out / "spacings.csv",
                ["normalized_spacing"],
                ((value,) for value in pooled.normalized),
                metadata,
            ),
        ]
        if dropped:
            raise IncompleteOutputError(
                "requested reference laws missing: " + "; ".join(dropped), outputs, details
            )
        return outputs, details

    def finite_size(self, config: FiniteSizeConfig, out: Path, resume: bool = True) -> Outputs:
        """Per-size curves and transition points against 1/L."""
        series = self.sweep_service.run_size_series(
            config.sweep, config.sizes, half_filling=config.half_filling, resume=resume
        )
        outputs = [
            write_averaged_csv(out / f"curves_L{size:04d}.csv", table)
            for size, table in sorted(series.items())
        ]
        columns = [f"{request.observable}:{request.criterion}" for request in config.transitions]
        points = {
            column: self.sweep_service.transition_points_by_size(
                series, request.observable, request.criterion, request.tolerance
            )
            for column, request in zip(columns, config.transitions, strict=True)
        }
        rows = (
            (size, 1.0 / size, *(points[column][size] for column in columns))
            for size in sorted(series)
        )
        outputs.append(write_csv(out / "transitions.csv", ["L", "inv_L", *columns], rows))
        details = {
            "sizes": {str(size): _sweep_details(table) for size, table in series.items()},
            "transitions": {column: {str(k): v for k, v in value.items()} for column, value in points.items()},
        }
        return outputs, details
