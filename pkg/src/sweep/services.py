"""
Service layer running parameter sweeps over the model.
"""

import logging
import math
from collections.abc import Iterable
from datetime import datetime, timezone

import numpy as np
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits
from tqdm import tqdm

from src import __version__
from src.exceptions import IndeterminateWindingError, NHAAHError
from src.lattice import (
    FluxAxis,
    ModelParams,
    build_fock_basis,
    build_many_body,
    build_single_particle,
    hamiltonian_family,
)
from src.observables import averaged_ee, averaged_fd, nearest_spacings
from src.spectral import complex_fraction, eig, headline_winding, max_imag, winding_with_retry

from .repositories import CacheRepository
from .schemas import (
    AveragedRow,
    Observable,
    ResultRow,
    ResultTable,
    SweepManifest,
    SweepSpec,
    TransitionCriterion,
)
from .transitions import detect_transition

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def default_phi_samples(L: int) -> int:
    """Number of phi samples used for a many-body chain of L sites."""
    if L <= 10:
        return 100
    if L <= 12:
        return 30
    return 10


def derive_phi(master_seed: int, grid_index: int, sample: int) -> float:
    """phi in [0, 2 pi) from a counter-based stream keyed by the master seed."""
    bit_generator = np.random.Philox(key=master_seed, counter=[sample, grid_index, 0, 0])
    return float(np.random.Generator(bit_generator).random() * TWO_PI)


def job_params(spec: SweepSpec, grid_index: int, sample: int) -> ModelParams:
    coords = spec.grid()[grid_index]
    phi = derive_phi(spec.master_seed, grid_index, sample) if spec.random_phi else spec.base.phi
    return ModelParams.model_validate({**spec.base.model_dump(), **coords, "phi": phi})


def evaluate_params(p: ModelParams, spec: SweepSpec) -> ResultRow:
    """Build, diagonalize and evaluate every requested observable at one parameter point."""
    observables = set(spec.observables)
    needs_vectors = bool(observables & {Observable.FD, Observable.EE})
    basis = build_fock_basis(p.L, p.N) if p.is_many_body else None
    if basis is not None:
        matrix = build_many_body(p, basis).matrix
    else:
        matrix = build_single_particle(p).matrix
    spectrum = eig(matrix, params=p, vectors=needs_vectors)

    values: dict[str, float | None] = {}
    indeterminate: list[str] = []
    spacings = None
    for observable in spec.observables:
        match observable:
            case Observable.F_IM:
                values[observable] = complex_fraction(spectrum)
            case Observable.EPSILON:
                values[observable] = max_imag(spectrum)
            case Observable.FD:
                values[observable] = averaged_fd(spectrum, spec.fd_selection).averaged
            case Observable.EE:
                values[observable] = averaged_ee(spectrum, basis, spec.ee_fraction)
            case Observable.SPACINGS:
                sample = nearest_spacings(spectrum.eigenvalues)
                spacings = sample.raw
                values[observable] = sample.mean_raw
            case Observable.WINDING_G | Observable.WINDING_H:
                nu = FluxAxis.G if observable == Observable.WINDING_G else FluxAxis.H
                family = hamiltonian_family(p, nu, basis)
                try:
                    if basis is not None:
                        result = winding_with_retry(family, nu, 0j, spectrum, spec.n_theta)
                    else:
                        result = headline_winding(family, nu, spectrum, spec.n_theta)
                    values[observable] = float(result.w)
                except IndeterminateWindingError as e:
                    logger.warning(f"Indeterminate {observable} at {p.canonical_json()}: {e}")
                    values[observable] = None
                    indeterminate.append(observable.value)

    return ResultRow(
        grid_index=-1,
        sample=-1,
        phi=p.phi,
        coords={},
        values=values,
        spacings=spacings,
        indeterminate=indeterminate,
        degraded=spectrum.degraded,
    )


def evaluate_job(spec: SweepSpec, grid_index: int, sample: int) -> ResultRow:
    """One (grid point, sample) job; failures become an error row.

    BLAS runs single-threaded inside a job so rows are bit-identical for any
    worker count.
    """
    coords = spec.grid()[grid_index]
    phi = derive_phi(spec.master_seed, grid_index, sample) if spec.random_phi else spec.base.phi
    try:
        with threadpool_limits(limits=1, user_api="blas"):
            row = evaluate_params(job_params(spec, grid_index, sample), spec)
    except (NHAAHError, ValueError, np.linalg.LinAlgError) as e:
        logger.warning(f"Job (grid={grid_index}, sample={sample}) failed: {e}")
        return ResultRow(grid_index=grid_index, sample=sample, phi=phi, coords=coords, error=str(e))
    return row.model_copy(update={"grid_index": grid_index, "sample": sample, "coords": coords})


def average_rows(spec: SweepSpec, rows: list[ResultRow]) -> list[AveragedRow]:
    """Per-grid-point means over phi samples, skipping failed and indeterminate entries."""
    by_point: dict[int, list[ResultRow]] = {}
    for row in rows:
        by_point.setdefault(row.grid_index, []).append(row)

    averaged = []
    for grid_index, coords in enumerate(spec.grid()):
        point_rows = by_point.get(grid_index, [])
        means: dict[str, float | None] = {}
        n_valid: dict[str, int] = {}
        for observable in spec.observables:
            samples = [
                row.values[observable]
                for row in point_rows
                if row.error is None and row.values.get(observable) is not None
            ]
            n_valid[observable] = len(samples)
            means[observable] = float(np.mean(samples)) if samples else None
        averaged.append(
            AveragedRow(grid_index=grid_index, coords=coords, means=means, n_valid=n_valid)
        )
    return averaged


class SweepService:
    def __init__(self, cache_repository: CacheRepository):
        self.cache_repository = cache_repository

    def run_sweep(self, spec: SweepSpec, resume: bool = True, progress: bool = True) -> ResultTable:
        """Run every (grid point, phi sample) job of a sweep.

        Args:
            spec: The sweep specification
            resume: Reuse cached rows from earlier runs of the same spec
            progress: Show a textual progress line

        Returns:
            ResultTable: Rows ordered by (grid index, sample), averages and manifest
        """
        spec_hash = spec.spec_hash()
        manifest = SweepManifest(
            spec_hash=spec_hash,
            code_version=__version__,
            started_at=datetime.now(timezone.utc),
            n_jobs=spec.n_points * spec.n_phi_samples,
        )
        self.cache_repository.save_spec(spec)
        logger.info(
            f"Sweep {spec_hash[:12]}: {spec.n_points} points x {spec.n_phi_samples} samples "
            f"on {spec.workers} worker(s)"
        )

        jobs = [(g, k) for g in range(spec.n_points) for k in range(spec.n_phi_samples)]
        rows: dict[tuple[int, int], ResultRow] = {}
        if resume:
            for g, k in jobs:
                cached = self.cache_repository.load(spec_hash, g, k)
                if cached is not None:
                    rows[(g, k)] = cached
        pending = [job for job in jobs if job not in rows]
        manifest.cache_hits = len(rows)
        if manifest.cache_hits:
            logger.info(f"Reusing {manifest.cache_hits} cached rows")

        if pending:
            results = Parallel(n_jobs=spec.workers, return_as="generator")(
                delayed(evaluate_job)(spec, g, k) for g, k in pending
            )
            for row in tqdm(results, total=len(pending), desc="sweep", disable=not progress):
                rows[(row.grid_index, row.sample)] = row
                self.cache_repository.save(spec_hash, row)
        manifest.computed = len(pending)

        ordered = [rows[job] for job in jobs]
        manifest.failed = sum(1 for row in ordered if row.error is not None)
        manifest.indeterminate_windings = sum(len(row.indeterminate) for row in ordered)
        manifest.degraded = sum(1 for row in ordered if row.degraded)
        manifest.finished_at = datetime.now(timezone.utc)
        if manifest.failed:
            logger.warning(f"{manifest.failed} of {len(jobs)} jobs failed")
        logger.info(
            f"Sweep {spec_hash[:12]} finished: {manifest.computed} computed, "
            f"{manifest.cache_hits} cached"
        )
        return ResultTable(
            spec=spec,
            rows=ordered,
            averaged=average_rows(spec, ordered),
            manifest=manifest,
        )

    def averaged_winding(
        self, spec: SweepSpec, nu: FluxAxis | str = FluxAxis.G, resume: bool = True
    ) -> list[tuple[dict[str, float], float | None, int]]:
        """Mean winding per grid point over phi samples, with the number of resolved samples."""
        observable = Observable.WINDING_G if FluxAxis(nu) == FluxAxis.G else Observable.WINDING_H
        if observable not in spec.observables:
            spec = spec.model_copy(update={"observables": sorted({*spec.observables, observable})})
        table = self.run_sweep(spec, resume=resume)
        return [
            (row.coords, row.means[observable], row.n_valid[observable]) for row in table.averaged
        ]

    def run_size_series(
        self,
        spec: SweepSpec,
        sizes: Iterable[int],
        half_filling: bool = False,
        auto_samples: bool = False,
        resume: bool = True,
    ) -> dict[int, ResultTable]:
        """The same sweep for several system sizes.

        Args:
            spec: Template sweep; base.L is replaced per size
            sizes: Lattice sizes
            half_filling: Set N = L // 2 for every size
            auto_samples: Use default_phi_samples(L) instead of spec.n_phi_samples
            resume: Reuse cached rows
        """
        series = {}
        for size in sizes:
            update = {"L": size}
            if half_filling:
                update["N"] = size // 2
            base = ModelParams.model_validate({**spec.base.model_dump(), **update})
            samples = default_phi_samples(size) if auto_samples else spec.n_phi_samples
            sized = SweepSpec.model_validate(
                {**spec.model_dump(), "base": base.model_dump(), "n_phi_samples": samples}
            )
            series[size] = self.run_sweep(sized, resume=resume)
        return series

    @staticmethod
    def transition_points_by_size(
        series: dict[int, ResultTable],
        observable: Observable | str,
        criterion: TransitionCriterion | str = TransitionCriterion.HALF_CROSSING,
        tolerance: float = 1e-9,
    ) -> dict[int, float | None]:
        """Transition point of each size's averaged curve; None where none is found."""
        points: dict[int, float | None] = {}
        for size, table in sorted(series.items()):
            try:
                points[size] = detect_transition(
                    table.curve(observable), criterion, tolerance=tolerance
                )
            except NHAAHError as e:
                logger.warning(f"No transition for L={size}: {e}")
                points[size] = None
        return points
