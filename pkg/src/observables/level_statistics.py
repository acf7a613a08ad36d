"""Nearest-level spacings in the complex plane and their comparison with reference laws."""

import logging
from collections.abc import Iterable

import numpy as np
from scipy import optimize, stats
from scipy.spatial import cKDTree

from src.config import settings
from src.exceptions import FitConvergenceError, ParameterError

from .distributions import ReferenceDistribution, ReferenceKind, sub_wigner_norm
from .schemas import Histogram, SpacingSample, SubWignerFit

logger = logging.getLogger(__name__)

MIN_FIT_BINS = 10
B_BOUNDS = (0.05, 10.0)
C_BOUNDS = (0.05, 20.0)


def normalize_spacings(values: Iterable[float]) -> np.ndarray:
    """Rescale to unit mean."""
    spacings = np.asarray(list(values), dtype=float)
    if spacings.size == 0:
        raise ParameterError("no spacings to normalize")
    mean = spacings.mean()
    if mean <= 0.0:
        raise ParameterError("all spacings are zero")
    return spacings / mean


def nearest_spacings(eigenvalues: np.ndarray) -> SpacingSample:
    """s_n = min_{m != n} |E_n - E_m| for every level.

    Exactly degenerate levels keep their zero spacing and are counted.
    """
    energies = np.asarray(eigenvalues, dtype=np.complex128).ravel()
    if energies.size < 2:
        raise ParameterError("nearest spacings need at least two eigenvalues")
    points = np.column_stack((energies.real, energies.imag))
    distances, _ = cKDTree(points).query(points, k=2)
    return spacing_sample(distances[:, 1])


def spacing_sample(raw: Iterable[float]) -> SpacingSample:
    """Wrap raw spacings with their unit-mean rescaling."""
    values = np.asarray(list(raw), dtype=float)
    if np.any(values < 0):
        raise ParameterError("spacings must be non-negative")
    degenerate = int(np.count_nonzero(values == 0.0))
    if degenerate:
        logger.warning("%d of %d spacings are exactly zero", degenerate, values.size)
    return SpacingSample(
        raw=values.tolist(),
        normalized=normalize_spacings(values).tolist(),
        mean_raw=float(values.mean()),
        n_degenerate=degenerate,
    )


def pool_spacings(samples: Iterable[SpacingSample]) -> SpacingSample:
    """Pool per-sample unit-mean spacings and renormalize the union."""
    samples = list(samples)
    if not samples:
        raise ParameterError("no spacing samples to pool")
    pooled = np.concatenate([np.asarray(sample.normalized) for sample in samples])
    raw = np.concatenate([np.asarray(sample.raw) for sample in samples])
    return SpacingSample(
        raw=raw.tolist(),
        normalized=normalize_spacings(pooled).tolist(),
        mean_raw=float(raw.mean()),
        n_degenerate=sum(sample.n_degenerate for sample in samples),
    )


def reference_pdf(kind: ReferenceKind | str, s, params: dict | None = None):
    """Pointwise density of a reference law; sub_wigner needs b and c (a optional)."""
    try:
        kind = ReferenceKind(kind)
    except ValueError as e:
        raise ParameterError(f"unknown reference distribution {kind!r}") from e
    return ReferenceDistribution(kind=kind, **(params or {})).pdf(s)


def spacing_histogram(sample: SpacingSample, bins: int | str | None = None) -> Histogram:
    """Density histogram of the normalized spacings (Freedman-Diaconis bins by default)."""
    bins = settings.HISTOGRAM_BINS if bins is None else bins
    values = np.asarray(sample.normalized)
    if values.size == 0:
        raise ParameterError("empty spacing sample")
    counts, edges = np.histogram(values, bins=bins)
    widths = np.diff(edges)
    density = counts / (counts.sum() * widths)
    return Histogram(edges=edges.tolist(), density=density.tolist(), counts=counts.tolist())


def histogram_residual(histogram: Histogram, ref: ReferenceDistribution) -> float:
    """Sum of squared deviations between the histogram and a reference pdf at bin centers."""
    model = ref.pdf(histogram.centers)
    return float(np.sum((model - np.asarray(histogram.density)) ** 2))


def _sub_wigner_residual(params: np.ndarray, centers: np.ndarray, density: np.ndarray) -> float:
    b, c = params
    a = sub_wigner_norm(b, c)
    model = a * np.power(centers, b) * np.exp(-c * centers**2)
    return float(np.sum((model - density) ** 2))


def fit_sub_wigner(histogram: Histogram) -> SubWignerFit:
    """Least-squares fit of a s^b exp(-c s^2) with a fixed by normalization.

    A coarse grid picks the starting point for a bounded Nelder-Mead search
    over (b, c).

    Raises:
        ParameterError: With fewer than ten nonempty bins
        FitConvergenceError: If the search does not converge
    """
    if histogram.nonempty_bins < MIN_FIT_BINS:
        raise ParameterError(
            f"sub-Wigner fit needs {MIN_FIT_BINS} nonempty bins, got {histogram.nonempty_bins}"
        )
    centers = histogram.centers
    density = np.asarray(histogram.density)

    grid = [(b, c) for b in np.linspace(0.5, 5.0, 10) for c in np.linspace(0.25, 5.0, 20)]
    start = min(grid, key=lambda point: _sub_wigner_residual(np.array(point), centers, density))
    result = optimize.minimize(
        _sub_wigner_residual,
        x0=np.array(start),
        args=(centers, density),
        method="Nelder-Mead",
        bounds=[B_BOUNDS, C_BOUNDS],
        options={"xatol": 1e-6, "fatol": 1e-10, "maxiter": 4000},
    )
    if not result.success:
        raise FitConvergenceError(f"sub-Wigner fit stopped: {result.message}", float(result.fun))

    b, c = (float(v) for v in result.x)
    logger.debug("sub-Wigner fit b=%.4f c=%.4f residual=%.3e", b, c, result.fun)
    return SubWignerFit(a=sub_wigner_norm(b, c), b=b, c=c, residual=float(result.fun))


def distribution_distance(sample: SpacingSample, ref: ReferenceDistribution) -> float:
    """Kolmogorov-Smirnov statistic of the normalized spacings against a reference CDF."""
    values = np.asarray(sample.normalized)
    if values.size == 0:
        raise ParameterError("empty spacing sample")
    return float(stats.kstest(values, ref.cdf).statistic)
