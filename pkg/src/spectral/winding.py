"""Spectral winding numbers of det(H(theta) - E_B) around the origin."""

import logging
from collections.abc import Callable

import numpy as np
from joblib import Parallel, delayed
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial import cKDTree

from src.config import settings
from src.exceptions import (
    IndeterminateWindingError,
    ParameterError,
    SingularMatrixError,
)
from src.lattice import FluxAxis

from .determinants import log_det_phase
from .eigensolver import eig, match_spectra
from .schemas import Spectrum, WindingResult

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
MAX_STEP = np.pi / 2
MIN_THETA_POINTS = 64


def _wrap(angle: float) -> float:
    return float((angle + np.pi) % TWO_PI - np.pi)


def _phase_at(family: Callable[[float], np.ndarray], theta: float, E_B: complex) -> float:
    return log_det_phase(family(theta), E_B)[1]


def _accumulate(
    family: Callable[[float], np.ndarray],
    E_B: complex,
    thetas: np.ndarray,
    phases: np.ndarray,
    max_points: int,
) -> tuple[float, int]:
    """Sum wrapped phase increments, bisecting intervals whose step exceeds pi/2."""
    total = 0.0
    points = len(thetas)
    for a, b, pa, pb in zip(thetas[:-1], thetas[1:], phases[:-1], phases[1:], strict=True):
        stack = [(a, b, pa, pb)]
        while stack:
            lo, hi, p_lo, p_hi = stack.pop()
            step = _wrap(p_hi - p_lo)
            if abs(step) <= MAX_STEP:
                total += step
                continue
            if points >= max_points:
                raise IndeterminateWindingError(
                    f"phase still jumps by {abs(step):.3f} rad near theta={lo:.6f} "
                    f"after {points} evaluations",
                    raw_phase=total / TWO_PI,
                )
            mid = 0.5 * (lo + hi)
            p_mid = _phase_at(family, mid, E_B)
            points += 1
            stack.append((mid, hi, p_mid, p_hi))
            stack.append((lo, mid, p_lo, p_mid))
    return total, points


def winding_number(
    family: Callable[[float], np.ndarray],
    nu: FluxAxis | str,
    E_B: complex,
    n_theta: int | None = None,
    *,
    tolerance: float | None = None,
    max_points: int | None = None,
    close_loop: bool | None = None,
    n_jobs: int = 1,
) -> WindingResult:
    """Winding of arg det(H(theta) - E_B) as theta runs over [0, 2 pi].

    The path is sampled on a uniform grid and refined wherever consecutive
    phases differ by more than pi/2. A theta_g family returns to H(0) up to
    a gauge transformation, so its accumulated phase must itself land within
    tolerance of an integer. The theta_h family only comes back approximately
    at finite L; by default its loop is closed on theta = 0 and the mismatch
    is logged and kept as closure_error. A mismatch above pi/2 means the
    family is not a loop at all.

    Args:
        family: theta -> H(theta)
        nu: Which angle the family sweeps
        E_B: Base energy
        n_theta: Initial grid size (at least 64)
        tolerance: Allowed distance of raw_phase from an integer
        max_points: Evaluation cap before giving up
        close_loop: Close the loop on theta = 0 (default: only for theta_h)
        n_jobs: Parallel workers for the initial grid

    Returns:
        WindingResult: Integer winding and diagnostics

    Raises:
        IndeterminateWindingError: If E_B lies on the trail, the path cannot be
            resolved or the accumulated phase is not close to an integer
    """
    n = settings.N_THETA if n_theta is None else n_theta
    if n < MIN_THETA_POINTS:
        raise ParameterError(f"n_theta must be at least {MIN_THETA_POINTS}, got {n}")
    tolerance = settings.WINDING_TOLERANCE if tolerance is None else tolerance
    max_points = settings.N_THETA_MAX if max_points is None else max_points
    axis = FluxAxis(nu)
    close_loop = axis == FluxAxis.H if close_loop is None else close_loop

    thetas = np.linspace(0.0, TWO_PI, n + 1)
    try:
        phases = np.array(
            Parallel(n_jobs=n_jobs, prefer="threads")(
                delayed(_phase_at)(family, theta, E_B) for theta in thetas
            )
        )
        total, points = _accumulate(family, E_B, thetas, phases, max_points)
    except SingularMatrixError as e:
        raise IndeterminateWindingError(f"E_B={E_B} lies on the spectral trail: {e}") from e

    closure = _wrap(phases[-1] - phases[0])
    if abs(closure) > MAX_STEP:
        raise IndeterminateWindingError(
            f"flux family is not periodic: arg det moves by {closure:.3f} rad "
            f"between theta=0 and theta=2 pi at E_B={E_B}",
            raw_phase=total / TWO_PI,
        )
    if close_loop:
        if abs(closure) >= TWO_PI * tolerance:
            logger.info(
                "Closing the theta_%s loop across a %.3e rad mismatch at E_B=%s", axis, closure, E_B
            )
        total -= closure

    raw_phase = total / TWO_PI
    w = round(raw_phase)
    if abs(raw_phase - w) >= tolerance:
        raise IndeterminateWindingError(
            f"accumulated phase {raw_phase:.6f} is not within {tolerance} of an integer",
            raw_phase=raw_phase,
        )
    logger.debug("w_%s=%d at E_B=%s (%d points)", axis, w, E_B, points)
    return WindingResult(
        nu=axis,
        E_B=complex(E_B),
        w=int(w),
        raw_phase=float(raw_phase),
        n_theta=points,
        closure_error=abs(closure),
    )


def median_spacing(eigenvalues: np.ndarray) -> float:
    """Median nearest-neighbour distance in the complex plane."""
    energies = np.asarray(eigenvalues, dtype=np.complex128)
    if energies.size < 2:
        return 0.0
    points = np.column_stack((energies.real, energies.imag))
    distances, _ = cKDTree(points).query(points, k=2)
    return float(np.median(distances[:, 1]))


def select_base_energies(
    s: Spectrum, factor: float | None = None, cutoff: float | None = None
) -> list[complex]:
    """Candidate base energies: one centroid per complex cluster, then 0.

    Eigenvalues are grouped by single linkage at factor times the median
    nearest-neighbour spacing. Clusters that spread in Im E are loops
    worth encircling.
    """
    factor = settings.CLUSTER_SPACING_FACTOR if factor is None else factor
    cutoff = settings.IMAG_CUTOFF if cutoff is None else cutoff
    energies = s.eigenvalues
    if energies.size < 2 or not np.any(np.abs(energies.imag) > cutoff):
        return [0j]

    spacing = median_spacing(energies)
    if spacing <= 0.0:
        spacing = float(np.ptp(np.abs(energies))) / energies.size or 1.0
    points = np.column_stack((energies.real, energies.imag))
    labels = fcluster(linkage(points, method="single"), t=factor * spacing, criterion="distance")

    candidates: list[complex] = []
    for label in np.unique(labels):
        members = energies[labels == label]
        if np.ptp(members.imag) > cutoff:
            candidates.append(complex(members.mean()))
    candidates.append(0j)
    logger.debug("Selected %d base energies", len(candidates))
    return candidates


def _perturbation(s: Spectrum | None) -> float:
    if s is not None:
        spacing = median_spacing(s.eigenvalues)
        if spacing > 0.0:
            return 0.5 * spacing
        return 1e-3 * (1.0 + float(np.max(np.abs(s.eigenvalues), initial=0.0)))
    return 1e-3


def winding_with_retry(
    family: Callable[[float], np.ndarray],
    nu: FluxAxis | str,
    E_B: complex,
    spectrum: Spectrum | None = None,
    n_theta: int | None = None,
    n_jobs: int = 1,
) -> WindingResult:
    """winding_number with one retry at E_B shifted along the imaginary axis."""
    try:
        return winding_number(family, nu, E_B, n_theta, n_jobs=n_jobs)
    except IndeterminateWindingError as e:
        shifted = E_B + 1j * _perturbation(spectrum)
        logger.warning("Retrying winding at E_B=%s after: %s", shifted, e)
    result = winding_number(family, nu, shifted, n_theta, n_jobs=n_jobs)
    return result.model_copy(update={"perturbed": True})


def headline_winding(
    family: Callable[[float], np.ndarray],
    nu: FluxAxis | str,
    spectrum: Spectrum,
    n_theta: int | None = None,
    n_jobs: int = 1,
) -> WindingResult:
    """Largest |w| over the candidate base energies of a spectrum.

    Raises:
        IndeterminateWindingError: If every candidate fails after its retry
    """
    best: WindingResult | None = None
    failures: list[str] = []
    for E_B in select_base_energies(spectrum):
        try:
            result = winding_with_retry(family, nu, E_B, spectrum, n_theta, n_jobs)
        except IndeterminateWindingError as e:
            failures.append(f"{E_B}: {e}")
            continue
        if best is None or abs(result.w) > abs(best.w):
            best = result
    if best is None:
        raise IndeterminateWindingError(
            "no base energy gave a determinate winding: " + "; ".join(failures)
        )
    return best


def flux_sensitivity(family: Callable[[float], np.ndarray], n_angles: int = 4) -> float:
    """Largest matched-spectrum distance between H(0) and H(theta) on a grid of flux angles.

    Zero for a family whose spectrum does not feel the flux; the nonreciprocal
    family twisted along theta_h is only approximately invariant at finite L.
    """
    if n_angles < 1:
        raise ParameterError(f"n_angles must be positive, got {n_angles}")
    reference = eig(family(0.0), vectors=False).eigenvalues
    deviation = max(
        match_spectra(reference, eig(family(theta), vectors=False).eigenvalues)
        for theta in np.linspace(0.0, TWO_PI, n_angles + 1)[1:]
    )
    logger.debug("Flux sensitivity over %d angles: %.3e", n_angles, deviation)
    return deviation
