"""Transition points read off observable curves."""

import logging
from collections.abc import Sequence

import numpy as np

from src.config import settings
from src.exceptions import ParameterError, TransitionNotFoundError

from .schemas import TransitionCriterion

logger = logging.getLogger(__name__)

MIN_CURVE_POINTS = 5

Curve = Sequence[tuple[float, float]] | tuple[np.ndarray, np.ndarray]


def curve_arrays(curve: Curve) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(curve, tuple) and len(curve) == 2 and isinstance(curve[0], np.ndarray):
        x, y = (np.asarray(part, dtype=float) for part in curve)
    else:
        pairs = np.asarray(curve, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ParameterError("curve must be a sequence of (x, y) pairs")
        x, y = pairs[:, 0], pairs[:, 1]
    keep = np.isfinite(x) & np.isfinite(y)
    x, y = x[keep], y[keep]
    order = np.argsort(x, kind="stable")
    return x[order], y[order]


def _summary(x: np.ndarray, y: np.ndarray) -> dict[str, float]:
    return {
        "n_points": float(x.size),
        "x_min": float(x.min()),
        "x_max": float(x.max()),
        "y_min": float(y.min()),
        "y_max": float(y.max()),
        "y_first": float(y[0]),
        "y_last": float(y[-1]),
    }


def _first_crossing(x: np.ndarray, d: np.ndarray) -> float | None:
    """First x where d hits zero, linearly interpolated between samples."""
    for i in range(d.size):
        if d[i] == 0.0:
            return float(x[i])
        if i + 1 < d.size and d[i] * d[i + 1] < 0.0:
            return float(x[i] - d[i] * (x[i + 1] - x[i]) / (d[i + 1] - d[i]))
    return None


def _half_crossing(x: np.ndarray, y: np.ndarray, plateau_fraction: float) -> float:
    k = max(1, int(round(plateau_fraction * x.size)))
    low, high = y[:k].mean(), y[-k:].mean()
    if low == high:
        raise TransitionNotFoundError("curve has equal plateaus", _summary(x, y))
    crossing = _first_crossing(x, y - 0.5 * (low + high))
    if crossing is None:
        raise TransitionNotFoundError("curve never crosses its mid level", _summary(x, y))
    return crossing


def _size_crossing(x: np.ndarray, y: np.ndarray, other: Curve | None) -> float:
    if other is None:
        raise ParameterError("size_crossing needs a second curve")
    x2, y2 = curve_arrays(other)
    lo, hi = max(x.min(), x2.min()), min(x.max(), x2.max())
    grid = np.union1d(x[(x >= lo) & (x <= hi)], x2[(x2 >= lo) & (x2 <= hi)])
    if grid.size < 2:
        raise TransitionNotFoundError("curves do not overlap", _summary(x, y))
    crossing = _first_crossing(grid, np.interp(grid, x, y) - np.interp(grid, x2, y2))
    if crossing is None:
        raise TransitionNotFoundError("curves for the two sizes do not cross", _summary(x, y))
    return crossing


def _onset(x: np.ndarray, y: np.ndarray, tolerance: float) -> float:
    above = np.flatnonzero(np.abs(y) > tolerance)
    if above.size == 0:
        raise TransitionNotFoundError(f"|y| never exceeds {tolerance}", _summary(x, y))
    return float(x[above[0]])


def _vanishing(x: np.ndarray, y: np.ndarray, tolerance: float) -> float:
    nonzero = np.flatnonzero(np.abs(y) > tolerance)
    if nonzero.size == 0:
        raise TransitionNotFoundError("curve is zero everywhere", _summary(x, y))
    last = nonzero[-1]
    if last + 1 >= x.size:
        raise TransitionNotFoundError("curve does not vanish inside the range", _summary(x, y))
    return float(x[last + 1])


def detect_transition(
    curve: Curve,
    criterion: TransitionCriterion | str = TransitionCriterion.HALF_CROSSING,
    *,
    other: Curve | None = None,
    tolerance: float = 1e-9,
    plateau_fraction: float | None = None,
) -> float:
    """Locate a transition on a curve.

    half_crossing interpolates where y crosses the midpoint of its two
    plateaus (means of the outer points on each side). size_crossing returns
    where `curve` and `other` cross. onset returns the first x with
    |y| > tolerance, vanishing the first x from which y stays below it.

    Raises:
        ParameterError: With fewer than five points
        TransitionNotFoundError: If no transition lies in range
    """
    x, y = curve_arrays(curve)
    if x.size < MIN_CURVE_POINTS:
        raise ParameterError(f"need at least {MIN_CURVE_POINTS} points, got {x.size}")
    plateau_fraction = settings.PLATEAU_FRACTION if plateau_fraction is None else plateau_fraction

    match TransitionCriterion(criterion):
        case TransitionCriterion.HALF_CROSSING:
            value = _half_crossing(x, y, plateau_fraction)
        case TransitionCriterion.SIZE_CROSSING:
            value = _size_crossing(x, y, other)
        case TransitionCriterion.ONSET:
            value = _onset(x, y, tolerance)
        case TransitionCriterion.VANISHING:
            value = _vanishing(x, y, tolerance)
    logger.debug("Transition (%s) at x=%.6g", criterion, value)
    return value
