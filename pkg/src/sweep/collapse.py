"""Finite-size scaling collapse of curves for several system sizes."""

import logging
from collections.abc import Mapping

import numpy as np
from scipy import optimize

from src.exceptions import CollapseError, ParameterError

from .schemas import CollapseFit
from .transitions import Curve, curve_arrays

logger = logging.getLogger(__name__)

OVERLAP_POINTS = 50


def collapse_cost(
    curves: Mapping[int, Curve], x_c: float, nu: float, n_points: int = OVERLAP_POINTS
) -> float:
    """Mean squared deviation of each rescaled curve from the pointwise mean.

    x is mapped to (x - x_c) L^{1/nu}; all curves are interpolated onto the
    overlap of their rescaled supports.

    Raises:
        CollapseError: If the rescaled supports do not overlap
    """
    if len(curves) < 2:
        raise ParameterError("a collapse needs at least two system sizes")
    if nu <= 0:
        raise ParameterError(f"nu must be positive, got {nu}")

    scaled = {}
    for size, curve in curves.items():
        x, y = curve_arrays(curve)
        scaled[size] = ((x - x_c) * float(size) ** (1.0 / nu), y)
    lo = max(sx.min() for sx, _ in scaled.values())
    hi = min(sx.max() for sx, _ in scaled.values())
    if not hi > lo:
        offending = sorted(
            size for size, (sx, _) in scaled.items() if sx.min() == lo or sx.max() == hi
        )
        raise CollapseError(
            f"rescaled curves do not overlap at x_c={x_c:.4g}, nu={nu:.4g}", offending
        )

    grid = np.linspace(lo, hi, n_points)
    stacked = np.array([np.interp(grid, sx, y) for sx, y in scaled.values()])
    return float(np.mean((stacked - stacked.mean(axis=0)) ** 2))


def scaling_collapse(
    curves: Mapping[int, Curve],
    x_c_range: tuple[float, float],
    nu_range: tuple[float, float],
    grid_size: int = 15,
) -> CollapseFit:
    """Fit (x_c, nu) by a coarse grid search refined with Nelder-Mead.

    Args:
        curves: System size -> (x, y) curve
        x_c_range: Search interval for the critical value
        nu_range: Search interval for the exponent (positive)
        grid_size: Coarse grid points per parameter

    Returns:
        CollapseFit: The best evaluated point and the full search trace

    Raises:
        CollapseError: If no point in the search region has an overlap
    """
    if len(curves) < 2:
        raise ParameterError("a collapse needs at least two system sizes")
    if not 0 < nu_range[0] < nu_range[1] or not x_c_range[0] < x_c_range[1]:
        raise ParameterError(f"invalid search region x_c={x_c_range}, nu={nu_range}")

    trace: list[tuple[float, float, float]] = []
    last_error: CollapseError | None = None

    def objective(point: np.ndarray) -> float:
        nonlocal last_error
        x_c, nu = float(point[0]), float(point[1])
        if not (x_c_range[0] <= x_c <= x_c_range[1] and nu_range[0] <= nu <= nu_range[1]):
            return np.inf
        try:
            cost = collapse_cost(curves, x_c, nu)
        except CollapseError as e:
            last_error = e
            return np.inf
        trace.append((x_c, nu, cost))
        return cost

    for x_c in np.linspace(*x_c_range, grid_size):
        for nu in np.linspace(*nu_range, grid_size):
            objective(np.array([x_c, nu]))
    if not trace:
        raise CollapseError(
            "no overlap anywhere in the search region", last_error.sizes if last_error else []
        )

    start = min(trace, key=lambda item: item[2])
    optimize.minimize(
        objective,
        x0=np.array(start[:2]),
        method="Nelder-Mead",
        bounds=[x_c_range, nu_range],
        options={"xatol": 1e-6, "fatol": 1e-14, "maxiter": 2000},
    )
    best = min(trace, key=lambda item: item[2])
    logger.info("Collapse x_c=%.4f nu=%.4f cost=%.3e", *best)
    return CollapseFit(x_c=best[0], nu=best[1], cost=best[2], search_trace=trace)
