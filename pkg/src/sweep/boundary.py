"""Analytic single-particle localization boundary."""

import math

from src.exceptions import ParameterError

from .schemas import HermitianPhase


def boundary_v1c(g: float, h: float, V2: float, t: float = 1.0) -> float:
    """Critical V1 of the single-particle localization transition.

    V1c = e^{-|h|} (2K cosh|g| + 2 sqrt(K^2 - V2^2) sinh|g|), K = max(t, V2).
    """
    for name, value in (("g", g), ("h", h), ("V2", V2), ("t", t)):
        if not math.isfinite(value):
            raise ParameterError(f"{name} must be finite, got {value}")
    K = max(t, V2)
    return math.exp(-abs(h)) * (
        2.0 * K * math.cosh(abs(g)) + 2.0 * math.sqrt(K * K - V2 * V2) * math.sinh(abs(g))
    )


def classify_hermitian_phase(V1: float, V2: float, t: float = 1.0) -> HermitianPhase:
    """Phase of the Hermitian model: localized above V1 = 2 max(t, V2),
    extended below V1 = 2t with V2 < t, critical elsewhere."""
    if V1 > 2.0 * max(t, V2):
        return HermitianPhase.LOCALIZED
    if V1 < 2.0 * t and V2 < t:
        return HermitianPhase.EXTENDED
    return HermitianPhase.CRITICAL
