"""Schemas for localization, entanglement and level-statistics reports."""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class Selection(StrEnum):
    ALL = "all"
    MID_SIXTH_REAL = "mid_sixth_real"
    CENTER_TENTH_COMPLEX = "center_tenth_complex"


class StateSelection(BaseModel):
    model_config = ConfigDict(frozen=True)

    selection: Selection
    indices: list[int] = Field(..., description="Eigenstate indices in spectrum order")
    requested: int = Field(..., description="Count asked for before clamping")
    clamped: bool = Field(False, description="The request was clamped to [1, D]")


class FDReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_state: list[float] = Field(..., description="eta_n for each selected state")
    averaged: float = Field(..., description="Mean eta over the selection")
    selection: Selection
    indices: list[int] = Field(default_factory=list)


class SpacingSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    raw: list[float] = Field(..., description="s_n = min_m |E_n - E_m|")
    normalized: list[float] = Field(..., description="Spacings rescaled to unit mean")
    mean_raw: float
    n_degenerate: int = Field(0, description="Spacings that are exactly zero")


class Histogram(BaseModel):
    model_config = ConfigDict(frozen=True)

    edges: list[float]
    density: list[float]
    counts: list[int]

    @property
    def centers(self) -> np.ndarray:
        edges = np.asarray(self.edges)
        return 0.5 * (edges[:-1] + edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.asarray(self.edges))

    @property
    def nonempty_bins(self) -> int:
        return sum(1 for count in self.counts if count > 0)


class SubWignerFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    residual: float = Field(..., description="Sum of squared pdf deviations over bins")
    converged: bool = True
