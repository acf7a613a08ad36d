"""Schemas for parameter sweeps, their results and fitted transitions."""

import hashlib
import itertools
import json
from datetime import datetime
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import settings
from src.exceptions import ParameterError
from src.lattice import ModelParams
from src.observables import Selection

SWEEPABLE_FIELDS = ("t", "V1", "V2", "alpha", "g", "h", "theta_g", "theta_h", "U")
MAX_SEED = 2**64 - 1


class Observable(StrEnum):
    F_IM = "f_im"
    EPSILON = "epsilon"
    FD = "fd"
    EE = "ee"
    WINDING_G = "winding_g"
    WINDING_H = "winding_h"
    SPACINGS = "spacings"


WINDING_OBSERVABLES = (Observable.WINDING_G, Observable.WINDING_H)


class TransitionCriterion(StrEnum):
    HALF_CROSSING = "half_crossing"
    SIZE_CROSSING = "size_crossing"
    ONSET = "onset"
    VANISHING = "vanishing"


class HermitianPhase(StrEnum):
    EXTENDED = "extended"
    CRITICAL = "critical"
    LOCALIZED = "localized"


class SweepAxis(BaseModel):
    """One swept parameter; count=1 pins the axis at `min`."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., description="ModelParams field to sweep")
    min: float
    max: float
    count: int = Field(..., ge=1)

    @field_validator("name")
    @classmethod
    def check_name(cls, v: str) -> str:
        if v not in SWEEPABLE_FIELDS:
            raise ParameterError(f"cannot sweep {v!r}; choose one of {', '.join(SWEEPABLE_FIELDS)}")
        return v

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, self.count)


class SweepSpec(BaseModel):
    """A 1- or 2-axis grid of model parameters, sampled over phi."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: ModelParams
    axes: list[SweepAxis] = Field(..., min_length=1, max_length=2)
    observables: list[Observable] = Field(..., min_length=1)
    n_phi_samples: int = Field(1, ge=1)
    random_phi: bool = Field(True, description="Draw phi per sample; otherwise keep base.phi")
    master_seed: int = Field(0, ge=0, le=MAX_SEED)
    workers: int = Field(default_factory=lambda: settings.DEFAULT_WORKERS, ge=1)
    fd_selection: Selection = Field(Selection.ALL)
    ee_fraction: float = Field(0.1, gt=0.0, le=1.0)
    n_theta: int | None = Field(None, ge=64, description="Flux grid size for windings")

    @field_validator("observables")
    @classmethod
    def dedupe_observables(cls, v: list[Observable]) -> list[Observable]:
        return sorted(set(v))

    @model_validator(mode="after")
    def check_axes(self) -> "SweepSpec":
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ParameterError(f"duplicate sweep axes: {names}")
        if Observable.EE in self.observables and self.base.N is None:
            raise ParameterError("entanglement entropy needs a many-body sector (set base.N)")
        return self

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(axis.count for axis in self.axes)

    @property
    def n_points(self) -> int:
        return int(np.prod(self.shape))

    def grid(self) -> list[dict[str, float]]:
        """Grid coordinates in row-major order (first axis outermost)."""
        names = [axis.name for axis in self.axes]
        return [
            dict(zip(names, (float(v) for v in point), strict=True))
            for point in itertools.product(*(axis.values() for axis in self.axes))
        ]

    def spec_hash(self) -> str:
        """SHA-256 of the sorted-key JSON of everything but the worker count."""
        payload = self.model_dump(mode="json", exclude={"workers"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


class ResultRow(BaseModel):
    grid_index: int
    sample: int
    phi: float
    coords: dict[str, float]
    values: dict[str, float | None] = Field(default_factory=dict)
    spacings: list[float] | None = Field(None, description="Raw nearest-level spacings")
    indeterminate: list[str] = Field(
        default_factory=list, description="Winding observables that could not be resolved"
    )
    degraded: bool = False
    error: str | None = None


class AveragedRow(BaseModel):
    grid_index: int
    coords: dict[str, float]
    means: dict[str, float | None]
    n_valid: dict[str, int]


class SweepManifest(BaseModel):
    spec_hash: str
    code_version: str
    started_at: datetime
    finished_at: datetime | None = None
    n_jobs: int = 0
    cache_hits: int = 0
    computed: int = 0
    failed: int = 0
    indeterminate_windings: int = 0
    degraded: int = 0


class ResultTable(BaseModel):
    spec: SweepSpec
    rows: list[ResultRow]
    averaged: list[AveragedRow]
    manifest: SweepManifest

    def curve(self, observable: Observable | str) -> tuple[np.ndarray, np.ndarray]:
        """(x, mean y) along the first axis of a 1-axis sweep."""
        if len(self.spec.axes) != 1:
            raise ParameterError("curves are defined for 1-axis sweeps only")
        name = self.spec.axes[0].name
        key = Observable(observable).value
        x = np.array([row.coords[name] for row in self.averaged])
        y = np.array(
            [np.nan if row.means.get(key) is None else row.means[key] for row in self.averaged]
        )
        return x, y

    def heatmap(self, observable: Observable | str) -> np.ndarray:
        """Averaged values reshaped to the grid shape."""
        key = Observable(observable).value
        values = [np.nan if row.means.get(key) is None else row.means[key] for row in self.averaged]
        return np.array(values, dtype=float).reshape(self.spec.shape)


class CollapseFit(BaseModel):
    x_c: float
    nu: float
    cost: float
    search_trace: list[tuple[float, float, float]] = Field(
        default_factory=list, description="(x_c, nu, cost) of every finite evaluation"
    )
