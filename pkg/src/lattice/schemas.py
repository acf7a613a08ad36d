"""Schemas for lattice parameters, Fock bases and Hamiltonian matrices."""

import hashlib
import json
import math
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import ParameterError

GOLDEN_ALPHA = (math.sqrt(5.0) - 1.0) / 2.0


class Boundary(StrEnum):
    PERIODIC = "periodic"
    OPEN = "open"


class FluxAxis(StrEnum):
    """Angle swept by a winding number: theta_g (hopping) or theta_h (potential)."""

    G = "g"
    H = "h"


class ModelParams(BaseModel):
    """Full parameter record of the non-Hermitian generalized AAH model."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    L: int = Field(..., description="Number of lattice sites", ge=2)
    t: float = Field(1.0, description="Uniform hopping, the energy unit")
    V1: float = Field(0.0, description="On-site modulation amplitude", ge=0.0)
    V2: float = Field(0.0, description="Hopping modulation amplitude", ge=0.0)
    alpha: float = Field(GOLDEN_ALPHA, description="Irrational modulation wavenumber")
    g: float = Field(0.0, description="Nonreciprocity strength")
    h: float = Field(0.0, description="Complex potential phase")
    theta_g: float = Field(0.0, description="Hopping flux angle (radians)")
    theta_h: float = Field(0.0, description="Potential phase angle (radians)")
    phi: float = Field(0.0, description="Sample phase shift (radians)")
    U: float = Field(0.0, description="Nearest-neighbour interaction", ge=0.0)
    N: int | None = Field(
        None, description="Particle number; None selects the single-particle sector"
    )
    boundary: Boundary = Field(Boundary.PERIODIC, description="Boundary condition")

    @model_validator(mode="after")
    def check_consistency(self) -> "ModelParams":
        for name in ("t", "V1", "V2", "alpha", "g", "h", "theta_g", "theta_h", "phi", "U"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite, got {getattr(self, name)}")
        if self.boundary == Boundary.PERIODIC and self.L < 3:
            raise ParameterError(f"periodic boundary needs L >= 3, got L={self.L}")
        if self.N is not None and not 0 <= self.N <= self.L:
            raise ParameterError(f"particle number N={self.N} outside [0, L={self.L}]")
        return self

    @property
    def is_many_body(self) -> bool:
        return self.N is not None

    def canonical_json(self) -> str:
        """Serialized form with sorted keys; floats keep full precision."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True)

    def canonical_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


class FockBasis(BaseModel):
    """Ascending fixed-N occupation words; bit j is the occupation of site j."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    L: int
    N: int
    states: np.ndarray = Field(..., description="Occupation words, strictly increasing")

    @property
    def dim(self) -> int:
        return int(self.states.size)

    def index(self, word: int) -> int:
        """Ordinal of an occupation word in the basis."""
        position = int(np.searchsorted(self.states, word))
        if position >= self.dim or int(self.states[position]) != word:
            raise KeyError(f"word {word:0{self.L}b} not in the N={self.N} basis")
        return position

    def indices(self, words: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.states, words)

    def occupations(self) -> np.ndarray:
        """D x L array of site occupations."""
        sites = np.arange(self.L, dtype=np.int64)
        return ((self.states[:, None] >> sites[None, :]) & 1).astype(np.int8)


class SingleParticleHamiltonian(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: ModelParams
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


class ManyBodyHamiltonian(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: ModelParams
    basis: FockBasis
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])
