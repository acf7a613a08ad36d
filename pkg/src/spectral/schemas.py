"""Schemas for spectra and winding numbers."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.lattice import FluxAxis


class Spectrum(BaseModel):
    """Eigenvalues sorted by (Re E, Im E) with unit-norm right eigenvectors."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: np.ndarray = Field(..., description="Complex energies, sorted")
    right_vectors: np.ndarray | None = Field(
        None, description="Unit-norm right eigenvectors as columns"
    )
    residual: float = Field(..., description="max_n ||H v_n - E_n v_n||_inf")
    matrix_norm: float = Field(..., description="Infinity norm of the matrix")
    degraded: bool = Field(
        False, description="Residual exceeded the tolerance relative to the norm"
    )

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)


class WindingResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu: FluxAxis = Field(..., description="Swept angle")
    E_B: complex = Field(..., description="Base energy actually used")
    w: int = Field(..., description="Winding number")
    raw_phase: float = Field(..., description="Accumulated argument / 2 pi")
    n_theta: int = Field(..., description="Flux points evaluated, refinements included")
    closure_error: float = Field(
        0.0, description="|arg det H(2 pi) - arg det H(0)| of the open path"
    )
    perturbed: bool = Field(
        False, description="E_B was moved off a trail after a failed attempt"
    )
