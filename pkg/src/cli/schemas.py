"""
Config files of the CLI subcommands, one model per subcommand.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import ParameterError
from src.lattice import FluxAxis, ModelParams
from src.observables import ReferenceKind
from src.sweep import Observable, SweepSpec, TransitionCriterion


class ConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpectrumConfig(ConfigModel):
    params: ModelParams
    eigenvectors: bool = Field(False, description="Also write the right eigenvectors")
    density_state: int | None = Field(
        None, description="State index for the density profile; ground state when omitted"
    )


class PhaseDiagramConfig(ConfigModel):
    sweep: SweepSpec
    boundary_overlay: bool = Field(True, description="Write the V1c curve when V1 is swept")


class WindingConfig(ConfigModel):
    sweep: SweepSpec
    nu: FluxAxis = Field(FluxAxis.G, description="Flux angle swept by the winding")
    det_trajectory: bool = Field(False, description="Write det H(theta) for every grid point")
    trajectory_points: int = Field(256, ge=2)
    flux_check: bool = Field(
        False, description="Write how far the spectrum moves as the flux angle turns"
    )

    @model_validator(mode="after")
    def add_winding_observable(self) -> "WindingConfig":
        observable = Observable.WINDING_G if self.nu == FluxAxis.G else Observable.WINDING_H
        if observable not in self.sweep.observables:
            self.sweep = self.sweep.model_copy(
                update={"observables": sorted({*self.sweep.observables, observable})}
            )
        return self


class CollapseRequest(ConfigModel):
    observable: Observable = Observable.EE
    x_c_range: tuple[float, float]
    nu_range: tuple[float, float]
    grid_size: int = Field(15, ge=3)


class TransitionRequest(ConfigModel):
    observable: Observable
    criterion: TransitionCriterion = TransitionCriterion.HALF_CROSSING
    tolerance: float = Field(1e-9, ge=0.0)


class MBLConfig(ConfigModel):
    sweep: SweepSpec
    sizes: list[int] = Field(..., min_length=1)
    half_filling: bool = True
    auto_samples: bool = Field(False, description="phi samples from the size-based default")
    size_mean: bool = Field(False, description="Also write the mean of the per-size curves")
    collapse: CollapseRequest | None = None
    transitions: list[TransitionRequest] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_axes(self) -> "MBLConfig":
        if len(self.sweep.axes) != 1:
            raise ParameterError("mbl sweeps must have exactly one axis")
        if self.sweep.base.N is None and not self.half_filling:
            raise ParameterError("mbl needs base.N or half_filling")
        return self


class LevelStatsConfig(ConfigModel):
    params: ModelParams
    n_phi_samples: int = Field(1, ge=1)
    master_seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    bins: int | str | None = Field(None, description="numpy bin rule or count")
    references: list[ReferenceKind] = Field(default_factory=lambda: list(ReferenceKind))
    sub_wigner: tuple[float, float] | None = Field(
        None, description="(b, c) for the sub-Wigner column; fitted when omitted"
    )


class FiniteSizeConfig(ConfigModel):
    sweep: SweepSpec
    sizes: list[int] = Field(..., min_length=2)
    half_filling: bool = False
    transitions: list[TransitionRequest] = Field(
        default_factory=lambda: [TransitionRequest(observable=Observable.F_IM)]
    )

    @model_validator(mode="after")
    def check_axes(self) -> "FiniteSizeConfig":
        if len(self.sweep.axes) != 1:
            raise ParameterError("finite-size sweeps must have exactly one axis")
        return self
