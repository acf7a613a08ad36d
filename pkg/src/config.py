"""Configuration module for the non-Hermitian AAH simulation toolkit."""

from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = Path(__file__).parent.parent


class Settings(BaseSettings):
    """Application configuration loaded from environment variables."""

    DATA_FOLDER: Path = Field(
        default=BASE_DIR / "data", description="Root directory for workflow outputs"
    )
    CACHE_DIR: Path = Field(
        default=BASE_DIR / "data" / "cache",
        description="Sweep cache, one file per (spec hash, grid index, sample)",
    )
    LOG_DIR: Path = Field(
        default=BASE_DIR / "logs", description="Directory for timestamped log files"
    )
    DATABASE_URL: str = Field(
        default=f"sqlite:///{BASE_DIR / 'data' / 'runs.db'}",
        description="SQLAlchemy URL of the run ledger",
    )

    # Numerical tolerances
    IMAG_CUTOFF: float = Field(
        default=1e-13, description="|Im E| above which an eigenvalue counts as complex"
    )
    RESIDUAL_TOLERANCE: float = Field(
        default=1e-10,
        description="Eigen-residual bound relative to the matrix infinity norm",
    )
    WINDING_TOLERANCE: float = Field(
        default=1e-3, description="Allowed distance of the raw winding from an integer"
    )

    # Many-body limits
    MAX_MANY_BODY_SITES: int = Field(
        default=24, description="Largest lattice accepted by the dense many-body path"
    )
    MEMORY_BUDGET_MB: float = Field(
        default=4096.0, description="Memory budget for one dense complex matrix"
    )

    # Winding numbers
    N_THETA: int = Field(default=256, description="Default flux grid size")
    N_THETA_MAX: int = Field(
        default=2**14, description="Cap on flux grid points after adaptive halving"
    )
    CLUSTER_SPACING_FACTOR: float = Field(
        default=5.0,
        description="Ring-detection linkage threshold in units of the median spacing",
    )

    # Level statistics
    GINIBRE_TRUNCATION: int = Field(
        default=300, description="Truncation order of the Ginibre spacing series"
    )
    HISTOGRAM_BINS: str = Field(
        default="fd", description="numpy histogram bin rule for spacing histograms"
    )

    # Sweeps
    PLATEAU_FRACTION: float = Field(
        default=0.2, description="Share of points on each side used as plateau"
    )
    DEFAULT_WORKERS: int = Field(default=1, description="Default worker count")

    model_config = SettingsConfigDict(
        env_prefix="NHAAH_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("DATA_FOLDER", "CACHE_DIR", "LOG_DIR")
    def validate_directories(cls, v):
        """Ensure that directory settings are Path objects that exist."""
        if not isinstance(v, Path):
            v = Path(v)
        v.mkdir(parents=True, exist_ok=True)
        return v


settings = Settings()  # type: ignore
