from datetime import datetime
from typing import Any

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """Record of one CLI invocation, written as manifest.json next to its outputs."""

    subcommand: str = Field(..., description="Subcommand that produced the outputs")
    config: dict[str, Any] = Field(..., description="Resolved config after flag overrides")
    spec_hash: str = Field(..., description="Hash keying the sweep cache")
    outputs: list[str] = Field(default_factory=list, description="Files written, relative to --out")
    started_at: datetime
    duration_s: float = Field(0.0, description="Wall-clock duration in seconds")
    tool_version: str
    success: bool = True
    error_message: str | None = None
    details: dict[str, Any] = Field(
        default_factory=dict,
        description="Subcommand extras: sweep counters, KS distances, fits",
    )
