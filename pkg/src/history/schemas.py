"""
Schemas for the run ledger.
"""

import json
from datetime import datetime
from uuid import UUID

from pydantic import BaseModel, ConfigDict, Field, field_validator


class RunHistoryResponse(BaseModel):
    """Schema for one ledger entry."""

    model_config = ConfigDict(from_attributes=True)

    id: UUID
    subcommand: str
    spec_hash: str
    config_json: str
    output_files: list[str] = Field(default_factory=list)
    duration_ms: None | int = None
    tool_version: str
    created_at: datetime
    success: bool
    error_message: None | str = None

    @field_validator("output_files", mode="before")
    @classmethod
    def parse_output_files(cls, v):
        if isinstance(v, str):
            return json.loads(v)
        return v


class RunHistoryListResponse(BaseModel):
    """Schema for a paginated ledger listing."""

    items: list[RunHistoryResponse]
    total_count: int
    limit: int
    offset: int


class RunStatisticsResponse(BaseModel):
    """Schema for ledger statistics."""

    total_runs: int = Field(..., description="Total number of runs")
    successful_runs: int = Field(..., description="Number of successful runs")
    success_rate_percent: float = Field(..., description="Success rate as percentage")
    average_duration_ms: None | float = Field(
        default=None, description="Average run duration in milliseconds"
    )
    runs_by_subcommand: dict[str, int] = Field(default_factory=dict)
