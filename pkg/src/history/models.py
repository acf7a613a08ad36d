"""
Database models for the run ledger.
"""

from datetime import datetime, timezone
from uuid import UUID, uuid4

from sqlmodel import Field, SQLModel


class RunHistory(SQLModel, table=True):
    """Model to track CLI runs."""

    id: None | UUID = Field(default_factory=uuid4, primary_key=True)
    subcommand: str = Field(..., description="Subcommand that was run")
    spec_hash: str = Field(..., index=True, description="Hash of the resolved config")
    config_json: str = Field(..., description="Resolved config as JSON")
    output_files: str = Field(default="[]", description="JSON list of written files")
    duration_ms: None | int = Field(default=None, description="Wall-clock duration")
    tool_version: str = Field(..., description="Package version that produced the run")
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    success: bool = Field(default=True, description="Whether all outputs were written")
    error_message: None | str = Field(default=None, description="Error message if the run failed")
