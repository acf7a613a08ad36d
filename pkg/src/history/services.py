"""
Service layer for the run ledger.
"""

import json
import logging
from uuid import UUID

from src.schemas import RunManifest

from .repositories import HistoryRepository
from .schemas import RunHistoryListResponse, RunHistoryResponse, RunStatisticsResponse

logger = logging.getLogger(__name__)


class HistoryService:
    """Service recording CLI runs in the ledger."""

    def __init__(self, repository: HistoryRepository):
        self.repository = repository

    def save_run(self, manifest: RunManifest) -> None | UUID:
        """Save a run manifest to the ledger."""
        try:
            run = self.repository.create_run(
                subcommand=manifest.subcommand,
                spec_hash=manifest.spec_hash,
                config_json=json.dumps(manifest.config, sort_keys=True),
                output_files=json.dumps(manifest.outputs),
                tool_version=manifest.tool_version,
                duration_ms=int(manifest.duration_s * 1000),
                success=manifest.success,
                error_message=manifest.error_message,
            )
            if not run:
                return None
            return run.id
        except Exception as e:
            logger.error(f"Failed to save run history: {e}")
            return None

    def list_runs(
        self, limit: int = 10, offset: int = 0, subcommand: str | None = None
    ) -> RunHistoryListResponse:
        return self.repository.get_runs_paginated(limit=limit, offset=offset, subcommand=subcommand)

    def get_run(self, run_id: UUID) -> RunHistoryResponse | None:
        return self.repository.get_run_by_id(run_id)

    def run_statistics(self) -> RunStatisticsResponse:
        """Get statistics about the ledger."""
        try:
            total_runs = self.repository.get_total_run_count()
            successful_runs = self.repository.get_successful_run_count()
            durations = self.repository.get_durations_ms()
            average_duration = sum(durations) / len(durations) if durations else None
            success_rate = successful_runs / total_runs * 100 if total_runs > 0 else 0
            return RunStatisticsResponse(
                total_runs=total_runs,
                successful_runs=successful_runs,
                success_rate_percent=round(success_rate, 2),
                average_duration_ms=(
                    round(average_duration, 2) if average_duration is not None else None
                ),
                runs_by_subcommand=self.repository.get_subcommand_counts(),
            )
        except Exception as e:
            logger.error(f"Failed to get run statistics: {e}")
            return RunStatisticsResponse(
                total_runs=0, successful_runs=0, success_rate_percent=0
            )
