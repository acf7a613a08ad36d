"""
Repository layer for run ledger data access.
"""

import logging
from collections import Counter
from uuid import UUID

from sqlmodel import Session, SQLModel, create_engine, desc, func, select

from src.config import settings

from .models import RunHistory
from .schemas import RunHistoryListResponse, RunHistoryResponse

logger = logging.getLogger(__name__)


class HistoryRepository:
    """Repository for run ledger database operations."""

    def __init__(self, database_url: str | None = None):
        self.engine = create_engine(database_url or settings.DATABASE_URL)
        SQLModel.metadata.create_all(self.engine, tables=[RunHistory.__table__])

    def create_run(
        self,
        subcommand: str,
        spec_hash: str,
        config_json: str,
        output_files: str,
        tool_version: str,
        duration_ms: None | int = None,
        success: bool = True,
        error_message: None | str = None,
    ) -> None | RunHistoryResponse:
        """Create a new ledger record.

        Returns:
            RunHistoryResponse: The created record, or None if failed
        """
        try:
            with Session(self.engine) as session:
                run = RunHistory(
                    subcommand=subcommand,
                    spec_hash=spec_hash,
                    config_json=config_json,
                    output_files=output_files,
                    tool_version=tool_version,
                    duration_ms=duration_ms,
                    success=success,
                    error_message=error_message,
                )
                session.add(run)
                session.commit()
                session.refresh(run)

                logger.info(f"Created run history with ID: {run.id}")
                return RunHistoryResponse.model_validate(run)

        except Exception as e:
            logger.error(f"Failed to create run history: {e}")
            return None

    def get_runs_paginated(
        self, limit: int = 10, offset: int = 0, subcommand: str | None = None
    ) -> RunHistoryListResponse:
        """Get ledger records, newest first.

        Args:
            limit: Maximum number of records to return
            offset: Number of records to skip
            subcommand: Only runs of this subcommand
        """
        try:
            with Session(self.engine) as session:
                statement = select(RunHistory)
                if subcommand is not None:
                    statement = statement.where(RunHistory.subcommand == subcommand)
                statement = (
                    statement.order_by(desc(RunHistory.created_at)).limit(limit).offset(offset)
                )
                results = session.exec(statement).all()
                return RunHistoryListResponse(
                    items=[RunHistoryResponse.model_validate(item) for item in results],
                    total_count=self.get_total_run_count(),
                    limit=limit,
                    offset=offset,
                )

        except Exception as e:
            logger.error(f"Failed to get paginated run history: {e}")
            return RunHistoryListResponse(items=[], total_count=0, limit=limit, offset=offset)

    def get_run_by_id(self, run_id: UUID) -> None | RunHistoryResponse:
        try:
            with Session(self.engine) as session:
                result = session.get(RunHistory, run_id)
                return RunHistoryResponse.model_validate(result) if result else None

        except Exception as e:
            logger.error(f"Failed to get run by ID {run_id}: {e}")
            return None

    def get_total_run_count(self) -> int:
        try:
            with Session(self.engine) as session:
                return session.exec(select(func.count()).select_from(RunHistory)).one()

        except Exception as e:
            logger.error(f"Failed to get total run count: {e}")
            return 0

    def get_successful_run_count(self) -> int:
        try:
            with Session(self.engine) as session:
                statement = (
                    select(func.count())
                    .select_from(RunHistory)
                    .where(RunHistory.success == True)  # noqa: E712
                )
                return session.exec(statement).one()

        except Exception as e:
            logger.error(f"Failed to get successful run count: {e}")
            return 0

    def get_durations_ms(self) -> list[int]:
        try:
            with Session(self.engine) as session:
                statement = select(RunHistory.duration_ms).where(
                    RunHistory.duration_ms != None  # noqa: E711
                )
                return list(session.exec(statement).all())

        except Exception as e:
            logger.error(f"Failed to get run durations: {e}")
            return []

    def get_subcommand_counts(self) -> dict[str, int]:
        try:
            with Session(self.engine) as session:
                return dict(Counter(session.exec(select(RunHistory.subcommand)).all()))

        except Exception as e:
            logger.error(f"Failed to count runs by subcommand: {e}")
            return {}
