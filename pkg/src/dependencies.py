"""
Dependency injection setup for the CLI services.
"""

from pathlib import Path

from src.cli.services import CommandService
from src.history import get_history_service
from src.sweep import get_sweep_service


def get_command_service(
    cache_dir: Path | None = None, database_url: str | None = None
) -> CommandService:
    return CommandService(
        sweep_service=get_sweep_service(cache_dir),
        history_service=get_history_service(database_url),
    )
