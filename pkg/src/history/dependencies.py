from .repositories import HistoryRepository
from .services import HistoryService


def get_history_repository(database_url: str | None = None) -> HistoryRepository:
    return HistoryRepository(database_url=database_url)


def get_history_service(database_url: str | None = None) -> HistoryService:
    return HistoryService(repository=get_history_repository(database_url))
