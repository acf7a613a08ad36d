from .dependencies import get_history_service
from .models import RunHistory
from .services import HistoryService

__all__ = [
    "HistoryService",
    "RunHistory",
    "get_history_service",
]
