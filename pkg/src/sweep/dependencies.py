from pathlib import Path

from .repositories import CacheRepository
from .services import SweepService


def get_cache_repository(root: Path | None = None) -> CacheRepository:
    return CacheRepository(root=root)


def get_sweep_service(root: Path | None = None) -> SweepService:
    return SweepService(cache_repository=get_cache_repository(root))
