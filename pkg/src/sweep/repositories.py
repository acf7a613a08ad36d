"""
Repository layer for the on-disk sweep cache.

Layout: CACHE_DIR/<spec hash>/<grid index:06d>_<sample:04d>.json, one
successful ResultRow per file, written atomically.
"""

import logging
import os
import tempfile
from pathlib import Path

from pydantic import ValidationError

from src.config import settings

from .schemas import ResultRow, SweepSpec

logger = logging.getLogger(__name__)


class CacheRepository:
    """Append-only cache of per-job sweep results."""

    def __init__(self, root: Path | None = None):
        self.root = Path(root) if root is not None else settings.CACHE_DIR
        self.root.mkdir(parents=True, exist_ok=True)

    def spec_dir(self, spec_hash: str) -> Path:
        return self.root / spec_hash

    def row_path(self, spec_hash: str, grid_index: int, sample: int) -> Path:
        return self.spec_dir(spec_hash) / f"{grid_index:06d}_{sample:04d}.json"

    @staticmethod
    def _write_atomic(path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def save_spec(self, spec: SweepSpec) -> Path:
        """Store the spec next to its rows so a cache directory is self-describing."""
        path = self.spec_dir(spec.spec_hash()) / "spec.json"
        if not path.exists():
            self._write_atomic(path, spec.model_dump_json(indent=2, exclude={"workers"}))
        return path

    def load(self, spec_hash: str, grid_index: int, sample: int) -> ResultRow | None:
        """Get a cached row.

        Returns:
            ResultRow: The cached row, or None if absent or unreadable
        """
        path = self.row_path(spec_hash, grid_index, sample)
        if not path.exists():
            return None
        try:
            return ResultRow.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None

    def save(self, spec_hash: str, row: ResultRow) -> Path | None:
        """Persist a successful row; failed rows are never cached."""
        if row.error is not None:
            return None
        path = self.row_path(spec_hash, row.grid_index, row.sample)
        self._write_atomic(path, row.model_dump_json())
        return path

    def count(self, spec_hash: str) -> int:
        directory = self.spec_dir(spec_hash)
        if not directory.exists():
            return 0
        return sum(1 for path in directory.glob("[0-9]*_[0-9]*.json"))
