"""Shared fixtures: isolated cache, outputs, logs and ledger per test."""

import sys
from pathlib import Path

import pytest

# Add the repository root to the path for `from src ...` imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import settings


def pytest_addoption(parser) -> None:
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run desk-scale reproduction tests (minutes to hours)",
    )


def pytest_collection_modifyitems(config, items) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point every writable location at the test's temporary directory."""
    monkeypatch.setattr(settings, "DATA_FOLDER", tmp_path / "data")
    monkeypatch.setattr(settings, "CACHE_DIR", tmp_path / "cache")
    monkeypatch.setattr(settings, "LOG_DIR", tmp_path / "logs")
    monkeypatch.setattr(settings, "DATABASE_URL", f"sqlite:///{tmp_path / 'runs.db'}")
    return tmp_path


@pytest.fixture
def cache_dir(isolated_settings: Path) -> Path:
    return isolated_settings / "cache"
