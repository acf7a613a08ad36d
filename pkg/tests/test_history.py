"""Tests for the SQLite run ledger and its initialization script."""

from datetime import datetime, timezone
from pathlib import Path

from sqlalchemy import create_engine

from src.history import get_history_service
from src.schemas import RunManifest
from src.scripts.run_init_db import EXPECTED_TABLES, check_tables_exist, init_database


def _manifest(subcommand: str, success: bool = True, duration_s: float = 0.5) -> RunManifest:
    return RunManifest(
        subcommand=subcommand,
        config={"L": 8, "V1": 1.0},
        spec_hash="abc123",
        outputs=["spectrum.csv", "manifest.json"],
        started_at=datetime.now(timezone.utc),
        duration_s=duration_s,
        tool_version="0.1.0",
        success=success,
        error_message=None if success else "boom",
    )


def test_save_and_list_runs(tmp_path: Path) -> None:
    """Saved manifests come back newest first with parsed output lists."""
    service = get_history_service(f"sqlite:///{tmp_path / 'ledger.db'}")

    # 1. Save
    first = service.save_run(_manifest("spectrum"))
    second = service.save_run(_manifest("phase-diagram", success=False, duration_s=1.5))
    assert first is not None and second is not None

    # 2. List
    listing = service.list_runs(limit=10)
    assert listing.total_count == 2
    assert [item.subcommand for item in listing.items] == ["phase-diagram", "spectrum"]
    assert listing.items[1].output_files == ["spectrum.csv", "manifest.json"]
    assert listing.items[0].error_message == "boom"

    # 3. Filter and page
    assert [item.id for item in service.list_runs(subcommand="spectrum").items] == [first]
    assert len(service.list_runs(limit=1, offset=1).items) == 1

    # 4. Lookup
    run = service.get_run(first)
    assert run is not None
    assert run.spec_hash == "abc123"
    assert run.duration_ms == 500


def test_run_statistics(tmp_path: Path) -> None:
    service = get_history_service(f"sqlite:///{tmp_path / 'ledger.db'}")
    empty = service.run_statistics()
    assert empty.total_runs == 0
    assert empty.success_rate_percent == 0
    assert empty.average_duration_ms is None

    service.save_run(_manifest("spectrum", duration_s=1.0))
    service.save_run(_manifest("spectrum", duration_s=2.0))
    service.save_run(_manifest("winding", success=False, duration_s=3.0))
    stats = service.run_statistics()
    assert stats.total_runs == 3
    assert stats.successful_runs == 2
    assert stats.success_rate_percent == 66.67
    assert stats.average_duration_ms == 2000.0
    assert stats.runs_by_subcommand == {"spectrum": 2, "winding": 1}


def test_init_database_creates_ledger(tmp_path: Path) -> None:
    url = f"sqlite:///{tmp_path / 'fresh.db'}"
    assert check_tables_exist(create_engine(url)) == {name: False for name in EXPECTED_TABLES}
    status = init_database(url, action="create")
    assert all(status.values())
    assert init_database(url, action="none") == status
