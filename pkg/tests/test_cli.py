"""End-to-end tests of the nhaah command line on small lattices."""

import csv
import json
import math
from pathlib import Path

import pytest
from click.testing import Result
from typer.testing import CliRunner

from src.exceptions import FitConvergenceError
from src.main import app

runner = CliRunner()


def _write_config(tmp_path: Path, name: str, payload: dict) -> Path:
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def _read_csv(path: Path) -> list[dict[str, str]]:
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


def _manifest(out: Path) -> dict:
    return json.loads((out / "manifest.json").read_text(encoding="utf-8"))


def _invoke(*args: str) -> Result:
    result = runner.invoke(app, list(args))
    assert result.exit_code == 0, result.output
    return result


def test_boundary() -> None:
    result = _invoke("boundary", "--g", "0.5")
    assert float(result.output.strip()) == pytest.approx(2 * math.exp(0.5), rel=1e-12)
    result = _invoke("boundary", "--h", "0.5", "--V2", "1.5")
    assert float(result.output.strip()) == pytest.approx(3 * math.exp(-0.5), rel=1e-12)


def test_version() -> None:
    assert _invoke("version").output.strip()


def test_hermitian_spectrum(tmp_path: Path) -> None:
    config = _write_config(tmp_path, "spectrum", {"params": {"L": 89, "V1": 1.0, "V2": 0.3}})
    out = tmp_path / "spectrum"
    _invoke("spectrum", "--config", str(config), "--out", str(out))

    rows = _read_csv(out / "spectrum.csv")
    assert len(rows) == 89
    assert all(abs(float(row["im"])) < 1e-13 for row in rows)
    density = [float(row["density"]) for row in _read_csv(out / "density.csv")]
    assert sum(density) == pytest.approx(1.0)

    manifest = _manifest(out)
    assert manifest["success"]
    assert manifest["subcommand"] == "spectrum"
    assert sorted(manifest["outputs"]) == ["density.csv", "spectrum.csv"]
    assert manifest["details"]["f_im"] == 0.0


def test_spectrum_is_reproducible(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path,
        "spectrum",
        {"params": {"L": 34, "V1": 1.2, "V2": 0.4, "g": 0.3, "h": 0.2}, "eigenvectors": True},
    )
    first, second = tmp_path / "first", tmp_path / "second"
    _invoke("spectrum", "-c", str(config), "-o", str(first))
    _invoke("spectrum", "-c", str(config), "-o", str(second), "--workers", "4")
    assert (first / "spectrum.csv").read_bytes() == (second / "spectrum.csv").read_bytes()
    assert (first / "eigenvectors.bin").stat().st_size == 34 * 34 * 16
    header = json.loads((first / "eigenvectors.json").read_text(encoding="utf-8"))
    assert header["shape"] == [34, 34]


def test_many_body_spectrum_density(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path, "spectrum", {"params": {"L": 8, "N": 3, "V1": 2.0, "U": 1.0}, "density_state": 4}
    )
    out = tmp_path / "mb"
    _invoke("spectrum", "-c", str(config), "-o", str(out))
    assert len(_read_csv(out / "spectrum.csv")) == 56
    density = [float(row["density"]) for row in _read_csv(out / "density.csv")]
    assert sum(density) == pytest.approx(3.0)


def test_invalid_configs(tmp_path: Path) -> None:
    malformed = tmp_path / "broken.json"
    malformed.write_text("{not json", encoding="utf-8")
    result = runner.invoke(app, ["spectrum", "-c", str(malformed)])
    assert result.exit_code == 1
    assert "Error" in result.output

    invalid = _write_config(tmp_path, "invalid", {"params": {"L": 8, "V1": -1.0}})
    result = runner.invoke(app, ["spectrum", "-c", str(invalid)])
    assert result.exit_code == 1
    assert "params.V1" in result.output

    out_of_range = _write_config(tmp_path, "range", {"params": {"L": 8}, "density_state": 8})
    out = tmp_path / "range"
    result = runner.invoke(app, ["spectrum", "-c", str(out_of_range), "-o", str(out)])
    assert result.exit_code == 1
    assert not _manifest(out)["success"]


def test_phase_diagram_and_resume(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path,
        "phase",
        {
            "sweep": {
                "base": {"L": 21, "g": 0.5},
                "axes": [
                    {"name": "V1", "min": 0.5, "max": 4.0, "count": 3},
                    {"name": "V2", "min": 0.0, "max": 0.5, "count": 2},
                ],
                "observables": ["fd", "f_im"],
                "random_phi": False,
            }
        },
    )
    out = tmp_path / "phase"
    _invoke("phase-diagram", "-c", str(config), "-o", str(out))
    manifest = _manifest(out)
    assert manifest["outputs"] == [
        "boundary.csv",
        "heatmap_f_im.csv",
        "heatmap_fd.csv",
        "rows.csv",
    ]
    assert manifest["details"]["computed"] == 6
    heatmap = _read_csv(out / "heatmap_fd.csv")
    assert [(row["V1"], row["V2"]) for row in heatmap[:2]] == [("0.5", "0.0"), ("0.5", "0.5")]
    assert len(_read_csv(out / "boundary.csv")) == 2

    _invoke("phase-diagram", "-c", str(config), "-o", str(out))
    manifest = _manifest(out)
    assert manifest["details"]["cache_hits"] == 6
    assert manifest["details"]["computed"] == 0


def test_winding_with_trajectories(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path,
        "winding",
        {
            "sweep": {
                "base": {"L": 13, "g": 0.5},
                "axes": [{"name": "V1", "min": 0.5, "max": 8.0, "count": 2}],
                "observables": ["f_im"],
                "random_phi": False,
            },
            "det_trajectory": True,
            "trajectory_points": 64,
            "flux_check": True,
        },
    )
    out = tmp_path / "winding"
    _invoke("winding", "-c", str(config), "-o", str(out))
    windings = _read_csv(out / "winding.csv")
    assert abs(float(windings[0]["w_mean"])) >= 1
    assert float(windings[1]["w_mean"]) == 0
    trajectory = _read_csv(out / "det_trajectory_000000.csv")
    assert len(trajectory) == 65
    assert float(trajectory[-1]["theta"]) == pytest.approx(2 * math.pi)
    shifts = _read_csv(out / "flux_sensitivity.csv")
    assert len(shifts) == 2
    assert float(shifts[0]["max_shift"]) > 1e-3


def test_missing_trajectory_fails_the_run(tmp_path: Path) -> None:
    """A clean four-site ring has E = 0 in its spectrum, so det H(0) vanishes at V1 = 0."""
    config = _write_config(
        tmp_path,
        "winding",
        {
            "sweep": {
                "base": {"L": 4},
                "axes": [{"name": "V1", "min": 0.0, "max": 1.0, "count": 2}],
                "observables": ["f_im"],
                "random_phi": False,
            },
            "det_trajectory": True,
            "trajectory_points": 16,
        },
    )
    out = tmp_path / "winding"
    result = runner.invoke(app, ["winding", "-c", str(config), "-o", str(out)])
    assert result.exit_code == 1

    manifest = _manifest(out)
    assert not manifest["success"]
    assert "grid points [0]" in manifest["error_message"]
    assert "det_trajectory_000001.csv" in manifest["outputs"]
    assert "det_trajectory_000000.csv" not in manifest["outputs"]
    assert manifest["details"]["trajectory_skipped"] == [0]


def test_levelstats(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path,
        "levelstats",
        {
            "params": {"L": 8, "N": 4, "g": 0.5, "V1": 1.0, "V2": 0.5, "U": 2.0},
            "n_phi_samples": 2,
            "references": ["poisson_real", "ginibre_complex"],
        },
    )
    out = tmp_path / "levelstats"
    _invoke("levelstats", "-c", str(config), "-o", str(out), "--seed", "3")
    manifest = _manifest(out)
    assert manifest["config"]["master_seed"] == 3
    assert manifest["details"]["n_spacings"] == 140
    assert set(manifest["details"]["ks_distance"]) == {"poisson_real", "ginibre_complex"}
    header = _read_csv(out / "levelstats.csv")[0]
    assert {"bin_center", "empirical_pdf", "poisson_real_pdf", "ginibre_complex_pdf"} <= set(header)
    assert len(_read_csv(out / "spacings.csv")) == 140


def test_levelstats_fails_without_requested_reference(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    def no_fit(histogram):
        raise FitConvergenceError("sub-Wigner fit diverged", residual=1.0)

    monkeypatch.setattr("src.cli.services.fit_sub_wigner", no_fit)
    config = _write_config(
        tmp_path,
        "levelstats",
        {
            "params": {"L": 8, "N": 4, "g": 0.5, "V1": 1.0, "V2": 0.5, "U": 2.0},
            "n_phi_samples": 2,
            "references": ["poisson_real", "sub_wigner"],
        },
    )
    out = tmp_path / "levelstats"
    result = runner.invoke(app, ["levelstats", "-c", str(config), "-o", str(out)])
    assert result.exit_code == 1

    manifest = _manifest(out)
    assert not manifest["success"]
    assert "sub_wigner" in manifest["error_message"]
    assert manifest["outputs"] == ["levelstats.csv", "spacings.csv"]
    assert set(manifest["details"]["ks_distance"]) == {"poisson_real"}


def test_mbl(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path,
        "mbl",
        {
            "sweep": {
                "base": {"L": 6, "N": 3, "g": 0.5, "V2": 0.5, "U": 2.0},
                "axes": [{"name": "V1", "min": 1.0, "max": 12.0, "count": 5}],
                "observables": ["ee", "f_im"],
                "n_phi_samples": 2,
            },
            "sizes": [6, 8],
            "size_mean": True,
            "transitions": [{"observable": "ee", "criterion": "size_crossing"}],
        },
    )
    out = tmp_path / "mbl"
    _invoke("mbl", "-c", str(config), "-o", str(out))
    assert _manifest(out)["outputs"] == [
        "curves_L006.csv",
        "curves_L008.csv",
        "curves_mean.csv",
        "transitions.json",
    ]
    curve = _read_csv(out / "curves_L008.csv")
    assert len(curve) == 5
    assert all(float(row["ee"]) >= 0.0 for row in curve)
    transitions = json.loads((out / "transitions.json").read_text(encoding="utf-8"))
    assert list(transitions["ee:size_crossing"]) == ["6-8"]
    mean = _read_csv(out / "curves_mean.csv")
    small = _read_csv(out / "curves_L006.csv")
    assert float(mean[2]["ee"]) == pytest.approx(0.5 * (float(small[2]["ee"]) + float(curve[2]["ee"])))


def test_finite_size(tmp_path: Path) -> None:
    config = _write_config(
        tmp_path,
        "finite",
        {
            "sweep": {
                "base": {"L": 21},
                "axes": [{"name": "V1", "min": 0.0, "max": 4.0, "count": 9}],
                "observables": ["fd"],
                "random_phi": False,
            },
            "sizes": [21, 34],
            "transitions": [{"observable": "fd"}],
        },
    )
    out = tmp_path / "finite"
    _invoke("finite-size", "-c", str(config), "-o", str(out))
    rows = _read_csv(out / "transitions.csv")
    assert [row["L"] for row in rows] == ["21", "34"]
    assert all(1.0 < float(row["fd:half_crossing"]) < 3.0 for row in rows)


def test_history(tmp_path: Path) -> None:
    config = _write_config(tmp_path, "spectrum", {"params": {"L": 8}})
    _invoke("spectrum", "-c", str(config), "-o", str(tmp_path / "out"))
    result = _invoke("history")
    assert "spectrum" in result.output
    assert "1 runs in ledger, 100.0% successful" in result.output
