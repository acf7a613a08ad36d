"""Desk-scale reproductions of the published transitions.

These take minutes to hours; run them with `pytest --runslow -m slow`.
"""

from pathlib import Path

import numpy as np
import pytest

from src.observables import (
    ReferenceDistribution,
    ReferenceKind,
    distribution_distance,
    pool_spacings,
    spacing_sample,
)
from src.sweep import (
    ResultTable,
    SweepService,
    SweepSpec,
    boundary_v1c,
    detect_transition,
    get_sweep_service,
    scaling_collapse,
)

pytestmark = pytest.mark.slow

STEP = 0.05


@pytest.fixture
def service(cache_dir: Path) -> SweepService:
    return get_sweep_service(cache_dir)


def _v1_scan(base: dict, v1_min: float, v1_max: float, observables: list[str], **extra) -> SweepSpec:
    count = int(round((v1_max - v1_min) / STEP)) + 1
    return SweepSpec.model_validate(
        {
            "base": base,
            "axes": [{"name": "V1", "min": v1_min, "max": v1_max, "count": count}],
            "observables": observables,
            "random_phi": False,
            **extra,
        }
    )


def _abs_curve(table: ResultTable, observable: str) -> tuple[np.ndarray, np.ndarray]:
    x, y = table.curve(observable)
    return x, np.abs(y)


def _per_length(table: ResultTable, observable: str) -> tuple[np.ndarray, np.ndarray]:
    x, y = table.curve(observable)
    return x, y / table.spec.base.L


def _pooled_by_point(table: ResultTable) -> list:
    return [
        pool_spacings(
            [
                spacing_sample(row.spacings)
                for row in table.rows
                if row.grid_index == point and row.spacings
            ]
        )
        for point in range(table.spec.n_points)
    ]


def test_nonreciprocal_triple_transition(service: SweepService) -> None:
    """Localization, real-complex and topological transitions coincide at 2e^g."""
    spec = _v1_scan({"L": 610, "g": 0.5}, 2.5, 4.0, ["fd", "f_im", "winding_g"])
    table = service.run_sweep(spec)
    expected = boundary_v1c(0.5, 0.0, 0.0)

    fd = detect_transition(table.curve("fd"))
    real = detect_transition(table.curve("f_im"), "vanishing", tolerance=0.5 / 610)
    topo = detect_transition(_abs_curve(table, "winding_g"), "vanishing", tolerance=0.5)
    for value in (fd, real, topo):
        assert value == pytest.approx(expected, abs=0.15)
    assert abs(real - topo) <= STEP + 1e-9
    assert abs(fd - real) <= STEP + 1e-9


def test_complex_phase_real_complex_comes_first(service: SweepService) -> None:
    spec = _v1_scan({"L": 610, "h": 0.5, "V2": 0.5}, 0.5, 2.0, ["epsilon", "fd", "winding_h"])
    table = service.run_sweep(spec)

    real_complex = detect_transition(table.curve("epsilon"), "onset", tolerance=1e-9)
    localization = detect_transition(table.curve("fd"))
    topological = detect_transition(_abs_curve(table, "winding_h"), "onset", tolerance=0.5)
    assert real_complex <= localization - 2 * STEP
    assert real_complex <= topological - 2 * STEP
    assert localization == pytest.approx(boundary_v1c(0.0, 0.5, 0.5), abs=0.15)


def test_coexistence_has_no_real_complex_transition(service: SweepService) -> None:
    spec = SweepSpec.model_validate(
        {
            "base": {"L": 233, "g": 0.5, "h": 0.5},
            "axes": [{"name": "V1", "min": 0.5, "max": 4.0, "count": 10}],
            "observables": ["f_im", "fd"],
            "random_phi": False,
        }
    )
    table = service.run_sweep(spec)
    _, fd = table.curve("fd")
    assert fd[0] > 0.7 and fd[-1] < 0.3
    _, f_im = table.curve("f_im")
    assert np.allclose(f_im, 1.0)


def test_hermitian_phase_boundary(service: SweepService) -> None:
    spec = SweepSpec.model_validate(
        {
            "base": {"L": 144},
            "axes": [
                {"name": "V2", "min": 0.0, "max": 2.0, "count": 15},
                {"name": "V1", "min": 0.0, "max": 6.0, "count": 15},
            ],
            "observables": ["fd"],
            "random_phi": False,
        }
    )
    table = service.run_sweep(spec)
    fd = table.heatmap("fd")
    v2_values = spec.axes[0].values()
    v1_values = spec.axes[1].values()
    cell = v1_values[1] - v1_values[0]
    for i, V2 in enumerate(v2_values):
        crossing = detect_transition((v1_values, fd[i]))
        assert crossing == pytest.approx(2.0 * max(1.0, V2), abs=cell)


def test_many_body_level_statistics(service: SweepService) -> None:
    spec = SweepSpec.model_validate(
        {
            "base": {"L": 12, "N": 6, "g": 0.5, "V2": 0.5, "U": 2.0},
            "axes": [{"name": "V1", "min": 1.3, "max": 10.0, "count": 2}],
            "observables": ["spacings"],
            "n_phi_samples": 20,
            "master_seed": 6,
        }
    )
    ergodic, localized = _pooled_by_point(service.run_sweep(spec))
    ginibre = ReferenceDistribution(kind=ReferenceKind.GINIBRE_COMPLEX)
    poisson = ReferenceDistribution(kind=ReferenceKind.POISSON_REAL)
    assert distribution_distance(ergodic, ginibre) < distribution_distance(ergodic, poisson)
    assert distribution_distance(localized, poisson) < distribution_distance(localized, ginibre)


def test_entanglement_crossing_and_collapse(service: SweepService) -> None:
    spec = SweepSpec.model_validate(
        {
            "base": {"L": 8, "N": 4, "g": 0.5, "V2": 0.5, "U": 2.0},
            "axes": [{"name": "V1", "min": 1.0, "max": 12.0, "count": 23}],
            "observables": ["ee", "f_im"],
            "fd_selection": "mid_sixth_real",
            "master_seed": 2024,
        }
    )
    series = service.run_size_series(spec, [8, 10, 12], half_filling=True, auto_samples=True)
    ee = {size: _per_length(table, "ee") for size, table in series.items()}

    for small, large in ((8, 10), (10, 12)):
        crossing = detect_transition(ee[small], "size_crossing", other=ee[large])
        assert 5.0 <= crossing <= 7.0

    ee_fit = scaling_collapse(ee, (3.0, 9.0), (0.5, 4.0))
    assert ee_fit.x_c == pytest.approx(6.0, abs=1.0)
    assert ee_fit.nu == pytest.approx(2.0, abs=1.0)

    f_im = {size: table.curve("f_im") for size, table in series.items()}
    f_im_fit = scaling_collapse(f_im, (3.0, 9.0), (0.5, 4.0))
    assert f_im_fit.x_c == pytest.approx(ee_fit.x_c, abs=0.5)


def test_many_body_topological_transition_is_shifted(service: SweepService) -> None:
    spec = SweepSpec.model_validate(
        {
            "base": {"L": 10, "N": 5, "g": 0.5, "V2": 0.5, "U": 2.0},
            "axes": [{"name": "V1", "min": 1.0, "max": 12.0, "count": 23}],
            "observables": ["ee", "winding_g"],
            "n_phi_samples": 20,
            "master_seed": 10,
        }
    )
    table = service.run_sweep(spec)
    topological = detect_transition(_abs_curve(table, "winding_g"))
    mbl = detect_transition(table.curve("ee"))
    assert 7.0 <= topological <= 9.0
    assert topological > mbl


def test_complex_phase_many_body_localization(service: SweepService) -> None:
    spec = SweepSpec.model_validate(
        {
            "base": {"L": 8, "N": 4, "h": 0.1, "V2": 0.5, "U": 2.0},
            "axes": [{"name": "V1", "min": 0.5, "max": 5.0, "count": 19}],
            "observables": ["ee", "spacings"],
            "master_seed": 88,
        }
    )
    series = service.run_size_series(spec, [8, 10, 12], half_filling=True, auto_samples=True)
    ee = {size: _per_length(table, "ee") for size, table in series.items()}
    fit = scaling_collapse(ee, (1.0, 4.0), (0.1, 2.0))
    assert fit.x_c == pytest.approx(2.2, abs=0.7)
    assert fit.nu == pytest.approx(0.45, abs=0.3)

    localized = _pooled_by_point(series[12])[-1]
    distances = {
        kind: distribution_distance(localized, ReferenceDistribution(kind=kind))
        for kind in (
            ReferenceKind.POISSON_REAL,
            ReferenceKind.POISSON_COMPLEX,
            ReferenceKind.GINIBRE_COMPLEX,
        )
    }
    assert min(distances, key=distances.get) == ReferenceKind.POISSON_COMPLEX
