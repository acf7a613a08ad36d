"""Plot-ready output files: CSV with '#' metadata lines, binary eigenvectors, JSON manifests."""

import csv
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src.observables import Histogram, ReferenceDistribution
from src.schemas import RunManifest
from src.spectral import Spectrum

logger = logging.getLogger(__name__)


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float | np.floating):
        return "nan" if np.isnan(value) else repr(float(value))
    return str(value)


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Mapping[str, Any] | None = None,
) -> Path:
    """Write a header row preceded by '# key: value' metadata lines."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        for key, value in (metadata or {}).items():
            handle.write(f"# {key}: {value}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(value) for value in row])
    logger.info(f"Wrote {path}")
    return path


def write_spectrum_csv(path: Path, spectrum: Spectrum, metadata: Mapping[str, Any]) -> Path:
    energies = spectrum.eigenvalues
    return write_csv(
        path,
        ["index", "re", "im"],
        ((n, float(e.real), float(e.imag)) for n, e in enumerate(energies)),
        {**metadata, "residual": spectrum.residual, "degraded": spectrum.degraded},
    )


def write_eigenvectors(path: Path, vectors: np.ndarray, param_hash: str) -> tuple[Path, Path]:
    """Little-endian complex128 blob, one eigenvector after another, plus a JSON header."""
    path.parent.mkdir(parents=True, exist_ok=True)
    blob = np.ascontiguousarray(vectors.T, dtype="<c16")
    path.write_bytes(blob.tobytes())
    header_path = path.with_suffix(".json")
    header = {
        "dtype": "<c16",
        "shape": list(blob.shape),
        "layout": "row n holds the amplitudes of eigenvector n",
        "param_hash": param_hash,
    }
    header_path.write_text(json.dumps(header, indent=2), encoding="utf-8")
    logger.info(f"Wrote {path} and {header_path}")
    return path, header_path


def write_histogram_csv(
    path: Path,
    histogram: Histogram,
    references: Mapping[str, ReferenceDistribution],
    metadata: Mapping[str, Any],
) -> Path:
    centers = histogram.centers
    columns = {name: ref.pdf(centers) for name, ref in references.items()}
    header = ["bin_center", "empirical_pdf", "count", *(f"{name}_pdf" for name in columns)]
    rows = (
        (
            float(center),
            histogram.density[i],
            histogram.counts[i],
            *(float(values[i]) for values in columns.values()),
        )
        for i, center in enumerate(centers)
    )
    return write_csv(path, header, rows, metadata)


def write_manifest(path: Path, manifest: RunManifest) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote manifest {path}")
    return path


def write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
