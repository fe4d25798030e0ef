"""Pytest fixtures for the Casimir precision toolkit tests."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np
import pytest

from casimir.const import DATA_GOLD_OPTICAL, DATA_ROUGHNESS_TABLE
from casimir.optics import (
    DrudeModel,
    DrudeParams,
    OpticalSample,
    OpticalTable,
    PlasmaModel,
    drude_eps_real_axis_imaginary,
)
from casimir.readers import read_histogram, read_optical_table, shipped_data
from casimir.roughness import RoughnessHistogram


@pytest.fixture
def shipped_histogram() -> RoughnessHistogram:
    """Return the roughness histogram shipped with the package."""
    return read_histogram(shipped_data(DATA_ROUGHNESS_TABLE))


@pytest.fixture
def gold_table() -> OpticalTable:
    """Return the shipped gold optical table."""
    return read_optical_table(shipped_data(DATA_GOLD_OPTICAL))


@pytest.fixture
def drude_table() -> OpticalTable:
    """Return a table sampled from the Drude model over four decades."""
    params = DrudeParams()
    omega = np.geomspace(1e14, 1e18, 240)
    samples = tuple(
        OpticalSample(omega=float(w), eps_im=drude_eps_real_axis_imaginary(w, params))
        for w in omega
    )
    return OpticalTable(samples=samples, low_freq_extension=params)


@pytest.fixture
def drude_model() -> DrudeModel:
    """Return the Drude model with gold parameters."""
    return DrudeModel()


@pytest.fixture
def plasma_model() -> PlasmaModel:
    """Return the plasma model with the gold plasma frequency."""
    return PlasmaModel()


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str], Path]:
    """Return a helper that writes configuration text into tmp_path."""

    def _write(text: str, name: str = "run.ini") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def write_scans(tmp_path: Path) -> Callable[..., Path]:
    """Return a helper that writes a scan file from a grid and scan columns."""

    def _write(
        separations: Sequence[float],
        scans: Sequence[Sequence[float]],
        name: str = "scans.csv",
    ) -> Path:
        header = ["z_nm"] + [f"scan_{i}" for i in range(1, len(scans) + 1)]
        lines = ["# synthetic force scans, pN", ", ".join(header)]
        for index, z in enumerate(separations):
            values = [f"{z:g}"] + [repr(float(scan[index])) for scan in scans]
            lines.append(", ".join(values))
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
