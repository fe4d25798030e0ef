"""Tests for the run configuration."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import pytest

from casimir.config import default_config, load_config, parse_config
from casimir.const import (
    BUDGET_DIFFRACTION,
    BUDGET_GRAIN,
    DATA_GOLD_OPTICAL,
    DATA_ROUGHNESS_TABLE,
    DEFAULT_REGION_BOUNDS,
    ModelKind,
    SignConvention,
)
from casimir.exceptions import ConfigError
from casimir.readers import shipped_data


def test_defaults() -> None:
    """Test every option has a default in SI units."""
    config = default_config()
    assert config.radius == pytest.approx(95.65e-6)
    assert config.radius_error == pytest.approx(0.15e-6)
    assert config.plate_radius == pytest.approx(5e-3)
    assert config.model_kind is ModelKind.TABULATED
    assert config.temperature == 0.0
    assert config.beta == 0.95
    assert config.systematic_pn == ()
    assert config.regions == DEFAULT_REGION_BOUNDS
    assert config.sign is SignConvention.MAGNITUDE
    assert config.grain_min == pytest.approx(68e-9)
    assert config.correlation_length == pytest.approx(200e-9)
    assert config.budget_overrides == {}
    assert config.scans_path is None
    assert config.optical_table_path == shipped_data(DATA_GOLD_OPTICAL)
    assert config.roughness_plate_path == shipped_data(DATA_ROUGHNESS_TABLE)
    assert config.roughness_sphere_path == config.roughness_plate_path
    assert config.output_dir == Path("results")


def test_reference_run_loads() -> None:
    """Test the shipped reference configuration."""
    config = load_config(shipped_data("reference_run.ini"))
    assert config.systematic_pn == (1.7, 0.55, 0.31, 0.12)
    assert config.regions == (None, 210.0, 136.0)
    assert config.work_functions == (5.47, 5.37, 5.31)
    assert config.optical_table_path == shipped_data(DATA_GOLD_OPTICAL).resolve()
    assert config.source == shipped_data("reference_run.ini")


def test_lists_and_overrides(write_config: Callable[[str], Path]) -> None:
    """Test list parsing and budget overrides."""
    path = write_config(
        """
[errors]
systematic_pn = 1.0, 2.5
grain_variation = 0.005
diffraction = 0.00026

[analysis]
exclude = 3, 7
report_separations_nm = 62, 70
regions_nm = FULL, 150
sign = Signed
coverage_trials = 0
"""
    )
    config = load_config(path)
    assert config.systematic_pn == (1.0, 2.5)
    assert config.budget_overrides == {BUDGET_GRAIN: 0.005, BUDGET_DIFFRACTION: 0.00026}
    assert config.exclude == (3, 7)
    assert config.report_separations_nm == (62.0, 70.0)
    assert config.regions == (None, 150.0)
    assert config.sign is SignConvention.SIGNED
    assert config.coverage_trials == 0


def test_relative_files_resolve_against_config(
    tmp_path: Path, write_config: Callable[[str], Path]
) -> None:
    """Test file paths are relative to the configuration's directory."""
    (tmp_path / "scans.csv").write_text("z_nm, s1\n100, 1\n", encoding="utf-8")
    config = load_config(write_config("[files]\nscans = scans.csv\n"))
    assert config.scans_path == tmp_path.resolve() / "scans.csv"


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("[nonsense]\nkey = 1\n", "unknown config sections"),
        ("[errors]\nconfidence = 1.5\n", r"\[errors\]"),
        ("[errors]\nconfidence = 1\n", r"\[errors\]"),
        ("[errors]\nsystematic_pn = 1, -2\n", "non-negative"),
        ("[model]\nkind = ideal\n", r"\[model\]"),
        ("[geometry]\nradius_um = -1\n", r"\[geometry\]"),
        ("[geometry]\nunknown_key = 1\n", r"\[geometry\]"),
        ("[geometry]\nz0_step_nm = 2\n", "exceeds"),
        ("[geometry]\nplate_radius_mm = 0.01\n", "plate radius"),
        ("[patch]\ngrain_min_nm = 200\n", "grain_min_nm"),
        ("[patch]\nwork_functions_v = 5.3\n", r"\[patch\]"),
        ("[analysis]\nregions_nm = 210, abc\n", "region"),
        ("[files]\nscans = missing.csv\n", "file not found"),
        ("not an ini file", "cannot parse"),
    ],
)
def test_invalid_configurations(
    write_config: Callable[[str], Path], text: str, message: str
) -> None:
    """Test invalid configurations raise ConfigError."""
    with pytest.raises(ConfigError, match=message):
        load_config(write_config(text))


def test_missing_config_file(tmp_path: Path) -> None:
    """Test a missing configuration file."""
    with pytest.raises(ConfigError, match="cannot read config file"):
        load_config(tmp_path / "absent.ini")


def test_with_overrides(tmp_path: Path) -> None:
    """Test command-line overrides are applied and validated."""
    config = parse_config("[errors]\nsystematic_pn = 1.7\n", base_dir=tmp_path)
    updated = config.with_overrides(
        beta=0.6, out=tmp_path / "out", model="drude", temperature=300.0
    )
    assert updated.beta == 0.6
    assert updated.output_dir == tmp_path / "out"
    assert updated.model_kind is ModelKind.DRUDE
    assert updated.temperature == 300.0
    assert updated.systematic_pn == (1.7,)
    assert config.beta == 0.95

    with pytest.raises(ConfigError):
        config.with_overrides(beta=2.0)
    with pytest.raises(ConfigError):
        config.with_overrides(temperature=-1.0)
