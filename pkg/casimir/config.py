"""Run configuration for the Casimir precision toolkit.

A run configuration is INI-style text: ``[section]`` headers, ``key = value``
lines and comma-separated lists. Each section is validated by its own
voluptuous schema; lengths are given in the units of the key name (um, mm,
nm) and converted to SI by the ``RunConfig`` properties.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
import configparser
from dataclasses import dataclass, field
import logging
from pathlib import Path
from typing import Any

import voluptuous as vol

from .const import (
    BUDGET_KEYS,
    CONF_C1,
    CONF_C2,
    CONF_CONFIDENCE,
    CONF_CORRELATION_LENGTH_NM,
    CONF_COVERAGE_TRIALS,
    CONF_DEFICIT_DELTA,
    CONF_DELTA_Z_NM,
    CONF_DIFFRACTION,
    CONF_DIFFRACTION_LOOKUP,
    CONF_DIRECTORY,
    CONF_EXCLUDE,
    CONF_FINITE_SIZE,
    CONF_GAMMA,
    CONF_GRAIN_MAX_NM,
    CONF_GRAIN_MIN_NM,
    CONF_GRAIN_VARIATION,
    CONF_KIND,
    CONF_OMEGA_P,
    CONF_OPTICAL_TABLE,
    CONF_PATCH,
    CONF_PFT,
    CONF_PLATE_RADIUS_MM,
    CONF_PROFILE,
    CONF_RADIUS_ERROR_UM,
    CONF_RADIUS_UM,
    CONF_REGIONS_NM,
    CONF_REPORT_SEPARATIONS_NM,
    CONF_ROUGHNESS_PLATE,
    CONF_ROUGHNESS_SPHERE,
    CONF_S_MEAN_OVERRIDE_PN,
    CONF_SCANS,
    CONF_SEED,
    CONF_SIGN,
    CONF_SYSTEMATIC_PN,
    CONF_TEMPERATURE_K,
    CONF_WORK_FUNCTIONS_V,
    CONF_Z0_HALFWIDTH_NM,
    CONF_Z0_NM,
    CONF_Z0_STEP_NM,
    DATA_DIFFRACTION,
    DATA_GOLD_OPTICAL,
    DATA_ROUGHNESS_TABLE,
    DEFAULT_BETA,
    DEFAULT_COVERAGE_TRIALS,
    DEFAULT_DELTA_Z,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_REFLECTANCE_DEFICIT_DELTA,
    DEFAULT_REGION_BOUNDS,
    DEFAULT_SEED,
    DEFAULT_WORK_FUNCTIONS,
    DEFAULT_Z0_HALFWIDTH,
    DEFAULT_Z0_STEP,
    GOLD_C1,
    GOLD_C2,
    GOLD_GAMMA,
    GOLD_OMEGA_P,
    MM,
    NM,
    SECTION_ANALYSIS,
    SECTION_ERRORS,
    SECTION_FILES,
    SECTION_GEOMETRY,
    SECTION_MODEL,
    SECTION_OUTPUT,
    SECTION_PATCH,
    SECTION_ROUGHNESS,
    UM,
    ModelKind,
    SignConvention,
)
from .exceptions import ConfigError
from .readers import shipped_data

_LOGGER = logging.getLogger(__name__)

# Model kinds a run may select; the ideal metal only serves as reference
RUN_MODEL_KINDS = [
    ModelKind.DRUDE,
    ModelKind.PLASMA,
    ModelKind.INFRARED,
    ModelKind.TABULATED,
]

# Budget override keys map one to one onto budget labels
_BUDGET_OVERRIDE_KEYS = [
    CONF_GRAIN_VARIATION,
    CONF_PFT,
    CONF_DIFFRACTION,
    CONF_PATCH,
    CONF_FINITE_SIZE,
]

_REGION_FULL_TOKEN = "full"


def _split(value: Any) -> list[Any]:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    if isinstance(value, Iterable):
        return list(value)
    return [value]


def _float_list(value: Any) -> tuple[float, ...]:
    """Coerce a comma-separated string or a sequence into floats."""
    try:
        return tuple(float(v) for v in _split(value))
    except (TypeError, ValueError) as err:
        raise vol.Invalid(f"expected a list of numbers, got {value!r}") from err


def _int_list(value: Any) -> tuple[int, ...]:
    """Coerce a comma-separated string or a sequence into integers."""
    try:
        return tuple(int(v) for v in _split(value))
    except (TypeError, ValueError) as err:
        raise vol.Invalid(f"expected a list of integers, got {value!r}") from err


def _non_negative_list(value: Any) -> tuple[float, ...]:
    """Coerce a list of non-negative numbers."""
    values = _float_list(value)
    if any(v < 0 for v in values):
        raise vol.Invalid(f"values must be non-negative, got {value!r}")
    return values


def _positive_list(value: Any) -> tuple[float, ...]:
    """Coerce a list of positive numbers."""
    values = _float_list(value)
    if any(v <= 0 for v in values):
        raise vol.Invalid(f"values must be positive, got {value!r}")
    return values


def _region_list(value: Any) -> tuple[float | None, ...]:
    """Coerce region upper bounds; ``full`` stands for the whole grid."""
    bounds: list[float | None] = []
    for item in _split(value):
        if item is None or str(item).lower() == _REGION_FULL_TOKEN:
            bounds.append(None)
            continue
        try:
            bounds.append(float(item))
        except (TypeError, ValueError) as err:
            raise vol.Invalid(f"invalid region bound {item!r}") from err
    if not bounds:
        raise vol.Invalid("at least one region is required")
    return tuple(bounds)


_POSITIVE = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))
_NON_NEGATIVE = vol.All(vol.Coerce(float), vol.Range(min=0))
_FRACTION = vol.All(vol.Coerce(float), vol.Range(min=0, max=1))
_CONFIDENCE = vol.All(
    vol.Coerce(float),
    vol.Range(min=0, max=1, min_included=False, max_included=False),
)

GEOMETRY_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_RADIUS_UM, default=95.65): _POSITIVE,
        vol.Optional(CONF_RADIUS_ERROR_UM, default=0.15): _NON_NEGATIVE,
        vol.Optional(CONF_PLATE_RADIUS_MM, default=5.0): _POSITIVE,
        vol.Optional(CONF_Z0_NM, default=0.0): vol.Coerce(float),
        vol.Optional(CONF_Z0_HALFWIDTH_NM, default=DEFAULT_Z0_HALFWIDTH): _POSITIVE,
        vol.Optional(CONF_Z0_STEP_NM, default=DEFAULT_Z0_STEP): _POSITIVE,
        vol.Optional(CONF_DELTA_Z_NM, default=DEFAULT_DELTA_Z): _NON_NEGATIVE,
    }
)

MODEL_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_KIND, default=ModelKind.TABULATED.value): vol.All(
            vol.Lower, vol.In([kind.value for kind in RUN_MODEL_KINDS])
        ),
        vol.Optional(CONF_OMEGA_P, default=GOLD_OMEGA_P): _POSITIVE,
        vol.Optional(CONF_GAMMA, default=GOLD_GAMMA): _NON_NEGATIVE,
        vol.Optional(CONF_C1, default=GOLD_C1): _NON_NEGATIVE,
        vol.Optional(CONF_C2, default=GOLD_C2): _NON_NEGATIVE,
        vol.Optional(
            CONF_DEFICIT_DELTA, default=DEFAULT_REFLECTANCE_DEFICIT_DELTA
        ): _NON_NEGATIVE,
        vol.Optional(CONF_TEMPERATURE_K, default=0.0): _NON_NEGATIVE,
    }
)

FILES_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_OPTICAL_TABLE): str,
        vol.Optional(CONF_ROUGHNESS_PLATE): str,
        vol.Optional(CONF_ROUGHNESS_SPHERE): str,
        vol.Optional(CONF_PROFILE): str,
        vol.Optional(CONF_SCANS): str,
        vol.Optional(CONF_DIFFRACTION_LOOKUP): str,
    }
)

ERRORS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_SYSTEMATIC_PN, default=()): _non_negative_list,
        vol.Optional(CONF_CONFIDENCE, default=DEFAULT_BETA): _CONFIDENCE,
        **{vol.Optional(key): _FRACTION for key in _BUDGET_OVERRIDE_KEYS},
    }
)

ANALYSIS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_EXCLUDE, default=()): _int_list,
        vol.Optional(CONF_S_MEAN_OVERRIDE_PN): _NON_NEGATIVE,
        vol.Optional(CONF_REPORT_SEPARATIONS_NM, default=()): _positive_list,
        vol.Optional(CONF_REGIONS_NM, default=DEFAULT_REGION_BOUNDS): _region_list,
        vol.Optional(CONF_SIGN, default=SignConvention.MAGNITUDE.value): vol.All(
            vol.Lower, vol.In([sign.value for sign in SignConvention])
        ),
        vol.Optional(CONF_COVERAGE_TRIALS, default=DEFAULT_COVERAGE_TRIALS): vol.All(
            vol.Coerce(int), vol.Range(min=0)
        ),
        vol.Optional(CONF_SEED, default=DEFAULT_SEED): vol.Coerce(int),
    }
)

PATCH_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_WORK_FUNCTIONS_V, default=DEFAULT_WORK_FUNCTIONS): vol.All(
            _float_list, vol.Length(min=2)
        ),
        vol.Optional(CONF_GRAIN_MIN_NM, default=68.0): _POSITIVE,
        vol.Optional(CONF_GRAIN_MAX_NM, default=121.0): _POSITIVE,
    }
)

ROUGHNESS_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_CORRELATION_LENGTH_NM, default=200.0): _POSITIVE,
    }
)

OUTPUT_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_DIRECTORY, default=DEFAULT_OUTPUT_DIR): str,
    }
)

SECTION_SCHEMAS: dict[str, vol.Schema] = {
    SECTION_GEOMETRY: GEOMETRY_SCHEMA,
    SECTION_MODEL: MODEL_SCHEMA,
    SECTION_FILES: FILES_SCHEMA,
    SECTION_ERRORS: ERRORS_SCHEMA,
    SECTION_ANALYSIS: ANALYSIS_SCHEMA,
    SECTION_PATCH: PATCH_SCHEMA,
    SECTION_ROUGHNESS: ROUGHNESS_SCHEMA,
    SECTION_OUTPUT: OUTPUT_SCHEMA,
}


def _validate_section(section: str, raw: Mapping[str, Any]) -> dict[str, Any]:
    """Run one section through its schema, dropping empty values first."""
    values = {k: v for k, v in raw.items() if not (isinstance(v, str) and not v)}
    try:
        return dict(SECTION_SCHEMAS[section](values))
    except vol.Invalid as err:
        raise ConfigError(f"[{section}] {err}") from err


def _resolve_files(files: dict[str, Any], base_dir: Path) -> dict[str, Path]:
    """Resolve file paths against base_dir and check that each one exists."""
    resolved: dict[str, Path] = {}
    for key, value in files.items():
        path = Path(value).expanduser()
        if not path.is_absolute():
            path = base_dir / path
        if not path.is_file():
            raise ConfigError(f"[{SECTION_FILES}] {key}: file not found: {path}")
        resolved[key] = path
    return resolved


def _check_consistency(data: Mapping[str, Mapping[str, Any]]) -> None:
    geometry = data[SECTION_GEOMETRY]
    if geometry[CONF_Z0_STEP_NM] > geometry[CONF_Z0_HALFWIDTH_NM]:
        raise ConfigError(
            f"[{SECTION_GEOMETRY}] {CONF_Z0_STEP_NM} exceeds {CONF_Z0_HALFWIDTH_NM}"
        )
    if geometry[CONF_PLATE_RADIUS_MM] * MM <= geometry[CONF_RADIUS_UM] * UM:
        raise ConfigError(
            f"[{SECTION_GEOMETRY}] plate radius must exceed the sphere radius"
        )
    patch = data[SECTION_PATCH]
    if patch[CONF_GRAIN_MIN_NM] >= patch[CONF_GRAIN_MAX_NM]:
        raise ConfigError(
            f"[{SECTION_PATCH}] {CONF_GRAIN_MIN_NM} must be below {CONF_GRAIN_MAX_NM}"
        )


def validate_sections(
    raw: Mapping[str, Mapping[str, Any]], base_dir: Path
) -> dict[str, dict[str, Any]]:
    """Validate raw sections and return the complete, typed configuration."""
    unknown = set(raw) - set(SECTION_SCHEMAS)
    if unknown:
        raise ConfigError(f"unknown config sections: {', '.join(sorted(unknown))}")
    data = {
        section: _validate_section(section, raw.get(section, {}))
        for section in SECTION_SCHEMAS
    }
    data[SECTION_FILES] = _resolve_files(data[SECTION_FILES], base_dir)
    _check_consistency(data)
    return data


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration.

    ``data`` holds the validated sections as read; the properties return
    SI values with the shipped datasets filled in for missing files.
    """

    data: dict[str, dict[str, Any]]
    base_dir: Path = field(default_factory=Path.cwd)
    source: Path | None = None

    def _get_option(self, section: str, key: str, default: Any = None) -> Any:
        """Get a validated option, falling back to default."""
        return self.data.get(section, {}).get(key, default)

    # Geometry

    @property
    def radius(self) -> float:
        """Return the sphere radius in m."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_RADIUS_UM)) * UM

    @property
    def radius_error(self) -> float:
        """Return the sphere radius uncertainty in m."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_RADIUS_ERROR_UM)) * UM

    @property
    def plate_radius(self) -> float:
        """Return the plate radius in m."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_PLATE_RADIUS_MM)) * MM

    @property
    def z0_nm(self) -> float:
        """Return the nominal separation offset in nm."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_Z0_NM))

    @property
    def z0_halfwidth_nm(self) -> float:
        """Return the halfwidth of the z0 search in nm."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_Z0_HALFWIDTH_NM))

    @property
    def z0_step_nm(self) -> float:
        """Return the step of the z0 search in nm."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_Z0_STEP_NM))

    @property
    def delta_z_nm(self) -> float:
        """Return the separation uncertainty in nm."""
        return float(self._get_option(SECTION_GEOMETRY, CONF_DELTA_Z_NM))

    # Model

    @property
    def model_kind(self) -> ModelKind:
        """Return the selected permittivity model."""
        return ModelKind(self._get_option(SECTION_MODEL, CONF_KIND))

    @property
    def omega_p(self) -> float:
        """Return the plasma frequency in rad/s."""
        return float(self._get_option(SECTION_MODEL, CONF_OMEGA_P))

    @property
    def gamma(self) -> float:
        """Return the Drude relaxation parameter in rad/s."""
        return float(self._get_option(SECTION_MODEL, CONF_GAMMA))

    @property
    def c1(self) -> float:
        """Return the infrared-optics coefficient c1."""
        return float(self._get_option(SECTION_MODEL, CONF_C1))

    @property
    def c2(self) -> float:
        """Return the infrared-optics coefficient c2."""
        return float(self._get_option(SECTION_MODEL, CONF_C2))

    @property
    def reflectance_deficit_delta(self) -> float:
        """Return the extra reflectance deficit from small grains."""
        return float(self._get_option(SECTION_MODEL, CONF_DEFICIT_DELTA))

    @property
    def temperature(self) -> float:
        """Return the temperature in K; 0 selects the zero-temperature formula."""
        return float(self._get_option(SECTION_MODEL, CONF_TEMPERATURE_K))

    # Files

    def file(self, key: str) -> Path | None:
        """Return the configured path for a file key, if any."""
        path = self._get_option(SECTION_FILES, key)
        return Path(path) if path is not None else None

    @property
    def optical_table_path(self) -> Path:
        """Return the optical table, defaulting to the shipped gold data."""
        return self.file(CONF_OPTICAL_TABLE) or shipped_data(DATA_GOLD_OPTICAL)

    @property
    def roughness_plate_path(self) -> Path:
        """Return the plate histogram, defaulting to the shipped histogram."""
        return self.file(CONF_ROUGHNESS_PLATE) or shipped_data(DATA_ROUGHNESS_TABLE)

    @property
    def roughness_sphere_path(self) -> Path:
        """Return the sphere histogram; the plate histogram when not given."""
        return self.file(CONF_ROUGHNESS_SPHERE) or self.roughness_plate_path

    @property
    def diffraction_lookup_path(self) -> Path:
        """Return the diffraction lookup, defaulting to the shipped anchors."""
        return self.file(CONF_DIFFRACTION_LOOKUP) or shipped_data(DATA_DIFFRACTION)

    @property
    def scans_path(self) -> Path | None:
        """Return the scan file, if configured."""
        return self.file(CONF_SCANS)

    @property
    def profile_path(self) -> Path | None:
        """Return the height profile file, if configured."""
        return self.file(CONF_PROFILE)

    # Errors

    @property
    def systematic_pn(self) -> tuple[float, ...]:
        """Return the systematic error components in pN."""
        return tuple(self._get_option(SECTION_ERRORS, CONF_SYSTEMATIC_PN, ()))

    @property
    def beta(self) -> float:
        """Return the confidence level."""
        return float(self._get_option(SECTION_ERRORS, CONF_CONFIDENCE))

    @property
    def budget_overrides(self) -> dict[str, float]:
        """Return fixed budget contributions keyed by budget label."""
        errors = self.data.get(SECTION_ERRORS, {})
        return {
            label: float(errors[key])
            for key, label in zip(_BUDGET_OVERRIDE_KEYS, BUDGET_KEYS, strict=True)
            if key in errors
        }

    # Analysis

    @property
    def exclude(self) -> tuple[int, ...]:
        """Return the scan ids excluded from the analysis."""
        return tuple(self._get_option(SECTION_ANALYSIS, CONF_EXCLUDE, ()))

    @property
    def s_mean_override_pn(self) -> float | None:
        """Return a fixed standard deviation of the mean, if configured."""
        value = self._get_option(SECTION_ANALYSIS, CONF_S_MEAN_OVERRIDE_PN)
        return float(value) if value is not None else None

    @property
    def report_separations_nm(self) -> tuple[float, ...]:
        """Return the separations at which relative errors are reported."""
        return tuple(self._get_option(SECTION_ANALYSIS, CONF_REPORT_SEPARATIONS_NM, ()))

    @property
    def regions(self) -> tuple[float | None, ...]:
        """Return the upper bounds of the RMS regions; None is the full grid."""
        return tuple(self._get_option(SECTION_ANALYSIS, CONF_REGIONS_NM))

    @property
    def sign(self) -> SignConvention:
        """Return the sign convention of the scan files."""
        return SignConvention(self._get_option(SECTION_ANALYSIS, CONF_SIGN))

    @property
    def coverage_trials(self) -> int:
        """Return the number of coverage trials; 0 skips the check."""
        return int(self._get_option(SECTION_ANALYSIS, CONF_COVERAGE_TRIALS))

    @property
    def seed(self) -> int:
        """Return the seed of the coverage check."""
        return int(self._get_option(SECTION_ANALYSIS, CONF_SEED))

    # Patch and roughness

    @property
    def work_functions(self) -> tuple[float, ...]:
        """Return the work functions of the exposed crystal planes in V."""
        return tuple(self._get_option(SECTION_PATCH, CONF_WORK_FUNCTIONS_V))

    @property
    def grain_min(self) -> float:
        """Return the smallest grain size in m."""
        return float(self._get_option(SECTION_PATCH, CONF_GRAIN_MIN_NM)) * NM

    @property
    def grain_max(self) -> float:
        """Return the largest grain size in m."""
        return float(self._get_option(SECTION_PATCH, CONF_GRAIN_MAX_NM)) * NM

    @property
    def correlation_length(self) -> float:
        """Return the roughness correlation length in m."""
        return (
            float(self._get_option(SECTION_ROUGHNESS, CONF_CORRELATION_LENGTH_NM))
            * NM
        )

    @property
    def output_dir(self) -> Path:
        """Return the output directory."""
        return Path(self._get_option(SECTION_OUTPUT, CONF_DIRECTORY))

    def with_overrides(
        self,
        *,
        beta: float | None = None,
        out: Path | str | None = None,
        model: ModelKind | str | None = None,
        temperature: float | None = None,
    ) -> RunConfig:
        """Return a copy with command-line overrides applied and re-validated."""
        raw: dict[str, dict[str, Any]] = {
            section: dict(values) for section, values in self.data.items()
        }
        raw[SECTION_FILES] = {k: str(v) for k, v in raw[SECTION_FILES].items()}
        if beta is not None:
            raw[SECTION_ERRORS][CONF_CONFIDENCE] = beta
        if out is not None:
            raw[SECTION_OUTPUT][CONF_DIRECTORY] = str(out)
        if model is not None:
            raw[SECTION_MODEL][CONF_KIND] = str(model)
        if temperature is not None:
            raw[SECTION_MODEL][CONF_TEMPERATURE_K] = temperature
        return RunConfig(
            data=validate_sections(raw, self.base_dir),
            base_dir=self.base_dir,
            source=self.source,
        )


def parse_config(
    text: str, base_dir: Path | None = None, source: Path | None = None
) -> RunConfig:
    """Parse configuration text; relative file paths resolve against base_dir."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(source) if source else "<config>")
    except configparser.Error as err:
        raise ConfigError(f"cannot parse configuration: {err}") from err
    raw = {section: dict(parser[section]) for section in parser.sections()}
    directory = base_dir if base_dir is not None else Path.cwd()
    return RunConfig(
        data=validate_sections(raw, directory), base_dir=directory, source=source
    )


def load_config(path: Path | str) -> RunConfig:
    """Load a configuration file.

    Raises:
        ConfigError: if the file cannot be read or fails validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err.strerror}") from err
    config = parse_config(text, base_dir=path.parent.resolve(), source=path)
    _LOGGER.debug("Loaded configuration from %s", path)
    return config


def default_config(base_dir: Path | None = None) -> RunConfig:
    """Return the configuration with every default applied."""
    return parse_config("", base_dir=base_dir)
