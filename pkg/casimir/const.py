"""Constants for the Casimir precision toolkit."""

from __future__ import annotations

from enum import StrEnum
from typing import Final

VERSION: Final = "0.1.0"

# Physical constants (SI)
HBAR: Final = 1.0545718e-34  # J*s
SPEED_OF_LIGHT: Final = 2.99792458e8  # m/s
BOLTZMANN: Final = 1.380649e-23  # J/K
EPSILON_0: Final = 8.8541878128e-12  # F/m

# Optical tables quote photon energies; 1 eV corresponds to 1.52e15 rad/s
EV_TO_RAD_S: Final = 1.52e15

# Unit conversions at the file boundary
NM: Final = 1e-9
UM: Final = 1e-6
MM: Final = 1e-3
PN: Final = 1e-12

# Gold defaults
GOLD_OMEGA_P: Final = 1.37e16  # rad/s
GOLD_GAMMA: Final = 5.32e13  # rad/s
GOLD_C1: Final = 0.0039
GOLD_C2: Final = 1.5

# Below this frequency the infrared representation hands over to the Drude
# extension (lower edge of the tabulated gold data, 0.125 eV)
INFRARED_CROSSOVER: Final = 1.9e14  # rad/s

# Infrared reflectance regime
INFRARED_REGIME_FRACTION: Final = 1.0 / 3.0
DEFAULT_REFLECTANCE_KAPPA: Final = 1.0
# Change in c1 per unit of absolute reflectance deficit
C1_PER_DEFICIT: Final = 0.25

# Experimental geometry
DEFAULT_SPHERE_RADIUS: Final = 95.65e-6  # m
MAX_Z_OVER_R: Final = 0.1

# Quadrature settings for the Lifshitz integrals
XI_SPAN_DECADES: Final = 4.0  # outer integral spans omega_c * 10**(+-4)
INNER_EPSREL: Final = 1e-11
INNER_EPSABS: Final = 1e-14
OUTER_EPSREL: Final = 1e-10
OUTER_EPSABS: Final = 0.0
QUAD_LIMIT: Final = 200
FORCE_TOLERANCE: Final = 1e-4
# A result is still accepted when QUADPACK flags roundoff but the error bound
# stays below this fraction of the estimate
QUAD_ACCEPT_RTOL: Final = 1e-6
# e**-700 underflows the inner integrand completely
EXPONENT_CUTOFF: Final = 700.0

# Matsubara summation
MATSUBARA_RTOL: Final = 1e-6
MATSUBARA_MAX_TERMS: Final = 2000
# Thermal corrections are differences of near-equal sums
THERMAL_SUM_RTOL: Final = 1e-12

# Dispersion relation over tabulated data
KK_PANEL_WIDTH: Final = 0.25  # in ln(omega)
KK_GAUSS_ORDER: Final = 8

# Roughness
HISTOGRAM_TOLERANCE: Final = 1e-6
HISTOGRAM_RENORMALIZE_TOLERANCE: Final = 1e-3
MIN_PROFILE_SAMPLES: Final = 16
PROFILE_SPACING_RTOL: Final = 1e-9
# Geometric spacing of the force grids interpolated for averaging and fits
THEORY_GRID_RATIO: Final = 1.04

# Patch potentials (work functions of Au planes in V)
DEFAULT_WORK_FUNCTIONS: Final = (5.47, 5.37, 5.31)
PATCH_EPSREL: Final = 1e-8

# Statistics
DEFAULT_BETA: Final = 0.95
DEFAULT_Z0_HALFWIDTH: Final = 1.0  # nm
DEFAULT_Z0_STEP: Final = 0.01  # nm
DEFAULT_DELTA_Z: Final = 0.15  # nm
EQUIVALENCE_FACTOR: Final = 1.1
DEFAULT_REGION_BOUNDS: Final = (None, 210.0, 136.0)  # upper z bounds, nm
DEFAULT_COVERAGE_TRIALS: Final = 10_000
DEFAULT_SEED: Final = 0
STUDENT_TOLERANCE: Final = 1e-4

# Grain variation of optical data
DEFAULT_REFLECTANCE_DEFICIT_DELTA: Final = 0.008

# Output
DEFAULT_OUTPUT_DIR: Final = "results"
FORCE_SIGNIFICANT_DIGITS: Final = 4
ETA_DECIMALS: Final = 4

# Shipped data files (inside casimir/data)
DATA_GOLD_OPTICAL: Final = "gold_optical.csv"
DATA_ROUGHNESS_TABLE: Final = "roughness_histogram.csv"
DATA_DIFFRACTION: Final = "diffraction_lookup.csv"

# Config sections
SECTION_GEOMETRY: Final = "geometry"
SECTION_MODEL: Final = "model"
SECTION_FILES: Final = "files"
SECTION_ERRORS: Final = "errors"
SECTION_ANALYSIS: Final = "analysis"
SECTION_PATCH: Final = "patch"
SECTION_ROUGHNESS: Final = "roughness"
SECTION_OUTPUT: Final = "output"

# Config keys - geometry
CONF_RADIUS_UM: Final = "radius_um"
CONF_RADIUS_ERROR_UM: Final = "radius_error_um"
CONF_PLATE_RADIUS_MM: Final = "plate_radius_mm"
CONF_Z0_NM: Final = "z0_nm"
CONF_Z0_HALFWIDTH_NM: Final = "z0_halfwidth_nm"
CONF_Z0_STEP_NM: Final = "z0_step_nm"
CONF_DELTA_Z_NM: Final = "delta_z_nm"

# Config keys - model
CONF_KIND: Final = "kind"
CONF_OMEGA_P: Final = "omega_p"
CONF_GAMMA: Final = "gamma"
CONF_C1: Final = "c1"
CONF_C2: Final = "c2"
CONF_DEFICIT_DELTA: Final = "reflectance_deficit_delta"
CONF_TEMPERATURE_K: Final = "temperature_k"

# Config keys - files
CONF_OPTICAL_TABLE: Final = "optical_table"
CONF_ROUGHNESS_PLATE: Final = "roughness_plate"
CONF_ROUGHNESS_SPHERE: Final = "roughness_sphere"
CONF_PROFILE: Final = "profile"
CONF_SCANS: Final = "scans"
CONF_DIFFRACTION_LOOKUP: Final = "diffraction_lookup"

# Config keys - errors
CONF_SYSTEMATIC_PN: Final = "systematic_pn"
CONF_CONFIDENCE: Final = "confidence"
CONF_GRAIN_VARIATION: Final = "grain_variation"
CONF_PFT: Final = "pft"
CONF_DIFFRACTION: Final = "diffraction"
CONF_PATCH: Final = "patch"
CONF_FINITE_SIZE: Final = "finite_size"

# Config keys - analysis
CONF_EXCLUDE: Final = "exclude"
CONF_S_MEAN_OVERRIDE_PN: Final = "s_mean_override_pn"
CONF_REPORT_SEPARATIONS_NM: Final = "report_separations_nm"
CONF_REGIONS_NM: Final = "regions_nm"
CONF_SIGN: Final = "sign"
CONF_COVERAGE_TRIALS: Final = "coverage_trials"
CONF_SEED: Final = "seed"

# Config keys - patch
CONF_WORK_FUNCTIONS_V: Final = "work_functions_v"
CONF_GRAIN_MIN_NM: Final = "grain_min_nm"
CONF_GRAIN_MAX_NM: Final = "grain_max_nm"

# Config keys - roughness
CONF_CORRELATION_LENGTH_NM: Final = "correlation_length_nm"

# Config keys - output
CONF_DIRECTORY: Final = "directory"

# Budget contribution labels (ordered as they are reported)
BUDGET_GRAIN: Final = "grain_variation"
BUDGET_PFT: Final = "pft"
BUDGET_DIFFRACTION: Final = "diffraction"
BUDGET_PATCH: Final = "patch"
BUDGET_FINITE_SIZE: Final = "finite_size"
BUDGET_KEYS: Final = [
    BUDGET_GRAIN,
    BUDGET_PFT,
    BUDGET_DIFFRACTION,
    BUDGET_PATCH,
    BUDGET_FINITE_SIZE,
]

# Exit statuses
EXIT_OK: Final = 0
EXIT_NUMERICAL: Final = 1
EXIT_INPUT: Final = 2


class ModelKind(StrEnum):
    """Dielectric permittivity representations."""

    DRUDE = "drude"
    PLASMA = "plasma"
    INFRARED = "infrared"
    TABULATED = "tabulated"
    IDEAL = "ideal"


class ThermalKind(StrEnum):
    """Prescriptions for the thermal correction."""

    TRADITIONAL = "traditional"
    ALTERNATIVE1 = "alternative1"
    ALTERNATIVE2 = "alternative2"


class FrequencyUnit(StrEnum):
    """First-column units accepted in optical data files."""

    EV = "eV"
    RAD_S = "rad_s"


class SignConvention(StrEnum):
    """How experimental force values are signed in scan files."""

    MAGNITUDE = "magnitude"  # attraction reported as positive pN
    SIGNED = "signed"  # attraction reported as negative pN


class Command(StrEnum):
    """CLI subcommands."""

    FORCE = "force"
    ANALYZE = "analyze"
    BUDGET = "budget"
    ROUGHNESS = "roughness"
