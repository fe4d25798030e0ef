"""Coordinator that runs the computation modules for one configuration.

Each ``run_*`` method loads what it needs from the configuration, calls the
library and returns a data container. Inputs are read lazily and cached, so
a command only touches the files it uses.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
import logging
import math

import numpy as np

from .config import RunConfig
from .const import (
    BUDGET_DIFFRACTION,
    BUDGET_FINITE_SIZE,
    BUDGET_GRAIN,
    BUDGET_KEYS,
    BUDGET_PATCH,
    BUDGET_PFT,
    NM,
    PN,
    THEORY_GRID_RATIO,
    ModelKind,
    SignConvention,
    ThermalKind,
)
from .corrections import (
    PatchParams,
    ThermalCorrection,
    finite_size_deficit,
    finite_size_factor,
    patch_fraction,
    patch_sigma,
    thermal_corrections,
)
from .exceptions import ConfigError, DomainError
from .lifshitz import (
    ForceCurve,
    ForcePoint,
    SpherePlateGeometry,
    build_force_curve,
    casimir_force_T0,
    ideal_force,
    pft_error_bound,
)
from .optics import (
    DrudeParams,
    InfraredModel,
    InfraredParams,
    PermittivityModel,
    TabulatedModel,
    build_model,
    grain_adjusted_c1,
)
from .readers import (
    read_diffraction_lookup,
    read_histogram,
    read_optical_table,
    read_profile,
    read_scans,
)
from .roughness import (
    RoughnessHistogram,
    RoughnessStats,
    diffraction_delta,
    dominant_period,
    force_rough_averaged,
    roughness_factor,
    separation_range,
    stochastic_stats,
)
from .stats import (
    ConfidenceResult,
    ErrorBudget,
    FitResult,
    ScanSet,
    confidence_result,
    coverage_fraction,
    fit_z0,
    mean_force,
    relative_error,
    theory_error_budget,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForceRow:
    """One row of the force table, SI units."""

    z: float
    f_ideal: float
    f_model: float
    eta_c: float
    eta_r: float
    eta_cr: float
    f_final: float
    error: float


@dataclass
class ForceRunData:
    """Container for a force computation."""

    model: ModelKind
    temperature: float = 0.0
    A_st: float | None = None
    rows: list[ForceRow] = field(default_factory=list)
    thermal: dict[float, dict[ThermalKind, ThermalCorrection]] = field(
        default_factory=dict
    )
    notices: list[str] = field(default_factory=list)


@dataclass
class AnalysisData:
    """Container for the experiment-versus-theory analysis."""

    scans: ScanSet
    mean: np.ndarray
    confidence: ConfidenceResult
    fit: FitResult | None = None
    theory: np.ndarray | None = None
    relative_errors: dict[float, float] = field(default_factory=dict)
    coverage: float | None = None
    notices: list[str] = field(default_factory=list)


@dataclass
class BudgetData:
    """Container for the theoretical error budget at one separation."""

    z_nm: float
    budget: ErrorBudget
    sources: dict[str, str] = field(default_factory=dict)


@dataclass
class RoughnessData:
    """Container for roughness statistics."""

    plate: RoughnessStats
    sphere: RoughnessStats | None = None
    renormalized: bool = False
    dominant_period_nm: float | None = None
    notices: list[str] = field(default_factory=list)


def log_grid(lo: float, hi: float, ratio: float = THEORY_GRID_RATIO) -> list[float]:
    """Return geometrically spaced points covering [lo, hi], at least 4."""
    if not 0 < lo < hi:
        raise DomainError("grid bounds must satisfy 0 < lo < hi")
    count = max(4, math.ceil(math.log(hi / lo) / math.log(ratio)) + 1)
    return [float(v) for v in np.geomspace(lo, hi, count)]


class CasimirCoordinator:
    """Runs force, analysis, budget and roughness computations for a config."""

    def __init__(self, config: RunConfig) -> None:
        """Initialize the coordinator.

        Args:
            config: Validated run configuration.
        """
        self.config = config

    @property
    def model_kind(self) -> ModelKind:
        """Return the selected model."""
        return self.config.model_kind

    @property
    def radius(self) -> float:
        """Return the sphere radius in m."""
        return self.config.radius

    @property
    def temperature(self) -> float:
        """Return the temperature in K."""
        return self.config.temperature

    @cached_property
    def model(self) -> PermittivityModel:
        """Return the configured permittivity model."""
        config = self.config
        if config.model_kind is ModelKind.TABULATED:
            table = read_optical_table(
                config.optical_table_path, DrudeParams(config.omega_p, config.gamma)
            )
            return TabulatedModel(table)
        return build_model(
            config.model_kind,
            omega_p=config.omega_p,
            gamma=config.gamma,
            c1=config.c1,
            c2=config.c2,
        )

    @cached_property
    def plate_histogram(self) -> RoughnessHistogram:
        """Return the plate roughness histogram."""
        return read_histogram(self.config.roughness_plate_path)

    @cached_property
    def sphere_histogram(self) -> RoughnessHistogram:
        """Return the sphere roughness histogram."""
        if self.config.roughness_sphere_path == self.config.roughness_plate_path:
            return self.plate_histogram
        return read_histogram(self.config.roughness_sphere_path)

    @cached_property
    def plate_stats(self) -> RoughnessStats:
        """Return the statistics of the plate histogram."""
        return stochastic_stats(self.plate_histogram)

    def _geometry(self, z_nm: float) -> SpherePlateGeometry:
        return SpherePlateGeometry(z=z_nm * NM, R=self.radius)

    def _curve(self, separations: Sequence[float]) -> ForceCurve:
        return build_force_curve(
            separations, self.model, R=self.radius, temperature=self.temperature
        )

    def _renormalization_notices(self) -> list[str]:
        notices = []
        if self.plate_histogram.renormalized:
            notices.append("plate histogram fractions were renormalized")
        if (
            self.sphere_histogram is not self.plate_histogram
            and self.sphere_histogram.renormalized
        ):
            notices.append("sphere histogram fractions were renormalized")
        return notices

    def run_force(self, z_list_nm: Sequence[float]) -> ForceRunData:
        """Compute the force table at the requested separations (nm)."""
        data = ForceRunData(model=self.model_kind, temperature=self.temperature)
        if not z_list_nm:
            _LOGGER.info("No separations requested; force table is empty")
            return data

        z_sorted = sorted(set(z_list_nm))
        geometries = [self._geometry(z) for z in z_sorted]
        for g in geometries:
            g.require_gap()

        hp, hs = self.plate_histogram, self.sphere_histogram
        bounds = [separation_range(g.z, hp, hs) for g in geometries]
        A_st = self.plate_stats.A_st * NM
        data.A_st = A_st
        data.notices.extend(self._renormalization_notices())

        points: tuple[ForcePoint, ...] = self._curve([g.z for g in geometries]).points
        averaging = self._curve(
            log_grid(min(b[0] for b in bounds), max(b[1] for b in bounds))
        ).interpolator()

        for g, point in zip(geometries, points, strict=True):
            f_ideal = ideal_force(g)
            f_rough = force_rough_averaged(
                g.z, hp, hs, lambda s: float(averaging(s))
            )
            data.rows.append(
                ForceRow(
                    z=g.z,
                    f_ideal=f_ideal,
                    f_model=point.force,
                    eta_c=point.force / f_ideal,
                    eta_r=roughness_factor(g.z, A_st),
                    eta_cr=f_rough / f_ideal,
                    f_final=f_rough
                    * finite_size_factor(g.z, g.R, self.config.plate_radius),
                    error=point.error,
                )
            )
            if self.temperature > 0:
                data.thermal[g.z] = thermal_corrections(
                    g, self.temperature, self.config.omega_p, reference=point.force
                )
        _LOGGER.info(
            "Computed %d force rows with the %s model", len(data.rows), self.model_kind
        )
        return data

    def _theory_pn(
        self, z_lo_nm: float, z_hi_nm: float
    ) -> Callable[[np.ndarray], np.ndarray]:
        """Return the rough-surface theory in pN on [z_lo, z_hi] nm, vectorized."""
        curve = self._curve(log_grid(z_lo_nm * NM, z_hi_nm * NM))
        force = curve.interpolator()
        A_st_nm = self.plate_stats.A_st
        sign = -1.0 if self.config.sign is SignConvention.MAGNITUDE else 1.0

        def theory(z_nm: np.ndarray) -> np.ndarray:
            z_nm = np.asarray(z_nm, dtype=float)
            ratio = (A_st_nm / z_nm) ** 2
            return sign * force(z_nm * NM) * (1.0 + 6.0 * ratio + 45.0 * ratio**2) / PN

        return theory

    def run_analyze(self) -> AnalysisData:
        """Run the error analysis and the theory fit on the scan file."""
        config = self.config
        if config.scans_path is None:
            raise ConfigError("analysis needs a scan file ([files] scans)")
        scans = read_scans(config.scans_path)
        if config.exclude:
            scans = scans.exclude(config.exclude)
        notices = []
        if scans.excluded_scan_ids:
            notices.append(
                "excluded scans: "
                + ", ".join(str(i) for i in sorted(scans.excluded_scan_ids))
            )

        confidence = confidence_result(
            scans,
            config.beta,
            config.systematic_pn,
            s_mean_override=config.s_mean_override_pn,
        )
        mean = mean_force(scans)
        data = AnalysisData(
            scans=scans, mean=mean, confidence=confidence, notices=notices
        )

        z = scans.z
        for z_report in config.report_separations_nm:
            if not z[0] <= z_report <= z[-1]:
                raise DomainError(
                    f"report separation {z_report:g} nm is outside the scan grid"
                )
            mean_at = float(np.interp(z_report, z, mean))
            data.relative_errors[z_report] = relative_error(
                confidence.total_error, mean_at
            )

        halfwidth = config.z0_halfwidth_nm
        if z[0] - halfwidth <= 0:
            raise DomainError("z0 search window reaches zero separation")
        theory = self._theory_pn(z[0] - halfwidth, z[-1] + halfwidth)
        data.fit = fit_z0(
            scans,
            theory,
            config.z0_nm,
            halfwidth,
            config.z0_step_nm,
            config.regions,
        )
        data.theory = theory(z + data.fit.offset)

        if config.coverage_trials > 0:
            data.coverage = coverage_fraction(
                scans.n, config.beta, config.coverage_trials, config.seed
            )
        _LOGGER.info("Analysed %d scans over %d separations", scans.n, len(z))
        return data

    def _grain_variation(self, g: SpherePlateGeometry) -> float:
        config = self.config
        extension = DrudeParams(config.omega_p, config.gamma)
        base = InfraredModel(
            InfraredParams(config.omega_p, config.c1, config.c2), extension=extension
        )
        adjusted = InfraredModel(
            InfraredParams(
                config.omega_p,
                grain_adjusted_c1(config.c1, config.reflectance_deficit_delta),
                config.c2,
            ),
            extension=extension,
        )
        reference = casimir_force_T0(g, base)
        return abs(casimir_force_T0(g, adjusted) - reference) / abs(reference)

    def run_budget(self, z_nm: float) -> BudgetData:
        """Assemble the theoretical error budget at separation z (nm)."""
        config = self.config
        g = self._geometry(z_nm)
        g.require_gap()
        overrides = config.budget_overrides
        A_st = self.plate_stats.A_st * NM

        computed: dict[str, Callable[[], float]] = {
            BUDGET_GRAIN: lambda: self._grain_variation(g),
            BUDGET_PFT: lambda: pft_error_bound(g),
            BUDGET_DIFFRACTION: lambda: diffraction_delta(
                g.z,
                A_st,
                config.correlation_length,
                read_diffraction_lookup(config.diffraction_lookup_path),
            ),
            BUDGET_PATCH: lambda: patch_fraction(
                g.z,
                g.R,
                PatchParams.from_grains(
                    patch_sigma(config.work_functions),
                    config.grain_min,
                    config.grain_max,
                ),
                casimir_force_T0(g, self.model),
            ),
            BUDGET_FINITE_SIZE: lambda: finite_size_deficit(
                g.z, g.R, config.plate_radius
            ),
        }
        extra: dict[str, float] = {}
        sources: dict[str, str] = {}
        for label in BUDGET_KEYS:
            if label in overrides:
                extra[label] = overrides[label]
                sources[label] = "override"
            else:
                extra[label] = computed[label]()
                sources[label] = "computed"

        budget = theory_error_budget(
            z_nm, config.radius_error, config.radius, config.delta_z_nm, extra
        )
        _LOGGER.info("Error budget at %g nm: %.4g", z_nm, budget.total)
        return BudgetData(z_nm=z_nm, budget=budget, sources=sources)

    def run_roughness(self) -> RoughnessData:
        """Compute roughness statistics and, with a profile, its period."""
        config = self.config
        data = RoughnessData(
            plate=self.plate_stats,
            renormalized=self.plate_histogram.renormalized,
        )
        if self.sphere_histogram is not self.plate_histogram:
            data.sphere = stochastic_stats(self.sphere_histogram)
        data.notices.extend(self._renormalization_notices())
        if config.profile_path is not None:
            data.dominant_period_nm = dominant_period(read_profile(config.profile_path))
        return data
