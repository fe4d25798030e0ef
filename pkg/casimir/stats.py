"""Experimental error analysis and theory-experiment comparison.

Forces are in pN and separations in nm throughout this module, the units the
scan files use.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy import special

from .const import (
    DEFAULT_REGION_BOUNDS,
    EQUIVALENCE_FACTOR,
    NM,
    PN,
    STUDENT_TOLERANCE,
)
from .exceptions import DomainError, NumericalError
from .lifshitz import ForceCurve

_LOGGER = logging.getLogger(__name__)

REGION_FULL = "full"
_NEWTON_STEPS = 3


def region_label(upper: float | None) -> str:
    """Return the report label of a region bounded above by ``upper`` nm."""
    return REGION_FULL if upper is None else f"z<={upper:g}"


@dataclass(frozen=True)
class ScanSet:
    """Repeated force scans over a shared separation grid."""

    separations: tuple[float, ...]
    scans: tuple[tuple[float, ...], ...]
    scan_ids: tuple[int, ...] = ()
    excluded_scan_ids: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        """Validate the grid and assign default ids."""
        if not self.separations:
            raise DomainError("scan set has no separations")
        if any(
            b <= a
            for a, b in zip(self.separations, self.separations[1:], strict=False)
        ):
            raise DomainError("scan separations must be strictly increasing")
        for index, scan in enumerate(self.scans, start=1):
            if len(scan) != len(self.separations):
                raise DomainError(
                    f"scan {index} has {len(scan)} points, grid has "
                    f"{len(self.separations)}"
                )
        if not self.scan_ids:
            object.__setattr__(
                self, "scan_ids", tuple(range(1, len(self.scans) + 1))
            )
        if len(self.scan_ids) != len(self.scans):
            raise DomainError("scan ids do not match the number of scans")

    def exclude(self, ids: Iterable[int]) -> ScanSet:
        """Return a scan set with the given scan ids removed from analysis."""
        requested = frozenset(ids)
        unknown = requested - set(self.scan_ids)
        if unknown:
            _LOGGER.warning("Ignoring exclusion of unknown scans: %s", sorted(unknown))
        return ScanSet(
            separations=self.separations,
            scans=self.scans,
            scan_ids=self.scan_ids,
            excluded_scan_ids=self.excluded_scan_ids | (requested - unknown),
        )

    @property
    def active(self) -> np.ndarray:
        """Return the (n, m) array of scans still in the analysis."""
        rows = [
            scan
            for scan_id, scan in zip(self.scan_ids, self.scans, strict=True)
            if scan_id not in self.excluded_scan_ids
        ]
        return np.array(rows, dtype=float).reshape(len(rows), len(self.separations))

    @property
    def n(self) -> int:
        """Return the number of scans in the analysis."""
        return len(self.scans) - len(self.excluded_scan_ids)

    @property
    def z(self) -> np.ndarray:
        """Return the separation grid."""
        return np.asarray(self.separations, dtype=float)


@dataclass(frozen=True)
class MeanVariance:
    """Variance of the mean per separation and the largest s over the grid."""

    variance: np.ndarray
    s_max: float


@dataclass(frozen=True)
class ErrorBudget:
    """Named relative error contributions, combined linearly."""

    contributions: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        """Reject negative contributions."""
        for label, value in self.contributions:
            if value < 0:
                raise DomainError(f"budget contribution {label} is negative")

    @property
    def total(self) -> float:
        """Return the linear sum of all contributions."""
        return math.fsum(value for _, value in self.contributions)

    def as_dict(self) -> dict[str, float]:
        """Return contributions keyed by label."""
        return dict(self.contributions)

    def without(self, label: str) -> ErrorBudget:
        """Return the budget with one contribution removed."""
        return ErrorBudget(tuple(c for c in self.contributions if c[0] != label))


@dataclass(frozen=True)
class ConfidenceResult:
    """Random, systematic and total experimental errors at confidence beta."""

    s_mean: float
    t_value: float
    random_error: float
    systematic_error: float
    total_error: float
    beta: float
    n: int


@dataclass(frozen=True)
class FitResult:
    """Best separation offset and the RMS deviations around it."""

    z0_best: float
    offset: float
    sigma_best: float
    equivalence_halfwidth: float
    sigma_by_region: dict[str, float] = field(default_factory=dict)
    offsets: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)
    sigmas: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)


def mean_force(s: ScanSet) -> np.ndarray:
    """Return the mean force at every separation."""
    if s.n == 0:
        raise DomainError("scan set has no scans left to average")
    return s.active.mean(axis=0)


def variance_of_mean(s: ScanSet) -> MeanVariance:
    """Return the variance of the mean per separation and the largest s."""
    if s.n < 2:
        raise DomainError(f"variance of the mean needs at least 2 scans, got {s.n}")
    data = s.active
    residual = data - data.mean(axis=0)
    variance = (residual * residual).sum(axis=0) / (s.n * (s.n - 1))
    return MeanVariance(variance=variance, s_max=float(np.sqrt(variance.max())))


def _student_pdf(t: float, f: float) -> float:
    log_norm = (
        special.gammaln((f + 1.0) / 2.0)
        - special.gammaln(f / 2.0)
        - 0.5 * math.log(f * math.pi)
    )
    return math.exp(log_norm - (f + 1.0) / 2.0 * math.log1p(t * t / f))


def student_threshold(beta: float, n: int) -> float:
    """Return t_p(f) with p = (1 + beta)/2 and f = n - 1.

    The quantile comes from the inverse regularized incomplete beta function
    and is polished with Newton steps on the distribution function.
    """
    if not 0 < beta < 1:
        raise DomainError(f"confidence level must lie in (0, 1), got {beta!r}")
    if n < 2:
        raise DomainError(f"Student threshold needs n >= 2, got {n}")
    f = float(n - 1)
    p = (1.0 + beta) / 2.0
    x = float(special.betaincinv(f / 2.0, 0.5, 1.0 - beta))
    t = math.sqrt(f * (1.0 - x) / x)
    for _ in range(_NEWTON_STEPS):
        step = (float(special.stdtr(f, t)) - p) / _student_pdf(t, f)
        t -= step
        if abs(step) < STUDENT_TOLERANCE * 1e-6:
            break
    if abs(float(special.stdtr(f, t)) - p) > STUDENT_TOLERANCE:
        raise NumericalError(f"Student quantile did not converge for beta={beta}")
    return t


def random_error(s_mean_max: float, beta: float, n: int) -> float:
    """Return the random error s_mean * t_p(f)."""
    if s_mean_max < 0:
        raise DomainError("standard deviation of the mean must be non-negative")
    return s_mean_max * student_threshold(beta, n)


def systematic_error(contributions: Sequence[float]) -> float:
    """Return the linear sum of systematic error contributions."""
    if any(c < 0 for c in contributions):
        raise DomainError("systematic error contributions must be non-negative")
    return math.fsum(contributions)


def total_error(random: float, systematic: float) -> float:
    """Return random + systematic, combined linearly."""
    if random < 0 or systematic < 0:
        raise DomainError("errors must be non-negative")
    return random + systematic


def confidence_interval(mean: float, total_error: float) -> tuple[float, float]:
    """Return (mean - total_error, mean + total_error)."""
    if total_error < 0:
        raise DomainError("total error must be non-negative")
    return mean - total_error, mean + total_error


def relative_error(total_error: float, mean_at_z: float) -> float:
    """Return total_error / |mean|."""
    if mean_at_z == 0:
        raise DomainError("relative error is undefined for a zero mean force")
    return total_error / abs(mean_at_z)


def confidence_result(
    s: ScanSet | None,
    beta: float,
    systematic_components: Sequence[float],
    *,
    s_mean_override: float | None = None,
    n: int | None = None,
) -> ConfidenceResult:
    """Run the confidence pipeline on a scan set or on given s and n."""
    count = s.n if s is not None else n
    if count is None:
        raise DomainError("need a scan set or an explicit number of scans")
    if s_mean_override is not None:
        s_mean = s_mean_override
    elif s is not None:
        s_mean = variance_of_mean(s).s_max
    else:
        raise DomainError("need a scan set or an explicit s_mean")
    t_value = student_threshold(beta, count)
    rand = s_mean * t_value
    syst = systematic_error(systematic_components)
    return ConfidenceResult(
        s_mean=s_mean,
        t_value=t_value,
        random_error=rand,
        systematic_error=syst,
        total_error=total_error(rand, syst),
        beta=beta,
        n=count,
    )


def _region_mask(
    separations: np.ndarray, region: tuple[float | None, float | None] | None
) -> np.ndarray:
    mask = np.ones(separations.shape, dtype=bool)
    if region is not None:
        lo, hi = region
        if lo is not None:
            mask &= separations >= lo
        if hi is not None:
            mask &= separations <= hi
    return mask


def rms_deviation(
    theory: ForceCurve | Sequence[float] | np.ndarray,
    exp_mean: Sequence[float] | np.ndarray,
    separations: Sequence[float] | np.ndarray,
    region: tuple[float | None, float | None] | None = None,
) -> float:
    """Return the RMS deviation between theory and experiment over a region.

    Args:
        theory: Theoretical forces at the experimental separations, in pN, or
            a force curve computed on exactly that grid.
        exp_mean: Mean experimental force per separation, pN.
        separations: Experimental separations, nm.
        region: Inclusive (low, high) bounds in nm; None means unbounded.
    """
    z = np.asarray(separations, dtype=float)
    if isinstance(theory, ForceCurve):
        if len(theory.points) != len(z) or not np.allclose(
            theory.separations, z * NM, rtol=1e-9, atol=0.0
        ):
            raise DomainError("theory curve is not on the experimental grid")
        values = theory.forces / PN
    else:
        values = np.asarray(theory, dtype=float)
    mean = np.asarray(exp_mean, dtype=float)
    mask = _region_mask(z, region)
    if not mask.any():
        raise DomainError(f"no separations inside region {region}")
    residual = values[mask] - mean[mask]
    return float(np.sqrt(np.mean(residual * residual)))


def offset_grid(halfwidth: float, step: float) -> np.ndarray:
    """Return symmetric offsets -halfwidth..halfwidth in multiples of step."""
    if not halfwidth > 0 or not step > 0:
        raise DomainError("halfwidth and step must be positive")
    count = round(halfwidth / step)
    return np.arange(-count, count + 1) * step


def fit_z0(
    exp: ScanSet,
    theory_fn: Callable[[np.ndarray], np.ndarray],
    z0_nominal: float,
    halfwidth: float,
    step: float,
    regions: Sequence[float | None] = DEFAULT_REGION_BOUNDS,
) -> FitResult:
    """Find the separation offset that minimizes the RMS deviation.

    Every offset d on the grid shifts the theory to z_i + d; the grid search
    covers [-halfwidth, +halfwidth]. theory_fn must accept 2-D arrays of
    separations in nm and return forces in pN in the scan files' convention.
    """
    offsets = offset_grid(halfwidth, step)
    z = exp.z
    mean = mean_force(exp)
    predicted = np.asarray(theory_fn(z[None, :] + offsets[:, None]), dtype=float)
    residual = predicted - mean[None, :]
    sigmas = np.sqrt(np.mean(residual * residual, axis=1))

    best = int(np.argmin(sigmas))
    sigma_best = float(sigmas[best])
    inside = offsets[sigmas <= EQUIVALENCE_FACTOR * sigma_best]
    halfwidth_eq = float(inside.max() - inside.min()) / 2.0

    sigma_by_region = {
        region_label(upper): rms_deviation(predicted[best], mean, z, (None, upper))
        for upper in regions
    }
    _LOGGER.debug(
        "z0 fit: offset %.3f nm, sigma %.4g pN over %d offsets",
        offsets[best],
        sigma_best,
        len(offsets),
    )
    return FitResult(
        z0_best=z0_nominal + float(offsets[best]),
        offset=float(offsets[best]),
        sigma_best=sigma_best,
        equivalence_halfwidth=halfwidth_eq,
        sigma_by_region=sigma_by_region,
        offsets=offsets,
        sigmas=sigmas,
    )


def theory_error_budget(
    z: float,
    delta_R: float,
    R: float,
    delta_z: float,
    extra: Mapping[str, float] | None = None,
) -> ErrorBudget:
    """Return the theoretical error budget at separation z (nm).

    The first contribution is the propagated uncertainty of the sphere
    radius and the separation, delta_R/R + 3*delta_z/z; the named extra
    contributions are added linearly.
    """
    if z <= 0 or R <= 0 or delta_R < 0 or delta_z < 0:
        raise DomainError("budget inputs must be non-negative with z, R > 0")
    parts = [("separation_and_radius", delta_R / R + 3.0 * delta_z / z)]
    parts.extend((extra or {}).items())
    return ErrorBudget(tuple(parts))


def coverage_fraction(
    n: int,
    beta: float,
    trials: int,
    seed: int,
    *,
    mean: float = 0.0,
    sigma: float = 1.0,
) -> float:
    """Return how often the random-error interval covers the true mean.

    Synthetic Gaussian samples of n scans are drawn ``trials`` times from a
    seeded generator.
    """
    if trials < 1:
        raise DomainError("coverage check needs at least one trial")
    rng = np.random.default_rng(seed)
    samples = rng.normal(mean, sigma, size=(trials, n))
    sample_mean = samples.mean(axis=1)
    s_mean = samples.std(axis=1, ddof=1) / math.sqrt(n)
    half = s_mean * student_threshold(beta, n)
    return float(np.mean(np.abs(sample_mean - mean) <= half))
