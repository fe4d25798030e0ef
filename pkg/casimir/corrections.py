"""Thermal, patch-potential and finite-size corrections."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math

from scipy import special

from .const import (
    BOLTZMANN,
    EPSILON_0,
    GOLD_OMEGA_P,
    INNER_EPSABS,
    INNER_EPSREL,
    PATCH_EPSREL,
    THERMAL_SUM_RTOL,
    ThermalKind,
)
from .exceptions import DomainError
from .integrate import checked_quad
from .lifshitz import (
    SpherePlateGeometry,
    casimir_force_T0,
    casimir_force_thermal,
)
from .optics import PlasmaModel, plasma_zero_frequency_perp

_LOGGER = logging.getLogger(__name__)

_Y_SPAN = 80.0


@dataclass(frozen=True)
class PatchParams:
    """Patch-potential variance and the wave-vector band of the grains."""

    sigma_v: float
    k_min: float
    k_max: float

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if self.sigma_v < 0:
            raise DomainError("patch potential spread must be non-negative")
        if not 0 < self.k_min < self.k_max:
            raise DomainError(
                f"wave vectors must satisfy 0 < k_min < k_max, got "
                f"{self.k_min:.4g}, {self.k_max:.4g}"
            )

    @classmethod
    def from_grains(
        cls, sigma_v: float, lambda_min: float, lambda_max: float
    ) -> PatchParams:
        """Build patch parameters from the smallest and largest grain sizes."""
        k_min, k_max = grain_wavevectors(lambda_min, lambda_max)
        return cls(sigma_v=sigma_v, k_min=k_min, k_max=k_max)


@dataclass(frozen=True)
class ThermalCorrection:
    """Absolute and relative thermal correction of one prescription."""

    kind: ThermalKind
    delta_abs: float
    delta_rel: float


def _thermal_prefactor(g: SpherePlateGeometry, T: float) -> float:
    """Return k_B*T*R/(8*z**2)."""
    return BOLTZMANN * T * g.R / (8.0 * g.z * g.z)


def _check_temperature(T: float) -> None:
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r}")


def bose_integral() -> float:
    """Return Int_0^inf y ln(1 - e^-y) dy by quadrature (equals -zeta(3))."""
    return checked_quad(
        lambda y: y * math.log1p(-math.exp(-y)),
        0.0,
        _Y_SPAN,
        epsabs=INNER_EPSABS,
        epsrel=INNER_EPSREL,
        what="Bose integral",
    ).value


def zeta3_term() -> float:
    """Return the closed form -zeta(3) of the added zero-frequency integral."""
    return -float(special.zeta(3.0))


def zero_frequency_te_integral(z: float, omega_p: float = GOLD_OMEGA_P) -> float:
    """Return Int_0^inf y ln(1 - r_perp^2(0, y) e^-y) dy for the plasma model."""
    if not z > 0:
        raise DomainError("separation must be positive")

    def integrand(y: float) -> float:
        r_perp_sq = plasma_zero_frequency_perp(y, z, omega_p)
        return y * math.log1p(-r_perp_sq * math.exp(-y))

    return checked_quad(
        integrand,
        0.0,
        _Y_SPAN,
        epsabs=INNER_EPSABS,
        epsrel=INNER_EPSREL,
        what="zero-frequency TE integral",
    ).value


def _traditional_delta(
    g: SpherePlateGeometry, T: float, omega_p: float
) -> tuple[float, float]:
    """Return (Delta_T, F_c(z, 0)) with the plasma model in both terms."""
    model = PlasmaModel(omega_p)
    f_zero = casimir_force_T0(g, model)
    f_thermal = casimir_force_thermal(g, model, T, rtol=THERMAL_SUM_RTOL)
    return f_thermal - f_zero, f_zero


def _correction(
    kind: ThermalKind, delta: float, f_zero: float, reference: float | None
) -> ThermalCorrection:
    scale = abs(reference) if reference is not None else abs(f_zero)
    return ThermalCorrection(kind=kind, delta_abs=delta, delta_rel=delta / scale)


def thermal_correction_traditional(
    g: SpherePlateGeometry,
    T: float,
    omega_p: float = GOLD_OMEGA_P,
    *,
    reference: float | None = None,
) -> ThermalCorrection:
    """Return F(z, T) - F(z, 0) with the plasma model in both terms.

    The relative value is taken against ``reference`` when given, otherwise
    against the zero-temperature plasma force.
    """
    _check_temperature(T)
    delta, f_zero = _traditional_delta(g, T, omega_p)
    return _correction(ThermalKind.TRADITIONAL, delta, f_zero, reference)


def alt_thermal_1(
    g: SpherePlateGeometry,
    T: float,
    omega_p: float = GOLD_OMEGA_P,
    *,
    reference: float | None = None,
) -> ThermalCorrection:
    """Return the correction with the plasma zero-frequency TE term removed."""
    return thermal_corrections(g, T, omega_p, reference=reference)[
        ThermalKind.ALTERNATIVE1
    ]


def alt_thermal_2(
    g: SpherePlateGeometry,
    T: float,
    omega_p: float = GOLD_OMEGA_P,
    *,
    reference: float | None = None,
) -> ThermalCorrection:
    """Return the correction with the modified zero-frequency TE contribution."""
    return thermal_corrections(g, T, omega_p, reference=reference)[
        ThermalKind.ALTERNATIVE2
    ]


def thermal_corrections(
    g: SpherePlateGeometry,
    T: float,
    omega_p: float = GOLD_OMEGA_P,
    *,
    reference: float | None = None,
) -> dict[ThermalKind, ThermalCorrection]:
    """Return all three prescriptions from a single pair of force evaluations."""
    _check_temperature(T)
    delta, f_zero = _traditional_delta(g, T, omega_p)
    prefactor = _thermal_prefactor(g, T)
    first = delta - prefactor * zero_frequency_te_integral(g.z, omega_p)
    second = first + prefactor * zeta3_term()
    return {
        ThermalKind.TRADITIONAL: _correction(
            ThermalKind.TRADITIONAL, delta, f_zero, reference
        ),
        ThermalKind.ALTERNATIVE1: _correction(
            ThermalKind.ALTERNATIVE1, first, f_zero, reference
        ),
        ThermalKind.ALTERNATIVE2: _correction(
            ThermalKind.ALTERNATIVE2, second, f_zero, reference
        ),
    }


def patch_force(z: float, R: float, p: PatchParams) -> float:
    """Return the electrostatic force from random patch potentials."""
    if not z > 0:
        raise DomainError(f"separation must be positive, got {z!r}")
    if p.sigma_v == 0:
        return 0.0
    integral = checked_quad(
        lambda u: u * u * math.exp(-u) / math.sinh(u),
        p.k_min * z,
        p.k_max * z,
        epsabs=0.0,
        epsrel=PATCH_EPSREL,
        what="patch integral",
    ).value
    return (
        -4.0
        * math.pi
        * EPSILON_0
        * p.sigma_v**2
        * R
        / (p.k_max**2 - p.k_min**2)
        * integral
        / z**3
    )


def patch_fraction(z: float, R: float, p: PatchParams, casimir_force: float) -> float:
    """Return |F_patch| / |F_casimir|."""
    if casimir_force == 0:
        raise DomainError("Casimir force must be nonzero")
    return abs(patch_force(z, R, p)) / abs(casimir_force)


def patch_sigma(work_functions: Sequence[float]) -> float:
    """Return the patch potential spread for equal-area crystal planes."""
    if len(work_functions) < 2:
        raise DomainError("patch spread needs at least 2 work functions")
    mean = math.fsum(work_functions) / len(work_functions)
    spread = math.fsum((v - mean) ** 2 for v in work_functions)
    return math.sqrt(spread / 2.0)


def grain_wavevectors(lambda_min: float, lambda_max: float) -> tuple[float, float]:
    """Return (k_min, k_max) = (2pi/lambda_max, 2pi/lambda_min)."""
    if not 0 < lambda_min < lambda_max:
        raise DomainError("grain sizes must satisfy 0 < lambda_min < lambda_max")
    return 2.0 * math.pi / lambda_max, 2.0 * math.pi / lambda_min


def _check_finite_size(z: float, R: float, L: float) -> None:
    if not 0 < z < R < L:
        raise DomainError(f"need 0 < z < R < L, got z={z!r}, R={R!r}, L={L!r}")


def finite_size_deficit(z: float, R: float, L: float) -> float:
    """Return 1 - beta for a plate of radius L.

    Cutting the proximity-force integral at the plate edge, where the gap is
    z + L**2/(2R), leaves the fraction [z/(z + L**2/(2R))]**3 uncounted.
    """
    _check_finite_size(z, R, L)
    return (2.0 * z * R / (2.0 * z * R + L * L)) ** 3


def finite_size_factor(z: float, R: float, L: float) -> float:
    """Return the finite plate size factor beta."""
    return 1.0 - finite_size_deficit(z, R, L)


def finite_size_deficit_asymptotic(z: float, R: float, L: float) -> float:
    """Return the large-plate form 8 z**3 R**3 / L**6 of 1 - beta."""
    _check_finite_size(z, R, L)
    return 8.0 * (z * R) ** 3 / L**6


def finite_size_factor_asymptotic(z: float, R: float, L: float) -> float:
    """Return 1 - 8 z**3 R**3 / L**6."""
    return 1.0 - finite_size_deficit_asymptotic(z, R, L)
