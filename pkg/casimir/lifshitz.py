"""Sphere-plate Casimir force from the Lifshitz formula.

The plate-plate free energy is mapped onto the sphere-plate force with the
proximity force theorem. Integrals are done in the dimensionless variables
zeta = 2*z*xi/c and y = 2*z*q, which turns the force at zero temperature into

    F = hbar*c*R / (16*pi*z**3) * Int_0^inf dzeta Int_zeta^inf dy y*S(y, zeta)

with S the sum of ln(1 - r**2 * exp(-y)) over both polarizations. At finite
temperature the zeta integral becomes a Matsubara sum with step
2*pi*k_B*T/hbar * 2z/c.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline

from .const import (
    BOLTZMANN,
    DEFAULT_SPHERE_RADIUS,
    EXPONENT_CUTOFF,
    FORCE_TOLERANCE,
    HBAR,
    INNER_EPSABS,
    INNER_EPSREL,
    MATSUBARA_MAX_TERMS,
    MATSUBARA_RTOL,
    MAX_Z_OVER_R,
    OUTER_EPSABS,
    OUTER_EPSREL,
    SPEED_OF_LIGHT,
    XI_SPAN_DECADES,
    ModelKind,
)
from .exceptions import DomainError, QuadratureError, SummationError
from .integrate import QuadResult, checked_quad
from .optics import PermittivityModel

_LOGGER = logging.getLogger(__name__)

# Width of the y window above zeta; exp(-80) is far below double resolution
_Y_SPAN = 80.0
# Value of the ideal-metal zeta integral, -2*pi**4/45
IDEAL_INTEGRAL = -2.0 * math.pi**4 / 45.0


@dataclass(frozen=True)
class SpherePlateGeometry:
    """Separation z and sphere radius R, both in metres."""

    z: float
    R: float = DEFAULT_SPHERE_RADIUS

    def __post_init__(self) -> None:
        """Validate the geometry."""
        if not self.R > 0:
            raise DomainError(f"sphere radius must be positive, got {self.R!r}")
        if not self.z >= 0:
            raise DomainError(f"separation must be non-negative, got {self.z!r}")
        if self.z / self.R >= MAX_Z_OVER_R:
            raise DomainError(
                f"separation {self.z:.4g} m is not small against R = {self.R:.4g} m"
            )

    def require_gap(self) -> None:
        """Raise unless the separation is strictly positive."""
        if not self.z > 0:
            raise DomainError("force needs a positive separation")


@dataclass(frozen=True)
class ForcePoint:
    """Force at one separation with its numerical error estimate."""

    z: float
    force: float
    model: ModelKind
    temperature: float = 0.0
    error: float = 0.0


@dataclass(frozen=True)
class ForceCurve:
    """Forces over strictly increasing separations for one model."""

    points: tuple[ForcePoint, ...]
    R: float
    model: ModelKind
    temperature: float = 0.0

    def __post_init__(self) -> None:
        """Check the separations are strictly increasing."""
        z = [p.z for p in self.points]
        if any(b <= a for a, b in zip(z, z[1:], strict=False)):
            raise DomainError("force curve separations must be strictly increasing")

    @property
    def separations(self) -> np.ndarray:
        """Return separations in metres."""
        return np.array([p.z for p in self.points])

    @property
    def forces(self) -> np.ndarray:
        """Return forces in newtons."""
        return np.array([p.force for p in self.points])

    def interpolator(self) -> Callable[[float | np.ndarray], np.ndarray]:
        """Return a cubic interpolant of the force, built in log-log space."""
        if len(self.points) < 4:
            raise DomainError("interpolation needs at least 4 force points")
        spline = CubicSpline(np.log(self.separations), np.log(-self.forces))

        def force(z: float | np.ndarray) -> np.ndarray:
            return -np.exp(spline(np.log(z)))

        return force


def characteristic_frequency(z: float) -> float:
    """Return omega_c = c/(2z)."""
    if not z > 0:
        raise DomainError(f"separation must be positive, got {z!r}")
    return SPEED_OF_LIGHT / (2.0 * z)


def pft_error_bound(g: SpherePlateGeometry) -> float:
    """Return the proximity-force error bound z/R."""
    return g.z / g.R


def ideal_force(g: SpherePlateGeometry) -> float:
    """Return the ideal-metal force -pi**3*hbar*c*R/(360*z**3)."""
    g.require_gap()
    return -(math.pi**3) * HBAR * SPEED_OF_LIGHT * g.R / (360.0 * g.z**3)


def _check_reflection_args(eps: float, xi: float, k_perp: float) -> None:
    if not eps >= 1:
        raise DomainError(f"permittivity must be at least 1, got {eps!r}")
    if not xi > 0:
        raise DomainError(f"imaginary frequency must be positive, got {xi!r}")
    if not k_perp >= 0:
        raise DomainError(f"wave vector must be non-negative, got {k_perp!r}")


def _wave_numbers(eps: float, xi: float, k_perp: float) -> tuple[float, float]:
    xi_c_sq = (xi / SPEED_OF_LIGHT) ** 2
    q = math.sqrt(k_perp * k_perp + xi_c_sq)
    k = math.sqrt(k_perp * k_perp + eps * xi_c_sq)
    return q, k


def reflection_sq_parallel(eps: float, xi: float, k_perp: float) -> float:
    """Return r_par**2 for TM waves at imaginary frequency xi."""
    _check_reflection_args(eps, xi, k_perp)
    q, k = _wave_numbers(eps, xi, k_perp)
    return ((eps * q - k) / (eps * q + k)) ** 2


def reflection_sq_perp(eps: float, xi: float, k_perp: float) -> float:
    """Return r_perp**2 for TE waves at imaginary frequency xi."""
    _check_reflection_args(eps, xi, k_perp)
    q, k = _wave_numbers(eps, xi, k_perp)
    return ((q - k) / (q + k)) ** 2


def _mode_sum(y: float, eps: float, zeta: float) -> float:
    """Return ln(1 - r_par**2 e^-y) + ln(1 - r_perp**2 e^-y)."""
    decay = math.exp(-y)
    if math.isinf(eps):
        return 2.0 * math.log1p(-decay)
    big_k = math.sqrt(y * y + (eps - 1.0) * zeta * zeta)
    r_par = (eps * y - big_k) / (eps * y + big_k)
    r_perp = (y - big_k) / (y + big_k)
    return math.log1p(-r_par * r_par * decay) + math.log1p(-r_perp * r_perp * decay)


class _LifshitzIntegrand:
    """Dimensionless Lifshitz integrals for one model and separation."""

    def __init__(self, model: PermittivityModel, z: float) -> None:
        self.model = model
        self.z = z
        self.omega_c = characteristic_frequency(z)
        self.inner_calls = 0

    def inner(self, zeta: float) -> float:
        """Return Int_zeta^inf y*S(y, zeta) dy for zeta > 0."""
        if zeta > EXPONENT_CUTOFF:
            return 0.0
        self.inner_calls += 1
        eps = self.model.eps(zeta * self.omega_c)
        result = checked_quad(
            lambda y: y * _mode_sum(y, eps, zeta),
            zeta,
            zeta + _Y_SPAN,
            epsabs=INNER_EPSABS,
            epsrel=INNER_EPSREL,
            what="Lifshitz y integral",
        )
        return result.value

    def zero_frequency(self) -> float:
        """Return Int_0^inf y*S(y) dy with the zero-frequency reflectivities."""

        def integrand(y: float) -> float:
            r_par_sq, r_perp_sq = self.model.zero_frequency_reflectivities(y, self.z)
            decay = math.exp(-y)
            return y * (
                math.log1p(-r_par_sq * decay) + math.log1p(-r_perp_sq * decay)
            )

        return checked_quad(
            integrand,
            0.0,
            _Y_SPAN,
            epsabs=INNER_EPSABS,
            epsrel=INNER_EPSREL,
            what="zero-frequency integral",
        ).value

    def outer(self, lo: float, hi: float = math.inf) -> QuadResult:
        """Integrate the inner integral over zeta in [lo, hi]."""
        zeta_min = 10.0**-XI_SPAN_DECADES
        zeta_max = 10.0**XI_SPAN_DECADES
        hi = min(hi, zeta_max)
        value = 0.0
        error = 0.0
        if lo < zeta_min:
            near = checked_quad(
                self.inner,
                lo,
                min(zeta_min, hi),
                epsabs=OUTER_EPSABS,
                epsrel=OUTER_EPSREL,
                what="Lifshitz zeta integral",
            )
            value += near.value
            error += near.error
            lo = zeta_min
        if hi > lo:
            far = checked_quad(
                lambda s: self.inner(math.exp(s)) * math.exp(s),
                math.log(lo),
                math.log(hi),
                epsabs=OUTER_EPSABS,
                epsrel=OUTER_EPSREL,
                what="Lifshitz zeta integral",
            )
            value += far.value
            error += far.error
        return QuadResult(value, error + abs(value) * INNER_EPSREL, self.inner_calls)


def _zero_temperature_prefactor(g: SpherePlateGeometry) -> float:
    return HBAR * SPEED_OF_LIGHT * g.R / (16.0 * math.pi * g.z**3)


def force_point_T0(g: SpherePlateGeometry, m: PermittivityModel) -> ForcePoint:
    """Return the zero-temperature force with its quadrature error.

    Raises:
        QuadratureError: if the integrals miss the relative tolerance; the
            error carries the achieved force estimate and bound in newtons.
    """
    g.require_gap()
    prefactor = _zero_temperature_prefactor(g)
    integrand = _LifshitzIntegrand(m, g.z)
    try:
        result = integrand.outer(0.0)
    except QuadratureError as err:
        raise QuadratureError(
            f"Lifshitz force at z = {g.z:.4g} m did not converge",
            err.estimate * prefactor,
            err.error_bound * prefactor,
        ) from err

    force = prefactor * result.value
    error = prefactor * result.error
    if error > FORCE_TOLERANCE * abs(force):
        raise QuadratureError(
            f"Lifshitz force at z = {g.z:.4g} m missed its tolerance", force, error
        )
    _LOGGER.debug(
        "Force at z=%.4g m (%s): %.6g N +- %.2g, %d inner integrals",
        g.z,
        m.kind,
        force,
        error,
        result.evaluations,
    )
    return ForcePoint(z=g.z, force=force, model=m.kind, error=error)


def casimir_force_T0(g: SpherePlateGeometry, m: PermittivityModel) -> float:
    """Return the zero-temperature sphere-plate force in newtons."""
    return force_point_T0(g, m).force


def eta_c(g: SpherePlateGeometry, m: PermittivityModel) -> float:
    """Return the correction factor to the ideal-metal force."""
    return casimir_force_T0(g, m) / ideal_force(g)


def frequency_fraction(
    g: SpherePlateGeometry, m: PermittivityModel, lo: float, hi: float
) -> float:
    """Return the share of the force from xi in [lo, hi] * omega_c."""
    if not 0 <= lo < hi:
        raise DomainError("frequency band must satisfy 0 <= lo < hi")
    g.require_gap()
    integrand = _LifshitzIntegrand(m, g.z)
    return integrand.outer(lo, hi).value / integrand.outer(0.0).value


def matsubara_step(z: float, temperature: float) -> float:
    """Return the dimensionless Matsubara spacing 2*pi*k_B*T/hbar * 2z/c."""
    return 2.0 * math.pi * BOLTZMANN * temperature / HBAR * 2.0 * z / SPEED_OF_LIGHT


def force_point_thermal(
    g: SpherePlateGeometry,
    m: PermittivityModel,
    T: float,
    *,
    rtol: float = MATSUBARA_RTOL,
    max_terms: int = MATSUBARA_MAX_TERMS,
) -> ForcePoint:
    """Return the finite-temperature force from the Matsubara sum.

    Terms are added until a geometric bound on the remaining tail drops
    below ``rtol`` of the running sum. When that takes more than
    ``max_terms`` terms, the remainder is replaced by its Euler-Maclaurin
    estimate, which keeps low temperatures affordable.

    Raises:
        DomainError: for a non-positive temperature.
        SummationError: if the terms stop decaying.
    """
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r}")
    g.require_gap()
    step = matsubara_step(g.z, T)
    integrand = _LifshitzIntegrand(m, g.z)

    total = 0.5 * integrand.zero_frequency()
    previous = 0.0
    error = 0.0
    converged = False
    order = 1
    while order < max_terms:
        term = integrand.inner(order * step)
        if not math.isfinite(term):
            raise SummationError(f"Matsubara term {order} is not finite")
        total += term
        error += abs(term) * INNER_EPSREL
        if term == 0.0:
            converged = True
            break
        if order > 1 and previous != 0.0:
            ratio = term / previous
            if 0.0 < ratio < 1.0:
                tail = abs(term) * ratio / (1.0 - ratio)
                if tail < rtol * abs(total):
                    error += tail
                    converged = True
                    break
        previous = term
        order += 1

    if not converged:
        start = order * step
        last = integrand.inner(start)
        if previous != 0.0 and abs(last) > abs(previous):
            raise SummationError(
                f"Matsubara terms stop decaying after {max_terms} terms"
            )
        _LOGGER.warning(
            "Matsubara sum at T=%.4g K needs more than %d terms; "
            "using Euler-Maclaurin remainder from zeta=%.4g",
            T,
            max_terms,
            start,
        )
        h = 0.01 * start
        slope = (integrand.inner(start + h) - integrand.inner(start - h)) / (2.0 * h)
        remainder = integrand.outer(start)
        total += remainder.value / step + 0.5 * last - step * slope / 12.0
        error += remainder.error / step + abs(step**3 * slope) / 720.0

    prefactor = BOLTZMANN * T * g.R / (4.0 * g.z * g.z)
    force = prefactor * total
    _LOGGER.debug("Thermal force at z=%.4g m, T=%.4g K: %.6g N", g.z, T, force)
    return ForcePoint(
        z=g.z, force=force, model=m.kind, temperature=T, error=prefactor * error
    )


def casimir_force_thermal(
    g: SpherePlateGeometry,
    m: PermittivityModel,
    T: float,
    *,
    rtol: float = MATSUBARA_RTOL,
) -> float:
    """Return the sphere-plate force at temperature T in newtons."""
    return force_point_thermal(g, m, T, rtol=rtol).force


def build_force_curve(
    separations: Sequence[float],
    model: PermittivityModel,
    R: float = DEFAULT_SPHERE_RADIUS,
    temperature: float = 0.0,
    max_workers: int | None = None,
) -> ForceCurve:
    """Evaluate the force at each separation, in parallel, keeping order."""
    ordered = sorted(separations)

    def evaluate(z: float) -> ForcePoint:
        geometry = SpherePlateGeometry(z=z, R=R)
        if temperature > 0:
            return force_point_thermal(geometry, model, temperature)
        return force_point_T0(geometry, model)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        points = tuple(executor.map(evaluate, ordered))
    return ForceCurve(points=points, R=R, model=model.kind, temperature=temperature)
