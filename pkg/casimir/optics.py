"""Dielectric permittivity of metals along the imaginary frequency axis.

Every model exposes ``eps(xi)``, the permittivity at imaginary frequency
i*xi, and ``zero_frequency_reflectivities(y, z)``, the squared reflection
coefficients of the zero-frequency Matsubara term.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
import logging
import math
from typing import ClassVar

import numpy as np
from numpy.polynomial.legendre import leggauss

from .const import (
    C1_PER_DEFICIT,
    DEFAULT_REFLECTANCE_KAPPA,
    EV_TO_RAD_S,
    GOLD_C1,
    GOLD_C2,
    GOLD_GAMMA,
    GOLD_OMEGA_P,
    INFRARED_CROSSOVER,
    INFRARED_REGIME_FRACTION,
    KK_GAUSS_ORDER,
    KK_PANEL_WIDTH,
    SPEED_OF_LIGHT,
    ModelKind,
)
from .exceptions import DomainError, FormatError, ModelValidityError, RegimeError

_LOGGER = logging.getLogger(__name__)

# Below this relative distance from gamma the Drude segment of the dispersion
# integral is evaluated through its analytic limit
_DRUDE_SEGMENT_LIMIT_RTOL = 1e-7


def _check_xi(xi: float) -> None:
    if not xi > 0:
        raise DomainError(f"imaginary frequency must be positive, got {xi!r}")


@dataclass(frozen=True)
class DrudeParams:
    """Plasma frequency and relaxation parameter of a Drude metal."""

    omega_p: float = GOLD_OMEGA_P
    gamma: float = GOLD_GAMMA

    def __post_init__(self) -> None:
        """Validate parameters."""
        if not self.omega_p > 0:
            raise DomainError(f"omega_p must be positive, got {self.omega_p!r}")
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma!r}")


@dataclass(frozen=True)
class InfraredParams:
    """Parameters of the infrared-optics permittivity."""

    omega_p: float = GOLD_OMEGA_P
    c1: float = GOLD_C1
    c2: float = GOLD_C2

    def __post_init__(self) -> None:
        """Validate parameters."""
        if not self.omega_p > 0:
            raise DomainError(f"omega_p must be positive, got {self.omega_p!r}")
        if self.c1 < 0 or self.c2 < 0:
            raise DomainError(
                f"c1 and c2 must be non-negative, got {self.c1!r}, {self.c2!r}"
            )


@dataclass(frozen=True)
class OpticalSample:
    """Imaginary part of the permittivity at one real frequency."""

    omega: float
    eps_im: float


def drude_eps_imaginary(xi: float, p: DrudeParams) -> float:
    """Return the Drude permittivity at imaginary frequency xi."""
    _check_xi(xi)
    return 1.0 + p.omega_p * p.omega_p / (xi * (xi + p.gamma))


def plasma_eps_imaginary(xi: float, omega_p: float) -> float:
    """Return the plasma-model permittivity at imaginary frequency xi."""
    _check_xi(xi)
    return 1.0 + (omega_p / xi) ** 2


def infrared_eps_imaginary(xi: float, p: InfraredParams) -> float:
    """Return the infrared-optics permittivity at imaginary frequency xi.

    Raises:
        ModelValidityError: if the representation drops to 1 or below, which
            happens at small xi where the c1 term dominates.
    """
    _check_xi(xi)
    ratio = p.omega_p / xi
    value = 1.0 + ratio * ratio - ratio**3 * (p.c1 - p.c2 / (ratio * ratio))
    if value <= 1.0:
        raise ModelValidityError("infrared permittivity not above 1", xi)
    return value


def drude_eps_real_axis_imaginary(omega: float, p: DrudeParams) -> float:
    """Return Im eps(omega) of the Drude model on the real frequency axis."""
    return p.omega_p**2 * p.gamma / (omega * (omega * omega + p.gamma * p.gamma))


def energy_to_omega(energy_ev: float) -> float:
    """Convert a photon energy in eV into an angular frequency in rad/s."""
    return energy_ev * EV_TO_RAD_S


def plasma_wavelength(omega_p: float) -> float:
    """Return the plasma wavelength 2*pi*c/omega_p in metres."""
    return 2.0 * math.pi * SPEED_OF_LIGHT / omega_p


@dataclass(frozen=True)
class OpticalTable:
    """Tabulated Im eps(omega) with a Drude extension below the table.

    Quadrature nodes for the dispersion relation are laid out once at
    construction; evaluation is then a single vectorized sum.
    """

    samples: tuple[OpticalSample, ...]
    low_freq_extension: DrudeParams = field(default_factory=DrudeParams)

    _omega: np.ndarray = field(init=False, repr=False, compare=False)
    _eps_im: np.ndarray = field(init=False, repr=False, compare=False)
    _node_omega_sq: np.ndarray = field(init=False, repr=False, compare=False)
    _node_weight: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Validate samples and lay out the dispersion-relation nodes."""
        if len(self.samples) < 2:
            raise FormatError("optical table needs at least 2 samples")
        omega = np.array([s.omega for s in self.samples], dtype=float)
        eps_im = np.array([s.eps_im for s in self.samples], dtype=float)
        if np.any(omega <= 0):
            raise FormatError("optical table frequencies must be positive")
        if np.any(np.diff(omega) <= 0):
            raise FormatError("optical table frequencies must be strictly increasing")
        if np.any(eps_im < 0):
            raise FormatError("optical table Im eps must be non-negative")

        object.__setattr__(self, "_omega", omega)
        object.__setattr__(self, "_eps_im", eps_im)

        node_omega, node_weight = self._lay_out_nodes(omega)
        object.__setattr__(self, "_node_omega_sq", node_omega * node_omega)
        object.__setattr__(
            self,
            "_node_weight",
            node_weight * node_omega * node_omega * self._interpolate(node_omega),
        )
        _LOGGER.debug(
            "Optical table with %d samples uses %d dispersion nodes",
            len(omega),
            len(node_omega),
        )

    @staticmethod
    def _lay_out_nodes(omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Legendre nodes in ln(omega), panels aligned with samples."""
        x, w = leggauss(KK_GAUSS_ORDER)
        log_omega = np.log(omega)
        nodes: list[np.ndarray] = []
        weights: list[np.ndarray] = []
        for lo, hi in zip(log_omega[:-1], log_omega[1:], strict=True):
            panels = max(1, math.ceil((hi - lo) / KK_PANEL_WIDTH))
            edges = np.linspace(lo, hi, panels + 1)
            half = 0.5 * (edges[1:] - edges[:-1])
            mid = 0.5 * (edges[1:] + edges[:-1])
            nodes.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
            weights.append((half[:, None] * w[None, :]).ravel())
        return np.exp(np.concatenate(nodes)), np.concatenate(weights)

    @property
    def omega_min(self) -> float:
        """Return the lowest tabulated frequency."""
        return float(self._omega[0])

    @property
    def omega_max(self) -> float:
        """Return the highest tabulated frequency."""
        return float(self._omega[-1])

    def _interpolate(self, omega: np.ndarray) -> np.ndarray:
        """Log-log interpolation inside the table, linear where Im eps is 0."""
        index = np.clip(
            np.searchsorted(self._omega, omega, side="right") - 1,
            0,
            len(self._omega) - 2,
        )
        w0, w1 = self._omega[index], self._omega[index + 1]
        e0, e1 = self._eps_im[index], self._eps_im[index + 1]
        positive = (e0 > 0) & (e1 > 0)
        frac_lin = (omega - w0) / (w1 - w0)
        linear = e0 + (e1 - e0) * frac_lin
        with np.errstate(divide="ignore", invalid="ignore"):
            frac_log = np.log(omega / w0) / np.log(w1 / w0)
            loglog = e0 * np.exp(frac_log * np.log(e1 / e0))
        return np.where(positive, loglog, linear)

    def eps_im_at(self, omega: float | np.ndarray) -> np.ndarray:
        """Return Im eps on the real axis, including both extensions."""
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        if np.any(w <= 0):
            raise DomainError("real frequency must be positive")
        ext = self.low_freq_extension
        below = ext.omega_p**2 * ext.gamma / (w * (w * w + ext.gamma**2))
        above = self._eps_im[-1] * (self._omega[-1] / w) ** 3
        inside = self._interpolate(np.clip(w, self._omega[0], self._omega[-1]))
        return np.where(
            w < self._omega[0], below, np.where(w > self._omega[-1], above, inside)
        )

    def _drude_segment(self, xi: float) -> float:
        """Integral of omega Im eps/(omega^2 + xi^2) below the table."""
        ext = self.low_freq_extension
        a, g = self.omega_min, ext.gamma
        if g > 0 and abs(xi - g) <= _DRUDE_SEGMENT_LIMIT_RTOL * g:
            return ext.omega_p**2 * (math.atan(a / g) / g + a / (g * g + a * a)) / (
                2.0 * g
            )
        numerator = math.atan2(a, g) - (g / xi) * math.atan(a / xi)
        return ext.omega_p**2 * numerator / (xi * xi - g * g)

    def _tail_segment(self, xi: float) -> float:
        """Integral of the omega**-3 tail above the table."""
        t = self.omega_max / xi
        if t > 10.0:
            x2 = 1.0 / (t * t)
            shape = 1 / 3 - x2 / 5 + x2**2 / 7 - x2**3 / 9 + x2**4 / 11
        else:
            shape = t**3 * (1.0 / t - math.atan(1.0 / t))
        return float(self._eps_im[-1]) * shape

    def check_tail(self) -> None:
        """Raise when the last two samples do not describe a decaying tail."""
        if self._eps_im[-1] >= self._eps_im[-2] or self._eps_im[-1] <= 0:
            raise ModelValidityError(
                "optical table does not end on a decaying tail "
                f"(Im eps {self._eps_im[-2]:.4g} -> {self._eps_im[-1]:.4g})"
            )

    def dispersion_integral(self, xi: float) -> float:
        """Return the integral of omega Im eps/(omega^2 + xi^2) over omega > 0."""
        inside = float(np.sum(self._node_weight / (self._node_omega_sq + xi * xi)))
        return self._drude_segment(xi) + inside + self._tail_segment(xi)


def table_from_nk(
    rows: Iterable[Sequence[float]],
    extension: DrudeParams | None = None,
) -> OpticalTable:
    """Build an optical table from (omega, n, k) rows.

    Args:
        rows: Frequencies in rad/s with the complex refractive index n + ik.
        extension: Drude parameters used below the lowest tabulated frequency.

    Raises:
        FormatError: for empty input, unsorted or duplicate frequencies, and
            negative n or k.
    """
    samples: list[OpticalSample] = []
    previous = -math.inf
    for index, row in enumerate(rows, start=1):
        omega, n, k = (float(v) for v in row)
        if omega <= previous:
            raise FormatError(
                f"frequencies must be strictly increasing (row {index})", line=index
            )
        if n < 0 or k < 0:
            raise FormatError(f"negative n or k in row {index}", line=index)
        samples.append(OpticalSample(omega=omega, eps_im=2.0 * n * k))
        previous = omega
    if not samples:
        raise FormatError("optical table is empty")
    return OpticalTable(
        samples=tuple(samples),
        low_freq_extension=extension if extension is not None else DrudeParams(),
    )


def kk_eps_imaginary(table: OpticalTable, xi: float) -> float:
    """Return eps(i*xi) from tabulated data through the dispersion relation.

    Raises:
        ModelValidityError: if the table does not end on a decaying tail.
    """
    _check_xi(xi)
    table.check_tail()
    return 1.0 + (2.0 / math.pi) * table.dispersion_integral(xi)


def reflectance_infrared(
    p: InfraredParams, omega: float, kappa: float = DEFAULT_REFLECTANCE_KAPPA
) -> float:
    """Return the reflectance deficit 1 - R in the infrared-optics regime."""
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega!r}")
    if omega >= p.omega_p * INFRARED_REGIME_FRACTION:
        raise RegimeError(
            f"frequency {omega:.4g} rad/s is outside the infrared-optics regime "
            f"(needs omega < {p.omega_p * INFRARED_REGIME_FRACTION:.4g} rad/s)"
        )
    return kappa * (p.c1 + p.c2 * (omega / p.omega_p) ** 2)


def grain_adjusted_c1(c1: float, reflectance_deficit_delta: float) -> float:
    """Return c1 corrected for an extra absolute reflectance deficit."""
    if c1 < 0 or reflectance_deficit_delta < 0:
        raise DomainError("c1 and the reflectance deficit must be non-negative")
    return c1 + reflectance_deficit_delta * C1_PER_DEFICIT


def plasma_zero_frequency_perp(y: float, z: float, omega_p: float) -> float:
    """Return r_perp^2 at zero frequency for the plasma model."""
    big = 2.0 * z * omega_p / SPEED_OF_LIGHT
    root = math.hypot(y, big)
    return ((root - y) / (root + y)) ** 2


@dataclass(frozen=True)
class DrudeModel:
    """Drude metal."""

    params: DrudeParams = field(default_factory=DrudeParams)
    kind: ClassVar[ModelKind] = ModelKind.DRUDE

    @property
    def omega_p(self) -> float:
        """Return the plasma frequency."""
        return self.params.omega_p

    def eps(self, xi: float) -> float:
        """Return eps(i*xi)."""
        return drude_eps_imaginary(xi, self.params)

    def zero_frequency_reflectivities(  # noqa: ARG002
        self, y: float, z: float
    ) -> tuple[float, float]:
        """Return (r_par^2, r_perp^2) at zero frequency."""
        return 1.0, 0.0


@dataclass(frozen=True)
class PlasmaModel:
    """Dissipationless plasma metal."""

    omega_p_value: float = GOLD_OMEGA_P
    kind: ClassVar[ModelKind] = ModelKind.PLASMA

    def __post_init__(self) -> None:
        """Validate the plasma frequency."""
        if not self.omega_p_value > 0:
            raise DomainError("omega_p must be positive")

    @property
    def omega_p(self) -> float:
        """Return the plasma frequency."""
        return self.omega_p_value

    def eps(self, xi: float) -> float:
        """Return eps(i*xi)."""
        return plasma_eps_imaginary(xi, self.omega_p_value)

    def zero_frequency_reflectivities(self, y: float, z: float) -> tuple[float, float]:
        """Return (r_par^2, r_perp^2) at zero frequency."""
        return 1.0, plasma_zero_frequency_perp(y, z, self.omega_p_value)


@dataclass(frozen=True)
class InfraredModel:
    """Infrared-optics representation with a Drude hand-over at low xi.

    Below ``crossover`` the representation is outside its range of validity
    and the Drude extension is used instead; with ``extension=None`` the raw
    representation is evaluated everywhere and may raise ModelValidityError.
    """

    params: InfraredParams = field(default_factory=InfraredParams)
    extension: DrudeParams | None = field(default_factory=DrudeParams)
    crossover: float = INFRARED_CROSSOVER
    kind: ClassVar[ModelKind] = ModelKind.INFRARED

    @property
    def omega_p(self) -> float:
        """Return the plasma frequency."""
        return self.params.omega_p

    def eps(self, xi: float) -> float:
        """Return eps(i*xi)."""
        if self.extension is not None and 0 < xi < self.crossover:
            return drude_eps_imaginary(xi, self.extension)
        return infrared_eps_imaginary(xi, self.params)

    def zero_frequency_reflectivities(  # noqa: ARG002
        self, y: float, z: float
    ) -> tuple[float, float]:
        """Return (r_par^2, r_perp^2) at zero frequency."""
        return 1.0, 0.0


@dataclass(frozen=True)
class TabulatedModel:
    """Tabulated optical data continued to imaginary frequencies."""

    table: OpticalTable
    kind: ClassVar[ModelKind] = ModelKind.TABULATED

    def __post_init__(self) -> None:
        """Reject tables without a decaying tail up front."""
        self.table.check_tail()

    @property
    def omega_p(self) -> float:
        """Return the plasma frequency of the low-frequency extension."""
        return self.table.low_freq_extension.omega_p

    def eps(self, xi: float) -> float:
        """Return eps(i*xi)."""
        return kk_eps_imaginary(self.table, xi)

    def zero_frequency_reflectivities(  # noqa: ARG002
        self, y: float, z: float
    ) -> tuple[float, float]:
        """Return (r_par^2, r_perp^2) at zero frequency."""
        return 1.0, 0.0


@dataclass(frozen=True)
class IdealMetal:
    """Perfect conductor, unit reflectivity at every frequency."""

    kind: ClassVar[ModelKind] = ModelKind.IDEAL

    @property
    def omega_p(self) -> float:
        """Return an infinite plasma frequency."""
        return math.inf

    def eps(self, xi: float) -> float:
        """Return an infinite permittivity."""
        _check_xi(xi)
        return math.inf

    def zero_frequency_reflectivities(  # noqa: ARG002
        self, y: float, z: float
    ) -> tuple[float, float]:
        """Return (r_par^2, r_perp^2) at zero frequency."""
        return 1.0, 1.0


type PermittivityModel = (
    DrudeModel | PlasmaModel | InfraredModel | TabulatedModel | IdealMetal
)


def build_model(
    kind: ModelKind | str,
    *,
    omega_p: float = GOLD_OMEGA_P,
    gamma: float = GOLD_GAMMA,
    c1: float = GOLD_C1,
    c2: float = GOLD_C2,
    table: OpticalTable | None = None,
) -> PermittivityModel:
    """Create a permittivity model from its kind and parameters."""
    match ModelKind(kind):
        case ModelKind.DRUDE:
            return DrudeModel(DrudeParams(omega_p, gamma))
        case ModelKind.PLASMA:
            return PlasmaModel(omega_p)
        case ModelKind.INFRARED:
            return InfraredModel(
                InfraredParams(omega_p, c1, c2), extension=DrudeParams(omega_p, gamma)
            )
        case ModelKind.TABULATED:
            if table is None:
                raise DomainError("tabulated model needs an optical table")
            return TabulatedModel(table)
        case ModelKind.IDEAL:
            return IdealMetal()
