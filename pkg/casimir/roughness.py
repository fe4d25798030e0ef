"""Surface roughness statistics and roughness corrections to the force.

Heights are handled in nanometres, as they come out of the topography files;
separations and forces are SI.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import fft

from .const import (
    HISTOGRAM_RENORMALIZE_TOLERANCE,
    HISTOGRAM_TOLERANCE,
    MIN_PROFILE_SAMPLES,
    NM,
    PROFILE_SPACING_RTOL,
)
from .exceptions import (
    ContactError,
    DegenerateProfileError,
    DomainError,
    FormatError,
    LookupRangeError,
)

_LOGGER = logging.getLogger(__name__)

# Slack at the ends of a diffraction lookup, absorbs rounding of z/l_corr
_LOOKUP_EDGE_RTOL = 1e-9


@dataclass(frozen=True)
class RoughnessHistogram:
    """Height levels (nm) with the fraction of surface area at each level."""

    heights: tuple[float, ...]
    fractions: tuple[float, ...]
    renormalized: bool = False

    def __post_init__(self) -> None:
        """Validate the histogram."""
        if not self.heights or len(self.heights) != len(self.fractions):
            raise FormatError(
                "histogram needs matching, non-empty height and fraction columns"
            )
        if any(b <= a for a, b in zip(self.heights, self.heights[1:], strict=False)):
            raise FormatError("histogram heights must be strictly increasing")
        if any(v < 0 for v in self.fractions):
            raise FormatError("histogram fractions must be non-negative")
        total = math.fsum(self.fractions)
        if abs(total - 1.0) > HISTOGRAM_TOLERANCE:
            raise FormatError(f"histogram fractions sum to {total:.6g}, not 1")

    @classmethod
    def from_fractions(
        cls,
        heights: Sequence[float],
        fractions: Sequence[float],
        tolerance: float = HISTOGRAM_RENORMALIZE_TOLERANCE,
    ) -> RoughnessHistogram:
        """Build a histogram, renormalizing fractions that nearly sum to 1.

        Raises:
            FormatError: if the fractions miss 1 by more than ``tolerance``.
        """
        total = math.fsum(fractions)
        if abs(total - 1.0) > tolerance:
            raise FormatError(
                f"histogram fractions sum to {total:.6g}, outside 1 +- {tolerance:g}"
            )
        renormalized = abs(total - 1.0) > HISTOGRAM_TOLERANCE
        if renormalized:
            _LOGGER.warning("Histogram fractions summed to %.6g; renormalized", total)
            fractions = [v / total for v in fractions]
        return cls(
            heights=tuple(float(h) for h in heights),
            fractions=tuple(float(v) for v in fractions),
            renormalized=renormalized,
        )

    def shifted(self, offset: float) -> RoughnessHistogram:
        """Return the histogram with every height moved by ``offset`` nm."""
        return RoughnessHistogram(
            heights=tuple(h + offset for h in self.heights),
            fractions=self.fractions,
            renormalized=self.renormalized,
        )


@dataclass(frozen=True)
class RoughnessStats:
    """Zero level, amplitude and stochastic spread of a surface, in nm."""

    H0: float
    A: float
    delta_st: float
    A_st: float


@dataclass(frozen=True)
class HeightProfile:
    """Height cross-section sampled at uniform spacing, both in nm."""

    positions: tuple[float, ...]
    heights: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate sample count and spacing."""
        if len(self.positions) != len(self.heights):
            raise FormatError("profile positions and heights differ in length")
        if len(self.positions) < MIN_PROFILE_SAMPLES:
            raise FormatError(
                f"profile needs at least {MIN_PROFILE_SAMPLES} samples, "
                f"got {len(self.positions)}"
            )
        steps = np.diff(np.asarray(self.positions, dtype=float))
        spacing = float(np.mean(steps))
        if spacing <= 0 or np.any(
            np.abs(steps - spacing) > PROFILE_SPACING_RTOL * spacing
        ):
            raise FormatError("profile positions must be uniformly spaced")

    @property
    def spacing(self) -> float:
        """Return the sample spacing."""
        return (self.positions[-1] - self.positions[0]) / (len(self.positions) - 1)


@dataclass(frozen=True)
class DiffractionLookup:
    """Correction coefficient c_corr as a function of z/l_corr."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        """Validate monotonicity of both coordinates."""
        if len(self.points) < 2:
            raise FormatError("diffraction lookup needs at least 2 points")
        x = [p[0] for p in self.points]
        c = [p[1] for p in self.points]
        if any(b <= a for a, b in zip(x, x[1:], strict=False)):
            raise FormatError("diffraction lookup z/l_corr must be increasing")
        if any(b < a for a, b in zip(c, c[1:], strict=False)):
            raise FormatError("diffraction lookup c_corr must be increasing")

    def c_corr(self, x: float) -> float:
        """Return the linearly interpolated coefficient at x = z/l_corr."""
        lo, hi = self.points[0][0], self.points[-1][0]
        slack = _LOOKUP_EDGE_RTOL * max(abs(lo), abs(hi))
        if x < lo - slack or x > hi + slack:
            raise LookupRangeError(
                f"z/l_corr = {x:.4g} outside diffraction lookup range [{lo:g}, {hi:g}]"
            )
        return float(
            np.interp(
                min(max(x, lo), hi),
                [p[0] for p in self.points],
                [p[1] for p in self.points],
            )
        )


def zero_level(h: RoughnessHistogram) -> float:
    """Return the zero roughness level H0 = sum h_i v_i."""
    return math.fsum(hi * vi for hi, vi in zip(h.heights, h.fractions, strict=True))


def amplitude(h: RoughnessHistogram) -> float:
    """Return the roughness amplitude max(h) - H0."""
    return h.heights[-1] - zero_level(h)


def stochastic_stats(h: RoughnessHistogram) -> RoughnessStats:
    """Return H0, A and the stochastic spread of the histogram."""
    h0 = zero_level(h)
    variance = math.fsum(
        (h0 - hi) ** 2 * vi for hi, vi in zip(h.heights, h.fractions, strict=True)
    )
    delta_st = math.sqrt(variance)
    return RoughnessStats(
        H0=h0,
        A=h.heights[-1] - h0,
        delta_st=delta_st,
        A_st=math.sqrt(2.0) * delta_st,
    )


def separation_range(
    z: float, h_plate: RoughnessHistogram, h_sphere: RoughnessHistogram
) -> tuple[float, float]:
    """Return the smallest and largest shifted separations z + 2*H0 - h_i - h_j.

    Raises:
        ContactError: if any shifted separation is not positive.
    """
    h0 = zero_level(h_plate) + zero_level(h_sphere)
    for i, hi in enumerate(h_plate.heights):
        for j, hj in enumerate(h_sphere.heights):
            separation = z + (h0 - hi - hj) * NM
            if separation <= 0:
                raise ContactError(separation, i, j)
    lowest = z + (h0 - h_plate.heights[-1] - h_sphere.heights[-1]) * NM
    highest = z + (h0 - h_plate.heights[0] - h_sphere.heights[0]) * NM
    return lowest, highest


def force_rough_averaged(
    z: float,
    h_plate: RoughnessHistogram,
    h_sphere: RoughnessHistogram,
    F: Callable[[float], float],
) -> float:
    """Average the force over all separations the two topographies allow.

    Every pair of height levels contributes F(z + 2*H0 - h_i - h_j) with
    weight v_i*v_j. F is called once per distinct separation, and only after
    every separation has been checked.

    Raises:
        ContactError: if any shifted separation is not positive.
    """
    separation_range(z, h_plate, h_sphere)
    h0 = zero_level(h_plate) + zero_level(h_sphere)
    cache: dict[float, float] = {}
    terms: list[float] = []
    for hi, vi in zip(h_plate.heights, h_plate.fractions, strict=True):
        for hj, vj in zip(h_sphere.heights, h_sphere.fractions, strict=True):
            if vi == 0 or vj == 0:
                continue
            separation = z + (h0 - hi - hj) * NM
            if separation not in cache:
                cache[separation] = float(F(separation))
            terms.append(vi * vj * cache[separation])
    _LOGGER.debug(
        "Roughness average at z=%.4g m used %d distinct separations", z, len(cache)
    )
    return math.fsum(terms)


def roughness_factor(z: float, A_st: float) -> float:
    """Return 1 + 6(A_st/z)**2 + 45(A_st/z)**4."""
    if A_st < 0:
        raise DomainError("roughness amplitude must be non-negative")
    if A_st >= z:
        raise DomainError(
            f"roughness amplitude {A_st:.4g} m is not below separation {z:.4g} m"
        )
    ratio = (A_st / z) ** 2
    return 1.0 + 6.0 * ratio + 45.0 * ratio * ratio


def force_rough_multiplicative(z: float, A_st: float, F_c_value: float) -> float:
    """Return the force corrected by the multiplicative roughness factor."""
    return F_c_value * roughness_factor(z, A_st)


def diffraction_factor(
    z: float, A_st: float, l_corr: float, lut: DiffractionLookup
) -> float:
    """Return the roughness factor with the diffraction coefficient c_corr."""
    if not l_corr > 0:
        raise DomainError("correlation length must be positive")
    if not 0 <= A_st < z:
        raise DomainError(
            f"roughness amplitude {A_st:.4g} m is not below separation {z:.4g} m"
        )
    return 1.0 + 6.0 * lut.c_corr(z / l_corr) * (A_st / z) ** 2


def diffraction_delta(
    z: float, A_st: float, l_corr: float, lut: DiffractionLookup
) -> float:
    """Return the relative change of the roughness factor due to diffraction.

    Past the last lookup point the whole term 6 c_corr (A_st/z)**2, taken
    with the last tabulated coefficient, is returned as an upper bound.
    """
    plain = roughness_factor(z, A_st)
    if not l_corr > 0:
        raise DomainError("correlation length must be positive")
    x_max, c_max = lut.points[-1]
    if z / l_corr > x_max * (1.0 + _LOOKUP_EDGE_RTOL):
        bound = 6.0 * c_max * (A_st / z) ** 2 / plain
        _LOGGER.debug(
            "z/l_corr = %.4g beyond diffraction lookup; bound %.4g", z / l_corr, bound
        )
        return bound
    return abs(diffraction_factor(z, A_st, l_corr, lut) - plain) / plain


def dominant_period(p: HeightProfile) -> float:
    """Return the period of the strongest nonzero Fourier component.

    Raises:
        DegenerateProfileError: if the profile is flat.
    """
    heights = np.asarray(p.heights, dtype=float)
    if np.ptp(heights) == 0:
        raise DegenerateProfileError("flat height profile has no dominant period")
    spectrum = np.abs(fft.rfft(heights - heights.mean()))
    spectrum[0] = 0.0
    peak = int(np.argmax(spectrum))
    return len(heights) * p.spacing / peak
