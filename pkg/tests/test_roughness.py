"""Tests for roughness statistics and corrections."""

from __future__ import annotations

import math

import numpy as np
import pytest

from casimir.const import NM
from casimir.exceptions import (
    ContactError,
    DegenerateProfileError,
    DomainError,
    FormatError,
    LookupRangeError,
)
from casimir.roughness import (
    DiffractionLookup,
    HeightProfile,
    RoughnessHistogram,
    amplitude,
    diffraction_delta,
    diffraction_factor,
    dominant_period,
    force_rough_averaged,
    force_rough_multiplicative,
    roughness_factor,
    separation_range,
    stochastic_stats,
    zero_level,
)

LOOKUP = DiffractionLookup(points=((0.0, 1.0), (0.31, 1.1), (0.45, 1.28)))


def test_shipped_histogram_statistics(shipped_histogram: RoughnessHistogram) -> None:
    """Test zero level, amplitude and stochastic spread of the shipped data."""
    assert not shipped_histogram.renormalized
    assert zero_level(shipped_histogram) == pytest.approx(2.734038, abs=1e-6)
    assert amplitude(shipped_histogram) == pytest.approx(13.265962, abs=1e-6)
    stats = stochastic_stats(shipped_histogram)
    assert stats.delta_st == pytest.approx(0.83691, abs=1e-5)
    assert stats.A_st == pytest.approx(1.18357, abs=1e-5)
    assert stats.A_st == pytest.approx(math.sqrt(2.0) * stats.delta_st)


def test_histogram_renormalization() -> None:
    """Test near-unit sums are renormalized and others rejected."""
    histogram = RoughnessHistogram.from_fractions([0.0, 1.0], [0.5, 0.5005])
    assert histogram.renormalized
    assert math.fsum(histogram.fractions) == pytest.approx(1.0, abs=1e-12)

    with pytest.raises(FormatError):
        RoughnessHistogram.from_fractions([0.0, 1.0], [0.5, 0.51])
    with pytest.raises(FormatError):
        RoughnessHistogram(heights=(1.0, 0.0), fractions=(0.5, 0.5))
    with pytest.raises(FormatError):
        RoughnessHistogram(heights=(0.0, 1.0), fractions=(1.5, -0.5))


def test_single_level_surface_is_flat() -> None:
    """Test a single height level has no spread."""
    stats = stochastic_stats(RoughnessHistogram(heights=(3.0,), fractions=(1.0,)))
    assert stats.H0 == 3.0
    assert stats.A == 0.0
    assert stats.A_st == 0.0


@pytest.mark.parametrize(
    ("z_nm", "expected"),
    [(62.0, 1.0022), (70.0, 1.0017), (80.0, 1.0013), (90.0, 1.0010)],
)
def test_roughness_factor_values(z_nm: float, expected: float) -> None:
    """Test the multiplicative roughness factor for the shipped amplitude."""
    assert roughness_factor(z_nm * NM, 1.18357 * NM) == pytest.approx(
        expected, abs=5e-5
    )


def test_roughness_factor_domain() -> None:
    """Test the factor needs 0 <= A_st < z."""
    assert roughness_factor(62e-9, 0.0) == 1.0
    with pytest.raises(DomainError):
        roughness_factor(62e-9, 62e-9)
    with pytest.raises(DomainError):
        roughness_factor(62e-9, -1e-9)
    assert force_rough_multiplicative(62e-9, 1.18357e-9, -2.0) == pytest.approx(
        -2.0 * roughness_factor(62e-9, 1.18357e-9)
    )


def test_separation_range(shipped_histogram: RoughnessHistogram) -> None:
    """Test the extreme shifted separations at 62 nm."""
    lowest, highest = separation_range(62e-9, shipped_histogram, shipped_histogram)
    assert lowest / NM == pytest.approx(62.0 + 2 * 2.734038 - 32.0, abs=1e-5)
    assert highest / NM == pytest.approx(62.0 + 2 * 2.734038, abs=1e-5)


def test_contact_detected_before_force_is_evaluated(
    shipped_histogram: RoughnessHistogram,
) -> None:
    """Test contact raises without evaluating the force."""
    calls: list[float] = []

    def force(z: float) -> float:
        calls.append(z)
        return -1.0

    with pytest.raises(ContactError) as excinfo:
        force_rough_averaged(20e-9, shipped_histogram, shipped_histogram, force)
    assert calls == []
    assert excinfo.value.separation <= 0


def test_averaging_preserves_mean_separation(
    shipped_histogram: RoughnessHistogram,
) -> None:
    """Test averaging a linear function returns its value at z."""
    z = 62e-9
    assert force_rough_averaged(
        z, shipped_histogram, shipped_histogram, lambda s: s
    ) == pytest.approx(z, rel=1e-12)
    assert force_rough_averaged(
        z, shipped_histogram, shipped_histogram, lambda s: -3.0
    ) == pytest.approx(-3.0, rel=1e-12)


def test_averaging_matches_multiplicative_factor(
    shipped_histogram: RoughnessHistogram,
) -> None:
    """Test averaging a z**-3 law agrees with the multiplicative factor."""
    z = 62e-9
    A_st = stochastic_stats(shipped_histogram).A_st * NM
    averaged = force_rough_averaged(
        z, shipped_histogram, shipped_histogram, lambda s: -(s**-3)
    )
    expected = force_rough_multiplicative(z, A_st, -(z**-3))
    assert averaged == pytest.approx(expected, rel=2e-4)


def test_averaging_caches_repeated_separations() -> None:
    """Test the force is evaluated once per distinct separation."""
    histogram = RoughnessHistogram(heights=(0.0, 1.0, 2.0), fractions=(0.25, 0.5, 0.25))
    calls: list[float] = []

    def force(z: float) -> float:
        calls.append(z)
        return -1.0

    force_rough_averaged(50e-9, histogram, histogram, force)
    assert len(calls) == 5


def test_diffraction_lookup() -> None:
    """Test lookup interpolation and range checks."""
    assert LOOKUP.c_corr(0.31) == pytest.approx(1.1)
    assert LOOKUP.c_corr(0.38) == pytest.approx(1.19)
    with pytest.raises(LookupRangeError):
        LOOKUP.c_corr(1.0)
    with pytest.raises(FormatError):
        DiffractionLookup(points=((0.0, 1.0), (0.3, 0.9)))
    with pytest.raises(FormatError):
        DiffractionLookup(points=((0.0, 1.0),))


def test_diffraction_delta_at_62_nm() -> None:
    """Test the diffraction change of the roughness factor at 62 nm."""
    delta = diffraction_delta(62e-9, 1.183566e-9, 200e-9, LOOKUP)
    assert delta == pytest.approx(2.1221e-4, rel=1e-3)
    assert diffraction_factor(62e-9, 1.183566e-9, 200e-9, LOOKUP) > 1.0


def test_diffraction_outside_lookup() -> None:
    """Test separations beyond the lookup give the whole roughness term."""
    with pytest.raises(LookupRangeError):
        diffraction_factor(200e-9, 1.183566e-9, 200e-9, LOOKUP)
    delta = diffraction_delta(200e-9, 1.183566e-9, 200e-9, LOOKUP)
    assert delta == pytest.approx(2.689e-4, rel=2e-3)
    with pytest.raises(DomainError):
        diffraction_factor(62e-9, 1.183566e-9, 0.0, LOOKUP)
    with pytest.raises(DomainError):
        diffraction_delta(62e-9, 1.183566e-9, 0.0, LOOKUP)


def _profile(heights: np.ndarray) -> HeightProfile:
    positions = np.arange(len(heights), dtype=float)
    return HeightProfile(
        positions=tuple(positions.tolist()), heights=tuple(heights.tolist())
    )


def test_dominant_period() -> None:
    """Test a sine profile returns its period."""
    x = np.arange(200, dtype=float)
    heights = 2.0 * np.sin(2 * np.pi * x / 50.0) + 0.3 * np.sin(2 * np.pi * x / 10.0)
    assert dominant_period(_profile(heights)) == pytest.approx(50.0)


def test_profile_validation() -> None:
    """Test flat, short and unevenly sampled profiles are rejected."""
    with pytest.raises(DegenerateProfileError):
        dominant_period(_profile(np.full(32, 4.0)))
    with pytest.raises(FormatError):
        _profile(np.zeros(8))
    with pytest.raises(FormatError):
        HeightProfile(
            positions=tuple([0.0, 1.0, 3.0] + [float(i) for i in range(4, 20)]),
            heights=tuple([0.0] * 19),
        )
