"""Tests for the Lifshitz force computation."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from casimir.const import HBAR, PN, SPEED_OF_LIGHT, ModelKind
from casimir.exceptions import DomainError
from casimir.lifshitz import (
    ForceCurve,
    ForcePoint,
    SpherePlateGeometry,
    build_force_curve,
    casimir_force_T0,
    casimir_force_thermal,
    characteristic_frequency,
    eta_c,
    force_point_T0,
    frequency_fraction,
    ideal_force,
    matsubara_step,
    pft_error_bound,
    reflection_sq_parallel,
    reflection_sq_perp,
)
from casimir.optics import (
    DrudeModel,
    IdealMetal,
    InfraredModel,
    OpticalTable,
    PlasmaModel,
    TabulatedModel,
)

R = 95.65e-6


def test_geometry_validation() -> None:
    """Test separations must be small against the radius and non-negative."""
    SpherePlateGeometry(z=0.0, R=R)
    with pytest.raises(DomainError):
        SpherePlateGeometry(z=-1e-9, R=R)
    with pytest.raises(DomainError):
        SpherePlateGeometry(z=20e-6, R=R)
    with pytest.raises(DomainError):
        SpherePlateGeometry(z=62e-9, R=0.0)
    with pytest.raises(DomainError):
        SpherePlateGeometry(z=0.0, R=R).require_gap()


def test_ideal_force() -> None:
    """Test the ideal-metal force at 62 nm."""
    g = SpherePlateGeometry(z=62e-9, R=R)
    assert ideal_force(g) / PN == pytest.approx(-1092.83, rel=1e-4)
    with pytest.raises(DomainError):
        ideal_force(SpherePlateGeometry(z=0.0, R=R))


def test_small_helpers() -> None:
    """Test characteristic frequency, proximity bound and Matsubara step."""
    assert characteristic_frequency(62e-9) == pytest.approx(2.99792458e8 / 124e-9)
    assert pft_error_bound(SpherePlateGeometry(z=62e-9, R=R)) == pytest.approx(
        6.482e-4, rel=1e-3
    )
    # xi_1 = 2*pi*k_B*T/hbar is 2.47e14 rad/s at 300 K
    assert matsubara_step(62e-9, 300.0) == pytest.approx(
        2.467e14 * 124e-9 / 2.99792458e8, rel=1e-3
    )
    with pytest.raises(DomainError):
        characteristic_frequency(0.0)


@pytest.mark.parametrize("k_perp", [0.0, 1e6])
def test_reflection_near_perfect_conductor(k_perp: float) -> None:
    """Test both reflectivities approach 1 for a very large permittivity."""
    assert reflection_sq_parallel(1e12, 1e15, k_perp) == pytest.approx(1.0, abs=1e-4)
    assert reflection_sq_perp(1e12, 1e15, k_perp) == pytest.approx(1.0, abs=1e-4)


def test_reflection_vacuum_and_arguments() -> None:
    """Test eps = 1 reflects nothing and invalid arguments are rejected."""
    assert reflection_sq_parallel(1.0, 1e15, 1e6) == 0.0
    assert reflection_sq_perp(1.0, 1e15, 1e6) == 0.0
    with pytest.raises(DomainError):
        reflection_sq_perp(0.5, 1e15, 0.0)
    with pytest.raises(DomainError):
        reflection_sq_perp(2.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        reflection_sq_parallel(2.0, 1e15, -1.0)


@pytest.mark.parametrize("z", [62e-9, 100e-9, 200e-9, 350e-9])
def test_ideal_metal_reproduces_closed_form(z: float) -> None:
    """Test the Lifshitz integral for an ideal metal gives the closed form."""
    g = SpherePlateGeometry(z=z, R=R)
    assert casimir_force_T0(g, IdealMetal()) == pytest.approx(ideal_force(g), rel=1e-5)


def test_finite_conductivity_reduces_force(plasma_model: PlasmaModel) -> None:
    """Test eta_c lies well below 1 at short separations and grows with z."""
    near = eta_c(SpherePlateGeometry(z=62e-9, R=R), plasma_model)
    far = eta_c(SpherePlateGeometry(z=70e-9, R=R), plasma_model)
    assert 0.38 < near < 0.52
    assert near < far < 1.0


def test_infrared_model_eta() -> None:
    """Test the infrared-optics correction factor at 62 nm."""
    value = eta_c(SpherePlateGeometry(z=62e-9, R=R), InfraredModel())
    assert value == pytest.approx(0.441, abs=0.03)


def test_force_point_carries_error(drude_model: DrudeModel) -> None:
    """Test the force point reports a small quadrature error."""
    point = force_point_T0(SpherePlateGeometry(z=100e-9, R=R), drude_model)
    assert point.force < 0
    assert point.model is ModelKind.DRUDE
    assert 0.0 <= point.error < 1e-4 * abs(point.force)


def test_frequency_fractions_add_up(plasma_model: PlasmaModel) -> None:
    """Test the shares of two adjacent frequency bands sum to one."""
    g = SpherePlateGeometry(z=62e-9, R=R)
    low = frequency_fraction(g, plasma_model, 0.0, 1.0)
    high = frequency_fraction(g, plasma_model, 1.0, math.inf)
    assert 0.0 < low < 1.0
    assert low + high == pytest.approx(1.0, rel=1e-6)
    with pytest.raises(DomainError):
        frequency_fraction(g, plasma_model, 2.0, 1.0)


def test_thermal_force_near_zero_temperature_result(
    plasma_model: PlasmaModel,
) -> None:
    """Test the Matsubara sum at room temperature stays close to T = 0."""
    g = SpherePlateGeometry(z=62e-9, R=R)
    zero = casimir_force_T0(g, plasma_model)
    room = casimir_force_thermal(g, plasma_model, 300.0)
    assert room == pytest.approx(zero, rel=1e-2)
    with pytest.raises(DomainError):
        casimir_force_thermal(g, plasma_model, 0.0)


def test_build_force_curve_keeps_order(drude_model: DrudeModel) -> None:
    """Test curves come back sorted and interpolate between points."""
    separations = [200e-9, 100e-9, 150e-9, 125e-9, 175e-9]
    curve = build_force_curve(separations, drude_model, R=R, max_workers=2)
    assert list(curve.separations) == sorted(separations)
    assert np.all(np.diff(curve.forces) > 0)

    force = curve.interpolator()
    direct = casimir_force_T0(SpherePlateGeometry(z=140e-9, R=R), drude_model)
    assert float(force(140e-9)) == pytest.approx(direct, rel=1e-3)


def test_force_curve_validation() -> None:
    """Test curves reject unsorted points and short interpolation grids."""
    a = ForcePoint(z=100e-9, force=-1e-10, model=ModelKind.DRUDE)
    b = ForcePoint(z=50e-9, force=-8e-10, model=ModelKind.DRUDE)
    with pytest.raises(DomainError):
        ForceCurve(points=(a, b), R=R, model=ModelKind.DRUDE)
    with pytest.raises(DomainError):
        ForceCurve(points=(b, a), R=R, model=ModelKind.DRUDE).interpolator()


def _plasma_force_by_trapezoid(z: float, omega_p: float) -> float:
    """Return the plasma-model force from a plain trapezoid grid.

    Uses q = zeta / y in [0, 1] and y = 2 z sqrt(k_perp^2 + xi^2/c^2), so
    the integral is Int_0^1 dq Int_0^inf dy y^2 S(y, q y).
    """
    a = (omega_p * 2.0 * z / SPEED_OF_LIGHT) ** 2
    q = np.linspace(0.0, 1.0, 801)[:, None]
    y = np.linspace(1e-6, 40.0, 4001)[None, :]
    big_k = np.sqrt(y * y + a)
    # K / (eps y), finite at q = 0 where r_par -> 1
    t = big_k * q * q * y / (q * q * y * y + a)
    r_par = (1.0 - t) / (1.0 + t)
    r_perp = (y - big_k) / (y + big_k)
    decay = np.exp(-y)
    mode_sum = np.log1p(-r_par * r_par * decay) + np.log1p(-r_perp * r_perp * decay)
    inner = trapezoid(y * y * mode_sum, y, axis=1)
    total = trapezoid(inner, q[:, 0])
    return HBAR * SPEED_OF_LIGHT * R / (16.0 * math.pi * z**3) * total


@pytest.mark.parametrize("z", [62e-9, 100e-9, 200e-9])
def test_force_matches_trapezoid_grid(z: float, plasma_model: PlasmaModel) -> None:
    """Test the adaptive quadrature against a brute-force trapezoid grid."""
    point = force_point_T0(SpherePlateGeometry(z=z, R=R), plasma_model)
    expected = _plasma_force_by_trapezoid(z, plasma_model.omega_p)
    assert point.force == pytest.approx(expected, rel=1e-3)


def test_perp_reflectivity_never_exceeds_parallel() -> None:
    """Test r_perp**2 <= r_par**2 over permittivity, frequency and k_perp."""
    for eps in np.geomspace(1.01, 1e8, 12):
        for xi in np.geomspace(1e13, 1e18, 8):
            for k_perp in [0.0, *np.geomspace(1e4, 1e10, 10)]:
                r_par = reflection_sq_parallel(float(eps), float(xi), float(k_perp))
                r_perp = reflection_sq_perp(float(eps), float(xi), float(k_perp))
                assert r_perp <= r_par * (1.0 + 1e-12)
                assert 0.0 <= r_perp <= 1.0


@pytest.mark.parametrize(
    ("z", "expected"),
    [(62e-9, 0.4430), (70e-9, 0.4681), (80e-9, 0.4964), (90e-9, 0.5218)],
)
def test_gold_table_eta_c(z: float, expected: float, gold_table: OpticalTable) -> None:
    """Test eta_c from the shipped gold data at the measured separations."""
    value = eta_c(SpherePlateGeometry(z=z, R=R), TabulatedModel(gold_table))
    assert value == pytest.approx(expected, abs=0.010)


@pytest.mark.parametrize("z", [62e-9, 70e-9, 100e-9, 150e-9])
def test_infrared_model_tracks_gold_table(z: float, gold_table: OpticalTable) -> None:
    """Test the infrared representation stays within 0.9% of the gold data."""
    g = SpherePlateGeometry(z=z, R=R)
    tabulated = casimir_force_T0(g, TabulatedModel(gold_table))
    infrared = casimir_force_T0(g, InfraredModel())
    assert abs(infrared - tabulated) / abs(tabulated) <= 0.009


@pytest.mark.parametrize(
    ("z", "bound"),
    [(200e-9, 0.005), (250e-9, 0.015), (300e-9, 0.015), (350e-9, 0.015)],
)
def test_plasma_model_tracks_gold_table(
    z: float, bound: float, gold_table: OpticalTable, plasma_model: PlasmaModel
) -> None:
    """Test the plasma model against the gold data at larger separations."""
    g = SpherePlateGeometry(z=z, R=R)
    tabulated = casimir_force_T0(g, TabulatedModel(gold_table))
    plasma = casimir_force_T0(g, plasma_model)
    assert abs(plasma - tabulated) / abs(tabulated) < bound
