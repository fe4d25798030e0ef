"""Tests for the permittivity models."""

from __future__ import annotations

import math

import numpy as np
import pytest

from casimir.const import GOLD_C1, GOLD_GAMMA, GOLD_OMEGA_P, ModelKind
from casimir.exceptions import (
    DomainError,
    FormatError,
    ModelValidityError,
    RegimeError,
)
from casimir.optics import (
    DrudeModel,
    DrudeParams,
    IdealMetal,
    InfraredModel,
    InfraredParams,
    OpticalSample,
    OpticalTable,
    PlasmaModel,
    TabulatedModel,
    build_model,
    drude_eps_imaginary,
    energy_to_omega,
    grain_adjusted_c1,
    infrared_eps_imaginary,
    kk_eps_imaginary,
    plasma_eps_imaginary,
    plasma_wavelength,
    reflectance_infrared,
    table_from_nk,
)


def test_drude_and_plasma_formulas() -> None:
    """Test the closed-form permittivities."""
    xi = 1e15
    expected = 1.0 + GOLD_OMEGA_P**2 / (xi * (xi + GOLD_GAMMA))
    assert drude_eps_imaginary(xi, DrudeParams()) == pytest.approx(expected)
    assert plasma_eps_imaginary(xi, GOLD_OMEGA_P) == pytest.approx(
        1.0 + (GOLD_OMEGA_P / xi) ** 2
    )
    # gamma -> 0 reduces Drude to plasma
    assert drude_eps_imaginary(xi, DrudeParams(gamma=0.0)) == pytest.approx(
        plasma_eps_imaginary(xi, GOLD_OMEGA_P)
    )


@pytest.mark.parametrize("xi", [0.0, -1.0])
def test_non_positive_frequency_rejected(xi: float) -> None:
    """Test permittivities reject xi <= 0."""
    with pytest.raises(DomainError):
        drude_eps_imaginary(xi, DrudeParams())
    with pytest.raises(DomainError):
        IdealMetal().eps(xi)


def test_invalid_parameters_rejected() -> None:
    """Test parameter validation."""
    with pytest.raises(DomainError):
        DrudeParams(omega_p=0.0)
    with pytest.raises(DomainError):
        DrudeParams(gamma=-1.0)
    with pytest.raises(DomainError):
        InfraredParams(c1=-0.1)


def test_infrared_permittivity() -> None:
    """Test the infrared-optics representation against its formula."""
    p = InfraredParams()
    xi = 1e16
    ratio = p.omega_p / xi
    expected = 1.0 + ratio**2 - ratio**3 * (p.c1 - p.c2 / ratio**2)
    assert infrared_eps_imaginary(xi, p) == pytest.approx(expected)


def test_infrared_invalid_at_low_frequency() -> None:
    """Test the raw representation fails where the c1 term dominates."""
    p = InfraredParams()
    with pytest.raises(ModelValidityError) as excinfo:
        infrared_eps_imaginary(1e13, p)
    assert excinfo.value.xi == 1e13

    raw = InfraredModel(p, extension=None)
    with pytest.raises(ModelValidityError):
        raw.eps(1e13)


def test_infrared_model_hands_over_to_drude() -> None:
    """Test the Drude extension is used below the crossover."""
    model = InfraredModel()
    assert model.eps(1e13) == pytest.approx(drude_eps_imaginary(1e13, DrudeParams()))
    assert model.eps(1e16) == pytest.approx(
        infrared_eps_imaginary(1e16, InfraredParams())
    )


def test_reflectance_infrared() -> None:
    """Test the reflectance deficit and its regime check."""
    p = InfraredParams()
    omega = 1e14
    assert reflectance_infrared(p, omega) == pytest.approx(
        p.c1 + p.c2 * (omega / p.omega_p) ** 2
    )
    assert reflectance_infrared(p, omega, kappa=2.0) == pytest.approx(
        2.0 * reflectance_infrared(p, omega)
    )
    with pytest.raises(RegimeError):
        reflectance_infrared(p, p.omega_p / 2.0)


def test_grain_adjusted_c1() -> None:
    """Test a 0.8% reflectance deficit raises c1 from 0.0039 to 0.0059."""
    assert grain_adjusted_c1(GOLD_C1, 0.008) == pytest.approx(0.0059)
    assert grain_adjusted_c1(GOLD_C1, 0.0) == GOLD_C1
    with pytest.raises(DomainError):
        grain_adjusted_c1(GOLD_C1, -0.001)


def test_unit_helpers() -> None:
    """Test energy conversion and plasma wavelength."""
    assert energy_to_omega(1.0) == pytest.approx(1.52e15)
    assert plasma_wavelength(GOLD_OMEGA_P) == pytest.approx(137.49e-9, rel=1e-3)


def test_table_from_nk() -> None:
    """Test Im eps = 2nk and row validation."""
    table = table_from_nk([(1e15, 0.5, 4.0), (2e15, 0.4, 3.0)])
    assert table.omega_min == 1e15
    assert table.omega_max == 2e15
    assert table.eps_im_at(1e15)[0] == pytest.approx(4.0)
    assert table.eps_im_at(2e15)[0] == pytest.approx(2.4)

    with pytest.raises(FormatError):
        table_from_nk([(2e15, 0.5, 4.0), (1e15, 0.4, 3.0)])
    with pytest.raises(FormatError):
        table_from_nk([(1e15, 0.5, 4.0), (1e15, 0.4, 3.0)])
    with pytest.raises(FormatError):
        table_from_nk([(1e15, -0.5, 4.0), (2e15, 0.4, 3.0)])
    with pytest.raises(FormatError):
        table_from_nk([])


def test_table_extensions() -> None:
    """Test the Drude extension below and the omega**-3 tail above the table."""
    params = DrudeParams()
    table = OpticalTable(
        samples=(OpticalSample(1e15, 10.0), OpticalSample(2e15, 5.0)),
        low_freq_extension=params,
    )
    below = 1e14
    assert table.eps_im_at(below)[0] == pytest.approx(
        params.omega_p**2 * params.gamma / (below * (below**2 + params.gamma**2))
    )
    assert table.eps_im_at(4e15)[0] == pytest.approx(5.0 / 8.0)


def test_dispersion_relation_reproduces_drude(drude_table: OpticalTable) -> None:
    """Test the dispersion relation over Drude data returns the Drude eps."""
    params = DrudeParams()
    for xi in (1e14, 1e15, 1e16, 1e17):
        assert kk_eps_imaginary(drude_table, xi) == pytest.approx(
            drude_eps_imaginary(xi, params), rel=1e-3
        )


def test_tail_check() -> None:
    """Test tables without a decaying tail are rejected."""
    rising = OpticalTable(samples=(OpticalSample(1e15, 1.0), OpticalSample(2e15, 2.0)))
    with pytest.raises(ModelValidityError):
        kk_eps_imaginary(rising, 1e15)
    with pytest.raises(ModelValidityError):
        TabulatedModel(rising)


def test_gold_table_model(gold_table: OpticalTable) -> None:
    """Test the shipped gold data give a decreasing eps above 1."""
    model = TabulatedModel(gold_table)
    low, mid, high = model.eps(1e14), model.eps(1e15), model.eps(1e16)
    assert low > mid > high > 1.0
    drude = drude_eps_imaginary(1e15, DrudeParams())
    assert 0.5 * drude < mid < 2.0 * drude


@pytest.mark.parametrize(
    "model",
    [DrudeModel(), PlasmaModel(), InfraredModel(), "tabulated"],
    ids=["drude", "plasma", "infrared", "tabulated"],
)
def test_permittivity_decreases_along_imaginary_axis(
    model: DrudeModel | PlasmaModel | InfraredModel | str, gold_table: OpticalTable
) -> None:
    """Test eps(i*xi) never grows with xi and stays at or above 1."""
    if model == "tabulated":
        model = TabulatedModel(gold_table)
    values = []
    for xi in np.geomspace(1e11, 1e20, 37):
        try:
            values.append(model.eps(float(xi)))
        except ModelValidityError:
            continue
    assert len(values) > 30
    assert np.all(np.diff(values) <= 0.0)
    assert values[-1] >= 1.0


def test_zero_frequency_reflectivities() -> None:
    """Test the zero-frequency reflectivities of each model."""
    y, z = 1.0, 62e-9
    assert DrudeModel().zero_frequency_reflectivities(y, z) == (1.0, 0.0)
    assert IdealMetal().zero_frequency_reflectivities(y, z) == (1.0, 1.0)
    r_par, r_perp = PlasmaModel().zero_frequency_reflectivities(y, z)
    assert r_par == 1.0
    assert 0.0 < r_perp < 1.0


def test_build_model() -> None:
    """Test the model factory."""
    assert isinstance(build_model(ModelKind.DRUDE), DrudeModel)
    assert isinstance(build_model("plasma", omega_p=1e16), PlasmaModel)
    assert build_model("plasma", omega_p=1e16).omega_p == 1e16
    infrared = build_model(ModelKind.INFRARED, c1=0.0059)
    assert isinstance(infrared, InfraredModel)
    assert infrared.params.c1 == 0.0059
    assert math.isinf(build_model(ModelKind.IDEAL).omega_p)
    with pytest.raises(DomainError):
        build_model(ModelKind.TABULATED)
    with pytest.raises(ValueError, match="unknown"):
        build_model("unknown")
