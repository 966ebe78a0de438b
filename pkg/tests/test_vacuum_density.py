import csv
import io
import math

import numpy as np
import pytest
import sympy

from conftest import LAMBDA_UNIT, log_slope
from dispersion_qed.core import Regime
from dispersion_qed.exceptions import DomainError
from dispersion_qed.polarizability import PolarizabilityModel, two_level_model
from dispersion_qed.quadrature import QuadratureSpec
from dispersion_qed.two_body import cp_far, cp_far_electric_magnetic
from dispersion_qed.vacuum_density import (
    density_around_atom,
    density_profile,
    density_route_energy,
    plate_density,
    squared_field,
)

E_FAR = 23.0 / (16.0 * math.pi**2)
B_FAR = -7.0 / (16.0 * math.pi**2)
FINE = QuadratureSpec(rel_tol=1e-12)


def test_far_zone_x_integrals_symbolically():
    # static limit: alpha leaves the integral and only the x-moments remain
    x = sympy.symbols("x", positive=True)
    e = sympy.integrate(sympy.exp(-2 * x) * (x**4 + 2 * x**3 + 5 * x**2 + 6 * x + 3), (x, 0, sympy.oo))
    b = sympy.integrate(sympy.exp(-2 * x) * (x**4 + 2 * x**3 + x**2), (x, 0, sympy.oo))
    assert e == sympy.Rational(23, 4)
    assert b == sympy.Rational(7, 4)
    # density = (2/pi) * moment / (8 pi)
    assert float(2 * e / (8 * sympy.pi**2)) == pytest.approx(E_FAR, rel=1e-15)


@pytest.mark.parametrize("r", [100.0, 1e4])
def test_far_zone_coefficients(unit_atom, r):
    assert density_around_atom(unit_atom, r, "electric") * r**7 == pytest.approx(E_FAR, rel=1e-3)
    assert density_around_atom(unit_atom, r, "magnetic") * r**7 == pytest.approx(B_FAR, rel=1e-3)


def test_far_zone_values_at_r_100():
    static = PolarizabilityModel(static_override=1.0)
    assert density_around_atom(static, 100.0, "electric") == pytest.approx(1.45649e-15, rel=1e-5)
    assert density_around_atom(static, 100.0, "magnetic") == pytest.approx(-4.4328e-16, rel=1e-4)


def test_near_zone_slopes(unit_atom):
    r = 1e-3
    assert log_slope(lambda x: density_around_atom(unit_atom, x, "electric", FINE), r) == pytest.approx(-6.0, abs=0.1)
    assert log_slope(lambda x: density_around_atom(unit_atom, x, "magnetic", FINE), r) == pytest.approx(-5.0, abs=0.1)


def test_signs_and_ratio(unit_atom):
    radii = np.logspace(-3, 4, 30) * LAMBDA_UNIT
    profile = density_profile(unit_atom, radii)
    assert all(e > 0 for e in profile.electric)
    assert all(b < 0 for b in profile.magnetic)
    assert profile.electric[-1] / profile.magnetic[-1] == pytest.approx(-23.0 / 7.0, rel=5e-3)


def test_squared_field_error_estimate(unit_atom):
    value, err = squared_field(unit_atom, 2.0, "electric")
    assert value > 0 and 0 <= err < 1e-8 * value


def test_density_route_electric_probe(unit_atom):
    r = 1e3 * LAMBDA_UNIT
    res = density_route_energy(unit_atom, 1.0, "electric", r)
    assert res.value == pytest.approx(cp_far(1.0, 1.0, r), rel=1e-3)
    assert res.regime is Regime.FAR and res.flags == ()


def test_density_route_magnetic_probe(unit_atom):
    r = 1e3 * LAMBDA_UNIT
    res = density_route_energy(unit_atom, 1.0, "magnetic", r)
    assert res.value > 0
    assert res.value == pytest.approx(cp_far_electric_magnetic(1.0, 1.0, r), rel=1e-3)


def test_density_route_static_source_is_exact():
    static = PolarizabilityModel(static_override=2.0)
    assert density_route_energy(static, 3.0, "electric", 50.0).value == pytest.approx(cp_far(2, 3, 50), rel=1e-14)


def test_density_route_flags_and_zero_probe(unit_atom):
    near = density_route_energy(unit_atom, 1.0, "electric", 1.0)
    assert "outside-far-zone" in near.flags
    assert near.regime is Regime.INTERMEDIATE
    assert density_route_energy(unit_atom, 0.0, "electric", 1e4).value == 0.0
    with pytest.raises(DomainError):
        density_route_energy(unit_atom, 1.0, "chiral", 1e4)


def test_plate_densities():
    assert plate_density(1.0, "electric") == pytest.approx(9.4993e-3, rel=1e-4)
    assert plate_density(1.0, "magnetic") == -3 / (32 * math.pi**2)
    for z in (0.1, 1.0, 7.0):
        assert plate_density(z, "electric") * z**4 == pytest.approx(3 / (32 * math.pi**2), rel=1e-15)
        assert plate_density(z, "electric") + plate_density(z, "magnetic") == 0.0


@pytest.mark.parametrize("z", [0.0, -1.0])
def test_plate_density_diverges_at_surface(z):
    with pytest.raises(DomainError):
        plate_density(z, "electric")


def test_input_validation(unit_atom):
    with pytest.raises(DomainError):
        density_around_atom(unit_atom, 1.0, "gravitational")
    with pytest.raises(DomainError):
        density_around_atom(unit_atom, 0.0, "electric")


def test_profile_csv(unit_atom):
    profile = density_profile(unit_atom, [1.0, 10.0])
    rows = list(csv.reader(io.StringIO(profile.to_csv())))
    assert rows[0] == ["r", "electric_density", "magnetic_density", "representation"]
    assert len(rows) == 3
    assert rows[1][3] == "rotated-single-integral"
    assert float(rows[2][1]) == profile.electric[1]
    static = density_profile(PolarizabilityModel(static_override=1.0), [5.0])
    assert static.representation == "far-closed-form"
