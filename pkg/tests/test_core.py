import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import constants as const
from scipy.spatial.transform import Rotation

from dispersion_qed.core import (
    ATOMIC,
    NATURAL,
    SI,
    EnergyResult,
    Regime,
    TriangleGeometry,
    UnitSystem,
    convert_units,
    image_geometry,
    make_triangle,
)
from dispersion_qed.exceptions import AtomInsideConductorError, DegenerateGeometryError, UnitError

coords = st.floats(-10, 10, allow_nan=False)
vec = st.tuples(coords, coords, coords)
heights = st.floats(0.05, 10)


def test_natural_identity():
    assert convert_units(1.0, "length", NATURAL, NATURAL) == 1.0


def test_hartree_in_natural_units_is_fine_structure_constant():
    value = convert_units(1.0, "energy", ATOMIC, NATURAL)
    assert value == pytest.approx(const.fine_structure, rel=1e-12)
    assert value == pytest.approx(1 / 137.035999, rel=1e-8)


@pytest.mark.parametrize("kind", ["length", "energy", "temperature", "acceleration", "polarizability-volume"])
def test_zero_converts_to_zero(kind):
    assert convert_units(0.0, kind, ATOMIC, NATURAL) == 0.0
    assert convert_units(0.0, kind, NATURAL, SI) == 0.0


def test_unknown_kind_and_si_source_rejected():
    with pytest.raises(UnitError):
        convert_units(1.0, "charge", NATURAL, ATOMIC)
    with pytest.raises(UnitError):
        convert_units(1.0, "length", SI, NATURAL)


def test_natural_round_trip_through_atomic():
    for kind in ("length", "energy", "temperature", "acceleration", "polarizability-volume"):
        there = convert_units(3.7, kind, NATURAL, ATOMIC)
        assert convert_units(there, kind, ATOMIC, NATURAL) == pytest.approx(3.7, rel=1e-12)


def test_natural_length_in_si_is_bohr():
    assert convert_units(1.0, "length", NATURAL, SI) == pytest.approx(const.physical_constants["Bohr radius"][0])


@given(st.floats(-1e6, 1e6), st.sampled_from(["length", "energy", "temperature", "acceleration"]),
       st.floats(1e-12, 1e-6))
def test_conversion_composes(value, kind, unit_m):
    other = UnitSystem.natural(unit_m)
    direct = convert_units(value, kind, NATURAL, SI)
    via = convert_units(convert_units(value, kind, NATURAL, other), kind, other, SI)
    assert via == pytest.approx(direct, rel=1e-12, abs=1e-300)


def test_make_triangle_examples():
    t = make_triangle((0, 0, 0), (1, 0, 0), (0, 1, 0))
    assert t.alpha == pytest.approx(math.sqrt(2))
    assert (t.beta, t.gamma) == (1.0, 1.0)
    e = TriangleGeometry.equilateral(2.5)
    assert e.sides == pytest.approx((2.5, 2.5, 2.5), rel=1e-15)
    with pytest.raises(DegenerateGeometryError):
        make_triangle((0, 0, 0), (0, 0, 0), (1, 0, 0))


@given(vec, vec, vec, vec, st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
@settings(max_examples=50)
def test_triangle_sides_invariant_under_rigid_motion(a, b, c, shift, ax, ay, az):
    try:
        t = make_triangle(a, b, c)
    except DegenerateGeometryError:
        return
    rot = Rotation.from_euler("xyz", [ax, ay, az])
    moved = make_triangle(*(rot.apply(p) + np.array(shift) for p in (a, b, c)))
    scale = max(max(t.sides), 1.0)
    assert np.allclose(moved.sides, t.sides, rtol=1e-12, atol=1e-12 * scale)
    # the stored positions reproduce the sides
    assert t.alpha == pytest.approx(np.linalg.norm(np.subtract(c, b)), rel=1e-12)


def test_image_geometry_examples():
    g = image_geometry((0, 0, 1), (0, 0, 3))
    assert (g.r, g.r_bar, g.sin2_theta, g.sin2_theta_bar) == (2.0, 4.0, 0.0, 0.0)
    g = image_geometry((0, 0, 1), (1, 0, 1))
    assert g.r == 1.0
    assert g.r_bar == pytest.approx(math.sqrt(5))
    assert g.sin2_theta == 1.0
    assert g.sin2_theta_bar == pytest.approx(0.2)


def test_image_degeneracy_as_atom_approaches_plate():
    g = image_geometry((0, 0, 1.0), (0.7, 0.2, 1e-13))
    assert g.r_bar == pytest.approx(g.r, rel=1e-12)
    assert g.sin2_theta_bar == pytest.approx(g.sin2_theta, rel=1e-10)


def test_image_geometry_errors():
    with pytest.raises(AtomInsideConductorError):
        image_geometry((0, 0, 0), (0, 0, 1))
    with pytest.raises(DegenerateGeometryError):
        image_geometry((0, 0, 1), (0, 0, 1))


@given(st.tuples(coords, coords, heights), st.tuples(coords, coords, heights), coords, coords, st.floats(0, 6.3))
@settings(max_examples=60)
def test_image_geometry_invariant_parallel_to_plate(a, b, dx, dy, phi):
    if np.linalg.norm(np.subtract(a, b)) < 1e-6:
        return
    g = image_geometry(a, b)
    rot = Rotation.from_euler("z", phi)
    shift = np.array([dx, dy, 0.0])
    h = image_geometry(rot.apply(a) + shift, rot.apply(b) + shift)
    assert h.r == pytest.approx(g.r, rel=1e-9)
    assert h.r_bar == pytest.approx(g.r_bar, rel=1e-9)
    assert h.sin2_theta == pytest.approx(g.sin2_theta, abs=1e-9)
    assert h.sin2_theta_bar == pytest.approx(g.sin2_theta_bar, abs=1e-9)
    assert g.r_bar >= abs(a[2] + b[2]) - 1e-12
    assert g.r >= abs(b[2] - a[2]) - 1e-12


def test_energy_result_validation():
    res = EnergyResult(-1.0, 0.1, "far", terms={"x": 1.0})
    assert res.regime is Regime.FAR and float(res) == -1.0
    with pytest.raises(TypeError):
        res.terms["y"] = 2.0
    with pytest.raises(ValueError):
        EnergyResult(1.0, -1e-3, Regime.NEAR)
