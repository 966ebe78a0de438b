"""Exit criteria of the package, one test per criterion.

Each test prints a ``criterion N: PASS|FAIL`` line (also collected in the
terminal summary) before asserting.
"""

import math

import numpy as np
import pytest

from conftest import LAMBDA_UNIT, log_slope
from dispersion_qed.boundary import atom_wall, cross_term_bracket, pair_near_plate
from dispersion_qed.core import TriangleGeometry, image_geometry
from dispersion_qed.field_kernels import apply_f_chain, vacuum_e_correlation
from dispersion_qed.noninertial import (
    AcceleratedPair,
    ScalarAtomPair,
    phase,
    resonance_accelerated,
    scalar_cp_accelerated,
)
from dispersion_qed.polarizability import TwoLevelAtom
from dispersion_qed.quadrature import QuadratureSpec
from dispersion_qed.resonance import BellPairSpec, resonance_energy
from dispersion_qed.three_body import TripleSpec, three_body_equilateral_far, three_body_far, three_body_full
from dispersion_qed.two_body import (
    PairSpec,
    cp_far,
    cp_far_electric_magnetic,
    cp_full,
    cp_via_correlation,
    london_near,
)
from dispersion_qed.vacuum_density import density_around_atom, density_route_energy, plate_density

pytestmark = pytest.mark.acceptance

EQUILATERAL = 1264.0 / 243.0
FINE = QuadratureSpec(rel_tol=1e-12)


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_01_far_zone_two_body(unit_atom, criterion):
    r = 1e4 * LAMBDA_UNIT
    coeff = cp_full(PairSpec(unit_atom, unit_atom, r)).value * r**7 / (unit_atom.alpha_static**2)
    dev = _rel(coeff, -23 / (4 * math.pi))
    assert criterion(1, dev < 1e-3, f"far-zone coefficient {coeff:.8f}, rel dev {dev:.2e} (tol 1e-3)")


def test_criterion_02_near_zone_two_body(unit_atom, criterion):
    r = 1e-3 * LAMBDA_UNIT
    full = cp_full(PairSpec(unit_atom, unit_atom, r)).value
    london = london_near(unit_atom, unit_atom, r)
    dev = _rel(full, london)
    coeff_ok = _rel(london * r**6, -0.75) < 1e-14
    assert criterion(2, dev < 5e-3 and coeff_ok,
                     f"cp_full/london - 1 = {dev:.2e} (tol 5e-3), London coefficient {london * r**6:.15g}")


def test_criterion_03_electric_magnetic_ratio(criterion):
    ratios = [cp_far_electric_magnetic(1, 1, r) / abs(cp_far(1, 1, r)) for r in (0.5, 10.0, 1e3)]
    dev = max(_rel(x, 7 / 23) for x in ratios)
    assert criterion(3, dev <= 2e-16, f"ratio {ratios[1]!r} vs 7/23, max rel dev {dev:.1e}")


def test_criterion_04_equilateral_three_body(unit_atom, criterion):
    r = 10.0
    closed = three_body_equilateral_far((1, 1, 1), r) * r**10 * math.pi
    numeric = three_body_far((1, 1, 1), TriangleGeometry.equilateral(r)).value * r**10 * math.pi
    side = 1e3 * LAMBDA_UNIT
    full = three_body_full(TripleSpec(unit_atom, unit_atom, unit_atom, TriangleGeometry.equilateral(side)))
    full_coeff = full.value * side**10 * math.pi
    d_closed, d_num, d_full = _rel(closed, EQUILATERAL), _rel(numeric, EQUILATERAL), _rel(full_coeff, EQUILATERAL)
    ok = d_closed < 1e-6 and d_num < 5e-3 and d_full < 5e-3
    assert criterion(4, ok, f"closed {d_closed:.1e} (tol 1e-6); F-chain {d_num:.1e}, "
                            f"full integral at 1e3 lambda {d_full:.1e} (tol 5e-3)")


def test_criterion_05_three_body_slopes(unit_atom, criterion):
    def energy(r):
        return three_body_full(TripleSpec(unit_atom, unit_atom, unit_atom, TriangleGeometry.equilateral(r))).value

    near = log_slope(energy, 1e-3 * LAMBDA_UNIT, rel=1e-2)
    far = [log_slope(energy, f * LAMBDA_UNIT, rel=1e-2) for f in (1e2, 1e3, 1e4)]
    ok = abs(near + 9) <= 0.1 and all(abs(s + 10) <= 0.05 for s in far)
    assert criterion(5, ok, f"near slope {near:.4f} (-9 +- 0.1); far slopes "
                            + ", ".join(f"{s:.4f}" for s in far) + " (-10 +- 0.05)")


def test_criterion_06_atom_wall(criterion):
    z = 1.7
    out = atom_wall(1.0, z)
    e_ok = _rel(out["energy"] * z**4, -3 / (8 * math.pi)) < 1e-15
    f_ok = _rel(out["force"] * z**5, -3 / (2 * math.pi)) < 1e-15
    h = 1e-6 * z
    fd = -(atom_wall(1.0, z + h)["energy"] - atom_wall(1.0, z - h)["energy"]) / (2 * h)
    d_fd = _rel(out["force"], fd)
    assert criterion(6, e_ok and f_ok and d_fd < 1e-8,
                     f"energy z^4 and force z^5 exact: {e_ok and f_ok}; force vs -dE/dz rel {d_fd:.1e} (tol 1e-8)")


def test_criterion_07_plate_densities(criterion):
    target = 3 / (32 * math.pi**2)
    devs = [max(_rel(plate_density(z, "electric") * z**4, target),
                _rel(plate_density(z, "magnetic") * z**4, -target)) for z in (0.3, 1.0, 4.0)]
    assert criterion(7, max(devs) <= 2e-16, f"+-3/(32 pi^2) reproduced, max rel dev {max(devs):.1e}")


def test_criterion_08_atom_densities(unit_atom, criterion):
    r = 1e3 * LAMBDA_UNIT
    e = density_around_atom(unit_atom, r, "electric") * r**7
    b = density_around_atom(unit_atom, r, "magnetic") * r**7
    d_e, d_b = _rel(e, 23 / (16 * math.pi**2)), _rel(b, -7 / (16 * math.pi**2))
    near_e = log_slope(lambda x: density_around_atom(unit_atom, x, "electric", FINE), 1e-3)
    near_b = log_slope(lambda x: density_around_atom(unit_atom, x, "magnetic", FINE), 1e-3)
    ok = d_e < 1e-3 and d_b < 1e-3 and abs(near_e + 6) <= 0.1 and abs(near_b + 5) <= 0.1
    assert criterion(8, ok, f"far coefficients rel dev {d_e:.1e}, {d_b:.1e} (tol 1e-3); "
                            f"near slopes {near_e:.4f}, {near_b:.4f}")


def test_criterion_09_density_route(unit_atom, criterion):
    r = 1e3 * LAMBDA_UNIT
    ee = density_route_energy(unit_atom, 1.0, "electric", r).value
    em = density_route_energy(unit_atom, 1.0, "magnetic", r).value
    d_ee, d_em = _rel(ee, cp_far(1, 1, r)), _rel(em, cp_far_electric_magnetic(1, 1, r))
    ok = d_ee < 1e-3 and d_em < 1e-3 and em > 0
    assert criterion(9, ok, f"electric probe rel dev {d_ee:.1e}, magnetic probe rel dev {d_em:.1e} "
                            f"(tol 1e-3), magnetic sign {'+' if em > 0 else '-'}")


def test_criterion_10_correlation_route(unit_atom, criterion):
    devs = []
    for f in (0.01, 1.0, 100.0):
        pair = PairSpec(unit_atom, unit_atom, f * LAMBDA_UNIT)
        devs.append(_rel(cp_via_correlation(pair).value, cp_full(pair).value))
    assert criterion(10, max(devs) < 1e-6, "rel devs " + ", ".join(f"{d:.1e}" for d in devs) + " (tol 1e-6)")


def test_criterion_11_vacuum_correlation(criterion):
    c = vacuum_e_correlation([0, 0, 1])
    expected = np.diag([-4 / math.pi, -4 / math.pi, 4 / math.pi])
    ok = bool(np.array_equal(c, expected))
    assert criterion(11, ok, f"zz {float(c[2, 2])!r}, xx {float(c[0, 0])!r}, max |off-diagonal| "
                             f"{float(np.abs(c[~np.eye(3, dtype=bool)]).max())!r}")


def test_criterion_12_plate_pair(criterion):
    r = 1.0
    h = 1e3 * r
    dev = _rel(pair_near_plate(1.0, 1.0, [0, 0, h], [r, 0, h]).value, cp_far(1, 1, r))
    rng = np.random.default_rng(12)
    worst = math.inf
    for pa, pb in zip(rng.uniform([-10, -10, 1e-3], [10, 10, 10], (10_000, 3)),
                      rng.uniform([-10, -10, 1e-3], [10, 10, 10], (10_000, 3))):
        g = image_geometry(pa, pb)
        worst = min(worst, cross_term_bracket(g.r, g.r_bar, g.sin2_theta, g.sin2_theta_bar))
    assert criterion(12, dev < 1e-3 and worst >= 0,
                     f"plate-removal rel dev {dev:.1e} (tol 1e-3); min bracket over 1e4 geometries {worst:.3e}")


def test_criterion_13_resonance_zones(criterion):
    k0 = 1.0
    mu_a, mu_b = np.array([1.0, 0.2, -0.5]), np.array([0.3, 1.0, 0.4])
    rhat = np.array([0.36, 0.48, 0.8])

    def spec(r, parity="symmetric"):
        return BellPairSpec(TwoLevelAtom(k0, mu_a), TwoLevelAtom(k0, mu_b), parity, tuple(r * rhat))

    r = 1e-3 / k0
    static = mu_a @ (np.eye(3) - 3 * np.outer(rhat, rhat)) @ mu_b / r**3
    d_near = _rel(resonance_energy(spec(r)).value, static)
    n = np.unique(np.round(np.logspace(3, 5, 25) / math.pi))
    radii = n * math.pi / k0
    envelope = [abs(resonance_energy(spec(x)).value) for x in radii]
    slope = np.polyfit(np.log(radii), np.log(envelope), 1)[0]
    parity = all(resonance_energy(spec(x, "antisymmetric")).value == -resonance_energy(spec(x)).value
                 for x in (0.3, 2.0, 77.0))
    ok = d_near < 1e-3 and abs(slope + 1) <= 0.02 and parity
    assert criterion(13, ok, f"near tensor rel dev {d_near:.1e} (tol 1e-3); far envelope exponent {slope:.4f}; "
                             f"parity exact {parity}")


def test_criterion_14_accelerated_scalar(criterion):
    pair = ScalarAtomPair(1.0, 1.0)
    value = scalar_cp_accelerated(pair, AcceleratedPair(1.0, 10.0)).value
    dev = _rel(value, -1 / (512 * math.pi**4 * 1e4))
    ratio = scalar_cp_accelerated(pair, AcceleratedPair(1.0, 20.0)).value / value
    d_ratio = _rel(ratio, 1 / 16)
    assert criterion(14, dev < 1e-12 and d_ratio < 1e-15,
                     f"value {value!r}, rel dev {dev:.1e} (tol 1e-12); value(2z)/value(z) - 1/16 rel {d_ratio:.1e}")


def test_criterion_15_accelerated_resonance(criterion):
    from scipy.optimize import brentq

    omega0, a = 5.0, 1.0

    def energy(direction, z):
        d = np.asarray(direction, dtype=float)
        spec = BellPairSpec(TwoLevelAtom(omega0, d), TwoLevelAtom(omega0, d), r_vec=(0.0, 0.0, z))
        return resonance_accelerated(spec, AcceleratedPair(a, z)).value

    n = np.arange(math.ceil(phase(omega0, a, 1e2) / math.pi), math.floor(phase(omega0, a, 1e4) / math.pi) + 1)
    z = np.exp(n * math.pi * a / (2 * omega0)) / a
    slope_z = np.polyfit(np.log(z), np.log([abs(energy([0, 0, 1], x)) for x in z]), 1)[0]
    slope_x = np.polyfit(np.log(z), np.log([abs(energy([1, 0, 0], x)) for x in z]), 1)[0]

    def f(log_z):
        return energy([1, 0, 0], math.exp(log_z))

    grid = np.linspace(math.log(1e2), math.log(1e3), 400)
    vals = [f(x) for x in grid]
    zeros = [math.exp(brentq(f, lo, hi, xtol=1e-13))
             for lo, hi, vlo, vhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]) if vlo * vhi < 0]
    ratios = np.array(zeros[1:]) / np.array(zeros[:-1])
    d_ratio = float(np.max(np.abs(ratios / math.exp(math.pi * a / (2 * omega0)) - 1)))
    ok = abs(slope_z + 2) <= 0.05 and abs(slope_x + 4) <= 0.05 and d_ratio < 1e-2 and len(zeros) >= 3
    assert criterion(15, ok, f"envelope powers z-dipoles {slope_z:.4f}, x-dipoles {slope_x:.4f} (+- 0.05); "
                             f"zero spacing ratio rel dev {d_ratio:.1e} over {len(zeros)} zeros (tol 1e-2)")


def test_criterion_16_f_chain_oracle(criterion):
    def inverse_perimeter(A, B, C):
        a = np.sqrt((A * A).sum(-1))
        b = np.sqrt((B * B).sum(-1))
        c = np.sqrt((C * C).sum(-1))
        return 1.0 / (a * b * c * (a + b + c))

    devs = []
    for r in (1.0, 3.0):
        value = apply_f_chain(inverse_perimeter, TriangleGeometry.equilateral(r))
        devs.append(_rel(value, -EQUILATERAL / r**10))
    assert criterion(16, max(devs) < 1e-6, "vector F-chain rel devs " + ", ".join(f"{d:.1e}" for d in devs)
                     + " (tol 1e-6)")
