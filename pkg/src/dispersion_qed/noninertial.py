"""Uniformly accelerated atoms, described in their comoving frame.

Two atoms share the proper acceleration a (along x) and are separated by z
(along z). The acceleration introduces the length z_a = 1/a and the Unruh
temperature a / 2pi; the regime is set by comparing z with z_a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .core import EnergyResult, Regime
from .exceptions import DomainError, ValidityError
from .resonance import BellPairSpec

__all__ = [
    "AcceleratedPair",
    "ScalarAtomPair",
    "AcceleratedCPReport",
    "BEYOND_FACTOR",
    "THERMAL_EQUIVALENT_FACTOR",
    "rindler_event",
    "unruh_temperature",
    "scalar_cp_accelerated",
    "resonance_accelerated",
    "phase",
]

# z >= BEYOND_FACTOR * z_a: beyond the acceleration length; z < THERMAL_EQUIVALENT_FACTOR * z_a: thermal-like
BEYOND_FACTOR = 10.0
THERMAL_EQUIVALENT_FACTOR = 0.1

_Q = np.array([1.0, 0.0, 0.0])  # acceleration direction
_N = np.array([0.0, 0.0, 1.0])  # separation direction


def unruh_temperature(a: float) -> float:
    if not a >= 0:
        raise DomainError("acceleration must be non-negative")
    return a / (2.0 * math.pi)


@dataclass(frozen=True)
class AcceleratedPair:
    a: float
    z: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("proper acceleration must be positive")
        if not self.z > 0:
            raise DomainError("separation must be positive")

    @property
    def z_a(self) -> float:
        return 1.0 / self.a

    @property
    def unruh_temperature(self) -> float:
        return unruh_temperature(self.a)


@dataclass(frozen=True)
class ScalarAtomPair:
    """Two identical atoms coupled with strength ``coupling`` to a massless scalar field."""

    omega0: float
    coupling: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise DomainError("omega0 must be positive")


@dataclass(frozen=True)
class AcceleratedCPReport:
    regime: Regime
    value: float | None
    unruh_temperature: float
    z_a: float
    scaling: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "scaling", MappingProxyType(dict(self.scaling)))


def rindler_event(a: float, tau: float, z0: float = 0.0) -> tuple[float, float, float, float]:
    """Event (t, x, y, z) on the hyperbolic worldline at proper time ``tau``."""
    if not a > 0:
        raise DomainError("acceleration must be positive")
    return math.sinh(a * tau) / a, math.cosh(a * tau) / a, 0.0, float(z0)


def scalar_cp_accelerated(pair: ScalarAtomPair, acc: AcceleratedPair) -> AcceleratedCPReport:
    """Scalar-field dispersion energy of two coaccelerated atoms.

    Only the regime beyond the acceleration length has a closed form. Closer
    in, the atoms behave like atoms at rest in a bath at the Unruh
    temperature and the report carries scaling laws only.
    """
    t_u = acc.unruh_temperature
    if acc.z >= BEYOND_FACTOR * acc.z_a:
        value = -pair.coupling**4 / (512.0 * math.pi**4 * pair.omega0**2 * acc.a * acc.z**4)
        return AcceleratedCPReport(Regime.ACCELERATED_BEYOND, value, t_u, acc.z_a, {"distance": "z^-4"})
    if acc.z < THERMAL_EQUIVALENT_FACTOR * acc.z_a:
        scaling = {
            "near zone": "z^-2",
            "far zone": "z^-3",
            "thermal correction": "proportional to T^2",
            "very long distance": "proportional to T z^-2",
        }
        return AcceleratedCPReport(Regime.ACCELERATED_THERMAL, None, t_u, acc.z_a, scaling)
    return AcceleratedCPReport(Regime.INTERMEDIATE, None, t_u, acc.z_a)


def phase(omega0: float, a: float, z: float) -> float:
    """Log-periodic phase (2 omega0 / a) ln(a z)."""
    return (2.0 * omega0 / a) * math.log(a * z)


def resonance_accelerated(spec: BellPairSpec, acc: AcceleratedPair) -> EnergyResult:
    """Resonance energy of two coaccelerated atoms, valid for z >= 10 z_a.

    ``spec.r_vec`` must point along +z with length ``acc.z``; the
    acceleration is along x.
    """
    r_vec = np.asarray(spec.r_vec)
    z = acc.z
    if abs(np.linalg.norm(r_vec) - z) > 1e-12 * z:
        raise DomainError("|r_vec| must equal the separation of the accelerated pair")
    if np.linalg.norm(r_vec - z * _N) > 1e-12 * z:
        raise DomainError("the separation must lie along the z axis, orthogonal to the acceleration")
    if z < BEYOND_FACTOR * acc.z_a:
        raise ValidityError(f"formula requires z >= {BEYOND_FACTOR:g} z_a (z = {z:g}, z_a = {acc.z_a:g})")
    w0, a = spec.k0, acc.a
    phi = phase(w0, a, z)
    c, s = math.cos(phi), math.sin(phi)
    planar = np.eye(3) - np.outer(_Q, _Q) - 2.0 * np.outer(_N, _N)
    tensor = planar * (2.0 * w0 * z * s - (w0 * z) ** 2 * (2.0 / (z * a)) * c) \
        + np.outer(_Q, _Q) * (8.0 / (a * z)) * c
    value = spec.sign * float(np.asarray(spec.atom_a.dipole) @ tensor @ np.asarray(spec.atom_b.dipole)) / z**3
    return EnergyResult(value, 0.0, Regime.ACCELERATED_BEYOND, notes="comoving frame; spontaneous decay neglected",
                        terms={"phase": phi})
