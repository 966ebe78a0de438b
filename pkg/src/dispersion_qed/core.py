"""Units, geometry preprocessing and the shared result type.

Internally everything is in natural units, hbar = c = k_B = 1, with lengths
measured in a chosen length unit (the Bohr radius unless stated otherwise).
Energies, wavenumbers, temperatures and accelerations then all carry the
dimension of an inverse length, and polarizabilities are volumes. SI is only
ever produced for display.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
from scipy import constants as const

from .exceptions import (
    AtomInsideConductorError,
    DegenerateGeometryError,
    DomainError,
    UnitError,
)

__all__ = [
    "COINCIDENCE_THRESHOLD",
    "QUANTITY_KINDS",
    "UnitSystem",
    "NATURAL",
    "ATOMIC",
    "SI",
    "convert_units",
    "TriangleGeometry",
    "make_triangle",
    "ImageGeometry",
    "image_geometry",
    "Regime",
    "EnergyResult",
    "as_vector",
]

# distances below this are treated as coincident points
COINCIDENCE_THRESHOLD = 1e-12

QUANTITY_KINDS = ("length", "energy", "temperature", "acceleration", "polarizability-volume")

_HBAR = const.hbar
_C = const.c
_KB = const.k
_BOHR = const.physical_constants["Bohr radius"][0]
_HARTREE = const.physical_constants["Hartree energy"][0]


@dataclass(frozen=True)
class UnitSystem:
    """A unit system, described by the SI value of one unit of each quantity kind.

    Polarizability volumes are Gaussian (alpha / 4 pi eps0 in SI terms), so the
    SI unit for that kind is m^3.
    """

    id: str
    length: float
    energy: float
    temperature: float
    acceleration: float
    polarizability_volume: float

    @classmethod
    def natural(cls, length_unit_m: float = _BOHR) -> "UnitSystem":
        if not length_unit_m > 0:
            raise UnitError("natural length unit must be positive")
        return cls(
            id="natural",
            length=length_unit_m,
            energy=_HBAR * _C / length_unit_m,
            temperature=_HBAR * _C / (_KB * length_unit_m),
            acceleration=_C**2 / length_unit_m,
            polarizability_volume=length_unit_m**3,
        )

    @classmethod
    def atomic(cls) -> "UnitSystem":
        return cls(
            id="atomic",
            length=_BOHR,
            energy=_HARTREE,
            temperature=_HARTREE / _KB,
            acceleration=_BOHR * _HARTREE**2 / _HBAR**2,
            polarizability_volume=_BOHR**3,
        )

    @classmethod
    def si(cls) -> "UnitSystem":
        return cls("si-output-only", 1.0, 1.0, 1.0, 1.0, 1.0)

    @property
    def is_si(self) -> bool:
        return self.id == "si-output-only"

    def si_value(self, kind: str) -> float:
        if kind not in QUANTITY_KINDS:
            raise UnitError(f"unknown quantity kind {kind!r}; expected one of {QUANTITY_KINDS}")
        return getattr(self, kind.replace("-", "_"))


NATURAL = UnitSystem.natural()
ATOMIC = UnitSystem.atomic()
SI = UnitSystem.si()


def convert_units(value: float, kind: str, from_: UnitSystem, to: UnitSystem) -> float:
    """Convert ``value`` of quantity ``kind`` between unit systems.

    SI is accepted only as a destination: nothing is ever converted *into*
    natural or atomic units from SI.
    """
    if kind not in QUANTITY_KINDS:
        raise UnitError(f"unknown quantity kind {kind!r}; expected one of {QUANTITY_KINDS}")
    if from_.is_si and not to.is_si:
        raise UnitError("SI is an output-only unit system and cannot be used as an internal target")
    if from_ == to or value == 0.0:
        return value
    return value * (from_.si_value(kind) / to.si_value(kind))


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class TriangleGeometry:
    """Positions of atoms A, B, C; side ``alpha`` is opposite A, and so on."""

    pos_a: tuple[float, float, float]
    pos_b: tuple[float, float, float]
    pos_c: tuple[float, float, float]

    @property
    def alpha_vec(self) -> np.ndarray:
        return np.subtract(self.pos_c, self.pos_b)

    @property
    def beta_vec(self) -> np.ndarray:
        return np.subtract(self.pos_c, self.pos_a)

    @property
    def gamma_vec(self) -> np.ndarray:
        return np.subtract(self.pos_b, self.pos_a)

    @property
    def alpha(self) -> float:
        return float(np.linalg.norm(self.alpha_vec))

    @property
    def beta(self) -> float:
        return float(np.linalg.norm(self.beta_vec))

    @property
    def gamma(self) -> float:
        return float(np.linalg.norm(self.gamma_vec))

    @property
    def sides(self) -> tuple[float, float, float]:
        return self.alpha, self.beta, self.gamma

    @classmethod
    def equilateral(cls, side: float) -> "TriangleGeometry":
        """Equilateral triangle of the given side in the xy-plane."""
        return make_triangle((0.0, 0.0, 0.0), (side, 0.0, 0.0),
                             (0.5 * side, 0.5 * math.sqrt(3.0) * side, 0.0))


def make_triangle(pos_a, pos_b, pos_c) -> TriangleGeometry:
    a, b, c = (as_vector(p, n) for p, n in ((pos_a, "pos_A"), (pos_b, "pos_B"), (pos_c, "pos_C")))
    for p, q, label in ((a, b, "A and B"), (b, c, "B and C"), (a, c, "A and C")):
        if np.linalg.norm(q - p) < COINCIDENCE_THRESHOLD:
            raise DegenerateGeometryError(f"atoms {label} coincide")
    return TriangleGeometry(tuple(a.tolist()), tuple(b.tolist()), tuple(c.tolist()))


@dataclass(frozen=True)
class ImageGeometry:
    """Atom pair in front of a mirror at z = 0.

    ``r`` is the direct distance, ``r_bar`` the distance of B from the image
    of A, and the two sin^2 values are taken with respect to the plate normal.
    """

    r: float
    r_bar: float
    sin2_theta: float
    sin2_theta_bar: float


_SIGMA = np.diag([1.0, 1.0, -1.0])


def image_geometry(pos_a, pos_b) -> ImageGeometry:
    a = as_vector(pos_a, "pos_A")
    b = as_vector(pos_b, "pos_B")
    if a[2] <= 0 or b[2] <= 0:
        raise AtomInsideConductorError("both atoms must lie above the plate (z > 0)")
    direct = b - a
    image = b - _SIGMA @ a
    r = float(np.linalg.norm(direct))
    if r < COINCIDENCE_THRESHOLD:
        raise DegenerateGeometryError("atoms A and B coincide")
    r_bar = float(np.linalg.norm(image))
    cos2 = (direct[2] / r) ** 2
    cos2_bar = (image[2] / r_bar) ** 2
    return ImageGeometry(r, r_bar, min(max(1.0 - cos2, 0.0), 1.0), min(max(1.0 - cos2_bar, 0.0), 1.0))


class Regime(str, enum.Enum):
    NEAR = "near"
    INTERMEDIATE = "intermediate"
    FAR = "far"
    THERMAL = "thermal"
    ACCELERATED_THERMAL = "accelerated-thermal"
    ACCELERATED_BEYOND = "accelerated-beyond"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EnergyResult:
    """An energy with its error estimate, regime tag and optional breakdown.

    ``terms`` holds named contributions or diagnostics; ``flags`` holds
    validity warnings (e.g. a far-zone formula used outside the far zone).
    """

    value: float
    abs_error_estimate: float
    regime: Regime
    notes: str = ""
    terms: Mapping[str, float] = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        object.__setattr__(self, "regime", Regime(self.regime))
        object.__setattr__(self, "terms", MappingProxyType(dict(self.terms)))
        object.__setattr__(self, "flags", tuple(self.flags))

    def __float__(self) -> float:
        return float(self.value)
