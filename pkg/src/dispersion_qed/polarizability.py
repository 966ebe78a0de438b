"""Isotropic dynamic polarizabilities built from discrete dipole transitions.

A ground-state atom is described by its transitions m <- g, each carrying a
transition wavenumber ``k`` and the squared dipole matrix element ``mu2``:

    alpha(k)  = (2/3) sum_m k_m mu2_m / (k_m^2 - k^2)
    alpha(iu) = (2/3) sum_m k_m mu2_m / (k_m^2 + u^2)

Every physical pipeline in the package evaluates alpha on the imaginary
axis. The real-axis form exists for diagnostics and for the resonant
three-body term; it refuses to evaluate near a pole rather than guess a
principal value.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .core import as_vector
from .exceptions import DomainError, InsufficientDataError, ResonancePoleError

__all__ = [
    "Transition",
    "PolarizabilityModel",
    "TwoLevelAtom",
    "ATOM_SCHEMA",
    "POLE_EXCLUSION",
    "alpha_imag",
    "alpha_real",
    "alpha_excited_two_level",
    "two_level_model",
    "model_from_dict",
    "load_atom",
]

# relative half-width of the excluded window around each real-axis pole
POLE_EXCLUSION = 1e-6

ATOM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name"],
    "properties": {
        "name": {"type": "string"},
        "transitions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "mu2"],
                "properties": {
                    "k": {"type": "number", "exclusiveMinimum": 0},
                    "mu2": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "static": {"type": "number", "minimum": 0},
        "kind": {"enum": ["electric", "magnetic"]},
    },
    "anyOf": [
        {"required": ["transitions"], "properties": {"transitions": {"minItems": 1}}},
        {"required": ["static"]},
    ],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class Transition:
    k_mg: float
    mu2: float

    def __post_init__(self):
        if not self.k_mg > 0:
            raise DomainError("transition wavenumber must be positive")
        if not self.mu2 >= 0:
            raise DomainError("squared dipole matrix element must be non-negative")


@dataclass(frozen=True)
class PolarizabilityModel:
    """Transition-based polarizability, or a fixed static value when no
    transitions are given."""

    transitions: tuple[Transition, ...] = ()
    static_override: float | None = None
    kind: str = "electric"
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.kind not in ("electric", "magnetic"):
            raise DomainError(f"unknown polarizability kind {self.kind!r}")
        if not self.transitions:
            if self.static_override is None:
                raise InsufficientDataError("model needs transitions or a static polarizability")
            if not self.static_override >= 0:
                raise DomainError("static polarizability must be non-negative")

    @property
    def has_transitions(self) -> bool:
        return bool(self.transitions)

    @property
    def alpha_static(self) -> float:
        if not self.transitions:
            return float(self.static_override)
        return (2.0 / 3.0) * sum(t.mu2 / t.k_mg for t in self.transitions)

    @property
    def max_wavenumber(self) -> float | None:
        if not self.transitions:
            return None
        return max(t.k_mg for t in self.transitions)

    @property
    def min_wavelength(self) -> float | None:
        kmax = self.max_wavenumber
        return None if kmax is None else 2.0 * math.pi / kmax

    def scaled(self, factor: float) -> "PolarizabilityModel":
        """Same transitions with every ``mu2`` (or the static value) multiplied."""
        if not self.transitions:
            return PolarizabilityModel((), self.static_override * factor, self.kind, self.name)
        return PolarizabilityModel(
            tuple(Transition(t.k_mg, t.mu2 * factor) for t in self.transitions),
            None, self.kind, self.name)


@dataclass(frozen=True)
class TwoLevelAtom:
    """Two-level atom with transition wavenumber ``k0`` and a real dipole
    matrix element."""

    k0: float
    dipole: tuple[float, float, float]
    position: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        if not self.k0 > 0:
            raise DomainError("k0 must be positive")
        object.__setattr__(self, "dipole", tuple(as_vector(self.dipole, "dipole").tolist()))
        object.__setattr__(self, "position", tuple(as_vector(self.position, "position").tolist()))

    @property
    def dipole_squared(self) -> float:
        return float(np.dot(self.dipole, self.dipole))

    def ground_state_model(self) -> PolarizabilityModel:
        return PolarizabilityModel((Transition(self.k0, self.dipole_squared),))


def two_level_model(k0: float, mu2: float, kind: str = "electric", name: str = "") -> PolarizabilityModel:
    return PolarizabilityModel((Transition(k0, mu2),), kind=kind, name=name)


def _check_nonnegative(u):
    if np.any(np.asarray(u) < 0):
        raise DomainError("imaginary-axis argument u must be non-negative")


def alpha_imag(model: PolarizabilityModel, u):
    """alpha(iu); accepts scalars or arrays (including longdouble arrays)."""
    _check_nonnegative(u)
    if not model.transitions:
        return model.static_override + 0 * u
    u2 = u * u
    total = 0 * u
    for t in model.transitions:
        total = total + t.k_mg * t.mu2 / (t.k_mg * t.k_mg + u2)
    return (2.0 / 3.0) * total


def alpha_real(model: PolarizabilityModel, k):
    """alpha(k) on the real axis, refusing to evaluate next to a pole."""
    if not model.transitions:
        return model.static_override + 0 * np.asarray(k, dtype=float)
    k = np.asarray(k, dtype=float)
    for t in model.transitions:
        if np.any(np.abs(np.abs(k) - t.k_mg) <= POLE_EXCLUSION * t.k_mg):
            raise ResonancePoleError(f"k lies within the pole-exclusion window of k_mg={t.k_mg:g}")
    total = sum(t.k_mg * t.mu2 / (t.k_mg**2 - k * k) for t in model.transitions)
    total = (2.0 / 3.0) * total
    return float(total) if np.ndim(total) == 0 else total


def alpha_excited_two_level(atom: TwoLevelAtom, u):
    """Isotropically averaged polarizability of the *excited* two-level atom
    at imaginary wavenumber iu; negative, with the ground-state magnitude."""
    # -(2/3) k0 |mu|^2 / (k0^2 + u^2): the ground-state form with the sign flipped
    return -alpha_imag(atom.ground_state_model(), u)


def model_from_dict(data: dict) -> PolarizabilityModel:
    """Build a model from the JSON atom description.

    Raises ``jsonschema.ValidationError`` (with ``.json_path``) on schema
    violations.
    """
    jsonschema.validate(data, ATOM_SCHEMA)
    transitions = tuple(Transition(float(t["k"]), float(t["mu2"])) for t in data.get("transitions", ()))
    static = data.get("static")
    return PolarizabilityModel(
        transitions,
        None if static is None else float(static),
        data.get("kind", "electric"),
        data["name"],
    )


def load_atom(path) -> PolarizabilityModel:
    with open(Path(path), encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
