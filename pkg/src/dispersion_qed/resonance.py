"""Resonance interaction of two identical two-level atoms sharing one excitation.

The pair is prepared in the symmetric or antisymmetric superposition of
|e_A g_B> and |g_A e_B>; the energy is first order in the dipole coupling and
oscillates in the separation at the transition wavenumber k0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import COINCIDENCE_THRESHOLD, EnergyResult, Regime, as_vector
from .exceptions import DegenerateGeometryError, DomainError
from .polarizability import TwoLevelAtom
from .two_body import FAR_FACTOR, NEAR_FACTOR

__all__ = ["PARITIES", "BellPairSpec", "resonance_energy", "resonance_tensor"]

PARITIES = {"symmetric": 1.0, "+": 1.0, "antisymmetric": -1.0, "-": -1.0}


@dataclass(frozen=True)
class BellPairSpec:
    """Two identical atoms in a Bell-type state.

    ``r_vec`` points from A to B; it defaults to the difference of the atom
    positions.
    """

    atom_a: TwoLevelAtom
    atom_b: TwoLevelAtom
    parity: str = "symmetric"
    r_vec: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be one of {sorted(PARITIES)}")
        ka, kb = self.atom_a.k0, self.atom_b.k0
        if abs(ka - kb) > 1e-12 * max(ka, kb):
            raise DomainError("the two atoms must share the same transition wavenumber")
        r_vec = self.r_vec
        if r_vec is None:
            r_vec = np.subtract(self.atom_b.position, self.atom_a.position)
        r_vec = as_vector(r_vec, "r_vec")
        if np.linalg.norm(r_vec) < COINCIDENCE_THRESHOLD:
            raise DegenerateGeometryError("the atoms coincide")
        object.__setattr__(self, "r_vec", tuple(r_vec.tolist()))

    @property
    def sign(self) -> float:
        return PARITIES[self.parity]

    @property
    def k0(self) -> float:
        return self.atom_a.k0

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.r_vec))


def resonance_tensor(k0: float, r_vec) -> np.ndarray:
    """Tensor T_ij with E = +-mu_Ai T_ij mu_Bj."""
    r_vec = as_vector(r_vec, "r_vec")
    r = float(np.linalg.norm(r_vec))
    if r < COINCIDENCE_THRESHOLD:
        raise DegenerateGeometryError("the resonance interaction is singular at r = 0")
    h = r_vec / r
    x = k0 * r
    c, s = math.cos(x), math.sin(x)
    dipolar = np.eye(3) - 3.0 * np.outer(h, h)
    transverse = np.eye(3) - np.outer(h, h)
    return (dipolar * (c + x * s) - transverse * (x * x * c)) / r**3


def resonance_energy(spec: BellPairSpec) -> EnergyResult:
    """Resonance energy of the pair at rest; spontaneous decay is ignored."""
    tensor = resonance_tensor(spec.k0, spec.r_vec)
    value = spec.sign * float(np.asarray(spec.atom_a.dipole) @ tensor @ np.asarray(spec.atom_b.dipole))
    lam = 2.0 * math.pi / spec.k0
    if spec.r < NEAR_FACTOR * lam:
        regime = Regime.NEAR
    elif spec.r > FAR_FACTOR * lam:
        regime = Regime.FAR
    else:
        regime = Regime.INTERMEDIATE
    return EnergyResult(value, 0.0, regime, notes="spontaneous decay neglected")
