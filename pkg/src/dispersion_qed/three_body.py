"""Non-additive three-body dispersion energy.

All three routines apply the F-chain to a function of the side lengths:

    dE_3 = -(1/pi) F-chain[ I(a + b + c) / (abc) ],
    I(s) = int_0^inf du alpha_A(iu) alpha_B(iu) alpha_C(iu) exp(-us).

Because the argument depends on the three vectors only through their lengths,
the radial form of the chain is exact and needs just 27 samples per step size.
The u-integral is computed on one adaptive mesh, chosen at the physical
perimeter and then frozen, so I(s) is a smooth function of s under the
finite-difference stencil. Values are memoized per perimeter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import EnergyResult, Regime, TriangleGeometry
from .exceptions import DomainError, InsufficientDataError
from .field_kernels import DEFAULT_DIFF, DiffSpec, apply_f_chain_radial
from .polarizability import (
    PolarizabilityModel,
    TwoLevelAtom,
    alpha_excited_two_level,
    alpha_imag,
    alpha_real,
)
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, exp_weighted_on_mesh, integrate_exp_weighted
from .two_body import FAR_FACTOR, NEAR_FACTOR

__all__ = [
    "TripleSpec",
    "EQUILATERAL_COEFFICIENT",
    "three_body_full",
    "three_body_far",
    "three_body_equilateral_far",
    "three_body_excited",
    "PerimeterIntegral",
]

# F-chain of 1/(abc(a+b+c)) on the unit equilateral triangle is -EQUILATERAL_COEFFICIENT
EQUILATERAL_COEFFICIENT = 2**4 * 79 / 3**5


@dataclass(frozen=True)
class TripleSpec:
    model_a: PolarizabilityModel
    model_b: PolarizabilityModel
    model_c: PolarizabilityModel
    geometry: TriangleGeometry

    @property
    def models(self) -> tuple[PolarizabilityModel, ...]:
        return self.model_a, self.model_b, self.model_c


def _regime(models, geometry: TriangleGeometry) -> Regime:
    kmax = [m.max_wavenumber for m in models if m.has_transitions]
    if not kmax:
        return Regime.FAR
    lam = 2.0 * math.pi / max(kmax)
    if max(geometry.sides) < NEAR_FACTOR * lam:
        return Regime.NEAR
    if min(geometry.sides) > FAR_FACTOR * lam:
        return Regime.FAR
    return Regime.INTERMEDIATE


class PerimeterIntegral:
    """I(s) = int g(u) exp(-us) du on a mesh frozen at ``s_center``.

    ``g`` must accept longdouble arrays of any shape. Results are cached per
    s rounded to 12 significant digits.
    """

    def __init__(self, g: Callable, s_center: float, quad: QuadratureSpec = DEFAULT_QUADRATURE):
        self._g = g
        reference = integrate_exp_weighted(lambda u: np.asarray(g(u), dtype=float), s_center, quad)
        self.mesh = reference.breakpoints
        self.rel_error = reference.error_estimate / abs(reference.value) if reference.value else 0.0
        self._cache: dict[float, np.longdouble] = {}

    @staticmethod
    def _key(s) -> float:
        return float(f"{float(s):.11e}")

    def __call__(self, s):
        s = np.asarray(s, dtype=np.longdouble)
        keys = [self._key(x) for x in s.ravel()]
        missing = {}
        for k, x in zip(keys, s.ravel()):
            if k not in self._cache and k not in missing:
                missing[k] = x
        if missing:
            kron, _ = exp_weighted_on_mesh(self._g, list(missing.values()), self.mesh, dtype=np.longdouble)
            self._cache.update(zip(missing.keys(), kron))
        return np.array([self._cache[k] for k in keys], dtype=np.longdouble).reshape(s.shape)

    @property
    def cache_size(self) -> int:
        return len(self._cache)


def _product_alpha(fns: list[Callable]) -> Callable:
    def g(u):
        out = fns[0](u)
        for fn in fns[1:]:
            out = out * fn(u)
        return out
    return g


def _dispersive(alpha_fns: list[Callable], geometry: TriangleGeometry, quad: QuadratureSpec,
                diff: DiffSpec) -> tuple[float, float]:
    """-(1/pi) F-chain[I(a+b+c)/(abc)] and its error estimate."""
    integral = PerimeterIntegral(_product_alpha(alpha_fns), sum(geometry.sides), quad)

    def f(a, b, c):
        return integral(a + b + c) / (a * b * c)

    chain, err = apply_f_chain_radial(f, geometry, diff, with_error=True)
    err += abs(chain) * integral.rel_error
    return -chain / math.pi, err / math.pi


def three_body_full(spec: TripleSpec, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                    diff: DiffSpec = DEFAULT_DIFF) -> EnergyResult:
    """Three-body energy with dynamic polarizabilities, valid at any size."""
    for m in spec.models:
        if not m.has_transitions:
            raise InsufficientDataError("three_body_full needs transition-based models")
        if m.kind != "electric":
            raise DomainError("three-body energies are implemented for electric dipoles only")
    if any(m.alpha_static == 0 for m in spec.models):
        return EnergyResult(0.0, 0.0, _regime(spec.models, spec.geometry), notes="vanishing polarizability")
    fns = [lambda u, m=m: alpha_imag(m, u) for m in spec.models]
    value, err = _dispersive(fns, spec.geometry, quad, diff)
    return EnergyResult(value, err, _regime(spec.models, spec.geometry), notes="radial F-chain of the u-integral")


def three_body_far(alphas, geometry: TriangleGeometry, diff: DiffSpec = DEFAULT_DIFF) -> EnergyResult:
    """Static-polarizability three-body energy for an arbitrary triangle."""
    aa, ab, ac = (float(x) for x in alphas)
    product = aa * ab * ac

    def f(a, b, c):
        return 1 / (a * b * c * (a + b + c))

    chain, err = apply_f_chain_radial(f, geometry, diff, with_error=True)
    return EnergyResult(-product * chain / math.pi, abs(product) * err / math.pi, Regime.FAR,
                        notes="static polarizabilities")


def three_body_equilateral_far(alphas, r: float) -> float:
    """Closed form for the equilateral triangle of side r (repulsive)."""
    if not r > 0:
        raise DomainError("r must be positive")
    aa, ab, ac = (float(x) for x in alphas)
    return EQUILATERAL_COEFFICIENT * aa * ab * ac / (math.pi * r**10)


def three_body_excited(atom_a: TwoLevelAtom, model_b: PolarizabilityModel, model_c: PolarizabilityModel,
                       geometry: TriangleGeometry, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                       diff: DiffSpec = DEFAULT_DIFF) -> EnergyResult:
    """Three-body energy with atom A in its excited state.

    ``terms`` holds ``resonant`` (real photon exchange at k0, oscillating in
    the distances) and ``dispersive`` (the ground-state structure with A's
    polarizability replaced by the excited one). The dipole of A enters
    isotropically averaged as |mu|^2 / 3. Spontaneous decay of A is ignored.
    """
    for m in (model_b, model_c):
        if not m.has_transitions:
            raise InsufficientDataError("models B and C need transitions")
    k0 = atom_a.k0
    mu2 = atom_a.dipole_squared
    regime = _regime((atom_a.ground_state_model(), model_b, model_c), geometry)
    note = "excited-state lifetime neglected"
    if mu2 == 0:
        return EnergyResult(0.0, 0.0, regime, notes=note, terms={"resonant": 0.0, "dispersive": 0.0, "total": 0.0})

    ab_k0 = alpha_real(model_b, k0)
    ac_k0 = alpha_real(model_c, k0)

    def osc(a, b, c):
        return (np.cos(k0 * (b - c + a)) + np.cos(k0 * (b - c - a))) / (a * b * c)

    scale = min(min(geometry.sides), 1.0 / k0)
    chain, chain_err = apply_f_chain_radial(osc, geometry, diff, length_scale=scale, with_error=True)
    pref = -(mu2 / 3.0) * ab_k0 * ac_k0
    resonant, resonant_err = pref * chain, abs(pref) * chain_err

    fns = [lambda u: alpha_excited_two_level(atom_a, u),
           lambda u: alpha_imag(model_b, u),
           lambda u: alpha_imag(model_c, u)]
    dispersive, dispersive_err = _dispersive(fns, geometry, quad, diff)
    total = resonant + dispersive
    return EnergyResult(total, resonant_err + dispersive_err, regime, notes=note,
                        terms={"resonant": resonant, "dispersive": dispersive, "total": total},
                        flags=("spontaneous-decay-neglected",))
