"""Renormalized vacuum field energy densities.

Around a ground-state atom the squared fields are computed from their
imaginary-wavenumber representation

    <E^2>(r) =  (2/pi) int du alpha(iu) exp(-2ur) (x^4 + 2x^3 + 5x^2 + 6x + 3) / r^6
    <B^2>(r) = -(2/pi) int du alpha(iu) exp(-2ur) (x^4 + 2x^3 + x^2) / r^6,   x = ur,

and the energy densities are <E^2>/8pi and <B^2>/8pi. A polarizable probe in
these fields has energy -(alpha/2)<E^2> (or <B^2> for a magnetic probe), which
reproduces the far-zone two-body results.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .core import EnergyResult, Regime
from .exceptions import DomainError
from .polarizability import PolarizabilityModel, alpha_imag
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_semi_infinite
from .two_body import FAR_FACTOR, NEAR_FACTOR

__all__ = [
    "FIELDS",
    "DensityProfile",
    "squared_field",
    "density_around_atom",
    "density_profile",
    "density_route_energy",
    "plate_density",
]

FIELDS = ("electric", "magnetic")


@dataclass(frozen=True)
class DensityProfile:
    radii: tuple[float, ...]
    electric: tuple[float, ...]
    magnetic: tuple[float, ...]
    representation: str

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "electric_density", "magnetic_density", "representation"])
        for row in zip(self.radii, self.electric, self.magnetic):
            w.writerow([f"{x:.17g}" for x in row] + [self.representation])
        return buf.getvalue()


def _check(field: str, r: float) -> None:
    if field not in FIELDS:
        raise DomainError(f"field must be one of {FIELDS}")
    if not r > 0:
        raise DomainError("r must be positive")


def _far_coefficient(field: str) -> float:
    # static-polarizability values of the two x-integrals
    return 23.0 / 4.0 if field == "electric" else -7.0 / 4.0


def squared_field(model: PolarizabilityModel, r: float, field: str,
                  quad: QuadratureSpec = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """<E^2> or <B^2> at distance r from the atom, with an error estimate."""
    _check(field, r)
    if not model.has_transitions:
        return (2.0 / math.pi) * model.alpha_static * _far_coefficient(field) / r**7, 0.0
    if field == "electric":
        def poly(x):
            return (((x + 2.0) * x + 5.0) * x + 6.0) * x + 3.0
        sign = 1.0
    else:
        def poly(x):
            return ((x + 2.0) * x + 1.0) * x * x
        sign = -1.0

    def integrand(u):
        x = u * r
        return alpha_imag(model, u) * np.exp(-2.0 * x) * poly(x)

    k_low = min(t.k_mg for t in model.transitions)
    res = integrate_semi_infinite(integrand, quad, scale=1.0 / (2.0 * r + 1.0 / k_low))
    pref = 2.0 / (math.pi * r**6)
    return sign * pref * res.value, pref * res.error_estimate


def density_around_atom(model: PolarizabilityModel, r: float, field: str,
                        quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Renormalized energy density of the chosen field (natural units)."""
    return squared_field(model, r, field, quad)[0] / (8.0 * math.pi)


def density_profile(model: PolarizabilityModel, radii, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> DensityProfile:
    radii = tuple(float(r) for r in radii)
    representation = "rotated-single-integral" if model.has_transitions else "far-closed-form"
    return DensityProfile(
        radii,
        tuple(density_around_atom(model, r, "electric", quad) for r in radii),
        tuple(density_around_atom(model, r, "magnetic", quad) for r in radii),
        representation,
    )


def density_route_energy(source: PolarizabilityModel, probe_alpha: float, probe_kind: str, r: float,
                         quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EnergyResult:
    """Energy of a static probe in the dressed vacuum around ``source``.

    The probe picture holds in the far zone only; elsewhere the result is
    returned with an ``outside-far-zone`` flag.
    """
    field = {"electric": "electric", "magnetic": "magnetic"}.get(probe_kind)
    if field is None:
        raise DomainError("probe_kind must be 'electric' or 'magnetic'")
    value, err = squared_field(source, r, field, quad)
    flags = ()
    regime = Regime.FAR
    lam = source.min_wavelength
    if lam is not None and r <= FAR_FACTOR * lam:
        flags = ("outside-far-zone",)
        regime = Regime.NEAR if r < NEAR_FACTOR * lam else Regime.INTERMEDIATE
    return EnergyResult(-0.5 * probe_alpha * value, 0.5 * abs(probe_alpha) * err, regime,
                        notes=f"{probe_kind} probe in the dressed vacuum", flags=flags)


def plate_density(z: float, field: str) -> float:
    """Vacuum energy density at height z above a perfect mirror; diverges at z = 0."""
    if field not in FIELDS:
        raise DomainError(f"field must be one of {FIELDS}")
    if not z > 0:
        raise DomainError("z must be positive (the density diverges at the surface)")
    sign = 1.0 if field == "electric" else -1.0
    return sign * 3.0 / (32.0 * math.pi**2 * z**4)
