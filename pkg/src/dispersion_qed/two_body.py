"""Two-atom dispersion energy.

The production route is the imaginary-wavenumber integral

    dE(r) = -(1/pi) int_0^inf du alpha_A(iu) alpha_B(iu) exp(-2ur) P(ur) / r^6,
    P(x)  = x^4 + 2x^3 + 5x^2 + 6x + 3,

valid at every separation. ``cp_via_correlation`` reaches the same number
from the induced-dipole correlation picture: it evaluates the complex dipole
tensor G_ij(k, r) at k = iu and integrates the rotated mode sum, so it shares
no integrand code with ``cp_full``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import COINCIDENCE_THRESHOLD, EnergyResult, Regime
from .exceptions import ConsistencyError, DomainError, InsufficientDataError
from .field_kernels import g_tensor
from .polarizability import PolarizabilityModel, alpha_imag
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_semi_infinite

__all__ = [
    "PairSpec",
    "RegimeReport",
    "NEAR_FACTOR",
    "FAR_FACTOR",
    "THERMAL_FACTOR",
    "CORRELATION_TOLERANCE",
    "cp_full",
    "london_near",
    "cp_far",
    "cp_far_electric_magnetic",
    "cp_via_correlation",
    "classify_regime",
]

# zone thresholds in units of the shortest transition wavelength
NEAR_FACTOR = 1e-2
FAR_FACTOR = 1e2
# r beyond this multiple of the thermal length counts as thermally dominated
THERMAL_FACTOR = 10.0
CORRELATION_TOLERANCE = 1e-6


@dataclass(frozen=True)
class PairSpec:
    model_a: PolarizabilityModel
    model_b: PolarizabilityModel
    r: float

    def __post_init__(self):
        if not self.r > COINCIDENCE_THRESHOLD:
            raise DomainError("separation r must be positive")
        if self.model_a.kind == "magnetic" and self.model_b.kind == "magnetic":
            raise DomainError("at most one atom of the pair may be magnetic")

    @property
    def both_electric(self) -> bool:
        return self.model_a.kind == "electric" and self.model_b.kind == "electric"

    def swapped(self) -> "PairSpec":
        return PairSpec(self.model_b, self.model_a, self.r)


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    zone: Regime
    lambda_min: float | None
    rho_therm: float | None = None
    scaling: str = ""


def _require_dynamic(*models: PolarizabilityModel) -> None:
    for m in models:
        if not m.has_transitions:
            raise InsufficientDataError(f"model {m.name or '<unnamed>'} has no transitions")


def _require_electric(pair: PairSpec) -> None:
    if not pair.both_electric:
        raise DomainError("this route needs two electric-dipole atoms")


def _u_scale(pair: PairSpec) -> float:
    """Width of the integrand in u: the smaller of 1/2r and the lowest k_mg."""
    k_low = min(t.k_mg for m in (pair.model_a, pair.model_b) for t in m.transitions)
    return 1.0 / (2.0 * pair.r + 1.0 / k_low)


def cp_full(pair: PairSpec, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> EnergyResult:
    """Dispersion energy at any separation (always <= 0)."""
    _require_electric(pair)
    _require_dynamic(pair.model_a, pair.model_b)
    r = pair.r

    def integrand(u):
        x = u * r
        poly = (((x + 2.0) * x + 5.0) * x + 6.0) * x + 3.0
        return alpha_imag(pair.model_a, u) * alpha_imag(pair.model_b, u) * np.exp(-2.0 * x) * poly

    res = integrate_semi_infinite(integrand, quad, scale=_u_scale(pair))
    pref = 1.0 / (math.pi * r**6)
    report = classify_regime(pair.model_a, pair.model_b, r)
    return EnergyResult(-pref * res.value, pref * res.error_estimate, report.regime,
                        notes="imaginary-axis integral", terms={"evaluations": res.evaluations})


def london_near(model_a: PolarizabilityModel, model_b: PolarizabilityModel, r: float) -> float:
    """Non-retarded (London) limit, -(2/3) sum mu2_p mu2_s / (k_p + k_s) / r^6."""
    _require_dynamic(model_a, model_b)
    if not r > 0:
        raise DomainError("r must be positive")
    c6 = sum(p.mu2 * s.mu2 / (p.k_mg + s.k_mg) for p in model_a.transitions for s in model_b.transitions)
    return -(2.0 / 3.0) * c6 / r**6


def cp_far(alpha_a: float, alpha_b: float, r: float) -> float:
    """Retarded far-zone energy -23 alpha_A alpha_B / (4 pi r^7)."""
    if not r > 0:
        raise DomainError("r must be positive")
    return -23.0 * alpha_a * alpha_b / (4.0 * math.pi * r**7)


def cp_far_electric_magnetic(alpha_e: float, alpha_m: float, r: float) -> float:
    """Far-zone energy between an electric and a magnetic dipole (repulsive)."""
    if not r > 0:
        raise DomainError("r must be positive")
    return 7.0 * alpha_e * alpha_m / (4.0 * math.pi * r**7)


def cp_via_correlation(pair: PairSpec, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                       tolerance: float = CORRELATION_TOLERANCE) -> EnergyResult:
    """Energy from the correlated induced dipoles, checked against ``cp_full``.

    Each mode k contributes -(1/2pi) Im[k^6 alpha_A(k) alpha_B(k) G_ij G_ij];
    the k-integral is rotated onto k = iu, where it is pole-free.
    """
    _require_electric(pair)
    _require_dynamic(pair.model_a, pair.model_b)
    r_vec = np.array([0.0, 0.0, pair.r])

    def mode(u: float) -> float:
        k = 1j * u
        g = g_tensor(k, r_vec)
        aa = alpha_imag(pair.model_a, u) * alpha_imag(pair.model_b, u)
        # dk = i du along the rotated contour
        return float(np.imag(1j * k**6 * aa * np.sum(g * g)))

    def integrand(u):
        return np.array([mode(float(x)) for x in np.ravel(u)]).reshape(np.shape(u))

    res = integrate_semi_infinite(integrand, quad, scale=_u_scale(pair))
    value = -res.value / (2.0 * math.pi)
    err = res.error_estimate / (2.0 * math.pi)
    reference = cp_full(pair, quad)
    if reference.value == 0.0:
        deviation = 0.0 if value == 0.0 else math.inf
    else:
        deviation = abs(value - reference.value) / abs(reference.value)
    if deviation > tolerance:
        raise ConsistencyError(
            f"correlation route deviates from the direct integral by {deviation:.3g} (relative)",
            best_estimate=value, error_estimate=err)
    return EnergyResult(value, err, reference.regime, notes="rotated mode sum",
                        terms={"reference": reference.value, "deviation": deviation})


def classify_regime(model_a: PolarizabilityModel, model_b: PolarizabilityModel, r: float,
                    temperature: float | None = None) -> RegimeReport:
    """Near, intermediate or far zone, plus the thermal flag when ``temperature`` is given.

    Static-only models carry no wavelength and are classified as far zone, the
    only regime in which a frequency-independent polarizability is meaningful.
    """
    if not r > 0:
        raise DomainError("r must be positive")
    kmax = [m.max_wavenumber for m in (model_a, model_b) if m.has_transitions]
    if kmax:
        lam = 2.0 * math.pi / max(kmax)
        if r < NEAR_FACTOR * lam:
            zone, scaling = Regime.NEAR, "r^-6"
        elif r > FAR_FACTOR * lam:
            zone, scaling = Regime.FAR, "r^-7"
        else:
            zone, scaling = Regime.INTERMEDIATE, ""
    else:
        lam, zone, scaling = None, Regime.FAR, "r^-7"
    if temperature is None or temperature == 0:
        return RegimeReport(zone, zone, lam, None, scaling)
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    rho = 1.0 / (2.0 * math.pi * temperature)
    if r > THERMAL_FACTOR * rho:
        return RegimeReport(Regime.THERMAL, zone, lam, rho, "proportional to T * r^-6")
    return RegimeReport(zone, zone, lam, rho, scaling)
