"""Atoms in front of a perfectly conducting plate at z = 0 (far zone).

``pair_near_plate`` evaluates the three-term image expression for two atoms
with static polarizabilities. ``pair_near_plate_via_correlation`` rebuilds the
same energy from the plate-modified vacuum correlation and the image-dipole
potential tensor; it exists as a consistency check, not a production path.
"""

from __future__ import annotations

import csv
import io
import itertools
import math

import numpy as np

from .core import EnergyResult, ImageGeometry, Regime, as_vector, image_geometry
from .exceptions import DomainError
from .field_kernels import SIGMA
from .two_body import FAR_FACTOR

__all__ = [
    "atom_wall",
    "pair_near_plate",
    "cross_term_bracket",
    "plate_terms",
    "breakdown_csv",
    "pair_near_plate_via_correlation",
    "BREAKDOWN_COLUMNS",
]

BREAKDOWN_COLUMNS = ("r", "r_bar", "sin2_theta", "sin2_theta_bar", "direct", "image", "cross", "total")


def atom_wall(alpha: float, z: float, lambda_min: float | None = None) -> dict:
    """Far-zone atom-plate energy and force (negative force points to the plate)."""
    if not z > 0:
        raise DomainError("z must be positive (the atom must sit above the plate)")
    flags = []
    if lambda_min is not None and z <= FAR_FACTOR * lambda_min:
        flags.append("outside-far-zone")
    return {
        "energy": -3.0 * alpha / (8.0 * math.pi * z**4),
        "force": -3.0 * alpha / (2.0 * math.pi * z**5),
        "flags": tuple(flags),
    }


def cross_term_bracket(r: float, r_bar: float, s: float, s_bar: float) -> float:
    """Polynomial multiplying the mixed r, r_bar term; non-negative on the physical domain."""
    return (r**4 * s + 5 * r**3 * r_bar * s + r**2 * r_bar**2 * (6 + s + s_bar)
            + 5 * r * r_bar**3 * s_bar + r_bar**4 * s_bar)


def plate_terms(alpha_a: float, alpha_b: float, geo: ImageGeometry) -> dict[str, float]:
    r, rb = geo.r, geo.r_bar
    aa = alpha_a * alpha_b
    direct = -23.0 * aa / (4.0 * math.pi * r**7)
    image = -23.0 * aa / (4.0 * math.pi * rb**7)
    cross = (8.0 * aa / math.pi) * cross_term_bracket(r, rb, geo.sin2_theta, geo.sin2_theta_bar) \
        / (r**3 * rb**3 * (r + rb) ** 5)
    return {"direct": direct, "image": image, "cross": cross, "total": direct + image + cross}


def pair_near_plate(alpha_a: float, alpha_b: float, pos_a, pos_b,
                    lambda_min: float | None = None) -> EnergyResult:
    """Two atoms near the plate; ``terms`` holds direct, image, cross and the geometry.

    With ``lambda_min`` given, inputs where r or r_bar is not in the far zone
    are flagged (``mixed-regime`` when only one of them is).
    """
    geo = image_geometry(pos_a, pos_b)
    t = plate_terms(alpha_a, alpha_b, geo)
    flags = []
    if lambda_min is not None:
        far = [d > FAR_FACTOR * lambda_min for d in (geo.r, geo.r_bar)]
        if not all(far):
            flags.append("mixed-regime" if any(far) else "outside-far-zone")
    terms = dict(t, r=geo.r, r_bar=geo.r_bar, sin2_theta=geo.sin2_theta, sin2_theta_bar=geo.sin2_theta_bar)
    return EnergyResult(t["total"], 0.0, Regime.FAR, notes="static polarizabilities, perfect mirror",
                        terms=terms, flags=tuple(flags))


def breakdown_csv(results) -> str:
    """CSV of the term breakdown for a sequence of ``pair_near_plate`` results."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BREAKDOWN_COLUMNS)
    for res in results:
        w.writerow([f"{res.terms[c]:.17g}" for c in BREAKDOWN_COLUMNS])
    return buf.getvalue()


# ---------------------------------------------------------------- correlation route

def _phase_expansion(x_vec: np.ndarray, left: np.ndarray | None, weight: complex):
    """weight * left @ G(k, x) as [(phase distance, {power n: tensor of k^-n})]
    for G and for its complex conjugate (phase -d)."""
    d = float(np.linalg.norm(x_vec))
    h = x_vec / d
    transverse = np.eye(3) - np.outer(h, h)
    dipolar = np.eye(3) - 3.0 * np.outer(h, h)
    coeffs = {1: transverse / d, 2: 1j * dipolar / d**2, 3: -dipolar / d**3}
    if left is not None:
        coeffs = {n: left @ c for n, c in coeffs.items()}
    return [(d, {n: weight[0] * c for n, c in coeffs.items()}),
            (-d, {n: weight[1] * np.conj(c) for n, c in coeffs.items()})]


def pair_near_plate_via_correlation(alpha_a: float, alpha_b: float, pos_a, pos_b) -> EnergyResult:
    """Far-zone plate energy from sum_k alpha_A alpha_B <E_i E_j>_k V_ij.

    The angular integral of the plate polarization sum gives
    4 pi [Im G(k, R) - sigma Im G(k, R_img)]; the potential tensor is
    V(k, r) - sigma V(k, r_img), both image terms taken along
    R_img = r_A - sigma r_B. Expanding every tensor in exp(+-ikd) / k^n, the
    k-integrals follow from int_0^inf k^m exp(ikD) dk = m! (i/D)^(m+1),
    the contour-rotated (Abel) value. Equal-distance D = 0 pieces cancel
    between G and its conjugate and are dropped.
    """
    a = as_vector(pos_a, "pos_A")
    b = as_vector(pos_b, "pos_B")
    image_geometry(a, b)  # validates heights and coincidence
    direct = a - b
    mirrored = a - SIGMA @ b
    # Im G = (G - G*)/2i,  V = -Re G = -(G + G*)/2
    corr = (_phase_expansion(direct, None, (0.5 / 1j, -0.5 / 1j))
            + _phase_expansion(mirrored, SIGMA, (-0.5 / 1j, 0.5 / 1j)))
    pot = (_phase_expansion(direct, None, (-0.5, -0.5))
           + _phase_expansion(mirrored, SIGMA, (0.5, 0.5)))
    total = 0j
    for (dc, cc), (dv, cv) in itertools.product(corr, pot):
        phase = dc + dv
        if abs(phase) <= 1e-12 * (abs(dc) + abs(dv)):
            continue
        for (n, tc), (m, tv) in itertools.product(cc.items(), cv.items()):
            power = 6 - n - m
            total += np.sum(tc * tv) * math.factorial(power) * (1j / phase) ** (power + 1)
    value = alpha_a * alpha_b * total.real / math.pi
    return EnergyResult(value, abs(alpha_a * alpha_b * total.imag) / math.pi, Regime.FAR,
                        notes="plate vacuum correlation with image potential tensor")
