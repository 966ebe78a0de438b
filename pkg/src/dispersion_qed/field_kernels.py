"""Tensor kernels of the oscillating-dipole field and the F-operator chain.

``g_tensor`` is the closed form of

    G_ij(k, r) = k^-3 (delta_ij nabla^2 - d_i d_j) exp(ikr) / r

and ``v_tensor`` is minus its real part (the dimensionless potential tensor of
two dipoles oscillating at wavenumber k; multiply by k^3 for the physical
tensor).

The F-chain is the fully contracted sixth-order operator

    sum_{ijl} F^a_ij F^b_jl F^c_li f(a, b, c),   F^x_mn = -delta_mn lap_x + d^x_m d^x_n,

acting on three formally independent vectors; the physical triangle is
imposed only when the result is evaluated. Two evaluators are provided:

* :func:`apply_f_chain` differentiates an arbitrary f(a_vec, b_vec, c_vec)
  with nested central-difference Hessians in all nine Cartesian coordinates.
* :func:`apply_f_chain_radial` handles f(a, b, c) that depends on the
  vectors only through their lengths. For such f each operator reduces
  exactly to

      F^x_mn = -(delta - xx)_mn d^2/dx^2 - (delta + xx)_mn (1/x) d/dx,

  so only a 3 x 3 x 3 stencil in the lengths is needed.

Both run their stencils in extended precision (numpy.longdouble) and
Richardson-extrapolate over a geometric sequence of steps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import COINCIDENCE_THRESHOLD, TriangleGeometry, as_vector
from .exceptions import AtomInsideConductorError, DegenerateGeometryError, DifferentiationError, DomainError

__all__ = [
    "DiffSpec",
    "DEFAULT_DIFF",
    "g_tensor",
    "v_tensor",
    "apply_f_chain",
    "apply_f_chain_radial",
    "f_chain_result",
    "f_chain_at",
    "vacuum_e_correlation",
    "plate_polarization_sum",
    "SIGMA",
]

SIGMA = np.diag([1.0, 1.0, -1.0])
_I3 = np.eye(3)


@dataclass(frozen=True)
class DiffSpec:
    """Control of the nested finite differences.

    ``base_step`` is relative to the local length scale; the extrapolation
    uses ``richardson_levels`` further steps, each ``step_ratio`` times
    smaller than the last.
    """

    base_step: float = 0.09
    richardson_levels: int = 3
    step_ratio: float = 1.5
    extended_precision: bool = True

    def __post_init__(self):
        if not 1e-6 < self.base_step < 1e-1:
            raise DomainError("base_step must lie in (1e-6, 1e-1)")
        if self.richardson_levels < 1:
            raise DomainError("richardson_levels must be at least 1")
        if not 1.0 < self.step_ratio <= 4.0:
            raise DomainError("step_ratio must lie in (1, 4]")

    @property
    def dtype(self):
        return np.longdouble if self.extended_precision else np.float64


DEFAULT_DIFF = DiffSpec()


# ---------------------------------------------------------------- dipole tensors

def _unit_and_length(r_vec) -> tuple[np.ndarray, float]:
    r_vec = as_vector(r_vec, "r_vec")
    r = float(np.linalg.norm(r_vec))
    if r < COINCIDENCE_THRESHOLD:
        raise DegenerateGeometryError("the dipole tensors are singular at r = 0")
    return r_vec / r, r


def g_tensor(k, r_vec, part: str = "full-complex") -> np.ndarray:
    """G_ij(k, r). ``part`` is one of 'full-complex', 'real', 'imag'.

    The full complex form also accepts complex ``k`` (with Im k >= 0), which is
    how the imaginary-axis routes evaluate it.
    """
    rhat, r = _unit_and_length(r_vec)
    transverse = _I3 - np.outer(rhat, rhat)
    dipolar = _I3 - 3.0 * np.outer(rhat, rhat)
    if part == "full-complex":
        if k == 0 or np.imag(k) < 0:
            raise DomainError("k must be non-zero with non-negative imaginary part")
        x = complex(k) * r
        return (transverse / x + dipolar * (1j / x**2 - 1.0 / x**3)) * np.exp(1j * x)
    if np.iscomplexobj(k) or not k > 0:
        raise DomainError("real and imaginary selectors need real k > 0")
    x = float(k) * r
    c, s = math.cos(x), math.sin(x)
    if part == "real":
        return transverse * (c / x) - dipolar * (s / x**2 + c / x**3)
    if part == "imag":
        return transverse * (s / x) + dipolar * (c / x**2 - s / x**3)
    raise DomainError(f"unknown part {part!r}")


def v_tensor(k, r_vec) -> np.ndarray:
    """Dimensionless potential tensor V_ij(k, r) = -Re G_ij(k, r)."""
    return -g_tensor(k, r_vec, "real")


# ---------------------------------------------------------------- Richardson

def _extrapolate(level_value: Callable[[float], float], spec: DiffSpec, scale: float) -> tuple[float, float]:
    """Neville-tableau extrapolation in even powers of the step.

    Returns the diagonal entry with the smallest successive difference and
    that difference as the error estimate. Fails if the diagonal never
    contracts by at least a factor 0.9.
    """
    q = spec.step_ratio
    rows: list[list] = []
    diag = []
    for k in range(spec.richardson_levels + 1):
        h = spec.base_step * scale / q**k
        row = [level_value(h)]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - rows[k - 1][j - 1]) / (q ** (2 * j) - 1))
        rows.append(row)
        diag.append(row[-1])
    diffs = [abs(diag[k] - diag[k - 1]) for k in range(1, len(diag))]
    magnitude = max(abs(d) for d in diag)
    tiny = 64 * np.finfo(float).eps * magnitude
    if len(diffs) >= 2 and diffs[0] > tiny:
        ratios = [diffs[k] / diffs[k - 1] if diffs[k - 1] > tiny else 0.0 for k in range(1, len(diffs))]
        if min(ratios) > 0.9:
            raise DifferentiationError(
                "Richardson sequence does not converge (successive-level ratios "
                + ", ".join(f"{x:.3g}" for x in ratios) + ")",
                best_estimate=float(diag[-1]), error_estimate=float(diffs[-1]))
    best = 1 + int(np.argmin(diffs))
    return float(diag[best]), float(diffs[best - 1])


# ---------------------------------------------------------------- full vector F-chain

def _hessian_stencil() -> tuple[np.ndarray, np.ndarray]:
    """Offsets (n, 3) and F-operator weights (n, 3, 3) for unit step."""
    table: dict[tuple, np.ndarray] = {}

    def add(offset, m, n, w):
        key = tuple(int(x) for x in offset)
        table.setdefault(key, np.zeros((3, 3)))[m, n] += w

    for m in range(3):
        add(_I3[m], m, m, 1.0)
        add(-_I3[m], m, m, 1.0)
        add(0 * _I3[m], m, m, -2.0)
    for m, n in itertools.permutations(range(3), 2):
        for sm, sn in itertools.product((1, -1), repeat=2):
            add(sm * _I3[m] + sn * _I3[n], m, n, sm * sn / 4.0)
    offsets = np.array(list(table.keys()), dtype=float)
    hess = np.array(list(table.values()))
    f_weights = np.array([-np.trace(h) * _I3 + h for h in hess])
    return offsets, f_weights


_OFFSETS, _F_WEIGHTS = _hessian_stencil()
_CHAIN_WEIGHTS = np.einsum("aij,bjl,cli->abc", _F_WEIGHTS, _F_WEIGHTS, _F_WEIGHTS)
_NONZERO = np.nonzero(np.abs(_CHAIN_WEIGHTS) > 1e-15)
_CHAIN_W = _CHAIN_WEIGHTS[_NONZERO]


def _call_vectorized(f, *args):
    try:
        vals = np.asarray(f(*args))
        if vals.shape != args[0].shape[:-1]:
            raise TypeError
        return vals
    except (TypeError, ValueError):
        return np.array([f(*(a[i] for a in args)) for i in range(args[0].shape[0])])


def apply_f_chain(f: Callable, geometry: TriangleGeometry, spec: DiffSpec = DEFAULT_DIFF,
                  length_scale: float | None = None) -> float:
    """Contracted F-chain of ``f(a_vec, b_vec, c_vec)`` at the triangle's
    side vectors (alpha_vec, beta_vec, gamma_vec).

    ``f`` receives arrays of shape (n, 3) and should return shape (n,);
    scalar-only callables are looped over. Steps are relative to
    ``length_scale`` (default: shortest side).
    """
    return f_chain_result(f, geometry, spec, length_scale)[0]


def f_chain_result(f: Callable, geometry: TriangleGeometry, spec: DiffSpec = DEFAULT_DIFF,
                   length_scale: float | None = None) -> tuple[float, float]:
    """Like :func:`apply_f_chain` but also returns the error estimate."""
    return f_chain_at(f, (geometry.alpha_vec, geometry.beta_vec, geometry.gamma_vec), spec, length_scale)


def f_chain_at(f: Callable, vectors, spec: DiffSpec = DEFAULT_DIFF,
               length_scale: float | None = None) -> tuple[float, float]:
    """F-chain of ``f`` at three arbitrary non-zero vectors, with error estimate."""
    dt = spec.dtype
    centers = [np.asarray(v, dtype=dt) for v in vectors]
    norms = [float(np.linalg.norm(np.asarray(v, dtype=float))) for v in vectors]
    if min(norms) < COINCIDENCE_THRESHOLD:
        raise DegenerateGeometryError("F-chain arguments must be non-zero vectors")
    scale = length_scale if length_scale is not None else min(norms)
    offsets = _OFFSETS.astype(dt)
    ia, ib, ic = _NONZERO
    weights = _CHAIN_W.astype(dt)

    def level(h):
        h = dt(h)
        vals = _call_vectorized(
            f,
            centers[0] + h * offsets[ia],
            centers[1] + h * offsets[ib],
            centers[2] + h * offsets[ic],
        ).astype(dt)
        return (weights * vals).sum() / h**6

    return _extrapolate(level, spec, scale)


# ---------------------------------------------------------------- radial F-chain

def _radial_coefficients(geometry: TriangleGeometry) -> dict[str, float]:
    """tr(X_a Y_b Z_c) for X, Y, Z in {P = 1 - uu, Q = 1 + uu}."""
    mats = []
    for v in (geometry.alpha_vec, geometry.beta_vec, geometry.gamma_vec):
        u = v / np.linalg.norm(v)
        uu = np.outer(u, u)
        mats.append({"P": _I3 - uu, "Q": _I3 + uu})
    return {x + y + z: float(np.trace(mats[0][x] @ mats[1][y] @ mats[2][z]))
            for x, y, z in itertools.product("PQ", repeat=3)}


def apply_f_chain_radial(f: Callable, geometry: TriangleGeometry, spec: DiffSpec = DEFAULT_DIFF,
                         length_scale: float | None = None, with_error: bool = False):
    """F-chain of a function of the three side lengths, ``f(a, b, c)``.

    ``f`` is called with three broadcastable arrays. Pass a ``length_scale``
    shorter than the shortest side when f varies faster than the geometry
    (e.g. oscillates with wavenumber k: use ~1/k).
    """
    dt = spec.dtype
    lengths = [dt(x) for x in geometry.sides]
    scale = length_scale if length_scale is not None else min(geometry.sides)
    coeff = _radial_coefficients(geometry)
    o = np.array([-1, 0, 1], dtype=dt)
    d1 = np.array([-0.5, 0.0, 0.5], dtype=dt)
    d2 = np.array([1.0, -2.0, 1.0], dtype=dt)

    def level(h):
        h = dt(h)
        grid = np.meshgrid(*(x + h * o for x in lengths), indexing="ij", sparse=True)
        vals = np.broadcast_to(np.asarray(f(*grid), dtype=dt), (3, 3, 3))
        stencils = [{"P": -d2 / h**2, "Q": -d1 / (h * x)} for x in lengths]
        total = dt(0)
        for key, c in coeff.items():
            if c == 0.0:
                continue
            total += dt(c) * np.einsum("ijk,i,j,k->", vals, stencils[0][key[0]],
                                       stencils[1][key[1]], stencils[2][key[2]])
        return total

    value, err = _extrapolate(level, spec, scale)
    return (value, err) if with_error else value


# ---------------------------------------------------------------- vacuum correlations

def vacuum_e_correlation(r_vec) -> np.ndarray:
    """Equal-time vacuum correlation <E_i(r') E_j(r'')> at separation r_vec
    (hbar c = 1): -(4/pi) (delta_ij - 2 r_i r_j) / r^4."""
    rhat, r = _unit_and_length(r_vec)
    return -(4.0 / math.pi) * (_I3 - 2.0 * np.outer(rhat, rhat)) / r**4


def plate_polarization_sum(k_vec, pos_a, pos_b) -> np.ndarray:
    """Polarization sum of the mode functions of a perfectly conducting plate
    at z = 0, for mode wavevector ``k_vec``; a complex 3 x 3 array."""
    k_vec = as_vector(k_vec, "k_vec")
    a = as_vector(pos_a, "pos_A")
    b = as_vector(pos_b, "pos_B")
    if a[2] <= 0 or b[2] <= 0:
        raise AtomInsideConductorError("both points must lie above the plate (z > 0)")
    k = np.linalg.norm(k_vec)
    if k == 0:
        raise DomainError("k_vec must be non-zero")
    khat = k_vec / k
    transverse = _I3 - np.outer(khat, khat)
    direct = transverse * np.exp(1j * k_vec @ (a - b))
    image = SIGMA @ transverse * np.exp(1j * k_vec @ (a - SIGMA @ b))
    return direct - image
