"""Adaptive quadrature on the half line [0, inf).

The half line is compactified with u = L t / (1 - t), t in [0, 1), and the
resulting finite integral is computed by adaptive bisection with the
Gauss-Kronrod 7/15 pair on each panel. The rule is open, so neither t = 0 nor
t = 1 is ever sampled, which takes care of mild endpoint singularities and
of the point at infinity.

Integrands are called with numpy arrays of abscissae. A scalar-only callable
also works, it is just evaluated point by point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import ConvergenceError, DomainError, IntegrandDomainError

__all__ = [
    "QuadratureSpec",
    "IntegralResult",
    "DEFAULT_QUADRATURE",
    "integrate_semi_infinite",
    "integrate_exp_weighted",
    "exp_weighted_on_mesh",
]

# Gauss-Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# 7-point Gauss weights, attached to _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]

_INITIAL_PANELS = 8


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate_semi_infinite` and friends."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-30
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-2:
            raise DomainError("rel_tol must lie in (0, 1e-2]")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be non-negative")
        if self.max_subdivisions < 10:
            raise DomainError("max_subdivisions must be at least 10")


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    evaluations: int
    # panel edges in the compactified variable, reusable by exp_weighted_on_mesh
    breakpoints: tuple[float, ...] = ()


def _evaluate(f: Callable, u: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(u))
        if vals.shape != u.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([f(x) for x in u.ravel()]).reshape(u.shape)
    return vals.astype(u.dtype if u.dtype == np.longdouble else float, copy=False)


def _panel_rules(h: Callable, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = center[:, None] + half[:, None] * NODES[None, :]
    vals = h(t)
    if np.any(np.isnan(vals)):
        bad = t[np.isnan(vals)][0]
        raise IntegrandDomainError(f"integrand returned NaN at compactified abscissa t={bad:.6g}")
    kron = half * (vals @ KRONROD_WEIGHTS)
    gauss = half * (vals @ GAUSS_WEIGHTS)
    return kron, gauss


def _adaptive(h: Callable, spec: QuadratureSpec) -> IntegralResult:
    edges = np.linspace(0.0, 1.0, _INITIAL_PANELS + 1)
    a, b = edges[:-1], edges[1:]
    kron, gauss = _panel_rules(h, a, b)
    evaluations = 15 * a.size
    eps = np.finfo(float).eps
    while True:
        err = np.abs(kron - gauss)
        total = float(kron.sum())
        total_err = float(err.sum())
        # roundoff floor: relative accuracy below a few ulps of sum|K| is unattainable
        floor = 50 * eps * float(np.abs(kron).sum())
        tol = max(spec.rel_tol * abs(total), spec.abs_tol, floor)
        if total_err <= tol:
            edges = np.concatenate([a, b[-1:]])
            order = np.argsort(edges)
            return IntegralResult(total, total_err, evaluations, tuple(edges[order].tolist()))
        if a.size >= spec.max_subdivisions:
            raise ConvergenceError(
                f"no convergence within {spec.max_subdivisions} subdivisions "
                f"(estimate {total:.6g} +/- {total_err:.3g})",
                best_estimate=total, error_estimate=total_err)
        share = tol / a.size
        split = err > share
        budget = spec.max_subdivisions - a.size
        if split.sum() > budget:
            worst = np.argsort(err)[::-1][:budget]
            split = np.zeros_like(split)
            split[worst] = True
        mid = 0.5 * (a[split] + b[split])
        if np.any((mid <= a[split]) | (mid >= b[split])):
            raise ConvergenceError("panels cannot be bisected further",
                                   best_estimate=total, error_estimate=total_err)
        na = np.concatenate([a[split], mid])
        nb = np.concatenate([mid, b[split]])
        nk, ng = _panel_rules(h, na, nb)
        evaluations += 15 * na.size
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        kron = np.concatenate([kron[keep], nk])
        gauss = np.concatenate([gauss[keep], ng])


def integrate_semi_infinite(f: Callable, spec: QuadratureSpec = DEFAULT_QUADRATURE,
                            scale: float = 1.0) -> IntegralResult:
    """Integrate ``f`` over [0, inf).

    ``scale`` sets where the compactified midpoint t = 1/2 lands (u = scale).
    """
    if not scale > 0:
        raise DomainError("scale must be positive")

    def h(t):
        w = 1.0 - t
        return _evaluate(f, scale * t / w) * (scale / (w * w))

    return _adaptive(h, spec)


def integrate_exp_weighted(g: Callable, decay: float,
                           spec: QuadratureSpec = DEFAULT_QUADRATURE) -> IntegralResult:
    """Integrate ``g(u) * exp(-decay * u)`` over [0, inf).

    Nodes are placed on the natural scale 1/decay, and the exponential is
    folded into the compactifying map analytically so it never underflows
    against a growing ``g``.
    """
    if not decay > 0:
        raise DomainError("decay must be positive")

    def h(t):
        w = 1.0 - t
        x = t / w
        return _evaluate(g, x / decay) * (np.exp(-x) / (decay * w * w))

    return _adaptive(h, spec)


def exp_weighted_on_mesh(g: Callable, decays, breakpoints, dtype=float) -> tuple[np.ndarray, np.ndarray]:
    """Kronrod and Gauss values of the exp-weighted integral on a frozen mesh.

    The mesh (compactified panel edges, as returned in
    ``IntegralResult.breakpoints``) is shared by every decay in ``decays``,
    so the result is a smooth function of the decay rate. That is what makes
    it safe to differentiate numerically. ``g`` must broadcast over 2-D
    arrays of shape (len(decays), n_nodes).
    """
    decays = np.atleast_1d(np.asarray(decays, dtype=dtype))
    edges = np.asarray(breakpoints, dtype=dtype)
    a, b = edges[:-1], edges[1:]
    center = (a + b) / 2
    half = (b - a) / 2
    nodes = NODES.astype(dtype)
    t = (center[:, None] + half[:, None] * nodes[None, :]).ravel()
    wk = (half[:, None] * KRONROD_WEIGHTS.astype(dtype)[None, :]).ravel()
    wg = (half[:, None] * GAUSS_WEIGHTS.astype(dtype)[None, :]).ravel()
    w = 1 - t
    x = t / w
    jac = np.exp(-x) / (w * w)
    vals = np.asarray(g(x[None, :] / decays[:, None]), dtype=dtype) * (jac[None, :] / decays[:, None])
    if np.any(np.isnan(vals)):
        raise IntegrandDomainError("integrand returned NaN on the frozen mesh")
    return vals @ wk, vals @ wg
