"""Adaptive one-dimensional quadrature tuned for this problem family.

A 15-point Kronrod rule with embedded 7-point Gauss error estimate drives a
worst-panel-first subdivision loop.  On top of the smooth-panel core sit

* an algebraic endpoint transform for integrands ~ (r - lo)^p, p > -1,
* a principal-value integrator that subtracts the known simple-pole term
  analytically and integrates the regular remainder.

Integrands are called with node *arrays* (shape (15,) per panel) and must be
vectorized; everything here is reentrant and free of global mutable state.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "IntegralSpec",
    "ToleranceNotMetError",
    "NonFiniteIntegrandError",
    "integrate",
    "integrate_pv",
    "kronrod_panel",
    "GK_NODES",
    "GK_WEIGHTS",
]


class ToleranceNotMetError(RuntimeError):
    """Panel budget exhausted before the error target was reached."""

    def __init__(self, value, err_est, n_evals):
        super().__init__(
            f"quadrature tolerance not met: value={value!r}, "
            f"err_est={err_est!r} after {n_evals} evaluations"
        )
        self.value = value
        self.err_est = err_est
        self.n_evals = n_evals


class NonFiniteIntegrandError(ValueError):
    """Integrand returned NaN/inf at an interior point."""

    def __init__(self, x):
        super().__init__(f"integrand is not finite at x={x!r}")
        self.x = x


@dataclass(frozen=True)
class IntegralSpec:
    """Tolerances and structural hints for one integral.

    endpoint_power_hint declares an algebraic singularity (r - lo)^p at the
    lower endpoint (p > -1); pv_point marks a simple pole strictly inside
    the interval, consumed by integrate_pv.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    pv_point: Optional[float] = None
    endpoint_power_hint: Optional[float] = None
    max_evals: int = 10 ** 6

    def __post_init__(self):
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")


# 15-point Kronrod nodes/weights with the embedded 7-point Gauss weights
# (classic QUADPACK constants, symmetric half listed).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
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
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-node layout: negative nodes, center, positive nodes.
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_W_K = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_W_G = np.zeros(15)
_W_G[1:-1:2] = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])

# Shared with the cumulative-accumulator machinery elsewhere in the package.
GK_NODES = _NODES
GK_WEIGHTS = _W_K


def kronrod_panel(f, lo: float, hi: float):
    """One G7/K15 panel: returns (kronrod_value, error_estimate).

    f receives the 15 abscissae as an ndarray and must return an ndarray
    (real or complex).  The error estimate is the scaled Gauss/Kronrod
    difference used by QUADPACK.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid + half * _NODES
    y = np.asarray(f(x))
    ik = half * np.sum(_W_K * y)
    ig = half * np.sum(_W_G * y)
    resabs = half * np.sum(_W_K * np.abs(y))
    mean = 0.5 * ik / half if half != 0.0 else 0.0
    resasc = half * np.sum(_W_K * np.abs(y - mean))
    err = abs(ik - ig)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    scale = np.finfo(float).eps * 50.0 * resabs
    if scale > 0.0:
        err = max(err, scale)
    return ik, float(err), y


def _adaptive(f, lo: float, hi: float, spec: IntegralSpec):
    """Worst-first adaptive subdivision of [lo, hi]."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo!r}, {hi!r}]")

    n_evals = 0
    counter = 0

    def panel(a, b):
        nonlocal n_evals, counter
        val, err, y = kronrod_panel(f, a, b)
        n_evals += 15
        if not np.all(np.isfinite(y)):
            bad = (0.5 * (a + b) + 0.5 * (b - a) * _NODES)[~np.isfinite(y)][0]
            raise NonFiniteIntegrandError(float(bad))
        counter += 1
        return (-err, counter, a, b, val, err)

    heap = [panel(lo, hi)]
    total = heap[0][4]
    total_err = heap[0][5]
    while True:
        target = max(spec.rel_tol * abs(total), spec.abs_tol)
        if total_err <= target:
            return total, total_err, n_evals
        if n_evals + 30 > spec.max_evals:
            raise ToleranceNotMetError(total, total_err, n_evals)
        _, _, a, b, val, err = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            # interval at machine resolution; keep its estimate and stop
            # splitting it, unless it alone violates the budgeted target
            heapq.heappush(heap, (0.0, counter, a, b, val, err))
            if all(item[0] == 0.0 for item in heap):
                return total, total_err, n_evals
            continue
        left = panel(a, m)
        right = panel(m, b)
        total += left[4] + right[4] - val
        total_err += left[5] + right[5] - err
        heapq.heappush(heap, left)
        heapq.heappush(heap, right)


def integrate(f: Callable, lo: float, hi: float, spec: IntegralSpec = IntegralSpec()):
    """Adaptive integral of a vectorized integrand over [lo, hi].

    Returns (value, err_est) with err_est <= max(rel_tol*|value|, abs_tol);
    raises ToleranceNotMetError past the evaluation budget and
    NonFiniteIntegrandError on NaN/inf at an interior (non-PV) point.
    """
    if spec.endpoint_power_hint is not None:
        p = spec.endpoint_power_hint
        if p <= -1.0:
            raise ValueError("endpoint_power_hint must exceed -1")
        if p != 0.0:
            # u = (r - lo)^(p+1) regularizes f ~ (r - lo)^p at the
            # lower endpoint: r = lo + u^(1/(p+1)),
            # dr = u^(1/(p+1) - 1)/(p+1) du.
            q = 1.0 / (p + 1.0)
            u_hi = (hi - lo) ** (p + 1.0)

            def g(u):
                r = lo + u ** q
                return f(r) * q * u ** (q - 1.0)

            inner = IntegralSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                                 max_evals=spec.max_evals)
            val, err, _ = _adaptive(g, 0.0, u_hi, inner)
            return val, err
    val, err, _ = _adaptive(f, lo, hi, spec)
    return val, err


def integrate_pv(f: Callable, lo: float, hi: float, pole: float,
                 pole_coeff: float, spec: IntegralSpec = IntegralSpec()):
    """Principal value of f over [lo, hi] with a simple pole inside.

    f(r) - pole_coeff/(r - pole) must extend continuously to the pole; the
    subtracted remainder is integrated adaptively (split at the pole so it
    sits at panel endpoints, never at a quadrature node) and the exact
    principal value of the pole term, pole_coeff*log((hi-pole)/(pole-lo)),
    is added back.
    """
    if not lo < pole < hi:
        raise ValueError(f"pole {pole!r} must lie strictly inside [{lo!r}, {hi!r}]")

    if pole_coeff == 0.0:
        g = f
    else:
        def g(r):
            return f(r) - pole_coeff / (r - pole)

    half_spec = IntegralSpec(rel_tol=spec.rel_tol, abs_tol=0.5 * spec.abs_tol,
                             max_evals=spec.max_evals // 2)
    v1, e1, _ = _adaptive(g, lo, pole, half_spec)
    v2, e2, _ = _adaptive(g, pole, hi, half_spec)
    value = v1 + v2 + pole_coeff * math.log((hi - pole) / (pole - lo))
    return value, e1 + e2
