"""Ground-truth solutions: closed forms and an independent Numerov solver.

Three provenances:

* closed-form-oscillator: k = 2, E = hbar*omega*(2n + l + 3/2) with
  omega = sqrt(2 alpha / m); radial functions r^(l+1) exp(-x/2) L_n^(l+1/2)(x)
  with x = m omega r^2 / hbar, Laguerre polynomials by three-term recurrence.
* airy-zero-linear: k = 1, l = 0; E_n = -z_{n+1} (hbar^2 alpha^2 / 2m)^(1/3)
  with z_j the j-th negative zero of Ai, wavefunction a shifted Airy function.
* numerov: anything else (notably the linear potential with l >= 1).  Fourth
  order three-point recurrence on a uniform grid, origin seeded with
  r^(l+1), eigenvalue isolated by node-count bisection against the outer
  boundary, then validated by an h -> h/2 Richardson check.

All reference states are normalized and sign-fixed positive near the origin
so overlaps against the approximate states are positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .airy import airy_quad, airy_zero
from .problem import LevelKey, ProblemSetup, effective_minimum, locate_turning_points
from .quadrature import IntegralSpec, integrate
from .spectral import wkb_energy_guess

__all__ = [
    "ExactState",
    "GridTooCoarseError",
    "NumerovGrid",
    "oscillator_exact",
    "linear_exact_l0",
    "numerov_solve",
    "genlaguerre_recurrence",
]

_NORM_SPEC = IntegralSpec(rel_tol=1e-12, abs_tol=1e-16)


class GridTooCoarseError(RuntimeError):
    """Richardson check failed; carries a suggested step size."""

    def __init__(self, e_coarse, e_fine, suggested_h):
        super().__init__(
            f"Numerov energies {e_coarse!r} vs {e_fine!r} disagree beyond "
            f"tolerance; retry with h <= {suggested_h!r}"
        )
        self.suggested_h = suggested_h


@dataclass(frozen=True)
class ExactState:
    """A normalized reference eigenstate."""

    level: LevelKey
    energy: float
    eval: Callable
    eval_deriv: Callable
    provenance: str
    r_max: float


def genlaguerre_recurrence(n: int, alpha: float, x):
    """Generalized Laguerre L_n^(alpha)(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    lm2 = np.ones_like(x)
    if n == 0:
        return lm2
    lm1 = 1.0 + alpha - x
    for j in range(2, n + 1):
        lm2, lm1 = lm1, ((2.0 * j - 1.0 + alpha - x) * lm1 - (j - 1.0 + alpha) * lm2) / j
    return lm1


def oscillator_exact(setup: ProblemSetup, level: LevelKey) -> ExactState:
    """Closed-form eigenstate of V = alpha r^2 (requires k = 2)."""
    if setup.k != 2.0:
        raise ValueError(f"oscillator closed form needs k=2, got k={setup.k!r}")
    n, l = level.n, level.l
    omega = math.sqrt(2.0 * setup.alpha / setup.mass)
    energy = setup.hbar * omega * (2 * n + l + 1.5)
    beta = setup.mass * omega / setup.hbar  # x = beta r^2
    a_lag = l + 0.5

    def raw(r):
        r = np.asarray(r, dtype=float)
        x = beta * r * r
        return r ** (l + 1) * np.exp(-0.5 * x) * genlaguerre_recurrence(n, a_lag, x)

    def raw_deriv(r):
        r = np.asarray(r, dtype=float)
        x = beta * r * r
        lag = genlaguerre_recurrence(n, a_lag, x)
        # d/dx L_n^(a) = -L_{n-1}^(a+1)
        dlag = -genlaguerre_recurrence(n - 1, a_lag + 1.0, x) if n >= 1 else 0.0
        core = (l + 1) / r - beta * r
        return r ** (l + 1) * np.exp(-0.5 * x) * (core * lag + 2.0 * beta * r * dlag)

    # classical turning point of the highest excursion sets the tail scale
    r_turn = math.sqrt(energy / setup.alpha)
    r_max = r_turn + 12.0 / math.sqrt(beta)
    norm2, _ = integrate(lambda r: raw(r) ** 2, 0.0, r_max, _NORM_SPEC)
    nrm = 1.0 / math.sqrt(norm2)
    return ExactState(
        level=level,
        energy=energy,
        eval=lambda r: nrm * raw(r),
        eval_deriv=lambda r: nrm * raw_deriv(r),
        provenance="closed-form-oscillator",
        r_max=r_max,
    )


def linear_exact_l0(setup: ProblemSetup, n: int) -> ExactState:
    """Airy eigenstate of V = alpha r at l = 0 (requires k = 1)."""
    if setup.k != 1.0:
        raise ValueError(f"linear closed form needs k=1, got k={setup.k!r}")
    zero = airy_zero(n + 1)
    scale = (setup.hbar ** 2 * setup.alpha ** 2 / (2.0 * setup.mass)) ** (1.0 / 3.0)
    energy = -zero * scale
    beta = (2.0 * setup.mass * setup.alpha / setup.hbar ** 2) ** (1.0 / 3.0)

    def raw(r):
        r = np.asarray(r, dtype=float)
        return special.airy(beta * r + zero)[0]

    def raw_deriv(r):
        r = np.asarray(r, dtype=float)
        return beta * special.airy(beta * r + zero)[1]

    r_max = (-zero + 14.0) / beta
    norm2, _ = integrate(lambda r: raw(r) ** 2, 0.0, r_max, _NORM_SPEC)
    nrm = 1.0 / math.sqrt(norm2)
    sign = 1.0 if airy_quad(zero + 1e-4).ai > 0 else -1.0
    nrm *= sign
    return ExactState(
        level=LevelKey(n, 0),
        energy=energy,
        eval=lambda r: nrm * raw(r),
        eval_deriv=lambda r: nrm * raw_deriv(r),
        provenance="airy-zero-linear",
        r_max=r_max,
    )


@dataclass(frozen=True)
class NumerovGrid:
    """Grid policy for the shooting solver."""

    r_max_factor: float = 2.5
    phase_per_step: float = 0.02
    min_points: int = 4001
    richardson_tol: float = 1e-9
    max_refinements: int = 2


def _numerov_sweep(fvals, h, l):
    """Outward integration of u'' = f u; returns samples (python floats in,
    renormalized on the fly to dodge overflow)."""
    n = len(fvals)
    u = [0.0] * n
    c = h * h / 12.0
    u[1] = h ** (l + 1)
    u[2] = (2.0 * u[1] * (1.0 + 5.0 * c * fvals[1])) / (1.0 - c * fvals[2])
    for i in range(2, n - 1):
        nxt = (2.0 * u[i] * (1.0 + 5.0 * c * fvals[i])
               - u[i - 1] * (1.0 - c * fvals[i - 1])) / (1.0 - c * fvals[i + 1])
        if abs(nxt) > 1e250:
            scale = 1e-250
            for j in range(i + 1):
                u[j] *= scale
            nxt *= scale
        u[i + 1] = nxt
    return u


def _count_nodes(u):
    arr = np.asarray(u[1:])
    s = np.sign(arr[np.abs(arr) > 0.0])
    return int(np.sum(s[:-1] * s[1:] < 0.0))


def _solve_on_grid(setup, level, r_end, n_points, e_lo, e_hi):
    """Node-count bisection: nodes(E) jumps n -> n+1 exactly at E_n."""
    r = np.linspace(0.0, r_end, n_points)
    h = r[1] - r[0]
    tm = 2.0 * setup.mass
    hb2 = setup.hbar ** 2
    with np.errstate(divide="ignore"):
        pot = tm * setup.alpha * r ** setup.k
        pot[1:] += hb2 * level.l * (level.l + 1) / r[1:] ** 2
    pot[0] = 0.0

    def nodes(e):
        f = ((pot - tm * e) / hb2).tolist()
        return _count_nodes(_numerov_sweep(f, h, level.l))

    n_target = level.n
    grow = 0
    while nodes(e_hi) <= n_target:
        e_hi *= 1.5
        grow += 1
        if grow > 100:
            raise RuntimeError("node bracket expansion failed")
    while nodes(e_lo) > n_target:
        e_lo *= 0.5
        grow += 1
        if grow > 200:
            raise RuntimeError("node bracket reduction failed")
    for _ in range(80):
        mid = 0.5 * (e_lo + e_hi)
        if (e_hi - e_lo) <= 1e-13 * mid:
            break
        if nodes(mid) > n_target:
            e_hi = mid
        else:
            e_lo = mid
    return 0.5 * (e_lo + e_hi), r, h


def numerov_solve(setup: ProblemSetup, level: LevelKey,
                  grid: Optional[NumerovGrid] = None) -> ExactState:
    """Shooting solution on a uniform grid with Richardson validation.

    The step follows the phase-per-step rule h <= phase_per_step / k_max
    (floored at min_points); if halving h moves the energy by more than
    richardson_tol relative, the grid is refined up to max_refinements
    times before GridTooCoarseError is raised.
    """
    grid = grid or NumerovGrid()

    # seed window and outer radius from a leading-order phase estimate;
    # this only sizes the grid, the eigenvalue itself comes from bisection
    e_min = effective_minimum(setup, level.l)
    e_guess = max(wkb_energy_guess(setup, level), 2.0 * e_min + 1e-9)
    _, r_plus = locate_turning_points(setup, level.l, 1.5 * e_guess)
    r_end = grid.r_max_factor * r_plus
    k_max = math.sqrt(2.0 * setup.mass * 1.5 * e_guess) / setup.hbar
    n_points = max(grid.min_points, int(r_end * k_max / grid.phase_per_step) + 1)

    e_lo = e_min * (1.0 + 1e-9) if e_min > 0 else 1e-9
    e_hi = 1.2 * e_guess

    refinements = 0
    while True:
        e_coarse, _, _ = _solve_on_grid(setup, level, r_end, n_points, e_lo, e_hi)
        e_fine, r, h = _solve_on_grid(
            setup, level, r_end, 2 * n_points - 1,
            e_coarse * 0.999, e_coarse * 1.001,
        )
        if abs(e_fine - e_coarse) <= grid.richardson_tol * abs(e_fine):
            break
        refinements += 1
        if refinements > grid.max_refinements:
            raise GridTooCoarseError(e_coarse, e_fine, h / 2.0)
        n_points = 2 * n_points - 1

    # final wavefunction on the fine grid, spline-backed evaluation
    tm = 2.0 * setup.mass
    hb2 = setup.hbar ** 2
    with np.errstate(divide="ignore"):
        pot = tm * setup.alpha * r ** setup.k
        pot[1:] += hb2 * level.l * (level.l + 1) / r[1:] ** 2
    pot[0] = 0.0
    f = ((pot - tm * e_fine) / hb2).tolist()
    u = np.asarray(_numerov_sweep(f, h, level.l))
    # cut the diverging last stretch: keep up to the last sign-consistent
    # minimum of |u| beyond the outer turning point
    _, rp_f = locate_turning_points(setup, level.l, e_fine)
    i_turn = int(np.searchsorted(r, rp_f))
    tail = np.abs(u[i_turn:])
    i_cut = i_turn + int(np.argmin(tail))
    u = u[: i_cut + 1].copy()
    rr = r[: i_cut + 1]
    u[-1] = 0.0
    norm2 = simpson(u * u, x=rr)
    u /= math.sqrt(norm2)
    if u[min(10, len(u) - 1)] < 0.0:
        u = -u
    spline = CubicSpline(rr, u, bc_type="natural")
    dspline = spline.derivative()
    r_hi = float(rr[-1])

    def eval_(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= r_hi, spline(np.minimum(x, r_hi)), 0.0)

    def eval_deriv(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= r_hi, dspline(np.minimum(x, r_hi)), 0.0)

    return ExactState(
        level=level,
        energy=float(e_fine),
        eval=eval_,
        eval_deriv=eval_deriv,
        provenance="numerov",
        r_max=r_hi,
    )
