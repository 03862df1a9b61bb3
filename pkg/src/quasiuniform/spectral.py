"""Quantization: the phase integral and the spectral energies E_sp(n, l).

The bound-state condition is

    integral_{r-}^{r+} sign(Q') * Im Y(r; +i) dr = pi (n + 1/3) + phi_target

with phi_target = phi_l from the boundary match for l >= 1, and pi/2 for
l = 0, where the problem reduces to the odd states of the symmetric
one-dimensional well (a node sits at the origin).

The integrand sign(Q')*Im Y is the continuous branch of the oscillation
rate across the stationary point of Q; it is evaluated as sign * imaginary
part directly, never as the complex difference of the two branches, which
would be identical by conjugation but cost a second Airy evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .airy import BranchSelector
from .core import branch_values, solve_boundary_match
from .problem import (
    DegenerateWellError,
    LevelKey,
    ProblemSetup,
    effective_minimum,
    effective_profile,
)
from .quadrature import IntegralSpec, integrate

__all__ = [
    "QuantizationResult",
    "BracketingError",
    "phase_integral",
    "phase_target",
    "wkb_energy_guess",
    "solve_level",
]

_PLUS_I = BranchSelector.plus_i()

# Phase integrals are pushed well below the downstream 1e-10 consistency
# targets so that the E-root, not the quadrature, limits accuracy.
_PHASE_SPEC = IntegralSpec(rel_tol=1e-12, abs_tol=1e-13)


class BracketingError(RuntimeError):
    """Could not enclose the quantization target in energy."""

    def __init__(self, msg, history=None):
        super().__init__(msg)
        self.history = history or []


def phase_target(level: LevelKey) -> float:
    """pi(n + 1/3) + phi_l, with the l = 0 node-at-origin value pi/2."""
    if level.l >= 1:
        phi = solve_boundary_match(level.l).phi_l
    else:
        phi = math.pi / 2.0
    return math.pi * (level.n + 1.0 / 3.0) + phi


def phase_integral(setup: ProblemSetup, l: int, energy: float) -> float:
    """Accumulated oscillation phase across the well at this energy."""
    profile = effective_profile(setup, l, energy)

    def f(r):
        _, b1, b2, y1, y2 = branch_values(profile, r, _PLUS_I)
        q1 = np.sign(b1)
        return q1 * (b1 * y1 + b2 * y2).imag

    if l >= 1:
        v1, _ = integrate(f, profile.r_minus, profile.r_star, _PHASE_SPEC)
        v2, _ = integrate(f, profile.r_star, profile.r_plus, _PHASE_SPEC)
        return v1 + v2
    v, _ = integrate(f, 0.0, profile.r_plus, _PHASE_SPEC)
    return v


@dataclass(frozen=True)
class QuantizationResult:
    """A solved level: E_sp with the bracket and iteration count behind it."""

    level: LevelKey
    e_sp: float
    phase_at_e: float
    bracket: tuple
    iterations: int


def wkb_energy_guess(setup: ProblemSetup, level: LevelKey) -> float:
    """Lowest-order phase-integral estimate, good to O(10%) for seeding.

    For V = alpha r^k the leading action integral scales as E^(1/k + 1/2),
    so invert pi(n + 3/4) ~ C(k) E^(1/k + 1/2) using the exact one-turning-
    point constant; the centrifugal term only shifts this, which the
    bracket expansion absorbs.
    """
    tm = 2.0 * setup.mass
    # integral_0^(E/alpha)^(1/k) sqrt(2m(E - alpha r^k))/hbar dr
    #   = sqrt(2mE) (E/alpha)^(1/k) B(1/k, 3/2) / (k hbar)
    k = setup.k
    beta = math.gamma(1.0 / k) * math.gamma(1.5) / math.gamma(1.0 / k + 1.5)
    c = math.sqrt(tm) * beta / (k * setup.hbar * setup.alpha ** (1.0 / k))
    expo = 1.0 / k + 0.5
    target = math.pi * (level.n + 0.75 + 0.5 * level.l)
    return (target / c) ** (1.0 / expo)


def solve_level(setup: ProblemSetup, level: LevelKey) -> QuantizationResult:
    """Solve the quantization condition for E_sp(n, l).

    Brackets the target phase by geometric expansion from a lowest-order
    estimate (checking monotonicity of phase in E along the way), then
    refines with bisection/secant safeguarding to |dE|/E <= 1e-12.
    """
    target = phase_target(level)
    e_min = effective_minimum(setup, level.l)
    e_floor = e_min * (1.0 + 1e-9) if e_min > 0.0 else 1e-12

    guess = max(wkb_energy_guess(setup, level), e_floor * 2.0)
    history = []

    def phase(e):
        v = phase_integral(setup, level.l, e)
        history.append((e, v))
        return v

    e_hi = guess
    f_hi = phase(e_hi)
    grow = 0
    while f_hi < target:
        e_hi = e_floor + (e_hi - e_floor) * 2.0
        f_hi = phase(e_hi)
        grow += 1
        if grow > 200:
            raise BracketingError(
                f"phase target {target!r} not reached by E={e_hi!r}", history
            )
    e_lo = min(guess, e_hi)
    f_lo = phase(e_lo)
    shrink = 0
    while f_lo > target:
        e_lo = e_floor + (e_lo - e_floor) * 0.5
        f_lo = phase(e_lo)
        shrink += 1
        if shrink > 200:
            raise BracketingError(
                f"phase target {target!r} not undercut above the well "
                f"minimum {e_min!r}", history
            )

    # one-time monotonicity check over everything seen so far
    seen = sorted(history)
    for (ea, pa), (eb, pb) in zip(seen, seen[1:]):
        if eb > ea and pb < pa - 1e-9:
            raise BracketingError(
                f"phase integral not monotone in E between {ea!r} and {eb!r}",
                history,
            )

    bracket = (e_lo, e_hi)
    if f_lo == target:
        e_sp, iters = e_lo, 0
    else:
        e_sp, info = brentq(
            lambda e: phase(e) - target,
            e_lo,
            e_hi,
            xtol=1e-13 * max(e_lo, 1e-6),
            rtol=1e-13,
            full_output=True,
        )
        iters = info.iterations
    return QuantizationResult(
        level=level,
        e_sp=float(e_sp),
        phase_at_e=phase_integral(setup, level.l, e_sp),
        bracket=bracket,
        iterations=iters,
    )
