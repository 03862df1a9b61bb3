"""The quasi-uniform log-derivative Y(r; t) and its boundary constants.

The approximation to the Riccati log-derivative of the radial wavefunction
is assembled from Airy log-derivatives:

    Y(r; t) = b1(r) * y1(a; t) + b2(r) * y2(a; t)

    a  = Q / (hbar^(2/3) |Q'|^(2/3))      (dimensionless Airy argument)
    b1 = Q' / (hbar^(2/3) |Q'|^(2/3))
    b2 = Q'' / Q'

Outside the well the physical solution follows a real-t branch (t = 0 on
the decaying side, t = t_l inside the centrifugal barrier); inside the well
the two complex branches t = +-i carry the oscillation.  t_l is fixed by the
requirement that r * Y(r; t_l) -> l + 1 as r -> 0, which closes into a
quadratic equation for t through the small-r limit

    c(l, t) = -(2 a_l y1(a_l; t) + 3 y2(a_l; t)) = l + 1,
    a_l = (l(l+1)/4)^(1/3).

The admissible root is the one nearest zero; the rejected root drags a zero
of Ai + t*Bi into the barrier range a in [0, a_l] and with it a pole of Y.
The matching phase is phi_l = pi/3 - arctan(t_l).

The radial derivative dY/dr is produced analytically via the chain rule and
the Airy Riccati identity y1' = a - y1^2, with

    a'  = b1 - (2/3) a b2,   b1' = (1/3) b1 b2,   b2' = Q'''/Q' - b2^2,
    dy2/da = -2 y1 y2 + (2 a y1' - y1) / 3 .

The last form is algebraically equivalent to differentiating y2 directly
but stays cancellation-free at large |a| once y1 and y2 themselves come
from the asymptotic series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .airy import BranchSelector, airy_quad, log_deriv_pair, log_deriv_triple
from .problem import EffectiveProfile, q_derivs, small_r_constant

__all__ = [
    "BranchSelector",
    "BoundaryMatch",
    "BoundaryMatchError",
    "StationaryPointError",
    "abc_coeffs",
    "y2_of",
    "log_derivative",
    "log_derivative_prime",
    "riccati_residual",
    "solve_boundary_match",
]


class StationaryPointError(ZeroDivisionError):
    """Q'(r) = 0: the (a, b1, b2) map is singular at this radius."""

    def __init__(self, r):
        super().__init__(f"Q' vanishes at r={r!r}")
        self.r = r


class BoundaryMatchError(RuntimeError):
    """The quadratic for t_l produced no admissible real root."""


@dataclass(frozen=True)
class BoundaryMatch:
    """Small-r matching data for one l >= 1: t_l and phi_l."""

    l: int
    t_l: float
    phi_l: float

    @property
    def branch(self) -> BranchSelector:
        return BranchSelector.real(self.t_l)


def abc_coeffs(profile: EffectiveProfile, r):
    """(a, b1, b2) at r (scalar or array); Q'(r) = 0 raises."""
    q0, q1, q2, _ = q_derivs(profile, r)
    return _abc_from_derivs(profile.setup.hbar, r, q0, q1, q2)


def _abc_from_derivs(hbar, r, q0, q1, q2):
    absq1 = np.abs(q1)
    if np.any(absq1 == 0.0):
        bad = np.asarray(r, dtype=float)[np.asarray(absq1 == 0.0)]
        raise StationaryPointError(float(np.atleast_1d(bad)[0]))
    scale = hbar ** (2.0 / 3.0) * absq1 ** (2.0 / 3.0)
    return q0 / scale, q1 / scale, q2 / q1


def y2_of(a, y1):
    """y2 = (-8 a^2 y1^2 - 4 a y1 + 8 a^3 - 3)/30 (direct formula).

    Safe for |a| up to a few tens; the branch evaluators switch to the
    cancellation-free series beyond that, so prefer branch_values for
    production paths.
    """
    a = np.asarray(a, dtype=float)
    return (-8.0 * a * a * y1 * y1 - 4.0 * a * y1 + 8.0 * a ** 3 - 3.0) / 30.0


def branch_values(profile: EffectiveProfile, r, branch: BranchSelector):
    """(a, b1, b2, y1, y2) at r, sharing one Airy evaluation.

    This is the workhorse for the quadrature kernels; r may be an array.
    """
    a, b1, b2 = abc_coeffs(profile, r)
    y1, y2 = log_deriv_pair(a, branch)
    return a, b1, b2, y1, y2


def log_derivative(profile: EffectiveProfile, r, branch: BranchSelector):
    """Y(r; branch) = b1*y1 + b2*y2 (complex; real-valued on real branches)."""
    _, b1, b2, y1, y2 = branch_values(profile, r, branch)
    return b1 * y1 + b2 * y2


def riccati_residual(profile: EffectiveProfile, r, branch: BranchSelector):
    """R = dY/dr + Y^2 - Q/hbar^2; vanishes for exact solutions.

    Assembled from the collapsed form R = b2^2 * B2 + (Q'''/Q') * y2 (every
    b1*b2 cross term of the raw chain rule cancels identically), which stays
    finite and accurate arbitrarily close to the stationary point of Q where
    the individual chain-rule terms diverge against each other.
    """
    q0, q1, q2, q3 = q_derivs(profile, r)
    a, _, b2 = _abc_from_derivs(profile.setup.hbar, r, q0, q1, q2)
    _, y2, b2core = log_deriv_triple(a, branch)
    return b2 * b2 * b2core + (q3 / q1) * y2


def log_derivative_prime(profile: EffectiveProfile, r, branch: BranchSelector):
    """Exact analytic dY/dr along a fixed branch (no finite differences).

    Computed as dY/dr = R - Y^2 + Q/hbar^2 from the cancellation-free
    residual; algebraically identical to the direct chain rule
    dY/dr = b1'*y1 + b1*a'*(a - y1^2) + b2'*y2 + b2*a'*dy2/da.
    """
    q0, q1, q2, q3 = q_derivs(profile, r)
    a, b1, b2 = _abc_from_derivs(profile.setup.hbar, r, q0, q1, q2)
    y1, y2, b2core = log_deriv_triple(a, branch)
    y = b1 * y1 + b2 * y2
    res = b2 * b2 * b2core + (q3 / q1) * y2
    return res - y * y + q0 / profile.setup.hbar ** 2


def _boundary_quadratic(l: int):
    """Coefficients (c2, c1, c0) of the t-quadratic from c(l, t) = l + 1."""
    a = small_r_constant(l)
    quad = airy_quad(a)
    ai, aip, bi, bip = quad.ai, quad.aip, quad.bi, quad.bip
    # c(l, t) = (4a^2/5) y1^2 - (8a/5) y1 + (3 - 8a^3)/10 with
    # y1 = (Ai' + t Bi')/(Ai + t Bi); clearing the denominator gives a
    # quadratic in t.
    kk = (3.0 - 8.0 * a ** 3) / 10.0 - (l + 1)
    c2 = (4.0 * a * a / 5.0) * bip * bip - (8.0 * a / 5.0) * bip * bi + kk * bi * bi
    c1 = (
        (8.0 * a * a / 5.0) * aip * bip
        - (8.0 * a / 5.0) * (aip * bi + ai * bip)
        + 2.0 * kk * ai * bi
    )
    c0 = (4.0 * a * a / 5.0) * aip * aip - (8.0 * a / 5.0) * aip * ai + kk * ai * ai
    return c2, c1, c0


def _combo_has_zero(t: float, a_hi: float, samples: int = 400) -> bool:
    """Sign-change scan of Ai + t*Bi on [0, a_hi]."""
    grid = np.linspace(0.0, a_hi, samples)
    ai, _, bi, _ = special.airy(grid)
    vals = ai + t * bi
    return bool(np.any(vals[:-1] * vals[1:] < 0.0) or np.any(vals == 0.0))


@lru_cache(maxsize=None)
def solve_boundary_match(l: int) -> BoundaryMatch:
    """t_l and phi_l for l >= 1.

    Solves the quadratic for t, keeps the root nearest zero, and verifies
    that the rejected root is the unphysical one: it puts a zero of
    Ai + t*Bi (hence a pole of Y) inside the barrier range a in [0, a_l].
    """
    if l < 1:
        raise ValueError("the boundary match exists only for l >= 1 "
                         "(the l = 0 well has no inner barrier region)")
    c2, c1, c0 = _boundary_quadratic(l)
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0 or c2 == 0.0:
        raise BoundaryMatchError(f"no real root for l={l} (disc={disc!r})")
    sq = math.sqrt(disc)
    roots = sorted(((-c1 + sq) / (2.0 * c2), (-c1 - sq) / (2.0 * c2)), key=abs)
    t_l, rejected = roots
    a_l = small_r_constant(l)
    if _combo_has_zero(t_l, a_l):
        raise BoundaryMatchError(
            f"selected root t={t_l!r} itself poisons [0, a_l] for l={l}"
        )
    if not _combo_has_zero(rejected, a_l):
        raise BoundaryMatchError(
            f"rejected root t={rejected!r} shows no singularity on [0, a_l] "
            f"for l={l}; root classification is suspect"
        )
    return BoundaryMatch(l=l, t_l=t_l, phi_l=math.pi / 3.0 - math.atan(t_l))
