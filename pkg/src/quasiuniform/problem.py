"""Radial problem definition: power-law potential, Q(r), turning points.

The radial equation is written as Psi'' = (Q/hbar^2) Psi with

    Q(r) = 2m ( alpha r^k + hbar^2 l(l+1)/(2m r^2) - E ),

i.e. Q > 0 in the classically forbidden regions and Q < 0 inside the well.
For l >= 1 the centrifugal term produces an inner turning point r_minus and
a stationary point r_star of Q (the minimum of the effective potential); for
l = 0 the well starts at the origin and Q is monotone in r.

Default convention throughout the package: hbar = 1, 2m = 1, alpha = 1.
All reported comparison metrics are dimensionless and invariant under the
similarity rescaling implemented by similar_setup / energy_scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ProblemSetup",
    "LevelKey",
    "EffectiveProfile",
    "DegenerateWellError",
    "q_derivs",
    "locate_turning_points",
    "small_r_constant",
    "effective_profile",
    "effective_minimum",
    "stationary_radius",
    "similar_setup",
    "energy_scale",
]


class DegenerateWellError(ValueError):
    """E at or below the effective-potential minimum: no classical well."""

    def __init__(self, energy, minimum):
        super().__init__(
            f"E={energy!r} does not exceed the effective-potential "
            f"minimum {minimum!r}"
        )
        self.energy = energy
        self.minimum = minimum


@dataclass(frozen=True)
class ProblemSetup:
    """Physical constants and potential parameters V(r) = alpha * r^k."""

    hbar: float = 1.0
    mass: float = 0.5
    alpha: float = 1.0
    k: float = 2.0

    def __post_init__(self):
        if self.hbar <= 0.0 or self.mass <= 0.0:
            raise ValueError("hbar and mass must be positive")
        if self.alpha <= 0.0:
            raise ValueError("potential strength alpha must be positive")
        if self.k <= 0.0:
            raise ValueError("potential exponent k must be positive")


@dataclass(frozen=True, order=True)
class LevelKey:
    """Radial and orbital quantum numbers (n, l)."""

    n: int
    l: int

    def __post_init__(self):
        if self.n < 0 or self.l < 0:
            raise ValueError(f"quantum numbers must be non-negative, got {self}")


@dataclass(frozen=True)
class EffectiveProfile:
    """Q(r) and its landmarks for one (setup, l, E).

    r_star and a_l are defined only for l >= 1 (both are NaN for l = 0,
    where r_minus = 0 and Q has no interior stationary point).
    """

    setup: ProblemSetup
    l: int
    energy: float
    r_minus: float
    r_plus: float
    r_star: float
    a_l: float

    def q(self, r):
        return q_derivs(self, r)[0]


def q_derivs(profile: EffectiveProfile, r):
    """Q, Q', Q'', Q''' at r > 0 (scalar or array).

    Exact analytic derivatives of
    Q = 2m*alpha*r^k + hbar^2 l(l+1)/r^2 - 2m*E.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("q_derivs requires r > 0")
    s = profile.setup
    k = s.k
    tm = 2.0 * s.mass
    cl = s.hbar ** 2 * profile.l * (profile.l + 1)
    ak = tm * s.alpha
    q0 = ak * r ** k + cl / r ** 2 - tm * profile.energy
    q1 = ak * k * r ** (k - 1.0) - 2.0 * cl / r ** 3
    q2 = ak * k * (k - 1.0) * r ** (k - 2.0) + 6.0 * cl / r ** 4
    q3 = ak * k * (k - 1.0) * (k - 2.0) * r ** (k - 3.0) - 24.0 * cl / r ** 5
    return q0, q1, q2, q3


def small_r_constant(l: int) -> float:
    """a_l = (l(l+1)/4)^(1/3), the r -> 0 limit of a(r); needs l >= 1."""
    if l < 1:
        raise ValueError("the small-r constant is defined only for l >= 1")
    return (l * (l + 1) / 4.0) ** (1.0 / 3.0)


def stationary_radius(setup: ProblemSetup, l: int) -> float:
    """Radius where Q' = 0: r^(k+2) = hbar^2 l(l+1) / (m k alpha), l >= 1."""
    if l < 1:
        raise ValueError("Q has no interior stationary point for l = 0")
    return (setup.hbar ** 2 * l * (l + 1) / (setup.mass * setup.k * setup.alpha)) ** (
        1.0 / (setup.k + 2.0)
    )


def effective_minimum(setup: ProblemSetup, l: int) -> float:
    """Minimum of V(r) + hbar^2 l(l+1)/(2 m r^2); zero for l = 0."""
    if l == 0:
        return 0.0
    rs = stationary_radius(setup, l)
    return setup.alpha * rs ** setup.k + setup.hbar ** 2 * l * (l + 1) / (
        2.0 * setup.mass * rs ** 2
    )


def _q_scalar(setup, l, energy, r):
    tm = 2.0 * setup.mass
    return (
        tm * setup.alpha * r ** setup.k
        + setup.hbar ** 2 * l * (l + 1) / r ** 2
        - tm * energy
    )


def _bisect_root(f, lo, hi):
    """Bisection to ~1e-15 relative; f(lo), f(hi) must differ in sign."""
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (hi - lo) <= 2e-15 * abs(mid):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def locate_turning_points(setup: ProblemSetup, l: int, energy: float):
    """Roots of Q: (r_minus, r_plus), refined to ~1e-12 relative.

    For l = 0 the inner point is the origin and r_plus = (E/alpha)^(1/k) in
    closed form.  Q is monotone on each side of its unique stationary point,
    so the brackets [lo, r_star] and [r_star, hi] are safe.
    """
    if l == 0:
        if energy <= 0.0:
            raise DegenerateWellError(energy, 0.0)
        return 0.0, (energy / setup.alpha) ** (1.0 / setup.k)

    minimum = effective_minimum(setup, l)
    if energy <= minimum:
        raise DegenerateWellError(energy, minimum)

    rs = stationary_radius(setup, l)
    f = lambda r: _q_scalar(setup, l, energy, r)

    lo = rs
    while f(lo) < 0.0:
        lo *= 0.5
    r_minus = _bisect_root(f, lo, rs) if lo != rs else rs

    hi = rs
    while f(hi) < 0.0:
        hi *= 2.0
    r_plus = _bisect_root(f, rs, hi) if hi != rs else rs
    return r_minus, r_plus


def effective_profile(setup: ProblemSetup, l: int, energy: float) -> EffectiveProfile:
    """Locate the landmarks of Q for one (setup, l, E)."""
    r_minus, r_plus = locate_turning_points(setup, l, energy)
    if l >= 1:
        r_star = stationary_radius(setup, l)
        a_l = small_r_constant(l)
    else:
        r_star = math.nan
        a_l = math.nan
    return EffectiveProfile(setup, l, float(energy), r_minus, r_plus, r_star, a_l)


def similar_setup(setup: ProblemSetup, hbar: float, mass: float, alpha: float):
    """Equivalent problem in different units.

    Returns (new_setup, length_scale) such that radii map as r' = r *
    length_scale and energies as E' = E * energy_scale(...).  The rescaling
    leaves every dimensionless quantity of the approximation (a(r), phase
    integrals, all comparison metrics) invariant.
    """
    new = ProblemSetup(hbar=hbar, mass=mass, alpha=alpha, k=setup.k)
    lam = (
        (setup.alpha / alpha)
        * (setup.mass / mass)
        * (hbar / setup.hbar) ** 2
    ) ** (1.0 / (setup.k + 2.0))
    return new, lam


def energy_scale(setup: ProblemSetup, new: ProblemSetup, lam: float) -> float:
    """Energy ratio E'/E accompanying the r' = lam * r similarity map."""
    return (setup.mass / new.mass) * (new.hbar / setup.hbar) ** 2 / lam ** 2
