"""Comparison functionals: Ebar, delta_psi, delta_psi', d, delta_E.

Given a normalized approximate state psi and (optionally) a normalized
reference state psi_ex of the same sign convention:

    Ebar     = <psi|H|psi>                       (optimal eigenvalue: the
               discrepancy vector H psi - e psi is orthogonal to psi
               exactly at e = Ebar, and its norm is minimal there)
    d        = (<psi|H^2|psi> - Ebar^2) / (<psi|H^2|psi> + Ebar^2)
    dpsi     = 1 - <psi_ex|psi>                  (normalized overlap form)
    dpsi'    = 1 - 2 <psi_ex'|psi'> / (<psi_ex'|psi_ex'> + <psi'|psi'>)
    dE       = Ebar / E_ex - 1

d requires no reference solution at all, which is what makes it useful for
potentials without closed forms.  The module also ships the two published
benchmark tables these metrics reproduce (quadratic and linear potentials,
default units hbar = 1, 2m = 1, alpha = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .problem import LevelKey, ProblemSetup
from .quadrature import IntegralSpec, integrate
from .reference import ExactState, linear_exact_l0, numerov_solve, oscillator_exact
from .wavefunction import (
    ApproxState,
    _integrate_state,
    apply_hamiltonian,
    build_state,
    eval_psi,
    eval_psi_prime,
)

__all__ = [
    "MetricsReport",
    "relative_deviation",
    "energy_expectation",
    "hamiltonian_moments",
    "discrepancy",
    "compare_to_exact",
    "reference_for",
    "level_report",
    "TABLE1_LEVELS",
    "TABLE2_LEVELS",
    "TABLE1_PUBLISHED",
    "TABLE2_PUBLISHED",
]

_OVERLAP_SPEC = IntegralSpec(rel_tol=1e-10, abs_tol=1e-15)


@dataclass(frozen=True)
class MetricsReport:
    """Per-level accuracy record."""

    level: LevelKey
    delta_psi: float
    delta_psi_prime: float
    discrepancy_d: float
    e_bar: float
    e_sp: float
    e_exact: float
    delta_e: float
    reference_provenance: str


def relative_deviation(f1: Callable, f2: Callable, r_max: float,
                       breakpoints: Sequence[float] = ()) -> float:
    """1 - (<f1|f2> + <f2|f1>) / (<f1|f1> + <f2|f2>) over (0, r_max).

    Zero iff f1 = f2, one for orthogonal functions, two for f2 = -f1.
    """
    cuts = sorted({0.0, r_max, *[b for b in breakpoints if 0.0 < b < r_max]})

    def inner(g):
        tot = 0.0
        for lo, hi in zip(cuts, cuts[1:]):
            val, _ = integrate(g, lo, hi, _OVERLAP_SPEC)
            tot += val
        return tot

    n11 = inner(lambda r: f1(r) * f1(r))
    n22 = inner(lambda r: f2(r) * f2(r))
    if n11 == 0.0 or n22 == 0.0:
        raise ValueError("relative deviation of a zero-norm function")
    n12 = inner(lambda r: f1(r) * f2(r))
    return 1.0 - 2.0 * n12 / (n11 + n22)


def hamiltonian_moments(state: ApproxState):
    """(Ebar, <H^2>) = (<psi|H psi>, <H psi|H psi>), cached on the state."""
    if state._moments is None:
        e_bar = _integrate_state(
            state, lambda r: eval_psi(state, r) * apply_hamiltonian(state, r)
        )
        h2 = _integrate_state(state, lambda r: apply_hamiltonian(state, r) ** 2)
        state._moments = (e_bar, h2)
    return state._moments


def energy_expectation(state: ApproxState) -> float:
    """Ebar = <psi|H|psi> over (0, r_max)."""
    return hamiltonian_moments(state)[0]


def discrepancy(state: ApproxState) -> float:
    """d = (<H^2> - Ebar^2)/(<H^2> + Ebar^2); needs no reference solution."""
    e_bar, h2 = hamiltonian_moments(state)
    return (h2 - e_bar * e_bar) / (h2 + e_bar * e_bar)


def compare_to_exact(state: ApproxState, exact: ExactState) -> MetricsReport:
    """Assemble the full per-level report against a reference state."""
    r_hi = min(state.r_max, exact.r_max)
    cuts = sorted(
        {0.0, r_hi, state.r_minus, state.r_plus}
        | ({state.profile.r_star} if state.level.l >= 1 else set())
    )
    cuts = [c for c in cuts if math.isfinite(c) and 0.0 <= c <= r_hi]

    def inner(g):
        tot = 0.0
        for lo, hi in zip(cuts, cuts[1:]):
            if hi > lo:
                val, _ = integrate(g, lo, hi, _OVERLAP_SPEC)
                tot += val
        return tot

    overlap = inner(lambda r: exact.eval(r) * eval_psi(state, r))
    delta_psi = 1.0 - overlap
    dd = inner(lambda r: exact.eval_deriv(r) * eval_psi_prime(state, r))
    d11 = inner(lambda r: exact.eval_deriv(r) ** 2)
    d22 = inner(lambda r: eval_psi_prime(state, r) ** 2)
    delta_psi_prime = 1.0 - 2.0 * dd / (d11 + d22)
    e_bar, h2 = hamiltonian_moments(state)
    d_metric = (h2 - e_bar * e_bar) / (h2 + e_bar * e_bar)
    return MetricsReport(
        level=state.level,
        delta_psi=delta_psi,
        delta_psi_prime=delta_psi_prime,
        discrepancy_d=d_metric,
        e_bar=e_bar,
        e_sp=state.e_sp,
        e_exact=exact.energy,
        delta_e=e_bar / exact.energy - 1.0,
        reference_provenance=exact.provenance,
    )


def reference_for(setup: ProblemSetup, level: LevelKey) -> ExactState:
    """Best available reference: closed form where one exists, else Numerov."""
    if setup.k == 2.0:
        return oscillator_exact(setup, level)
    if setup.k == 1.0 and level.l == 0:
        return linear_exact_l0(setup, level.n)
    return numerov_solve(setup, level)


def level_report(setup: ProblemSetup, level: LevelKey,
                 state: Optional[ApproxState] = None) -> MetricsReport:
    """Solve, build, and compare one level end to end."""
    if state is None:
        state = build_state(setup, level)
    return compare_to_exact(state, reference_for(setup, level))


# Published benchmark values (delta_psi, delta_psi', d, delta_E) for the
# quadratic potential and (d, delta_E) for the linear potential, used for
# side-by-side reporting and the acceptance suite.
TABLE1_LEVELS = [LevelKey(n, l) for l in (0, 1, 2) for n in (0, 1, 2)]
TABLE1_PUBLISHED = {
    LevelKey(0, 0): (1.595e-5, 7.118e-5, 6.087e-5, 5.635e-5),
    LevelKey(1, 0): (1.504e-6, 3.098e-6, 7.312e-7, 1.884e-6),
    LevelKey(2, 0): (4.271e-7, 6.391e-7, 8.413e-8, 3.348e-7),
    LevelKey(0, 1): (1.132e-3, 6.625e-3, 9.475e-3, 3.083e-3),
    LevelKey(1, 1): (1.337e-3, 2.898e-3, 7.719e-4, 1.011e-3),
    LevelKey(2, 1): (1.506e-3, 2.891e-3, 5.863e-4, 7.271e-4),
    LevelKey(0, 2): (5.052e-4, 4.877e-3, 4.627e-3, 1.492e-3),
    LevelKey(1, 2): (4.173e-4, 8.886e-4, 1.153e-4, 2.487e-4),
    LevelKey(2, 2): (4.635e-4, 8.646e-4, 8.713e-5, 1.813e-4),
}

TABLE2_LEVELS = [LevelKey(n, l) for l in (1, 2) for n in (0, 1)]
TABLE2_PUBLISHED = {
    LevelKey(0, 1): (6.951e-3, 2.684e-3),
    LevelKey(1, 1): (5.357e-4, 8.230e-4),
    LevelKey(0, 2): (2.565e-3, 1.160e-3),
    LevelKey(1, 2): (8.652e-5, 2.238e-4),
}
