"""Self-contained invariant suites behind the `verify` CLI command.

Each check returns (name, passed, detail).  Three suites:

* airy: kernel identities (Wronskian, regime overlap, conjugation,
  asymptotic feeds, zero placement).
* matching: boundary constants, small-r limit of Y, C1 continuity at the
  turning points, behaviour across the stationary point.
* metrics: one full oscillator level and the linear l=0 exactness, plus
  the principal-value versus symmetric-window cross-check.  Numerov
  cross-validation is skipped in quick mode.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .airy import BranchSelector, airy_quad, airy_zero, log_deriv_combo, log_deriv_pair
from .core import branch_values, log_derivative, riccati_residual, solve_boundary_match
from .metrics import TABLE1_PUBLISHED, discrepancy, energy_expectation, hamiltonian_moments
from .problem import LevelKey, ProblemSetup, effective_profile
from .quadrature import IntegralSpec, integrate, integrate_pv
from .reference import numerov_solve, oscillator_exact
from .spectral import solve_level
from .wavefunction import apply_hamiltonian, build_state, count_nodes, eval_psi, eval_psi_prime

_PLUS_I = BranchSelector.plus_i()
_MINUS_I = BranchSelector.minus_i()


def _check(name, ok, detail=""):
    return (name, bool(ok), detail)


def airy_suite():
    checks = []
    rng = np.random.default_rng(20240811)
    a = rng.uniform(-8.0, 8.0, 10000)
    ai, aip, bi, bip = special.airy(a)
    wr = ai * bip - aip * bi
    err = np.max(np.abs(wr * math.pi - 1.0))
    checks.append(_check("wronskian-1e4-points", err <= 1e-12, f"max rel err {err:.2e}"))

    worst = 0.0
    for aa in (-8.5, -8.0, -7.5):
        # production evaluation (series below the switch) against the
        # direct ratio form
        direct = _direct_plus_i(aa)
        prod = complex(log_deriv_combo(aa, _PLUS_I))
        worst = max(worst, abs(prod - direct) / abs(direct))
    for aa in (7.5, 8.0, 8.5):
        prod = complex(log_deriv_combo(aa, BranchSelector.real(0.0))).real
        direct = _direct_t0(aa)
        worst = max(worst, abs(prod - direct) / abs(direct))
    checks.append(_check("regime-overlap-band", worst <= 1e-10, f"max rel dev {worst:.2e}"))

    pts = rng.uniform(-30.0, 5.0, 64)
    y_p, _ = log_deriv_pair(pts, _PLUS_I)
    y_m, _ = log_deriv_pair(pts, _MINUS_I)
    exact = np.array_equal(y_m, np.conj(y_p))
    checks.append(_check("conjugation-exact", exact, "same code path, conjugated"))

    ok = True
    msgs = []
    for aa in (-1e2, -1e4):
        y1 = complex(log_deriv_combo(aa, _PLUS_I))
        tol = 10.0 * abs(aa) ** (-2.5)
        d1 = abs(y1.imag - math.sqrt(-aa))
        d2 = abs(y1.real + 1.0 / (4.0 * aa))
        ok = ok and d1 <= tol and d2 <= tol
        msgs.append(f"a={aa:g}: {d1:.1e},{d2:.1e} vs {tol:.1e}")
    checks.append(_check("oscillatory-asymptote-feed", ok, "; ".join(msgs)))

    worst = 0.0
    for idx in (1, 2, 5, 10):
        z = airy_zero(idx)
        worst = max(worst, abs(airy_quad(z).ai))
    checks.append(_check("airy-zero-placement", worst <= 1e-12, f"max |Ai(z)| {worst:.2e}"))
    return checks


def _direct_plus_i(a):
    q = airy_quad(a)
    return (q.aip + 1j * q.bip) / (q.ai + 1j * q.bi)


def _direct_t0(a):
    q = airy_quad(a)
    return q.aip / q.ai


def matching_suite():
    checks = []
    setup = ProblemSetup()

    ok = True
    msgs = []
    for l in (1, 2, 3):
        m = solve_boundary_match(l)
        a_l = (l * (l + 1) / 4.0) ** (1.0 / 3.0)
        y1 = complex(log_deriv_combo(a_l, m.branch)).real
        y2 = float(np.real(log_deriv_pair(np.array([a_l]), m.branch)[1][0]))
        c = -(2.0 * a_l * y1 + 3.0 * y2)
        ok = ok and abs(c - (l + 1)) <= 1e-12
        msgs.append(f"l={l}: c={c:.14f}")
    checks.append(_check("boundary-quadratic-root", ok, "; ".join(msgs)))

    ok = True
    msgs = []
    for l in (1, 2, 3):
        e = 4.0 * l + 3.0
        prof = effective_profile(setup, l, e)
        m = solve_boundary_match(l)
        r = 1e-6 * prof.r_minus
        ry = r * float(np.real(log_derivative(prof, r, m.branch)))
        ok = ok and abs(ry - (l + 1)) <= 1e-6
        msgs.append(f"l={l}: rY={ry:.9f}")
    checks.append(_check("small-r-log-derivative", ok, "; ".join(msgs)))

    ok = True
    worst = 0.0
    for l in (1, 2, 3):
        for e_scale in (0.9, 1.0, 1.3):
            e = (4.0 * l + 3.0) * e_scale
            prof = effective_profile(setup, l, e)
            m = solve_boundary_match(l)
            for r0, t_branch, phi in (
                (prof.r_minus, m.branch, m.phi_l),
                (prof.r_plus, BranchSelector.real(0.0), math.pi / 3.0),
            ):
                yc = complex(log_derivative(prof, r0, _PLUS_I))
                lhs = yc.real - math.tan(phi) * yc.imag
                rhs = float(np.real(log_derivative(prof, r0, t_branch)))
                dev = abs(lhs - rhs) / max(1.0, abs(rhs))
                worst = max(worst, dev)
                ok = ok and dev <= 1e-10
    checks.append(_check("c1-matching-identity", ok, f"worst dev {worst:.2e}"))

    prof = effective_profile(setup, 1, 5.0)
    rs = prof.r_star
    eps = 1e-8 * rs
    f = lambda r: np.sign(branch_values(prof, r, _PLUS_I)[1]) * np.imag(
        log_derivative(prof, r, _PLUS_I))
    jump = abs(f(np.array([rs + eps]))[0] - f(np.array([rs - eps]))[0])
    rel = jump / abs(f(np.array([rs + eps]))[0])
    checks.append(_check("phase-integrand-across-r-star", rel <= 1e-6,
                         f"relative jump {rel:.2e}"))

    dev = 0.0
    for d in (1e-6 * rs, 1e-5 * rs, 1e-4 * rs):
        for sgn in (1.0, -1.0):
            r = rs + sgn * d
            val = (r - rs) * complex(log_derivative(prof, r, _PLUS_I)).real
            dev = max(dev, abs(val))
    checks.append(_check("amplitude-no-pole-at-r-star", dev <= 1e-5,
                         f"max |(r-r*) Re Y| {dev:.2e} (analytic limit 0)"))
    return checks


def metrics_suite(quick=False):
    checks = []
    setup = ProblemSetup()
    level = LevelKey(0, 1)
    state = build_state(setup, level)

    norm = _norm_of(state)
    checks.append(_check("normalization", abs(norm - 1.0) <= 1e-8,
                         f"integral psi^2 = {norm:.12f}"))

    nodes = count_nodes(state)
    checks.append(_check("node-count", nodes == level.n, f"{nodes} nodes"))

    eps = 1e-9
    ok = True
    msgs = []
    for r0 in (state.r_minus, state.r_plus):
        lo = eval_psi(state, r0 * (1 - eps))
        hi = eval_psi(state, r0 * (1 + eps))
        rel = abs(lo - hi) / max(abs(lo), abs(hi))
        ok = ok and rel <= 1e-8
        msgs.append(f"{rel:.1e}")
    checks.append(_check("psi-continuity", ok, "rel jumps " + ", ".join(msgs)))

    e_bar, _ = hamiltonian_moments(state)
    orth = _orth_defect(state, e_bar)
    checks.append(_check("discrepancy-orthogonality", abs(orth) <= 1e-10,
                         f"<psi|(H-Ebar)psi> = {orth:.2e}"))

    d = discrepancy(state)
    pub = TABLE1_PUBLISHED[level][2]
    checks.append(_check("discrepancy-vs-published", abs(d / pub - 1.0) <= 0.02,
                         f"d = {d:.4e} vs {pub:.4e}"))

    # principal-value machinery against the symmetric-window oracle
    prof = state.profile
    amp = lambda r: np.real(log_derivative(prof, r, _PLUS_I))
    spec = IntegralSpec(rel_tol=1e-12, abs_tol=1e-14)
    direct, _ = integrate_pv(amp, state.r_minus, state.r_plus, prof.r_star, 0.0, spec)
    window = _window_pv(amp, state.r_minus, state.r_plus, prof.r_star)
    checks.append(_check("pv-vs-symmetric-window", abs(direct - window) <= 1e-8,
                         f"{direct:.12f} vs {window:.12f}"))

    lin = ProblemSetup(k=1.0)
    res = solve_level(lin, LevelKey(0, 0))
    exact = -airy_zero(1) * (lin.hbar ** 2 * lin.alpha ** 2 / (2 * lin.mass)) ** (1 / 3)
    rel = abs(res.e_sp / exact - 1.0)
    checks.append(_check("linear-l0-exactness", rel <= 1e-8,
                         f"E_sp={res.e_sp:.12f}, Airy {exact:.12f}"))

    lprof = effective_profile(lin, 0, res.e_sp)
    rr = np.linspace(0.05 * lprof.r_plus, 2.0 * lprof.r_plus, 100)
    res_out = np.abs(riccati_residual(lprof, rr[rr > lprof.r_plus], BranchSelector.real(0.0)))
    res_in = np.abs(riccati_residual(lprof, rr[rr <= lprof.r_plus], _PLUS_I))
    worst = max(res_out.max(), res_in.max())
    checks.append(_check("linear-riccati-residual", worst <= 1e-9,
                         f"max |R| {worst:.2e}"))

    if not quick:
        num = numerov_solve(setup, level)
        rel = abs(num.energy / oscillator_exact(setup, level).energy - 1.0)
        checks.append(_check("numerov-oscillator-agreement", rel <= 1e-9,
                             f"rel dev {rel:.2e}"))
    return checks


def _norm_of(state):
    from .wavefunction import _integrate_state
    return _integrate_state(state, lambda r: eval_psi(state, r) ** 2)


def _orth_defect(state, e_bar):
    from .wavefunction import _integrate_state
    return _integrate_state(
        state,
        lambda r: eval_psi(state, r) * (apply_hamiltonian(state, r) - e_bar * eval_psi(state, r)),
    )


def _window_pv(f, lo, hi, pole):
    """Symmetric-window exclusion with Richardson extrapolation in epsilon."""
    spec = IntegralSpec(rel_tol=1e-12, abs_tol=1e-15)
    vals = []
    for eps in (4e-4, 2e-4, 1e-4):
        v1, _ = integrate(f, lo, pole - eps, spec)
        v2, _ = integrate(f, pole + eps, hi, spec)
        vals.append(v1 + v2)
    # two Richardson steps assuming O(eps) leading window error
    r1 = [2 * b - a for a, b in zip(vals, vals[1:])]
    return 2 * r1[1] - r1[0]


def run_all(quick=False, force_fail=False):
    """All suites; returns list of (suite, name, ok, detail)."""
    out = []
    for suite_name, fn in (("airy", airy_suite), ("matching", matching_suite)):
        for name, ok, detail in fn():
            out.append((suite_name, name, ok, detail))
    for name, ok, detail in metrics_suite(quick=quick):
        out.append(("metrics", name, ok, detail))
    if force_fail:
        out.append(("forced", "forced-failure", False, "requested via flag"))
    return out
