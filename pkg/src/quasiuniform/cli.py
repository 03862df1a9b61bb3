"""Command-line front end: spectra, benchmark tables, wavefunction dumps.

Subcommands:

* spectrum       solve E_sp / Ebar / d over an (n, l) grid
* table1         oscillator benchmark (delta_psi, delta_psi', d, delta_E)
* table2         linear-potential benchmark (d, delta_E, Numerov reference)
* wavefunction   sample psi, psi', H psi with region labels
* verify         run the invariant suites

Output is CSV (default) or JSON, written atomically; numbers carry 17
significant digits so a round trip through text is lossless.  Exit codes:
0 success, 1 verification failure, 2 usage or solver error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .metrics import (
    TABLE1_LEVELS,
    TABLE1_PUBLISHED,
    TABLE2_LEVELS,
    TABLE2_PUBLISHED,
    discrepancy,
    energy_expectation,
    level_report,
)
from .problem import LevelKey, ProblemSetup
from .wavefunction import apply_hamiltonian, build_state, eval_psi, eval_psi_prime, region_of

__all__ = ["main"]


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_rows(header, rows, fmt, out_path):
    """Assemble the full payload, then write once (atomically for files)."""
    if fmt == "json":
        payload = json.dumps(
            {"columns": header, "rows": [list(r) for r in rows]}, indent=2
        ) + "\n"
    else:
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        payload = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(payload)
        return
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_range(text):
    """'0..2' -> [0, 1, 2]; '0,2,5' -> [0, 2, 5]; '3' -> [3]."""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif chunk:
            out.append(int(chunk))
    if not out:
        raise ValueError(f"empty quantum-number selection {text!r}")
    return out


def _setup_from(args):
    return ProblemSetup(hbar=args.hbar, mass=args.mass, alpha=args.alpha, k=args.k)


def _add_common(p, include_levels=True):
    p.add_argument("--alpha", type=float, default=1.0, help="potential strength (> 0)")
    p.add_argument("--k", type=float, default=2.0, help="potential exponent (> 0)")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=0.5, help="default 2m = 1")
    if include_levels:
        p.add_argument("--n", default="0..2", help="radial numbers, e.g. 0..2 or 0,2")
        p.add_argument("--l", default="0", help="orbital numbers, e.g. 0..2 or 1,3")
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _cmd_spectrum(args):
    setup = _setup_from(args)
    rows = []
    for l in _parse_range(args.l):
        for n in _parse_range(args.n):
            state = build_state(setup, LevelKey(n, l))
            rows.append((n, l, state.e_sp, energy_expectation(state), discrepancy(state)))
    _write_rows(["n", "l", "e_sp", "e_bar", "d"], rows, args.format, args.out)
    return 0


def _table_cmd(args, levels, published, k_value, metric_names):
    setup = ProblemSetup(hbar=args.hbar, mass=args.mass, alpha=args.alpha, k=k_value)
    header = ["n", "l"]
    for name in metric_names:
        header += [name, name + "_ref", name + "_reldiff"]
    rows = []
    for lv in levels:
        rep = level_report(setup, lv)
        got = {
            "delta_psi": rep.delta_psi,
            "delta_psi_prime": rep.delta_psi_prime,
            "d": rep.discrepancy_d,
            "delta_e": rep.delta_e,
        }
        row = [lv.n, lv.l]
        for name, ref in zip(metric_names, published[lv]):
            val = got[name]
            row += [val, ref, val / ref - 1.0]
        rows.append(tuple(row))
    _write_rows(header, rows, args.format, args.out)
    return 0


def _cmd_table1(args):
    return _table_cmd(args, TABLE1_LEVELS, TABLE1_PUBLISHED, 2.0,
                      ["delta_psi", "delta_psi_prime", "d", "delta_e"])


def _cmd_table2(args):
    return _table_cmd(args, TABLE2_LEVELS, TABLE2_PUBLISHED, 1.0,
                      ["d", "delta_e"])


def _cmd_wavefunction(args):
    setup = _setup_from(args)
    n_list, l_list = _parse_range(args.n), _parse_range(args.l)
    if len(n_list) != 1 or len(l_list) != 1:
        raise ValueError("wavefunction wants exactly one n and one l")
    state = build_state(setup, LevelKey(n_list[0], l_list[0]))
    m = args.samples
    n_log = m // 5
    anchor = state.r_minus if state.r_minus > 0.0 else state.r_plus / 10.0
    grid = np.unique(np.concatenate([
        np.geomspace(state.r_max * 1e-8, anchor, n_log),
        np.linspace(anchor, state.r_max, m - n_log),
    ]))
    rows = [
        (float(r), float(eval_psi(state, r)), float(eval_psi_prime(state, r)),
         float(apply_hamiltonian(state, r)), int(region_of(state, r)))
        for r in grid
    ]
    _write_rows(["r", "psi", "dpsi", "h_psi", "region"], rows, args.format, args.out)
    return 0


def _cmd_verify(args):
    from .verify import run_all

    results = run_all(quick=args.quick, force_fail=args.force_fail)
    n_bad = 0
    for suite, name, ok, detail in results:
        tag = "PASS" if ok else "FAIL"
        print(f"{tag} [{suite}] {name}: {detail}")
        n_bad += 0 if ok else 1
    print(f"{len(results) - n_bad}/{len(results)} checks passed")
    return 0 if n_bad == 0 else 1


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="quasiuniform",
        description="Airy-based quasi-uniform bound states for power-law potentials",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="solve levels; rows n,l,e_sp,e_bar,d")
    _add_common(p)
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("table1", help="oscillator benchmark table")
    _add_common(p, include_levels=False)
    p.set_defaults(fn=_cmd_table1)

    p = sub.add_parser("table2", help="linear-potential benchmark table")
    _add_common(p, include_levels=False)
    p.set_defaults(fn=_cmd_table2)

    p = sub.add_parser("wavefunction", help="sample psi, psi', H psi")
    _add_common(p)
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(fn=_cmd_wavefunction)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--quick", action="store_true", help="skip Numerov cross-checks")
    p.add_argument("--force-fail", action="store_true",
                   help="inject one failing check (exit-code demo)")
    p.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None):
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
