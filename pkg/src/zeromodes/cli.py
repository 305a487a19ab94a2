"""Command-line front end: ``zeromodes verify|bounds|scan|minimize``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import fields as fl
from . import norms
from . import spectral as spc
from .exceptions import ZeroModeError
from .report import encode, reports_json, rows_csv, write_text
from .suites import SUITES, run_suite

BOUND_FAMILIES = {
    # cli name -> (family builder name, theorems)
    "lossyau": ("LOSS_YAU", ("MAGNETIC", "GENMAGNETIC", "MAGNETICWEAK", "IMPROVEDZ")),
    "lambda": ("SPINOR_D", ("SPINORGENERAL",)),
    "monopole": ("MONOPOLE", ("MAGNETICWEAK", "HARDY_WEAK")),
    "appendix": ("APPENDIX_A", ("GENMAGNETIC",)),
    "dunnemin": ("DUNNE_MIN", ("GENMAGNETIC",)),
    "hls": ("HLS_D", ("SPIN_HLS",)),
}
BOUND_COLUMNS = ["theorem", "family", "d", "lhs", "bound", "ratio", "equality", "z", "z_bound"]
RATIO_TOL = 1e-9


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="zeromodes", description="Zero-mode verification laboratory.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--d", type=int, default=3)
    v.add_argument("--samples", type=int, default=64)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=None, help="override every check tolerance")
    v.add_argument("--out", default="-")
    v.add_argument("--timings", action="store_true", help="keep runtime_ms (non-deterministic)")

    b = sub.add_parser("bounds", help="bound table for one family")
    b.add_argument("--family", required=True, choices=sorted(BOUND_FAMILIES))
    b.add_argument("--d", type=int, default=3)
    b.add_argument("--out", default="-")

    s = sub.add_parser("scan", help="lowest Pauli eigenvalue along the coupling t")
    s.add_argument("--family", default="lossyau", choices=["lossyau"])
    s.add_argument("--grid", type=int, default=32)
    s.add_argument("--extent", type=float, default=8.0)
    s.add_argument("--t-min", type=float, default=0.0)
    s.add_argument("--t-max", type=float, default=2.0)
    s.add_argument("--steps", type=int, default=41)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--out", default="-")

    m = sub.add_parser("minimize", help="sharp-constant minimization")
    m.add_argument("--problem", required=True, choices=["nagy", "hardysobolev"])
    m.add_argument("--n", type=int, default=2000)
    m.add_argument("--extent", type=float, default=40.0)
    m.add_argument("--out", default="-")
    return p


def cmd_verify(a):
    rows = run_suite(a.suite, a.d, a.samples, a.seed, a.tol)
    if not a.timings:
        for r in rows:
            r.runtime_ms = 0
    write_text(a.out, reports_json(rows))
    return 0 if all(r.passed for r in rows) else 1


def cmd_bounds(a):
    name, theorems = BOUND_FAMILIES[a.family]
    d = 3 if name in ("LOSS_YAU", "MONOPOLE") else a.d
    fam = fl.build_family(name, d)
    rows = []
    for th in theorems:
        if th == "HARDY_WEAK":
            rep = norms.bound_table(th)
        elif th == "SPIN_HLS":
            rep = norms.bound_table(th, d=d)
        else:
            rep = norms.bound_table(th, fam, d)
        row = rep.as_row()
        if th == "IMPROVEDZ":
            zc = norms.zc_quotient(fam)
            row["z"], row["z_bound"] = zc.z, zc.z_bound
        rows.append(row)
    write_text(a.out, rows_csv(rows, BOUND_COLUMNS))
    return 0 if all(r["ratio"] >= 1 - RATIO_TOL for r in rows) else 1


def cmd_scan(a):
    fam = fl.loss_yau()
    grid = spc.GridSpec(a.grid, a.extent)
    curve = spc.t_scan(fam, grid, a.t_min, a.t_max, a.steps, seed=a.seed)
    write_text(a.out, curve.to_csv())
    t_star, lam = curve.minimum()
    print(f"minimum lambda1 = {lam:.6e} at t = {t_star:.4f}", file=sys.stderr)
    return 0 if all(not p.error for p in curve.points) else 1


def cmd_minimize(a):
    if a.problem == "nagy":
        res = spc.nagy_minimize(a.n, a.extent)
        q, const, tol = res.quotient, spc.NAGY, 1e-4
        dev = spc.sech_fit(res)[0]
    else:
        hs = spc.hardy_sobolev_minimize(a.n, a.extent)
        q, const, tol = hs.quotient, spc.HARDY_SOBOLEV, 1e-3
        dev = hs.dilate_fit()[0]
        res = hs.inner
    out = {"problem": a.problem, "n": a.n, "extent": a.extent, "quotient": q,
           "constant": const, "gap": q - const, "tol": tol, "pass": abs(q - const) <= tol,
           "iterations": res.iterations, "profile_deviation": dev}
    write_text(a.out, json.dumps(encode(out), indent=1) + "\n")
    return 0 if out["pass"] else 1


COMMANDS = {"verify": cmd_verify, "bounds": cmd_bounds, "scan": cmd_scan,
            "minimize": cmd_minimize}


def main(argv=None):
    args = build_parser().parse_args(argv)
    threads = os.environ.get("ZM_THREADS")
    if threads and not threads.isdigit():
        print("ZM_THREADS must be a positive integer", file=sys.stderr)
        return 2
    np.seterr(all="ignore")
    try:
        return COMMANDS[args.cmd](args)
    except (ValueError, ZeroModeError) as e:
        print(f"zeromodes: {type(e).__name__}: {e}", file=sys.stderr)
        return 2 if isinstance(e, ValueError) else 1


if __name__ == "__main__":
    sys.exit(main())
