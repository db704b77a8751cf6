"""Command-line driver: ``python -m katobounds <command>``.

Commands
  upper        bracket sup G_n and print the rounded-up constant G+
  lower        optimize the trial family and print the rounded-down G-
  table        both bounds and their ratio for n = 3, 4, 5, 10
  verify       run a seeded property suite
  dump-taylor  CSV of the Taylor coefficient polynomials

Exit codes: 0 success, 1 bad arguments, 2 configuration too coarse (the
large-|k| envelope is not below the enumerated maximum), 3 a verification
check failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__, gfunction, kernel, lowerbound, verify
from .rounding import round_down_sig

EXIT_OK, EXIT_USAGE, EXIT_TAIL, EXIT_VERIFY = 0, 1, 2, 3
TABLE_NS = (3, 4, 5, 10)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_id() -> str:
    """Short content hash of the package sources (stable across checkouts)."""
    h = hashlib.sha1()
    for p in sorted(Path(__file__).parent.glob("*.py")):
        h.update(p.name.encode())
        h.update(p.read_bytes())
    return h.hexdigest()[:12]


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2, default=_json_default)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _json_default(x):
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    raise TypeError(f"not JSON serializable: {type(x)}")


def _meta(args, t0: float) -> dict:
    return {"version": __version__, "build_id": build_id(), "command": args.command, "wall_time_s": time.perf_counter() - t0}


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _config(args) -> gfunction.CutoffConfig:
    return gfunction.default_config(args.n, d=args.d, quick=args.quick, rho=args.rho, t=args.t)


# --------------------------------------------------------------------------


def cmd_upper(args) -> int:
    t0 = time.perf_counter()
    cfg = _config(args)
    try:
        br = gfunction.sup_bracket(cfg, workers=args.threads, keep_values=bool(args.csv))
    except gfunction.TailDominatesError as exc:
        _note(f"error: {exc}")
        return EXIT_TAIL
    rep = gfunction.bracket_report(br)
    if args.csv:
        gfunction.write_gamma_csv(br, args.csv)
    _note(f"n={cfg.n:g}: sup Gamma = {br.sup_gamma:.6g} at {br.argmax}; bracket ({br.lower:.6g}, {br.upper:.6g}); G+ = {rep['g_plus']}")
    _emit({**rep, "meta": _meta(args, t0)}, args.output)
    return EXIT_OK


def _load_seeds(args) -> list[lowerbound.TrialParams]:
    seeds = []
    if args.seed_paper:
        if args.n not in lowerbound.REFERENCE_PARAMS:
            raise ValueError(f"no reference parameters for n={args.n:g}")
        seeds.append(lowerbound.REFERENCE_PARAMS[args.n])
    for path in args.params or ():
        seeds.append(lowerbound.TrialParams.from_json(Path(path).read_text()))
    if not seeds:
        seeds.append(lowerbound.REFERENCE_PARAMS.get(args.n, lowerbound.REFERENCE_PARAMS[4]))
    return seeds


def cmd_lower(args) -> int:
    t0 = time.perf_counter()
    seeds = _load_seeds(args)
    res = lowerbound.optimize_lower(args.n, seeds, restarts=args.restarts, seed=args.seed, keep_trace=bool(args.trace))
    if args.trace:
        res.write_trace(args.trace)
    if res.value == 0:
        _note("warning: the trilinear form vanishes at these parameters; the bound is trivial")
    _note(f"n={args.n:g}: G- = {res.rounded} (raw {res.value:.6g})")
    _emit(
        {
            "n": args.n,
            "g_minus": res.rounded,
            "g_minus_raw": res.value,
            "params": res.params.to_dict(),
            "restart": res.restart,
            "restarts": args.restarts,
            "seed": args.seed,
            "meta": _meta(args, t0),
        },
        args.output,
    )
    return EXIT_OK


def _sig3(x: float) -> str:
    return f"{x:#.3g}"


def table_rows(quick: bool = False, restarts: int = 0, seed: int = 0, threads: int = 1) -> list[dict]:
    rows = []
    for n in TABLE_NS:
        cfg = gfunction.default_config(n, quick=quick)
        t0 = time.perf_counter()
        br = gfunction.sup_bracket(cfg, workers=threads)
        gp, gp_raw = gfunction.upper_bound_g(br), gfunction.upper_bound_g(br, rounded=False)
        low = lowerbound.optimize_lower(n, [lowerbound.REFERENCE_PARAMS[n]], restarts=restarts, seed=seed)
        rows.append(
            {
                "n": n,
                "rho": cfg.rho,
                "t": cfg.t,
                "g_minus": low.rounded,
                "g_plus": gp,
                "ratio": round_down_sig(low.rounded / gp, 3),
                "g_minus_raw": low.value,
                "g_plus_raw": gp_raw,
                "bracket": [br.lower, br.upper],
                "argmax": list(br.argmax),
                "seconds": time.perf_counter() - t0,
            }
        )
    return rows


def cmd_table(args) -> int:
    t0 = time.perf_counter()
    try:
        rows = table_rows(args.quick, args.restarts, args.seed, args.threads)
    except gfunction.TailDominatesError as exc:
        _note(f"error: {exc}")
        return EXIT_TAIL
    cols = ["n", "g_minus", "g_plus", "ratio"]
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(cols + ["g_minus_raw", "g_plus_raw", "bracket_lo", "bracket_hi", "argmax"])
    for r in rows:
        wr.writerow([r["n"], _sig3(r["g_minus"]), _sig3(r["g_plus"]), f"{r['ratio']:.3f}"] + [repr(r["g_minus_raw"]), repr(r["g_plus_raw"]), repr(r["bracket"][0]), repr(r["bracket"][1]), " ".join(map(str, r["argmax"]))])
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    print(f"{'n':>3} {'G-':>7} {'G+':>7} {'G-/G+':>7}")
    for r in rows:
        print(f"{r['n']:>3} {_sig3(r['g_minus']):>7} {_sig3(r['g_plus']):>7} {r['ratio']:>7.3f}")
    if args.output:
        _emit({"rows": rows, "quick": args.quick, "meta": _meta(args, t0)}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    checks = verify.run_suite(args.suite, args.samples, args.seed)
    ok = all(c.passed for c in checks)
    for c in checks:
        _note(f"{'PASS' if c.passed else 'FAIL'} {c.name} ({c.samples} samples, worst {c.worst:.3g})")
    first = next((c for c in checks if not c.passed), None)
    _emit(
        {
            "suite": args.suite,
            "samples": args.samples,
            "seed": args.seed,
            "passed": ok,
            "checks": [c.as_dict() for c in checks],
            "first_counterexample": None if first is None else {"check": first.name, **first.counterexample},
            "meta": _meta(args, t0),
        },
        args.output,
    )
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_dump_taylor(args) -> int:
    kinds = ["D", "E"] if args.kind == "both" else [args.kind]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        wr = csv.writer(out, lineterminator="\n")
        wr.writerow(["kind", "n", "l", "j", "coefficient"])
        for kind in kinds:
            polys = kernel.taylor_coeffs(kind, args.n, args.count, exact=args.exact)
            for l, p in enumerate(polys):
                for j, a in enumerate(p.coeffs):
                    if a != 0:
                        wr.writerow([kind, f"{args.n:g}", l, j, str(a) if args.exact else repr(float(a))])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# --------------------------------------------------------------------------


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="katobounds", description="Bounds for the sharp constant in the Kato inequality on the torus.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, threads=True):
        sp.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        if threads:
            sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    up = sub.add_parser("upper", help="upper bound G+ from the lattice-sum bracket")
    up.add_argument("--d", type=int, default=3)
    up.add_argument("--n", type=float, required=True)
    up.add_argument("--rho", type=float)
    up.add_argument("--t", type=int)
    up.add_argument("--quick", action="store_true", help=f"rho={gfunction.QUICK[0]:g}, t={gfunction.QUICK[1]} (n=3: rho=12, t=8)")
    up.add_argument("--csv", help="dump Gamma over the enumerated k to this CSV file")
    common(up)
    up.set_defaults(func=cmd_upper)

    lo = sub.add_parser("lower", help="lower bound G- from the trial family")
    lo.add_argument("--n", type=float, required=True)
    lo.add_argument("--seed-paper", action="store_true", help="start from the reference parameters")
    lo.add_argument("--params", action="append", help="JSON parameter file (repeatable)")
    lo.add_argument("--restarts", type=_positive_int, default=lowerbound.RESTARTS)
    lo.add_argument("--trace", help="write the optimizer trace to this CSV file")
    common(lo, threads=False)
    lo.set_defaults(func=cmd_lower)

    tb = sub.add_parser("table", help="G-, G+ and their ratio for n = 3, 4, 5, 10")
    tb.add_argument("--quick", action="store_true", help="coarser cutoffs: looser but still valid G+")
    tb.add_argument("--csv", help="also write the table as CSV")
    tb.add_argument("--restarts", type=_positive_int, default=0)
    common(tb)
    tb.set_defaults(func=cmd_table)

    ve = sub.add_parser("verify", help="seeded property suites")
    ve.add_argument("--suite", choices=["identities", "inequalities", "kato", "all"], default="all")
    ve.add_argument("--samples", type=_positive_int, default=200)
    common(ve, threads=False)
    ve.set_defaults(func=cmd_verify)

    dt = sub.add_parser("dump-taylor", help="Taylor coefficient polynomials as CSV")
    dt.add_argument("--n", type=float, required=True)
    dt.add_argument("--count", type=int, default=8)
    dt.add_argument("--kind", choices=["D", "E", "both"], default="both")
    dt.add_argument("--exact", action="store_true", help="rational coefficients (integer n only)")
    dt.add_argument("--output", "-o")
    dt.set_defaults(func=cmd_dump_taylor)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and float(args.n).is_integer():
        args.n = int(args.n)
    try:
        return args.func(args)
    except ValueError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
