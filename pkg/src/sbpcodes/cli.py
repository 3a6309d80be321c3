"""``sbpcodes`` command line: thresholds, simulate, decode-roundtrip, privacy-scan.

Exit codes: 0 success, 1 a check failed, 2 bad usage or configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from sbpcodes import config as config_mod
from sbpcodes.errors import SbpError
from sbpcodes.field import PrimeField
from sbpcodes.gasp import mm_gasp_recovery_threshold, mm_gasp_upload_cost_bits, mm_gasp_upload_cost_partitions
from sbpcodes.interpolation import degree_sum, degree_sum_as_printed, sbp_support
from sbpcodes.privacy import privacy_scan, probe_key
from sbpcodes.roundtrip import naive_roundtrip, sbp_roundtrip
from sbpcodes.sbp import SbpParams, sbp_recovery_threshold, sbp_upload_cost_bits, sbp_upload_cost_partitions
from sbpcodes.sim import run_sweep

OK, CHECK_FAILED, USAGE = 0, 1, 2

CSV_COLUMNS = ["ucb", "scheme", "c", "m", "r_th", "act_mean", "act_std", "feasible_frac", "trials", "seed"]


def fmt_time(x) -> str:
    return "" if x is None else f"{x:.6g}"


def parse_range(text: str) -> range:
    """``"a..b"`` inclusive, a single integer, or an empty string for no values."""
    text = text.strip()
    if not text:
        return range(0)
    lo, sep, hi = text.partition("..")
    if not sep:
        return range(int(lo), int(lo) + 1)
    return range(int(lo), int(hi) + 1)


def threshold_rows(K: int, L: int, T: int, ms, N: int, bits=None, q: int = 2**31 - 1):
    """One row per m: thresholds of both schemes and their upload costs."""
    rows = []
    for m in ms:
        sbp_ok = 1 <= m <= L
        if bits is None:
            sbp_up = sbp_upload_cost_partitions(N, m) if sbp_ok else None
            gasp_up = mm_gasp_upload_cost_partitions(N, m)
        else:
            r, s, t = bits
            sbp_up = sbp_upload_cost_bits(SbpParams(K, L, T, m, N, PrimeField(q)), r, s, t) if sbp_ok else None
            gasp_up = mm_gasp_upload_cost_bits(N, m, r, s, t, K, L, q)
        rows.append({
            "m": m,
            "sbp_r_th": sbp_recovery_threshold(K, L, T, m) if sbp_ok else None,
            "mm_gasp_r_th": mm_gasp_recovery_threshold(K, L, T, m),
            "sbp_upload": sbp_up,
            "mm_gasp_upload": gasp_up,
        })
    return rows


def write_csv(rows, columns, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if row[c] is None else row[c] for c in columns])


def cmd_thresholds(args) -> int:
    if min(args.K, args.L, args.T, args.N) < 1:
        raise SbpError("K, L, T and N must be positive")
    ms = parse_range(args.m)
    if any(m < 1 for m in ms):
        raise SbpError("m must be positive")
    rows = threshold_rows(args.K, args.L, args.T, ms, args.N, args.bits, args.q)
    write_csv(rows, ["m", "sbp_r_th", "mm_gasp_r_th", "sbp_upload", "mm_gasp_upload"], sys.stdout)
    return OK


def sweep_csv(outcome) -> str:
    buf = io.StringIO()
    rows = []
    for r in outcome.rows:
        r_th = r.r_th if r.r_th is None or isinstance(r.r_th, int) else fmt_time(r.r_th)
        rows.append({
            "ucb": r.ucb, "scheme": r.scheme, "c": r.c, "m": r.m, "r_th": r_th,
            "act_mean": fmt_time(r.act_mean), "act_std": fmt_time(r.act_std),
            "feasible_frac": f"{r.feasible_frac:.6g}", "trials": r.trials, "seed": r.seed,
        })
    write_csv(rows, CSV_COLUMNS, buf)
    return buf.getvalue()


def cmd_simulate(args) -> int:
    run = config_mod.load(args.config)
    workers = args.workers if args.workers is not None else run.workers
    outcome = run_sweep(run.scenario, workers=workers)
    text = sweep_csv(outcome)
    output = args.output or run.output
    if output and output != "-":
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not args.check:
        return OK
    tol = run.tolerance if run.tolerance is not None else 0.05
    status = OK
    for scheme, ucb, want in run.expect:
        got = outcome.row(scheme, ucb).act_mean
        good = got is not None and abs(got - want) <= tol * want
        status = status if good else CHECK_FAILED
        print(f"{'PASS' if good else 'FAIL'} {scheme}@{ucb}: act {fmt_time(got)} vs {want} (+/-{tol:.0%})",
              file=sys.stderr)
    return status


def cmd_decode_roundtrip(args) -> int:
    rng = np.random.default_rng(args.seed)
    wrong = failures = 0
    dims = dict(N=args.N, r=args.r, s=args.s, t=args.t)
    for trial in range(args.trials):
        if args.scheme == "sbp":
            res = sbp_roundtrip(args.K, args.L, args.T, args.m, args.q, rng, **dims)
        else:
            res = naive_roundtrip(args.K, args.L, args.T, args.mA, args.mB, args.q, rng, **dims)
        if res.decode_failed:
            failures += 1
            print(f"trial {trial}: decoding failure, key={list(res.key)}")
        elif not res.ok:
            wrong += 1
            print(f"trial {trial}: WRONG product, key={list(res.key)}")
    print(f"{args.trials} trials, {failures} decoding failures, {wrong} wrong products")
    status = CHECK_FAILED if wrong else OK
    if args.scheme == "sbp":
        support = sbp_support(args.K, args.L, args.T, args.m)
        d = degree_sum(support)
        p = d / args.q
        slack = 3 * math.sqrt(p * (1 - p) / args.trials)
        rate = failures / args.trials
        print(f"failure rate {rate:.6g}, bound d/q = {d}/{args.q} = {p:.6g} "
              f"(closed form as printed gives {degree_sum_as_printed(args.K, args.L, args.T, args.m)})")
        if rate > p + slack:
            status = CHECK_FAILED
    elif failures:
        status = CHECK_FAILED
    print("PASS" if status == OK else "FAIL")
    return status


def cmd_privacy_scan(args) -> int:
    rng = np.random.default_rng(args.seed)
    points = list(probe_key(args.q, rng, args.N))
    if args.zero_x is not None:
        if not 0 <= args.zero_x < len(points):
            raise SbpError(f"worker {args.zero_x} does not exist")
        points[args.zero_x] = (0, points[args.zero_x][1])
    reports = privacy_scan(args.q, args.K, args.L, args.T, args.m, points, args.subset_size)
    status = OK
    for rep in reports:
        workers = ",".join(str(w) for w in rep.subset)
        if not rep.in_model:
            verdict = "OUT-OF-MODEL " + ("leaks" if not rep.independent else "no leak found")
        elif rep.independent:
            verdict = "PASS" + (" uniform" if rep.uniform else "")
        else:
            verdict = f"FAIL witness A,B={rep.witness}"
            status = CHECK_FAILED
        xs = ",".join(str(points[w][0]) for w in rep.subset)
        print(f"workers [{workers}] x=[{xs}]: {verdict}")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sbpcodes", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("thresholds", help="recovery thresholds and upload cost per m")
    t.add_argument("K", type=int)
    t.add_argument("L", type=int)
    t.add_argument("T", type=int)
    t.add_argument("m", help="range such as 1..99, a single value, or '' for none")
    t.add_argument("--N", type=int, default=450, help="workers, for the upload columns")
    t.add_argument("--bits", type=int, nargs=3, metavar=("R", "S", "T"),
                   help="report upload in bits for an R x S times S x T product")
    t.add_argument("--q", type=int, default=2**31 - 1)
    t.set_defaults(func=cmd_thresholds)

    s = sub.add_parser("simulate", help="run a configured straggler sweep, CSV out")
    s.add_argument("config")
    s.add_argument("--output", help="CSV path, '-' for stdout (overrides the config)")
    s.add_argument("--workers", type=int, help="processes for trials")
    s.add_argument("--check", action="store_true", help="compare with the config's expectations")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("decode-roundtrip", help="encode, compute and decode random products")
    d.add_argument("--scheme", choices=("sbp", "naive"), default="sbp")
    for name, default in (("K", 2), ("L", 2), ("T", 1), ("m", 2), ("mA", 1), ("mB", 1)):
        d.add_argument(f"--{name}", type=int, default=default)
    d.add_argument("--q", type=int, default=2**31 - 1)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--trials", type=int, default=1)
    d.add_argument("--N", type=int, help="workers (default: just above the threshold)")
    d.add_argument("--r", type=int)
    d.add_argument("--s", type=int, default=2)
    d.add_argument("--t", type=int)
    d.set_defaults(func=cmd_decode_roundtrip)

    v = sub.add_parser("privacy-scan", help="exhaustive share-distribution check")
    for name in ("K", "L", "T", "m"):
        v.add_argument(f"--{name}", type=int, default=1)
    v.add_argument("--q", type=int, default=5)
    v.add_argument("--N", type=int, help="workers (default q-1, every nonzero x)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--subset-size", type=int, help="coalition size (default T)")
    v.add_argument("--zero-x", type=int, metavar="WORKER", help="force x=0 for this worker")
    v.set_defaults(func=cmd_privacy_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SbpError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
