"""Acceptance criteria 1-10, one PASS/FAIL line each.

Reference numbers come from the published plot tables (see
``reference_curves``); stochastic sweeps use 1000 paired-seed trials.
"""

import io
import itertools
import math
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from reference_curves import series
from sbpcodes import cli
from sbpcodes.field import MERSENNE_31, PrimeField
from sbpcodes.interpolation import degree_sum, degree_sum_as_printed, sbp_support
from sbpcodes.matrix import BlockMatrix, PartitionSpec
from sbpcodes.privacy import privacy_scan, probe_key
from sbpcodes.roundtrip import naive_roundtrip, random_arrivals, sbp_roundtrip
from sbpcodes.sbp import (
    SbpParams,
    sbp_decode,
    sbp_draw_masks,
    sbp_encode,
    sbp_keygen,
    sbp_worker_compute,
)
from sbpcodes.sim import ScenarioConfig, run_sweep

GRID = (22500, 27000, 31500, 36000, 40500, 45000, 54000, 63000, 72000, 90000,
        135000, 180000, 225000, 270000, 315000, 360000, 405000, 450000)
TRIALS = 1000
SEED = 2023


def within(got, want, tol):
    return got is not None and abs(got - want) <= tol * want


@pytest.fixture(scope="module")
def heterogeneous():
    t0 = time.perf_counter()
    cfg = ScenarioConfig.heterogeneous(schemes=("sbp", "mm-gasp", "rateless"), ucb=GRID,
                                       trials=TRIALS, seed=SEED, c=3)
    return run_sweep(cfg), time.perf_counter() - t0


@pytest.fixture(scope="module")
def heterogeneous_mostly_stable():
    cfg = ScenarioConfig.heterogeneous(schemes=("sbp", "rateless"), ucb=GRID, trials=TRIALS,
                                       seed=SEED, c=3, rho=0.001)
    return run_sweep(cfg)


@pytest.fixture(scope="module")
def homogeneous():
    t0 = time.perf_counter()
    cfg = ScenarioConfig.homogeneous(schemes=("sbp", "mm-gasp"), ucb=GRID, trials=TRIALS, seed=SEED)
    return run_sweep(cfg), time.perf_counter() - t0


def test_criterion_1_thresholds_vs_m(verdict):
    buf = io.StringIO()
    t0 = time.perf_counter()
    with redirect_stdout(buf):
        code = cli.main(["thresholds", "100", "100", "30", "1..99"])
    elapsed = time.perf_counter() - t0
    rows = [line.split(",") for line in buf.getvalue().splitlines()[1:]]
    got_sbp = {int(r[0]): int(r[1]) for r in rows}
    got_gasp = {int(r[0]): int(r[2]) for r in rows}
    want_sbp = series("r_th_vs_m", "SBP")
    want_gasp = series("r_th_vs_m", "MM-GASP")
    mismatches = [m for m in want_sbp if got_sbp.get(m) != want_sbp[m]]
    mismatches += [m for m in want_gasp if got_gasp.get(m) != want_gasp[m]]
    ok = code == 0 and not mismatches and len(want_sbp) == len(want_gasp) == 99 and elapsed < 1
    assert verdict(1, ok, f"{len(want_sbp) + len(want_gasp)} published points, "
                          f"{len(mismatches)} mismatches, {elapsed:.3f} s")


def test_criterion_2_thresholds_vs_ucb(verdict, heterogeneous):
    outcome, _ = heterogeneous
    t0 = time.perf_counter()
    bad = []
    for scheme, legend in (("sbp", "SBP"), ("mm-gasp", "MM-GASP")):
        for ucb, want in series("r_th", legend).items():
            got = outcome.row(scheme, ucb).r_th
            if got != want:
                bad.append((scheme, ucb, got, want))
    spot = {("sbp", 22500): 19321, ("sbp", 45000): 25771, ("sbp", 54000): 25900,
            ("sbp", 450000): 25900, ("mm-gasp", 54000): 23599, ("mm-gasp", 450000): 49999}
    bad += [(s, u, outcome.row(s, u).r_th, w) for (s, u), w in spot.items() if outcome.row(s, u).r_th != w]
    elapsed = time.perf_counter() - t0
    assert verdict(2, not bad and elapsed < 1, f"mismatches {bad or 'none'}")


def test_criterion_3_decode_roundtrip(verdict):
    t0 = time.perf_counter()
    sbp_bad, naive_bad, runs = [], {}, 0
    for K, L, T in itertools.product((1, 2, 3), (1, 2, 3), (1, 2)):
        for m in range(1, L + 1):
            for seed in range(20):
                runs += 1
                if not sbp_roundtrip(K, L, T, m, MERSENNE_31, np.random.default_rng(seed)).ok:
                    sbp_bad.append((K, L, T, m, seed))
        for mA, mB in itertools.product((1, 2), repeat=2):
            for seed in range(20):
                runs += 1
                if not naive_roundtrip(K, L, T, mA, mB, MERSENNE_31, np.random.default_rng(seed)).ok:
                    naive_bad.setdefault((K, L, T, mA, mB), []).append(seed)
    elapsed = time.perf_counter() - t0
    detail = (f"{runs} round trips in {elapsed:.1f} s; SBP failures {len(sbp_bad)}; "
              f"naive failures {naive_bad or 'none'}")
    assert verdict(3, not sbp_bad and not naive_bad and elapsed < 120, detail)


def test_criterion_4_one_to_any(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    f = PrimeField(MERSENNE_31)
    params = SbpParams(2, 2, 1, 2, 10, f)
    A, B = BlockMatrix.random(f, 4, 3, rng), BlockMatrix.random(f, 3, 4, rng)
    key = sbp_keygen(params, rng)
    shares = sbp_encode(A, B, params, key, sbp_draw_masks(params, PartitionSpec.of(A, B, 2, 2), rng))
    every = {(w, j): sbp_worker_compute(shares[w], j) for w in range(params.N) for j in range(params.m)}
    target, subsets, good = A @ B, set(), 0
    for _ in range(100):
        chosen = random_arrivals(params.N, params.m, rng)[: params.recovery_threshold]
        subsets.add(frozenset(chosen))
        results = [(w, j, every[(w, j)]) for w, j in chosen]
        good += sbp_decode(results, params, key) == target
    elapsed = time.perf_counter() - t0
    ok = good == 100 and elapsed < 30
    assert verdict(4, ok, f"{good}/100 subsets decoded ({len(subsets)} distinct), {elapsed:.1f} s")


def test_criterion_5_failure_bound(verdict):
    t0 = time.perf_counter()
    q, n = 101, 10_000
    d = degree_sum(sbp_support(2, 2, 1, 2))
    rng = np.random.default_rng(5)
    failures = wrong = 0
    for _ in range(n):
        res = sbp_roundtrip(2, 2, 1, 2, q, rng)
        failures += res.decode_failed
        wrong += not res.ok and not res.decode_failed
    p = d / q
    limit = p + 3 * math.sqrt(p * (1 - p) / n)
    elapsed = time.perf_counter() - t0
    ok = d == 25 and wrong == 0 and failures / n <= limit and elapsed < 300
    detail = (f"singular rate {failures / n:.4f} <= {limit:.4f} with d={d} "
              f"(closed form as printed: {degree_sum_as_printed(2, 2, 1, 2)}), "
              f"{wrong} wrong products, {elapsed:.1f} s")
    assert verdict(5, ok, detail)


def test_criterion_6_privacy(verdict):
    t0 = time.perf_counter()
    violations, scans = [], 0
    for (K, L, T, m), q in itertools.product(((1, 1, 1, 1), (1, 1, 1, 2)), (3, 5)):
        points = probe_key(q, np.random.default_rng(q))
        for rep in privacy_scan(q, K, L, T, m, points):
            scans += 1
            if not rep.independent:
                violations.append((q, m, rep.subset))
    zero = list(probe_key(5, np.random.default_rng(6)))
    zero[0] = (0, zero[0][1])
    negative_caught = not all(rep.independent for rep in privacy_scan(5, 1, 1, 1, 1, zero))
    elapsed = time.perf_counter() - t0
    ok = not violations and negative_caught and elapsed < 120
    assert verdict(6, ok, f"{scans} coalitions, violations {violations or 'none'}, "
                          f"x=0 leak detected: {negative_caught}, {elapsed:.1f} s")


def test_criterion_7_heterogeneous_act(verdict, heterogeneous):
    outcome, elapsed = heterogeneous
    sbp, gasp = series("heter_stable", "SBP"), series("heter_stable", "MM-GASP")
    checks = [("sbp", 45000, sbp[45000])] + [("sbp", u, sbp[u]) for u in GRID if u >= 54000]
    checks.append(("mm-gasp", 225000, gasp[225000]))
    misses = [(s, u, outcome.row(s, u).act_mean, w) for s, u, w in checks
              if not within(outcome.row(s, u).act_mean, w, 0.05)]
    detail = (f"SBP@45000 {outcome.row('sbp', 45000).act_mean:.4f} vs {sbp[45000]:.4f}, "
              f"SBP flat {outcome.row('sbp', 54000).act_mean:.4f} vs {sbp[54000]:.4f}, "
              f"MM-GASP@225000 {outcome.row('mm-gasp', 225000).act_mean:.4f} vs {gasp[225000]:.4f}; "
              f"sweep {elapsed:.0f} s")
    assert verdict(7, not misses and elapsed < 600, detail)


def test_criterion_8_homogeneous_act(verdict, homogeneous):
    outcome, elapsed = homogeneous
    sbp, gasp = series("homo_stable", "SBP"), series("homo_stable", "MM-GASP")
    got_s, got_g = outcome.row("sbp", 22500).act_mean, outcome.row("mm-gasp", 54000).act_mean
    ok = within(got_s, sbp[22500], 0.05) and within(got_g, gasp[54000], 0.05) and elapsed < 600
    assert verdict(8, ok, f"SBP@22500 {got_s:.4f} vs {sbp[22500]:.4f}, "
                          f"MM-GASP@54000 {got_g:.4f} vs {gasp[54000]:.4f}; sweep {elapsed:.0f} s")


def test_criterion_9_rateless(verdict, heterogeneous, heterogeneous_mostly_stable):
    stable, _ = heterogeneous
    act_ref = series("heter_stable", "Rateless, c=3")[72000]
    sub_ref = series("r_th", "Rateless, c=3")[72000]
    row = stable.row("rateless", 72000)
    band = within(row.act_mean, act_ref, 0.15) and within(row.r_th, sub_ref, 0.10)
    infeasible_low = all(stable.row("rateless", u).feasible_frac == 0 for u in GRID if u <= 63000)
    sbp_wins_low = all(stable.row("sbp", u).act_mean is not None for u in GRID if u <= 63000)

    unstable = heterogeneous_mostly_stable
    ratios = [unstable.row("rateless", u).act_mean / stable.row("rateless", u).act_mean
              for u in GRID if unstable.row("rateless", u).act_mean and stable.row("rateless", u).act_mean]
    sbp_shift = max(abs(unstable.row("sbp", u).act_mean / stable.row("sbp", u).act_mean - 1) for u in GRID)
    ok = band and infeasible_low and sbp_wins_low and ratios and min(ratios) >= 2 and sbp_shift < 0.02
    detail = (f"ACT@72000 {row.act_mean:.4f} vs {act_ref:.4f}, sub-tasks {row.r_th:.1f} vs {sub_ref}; "
              f"infeasible <= 63000: {infeasible_low}; mostly-stable rateless slowdown >= "
              f"{min(ratios) if ratios else float('nan'):.1f}x, SBP shift <= {sbp_shift:.2%}")
    assert verdict(9, ok, detail)


def _nonincreasing(xs):
    return all(b <= a for a, b in zip(xs, xs[1:]))


def test_criterion_10_shapes(verdict, heterogeneous, homogeneous):
    het, _ = heterogeneous
    hom, _ = homogeneous
    rows = [het.row("sbp", u) for u in GRID]
    cap = next(i for i, r in enumerate(rows) if r.m == 100)
    het_ok = _nonincreasing([r.act_mean for r in rows[: cap + 1]])
    het_ok &= len({r.act_mean for r in rows[cap:]}) == 1
    hom_ok = True
    for scheme in ("sbp", "mm-gasp"):
        acts = [hom.row(scheme, u).act_mean for u in GRID if hom.row(scheme, u).act_mean is not None]
        hom_ok &= _nonincreasing(acts[::-1])
    ok = het_ok and hom_ok
    assert verdict(10, ok, f"heterogeneous SBP nonincreasing then flat: {het_ok}; "
                           f"homogeneous SBP/MM-GASP nondecreasing in m: {hom_ok}")
