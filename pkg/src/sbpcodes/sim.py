"""Monte-Carlo straggler simulator.

Task times are shifted exponentials ``nu + Exp(rate)``.  Static schemes
(SBP, MM-GASP, naive bivariate) give every worker a fixed list of sub-tasks
and finish when the R_th-th result arrives anywhere.  The rateless baseline
runs per-cluster rounds and finishes when enough useful results are in.

Every trial owns its RNG stream, derived from ``(seed, trial)``, and all UCB
points of a trial share the same draws, so sweeps are paired and the output
does not depend on how trials are spread over processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from sbpcodes import kernels
from sbpcodes.errors import ConfigError
from sbpcodes.gasp import mm_gasp_recovery_threshold
from sbpcodes.naive import naive_recovery_threshold
from sbpcodes.rateless import cluster_assign, decode_target, useful_per_round
from sbpcodes.sbp import sbp_recovery_threshold

SCHEMES = ("sbp", "mm-gasp", "naive", "rateless")
STATIC_SCHEMES = ("sbp", "mm-gasp", "naive")
REDRAW_MODES = ("transient", "sticky")
LAW_KINDS = ("classes", "interval", "two-point")


@dataclass(frozen=True)
class WorkerProfile:
    rate: float
    nu: float
    cls: int = 0

    def __post_init__(self):
        if not self.rate > 0:
            raise ConfigError(f"rate must be positive, got {self.rate}")
        if self.nu < 0:
            raise ConfigError(f"nu must be nonnegative, got {self.nu}")


@dataclass(frozen=True)
class RedrawLaw:
    """Where a mostly-stable worker's new rate comes from.

    ``classes`` and ``two-point`` pick uniformly among ``values``;
    ``interval`` is uniform on ``[min(values), max(values)]``.
    """

    kind: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise ConfigError(f"unknown redraw law {self.kind!r}")
        if not self.values or any(v <= 0 for v in self.values):
            raise ConfigError("redraw law needs positive rates")
        if self.kind == "interval" and len(self.values) != 2:
            raise ConfigError("interval law takes exactly two endpoints")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        vals = np.asarray(self.values, dtype=float)
        if self.kind == "interval":
            return rng.uniform(vals.min(), vals.max(), size=size)
        return rng.choice(vals, size=size)


@dataclass(frozen=True)
class ScenarioConfig:
    N: int
    classes: tuple[tuple[float, int], ...]
    nu: float
    T: int
    K: int
    L: int
    schemes: tuple[str, ...] = ("sbp",)
    ucb: tuple[int, ...] = ()
    trials: int = 1000
    seed: int = 0
    rho: float = 0.0
    law: RedrawLaw | None = None
    static_redraw: str = "transient"
    rateless_redraw: str = "sticky"
    c: int = 3
    eps: float = 0.05
    cluster_by: str = "known"

    def __post_init__(self):
        if sum(n for _, n in self.classes) != self.N:
            raise ConfigError(f"class counts sum to {sum(n for _, n in self.classes)}, N={self.N}")
        if any(r <= 0 or n < 0 for r, n in self.classes):
            raise ConfigError("class rates must be positive and counts nonnegative")
        if min(self.N, self.T, self.K, self.L, self.trials) < 1:
            raise ConfigError("N, T, K, L and trials must all be >= 1")
        if not 0 <= self.rho <= 1:
            raise ConfigError(f"rho={self.rho} outside [0, 1]")
        if self.rho > 0 and self.law is None:
            raise ConfigError("rho > 0 needs a redraw law")
        if self.nu < 0 or self.eps < 0:
            raise ConfigError("nu and eps must be nonnegative")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise ConfigError(f"unknown scheme(s) {bad}; choose from {SCHEMES}")
        for mode in (self.static_redraw, self.rateless_redraw):
            if mode not in REDRAW_MODES:
                raise ConfigError(f"redraw mode must be one of {REDRAW_MODES}")
        if self.cluster_by not in ("known", "observed"):
            raise ConfigError("cluster_by must be 'known' or 'observed'")
        if "rateless" in self.schemes and not 1 <= self.c <= self.N:
            raise ConfigError(f"c={self.c} outside 1..N")
        if any(u < 0 for u in self.ucb):
            raise ConfigError("UCB values must be nonnegative")

    @property
    def rates(self) -> np.ndarray:
        return np.concatenate([np.full(n, float(r)) for r, n in self.classes])

    def profiles(self) -> list[WorkerProfile]:
        return [
            WorkerProfile(float(r), self.nu, i) for i, (r, n) in enumerate(self.classes) for _ in range(n)
        ]

    @classmethod
    def heterogeneous(cls, **overrides) -> ScenarioConfig:
        """Six speed classes of 75 workers, rates 10^-1 .. 10^-3.5 times KL."""
        K, L = overrides.get("K", 100), overrides.get("L", 100)
        rates = tuple(10 ** (-e) * K * L for e in (1, 1.5, 2, 2.5, 3, 3.5))
        base = dict(
            N=450,
            classes=tuple((r, 75) for r in rates),
            nu=10 / (K * L),
            T=30,
            K=K,
            L=L,
            law=RedrawLaw("classes", rates),
        )
        base.update(overrides)
        return cls(**base)

    @classmethod
    def homogeneous(cls, **overrides) -> ScenarioConfig:
        """450 identical workers at rate 10^-2 KL; redraws land in [1e-4, 1e-3] KL."""
        K, L = overrides.get("K", 100), overrides.get("L", 100)
        KL = K * L
        base = dict(
            N=450,
            classes=((1e-2 * KL, 450),),
            nu=10 / KL,
            T=30,
            K=K,
            L=L,
            law=RedrawLaw("interval", (1e-4 * KL, 1e-3 * KL)),
        )
        base.update(overrides)
        return cls(**base)


def sample_task_time(profile: WorkerProfile, rng: np.random.Generator) -> float:
    """One duration by inverse CDF: nu - ln(1 - U) / rate."""
    return profile.nu - math.log1p(-rng.random()) / profile.rate


def sample_durations(rates: np.ndarray, nu: float, rng: np.random.Generator) -> np.ndarray:
    """Vector form of :func:`sample_task_time`, one draw per entry of ``rates``."""
    rates = np.asarray(rates, dtype=float)
    return nu - np.log1p(-rng.random(rates.shape)) / rates


def mostly_stable_redraw(profile: WorkerProfile, rho: float, law: RedrawLaw, rng) -> WorkerProfile:
    """Keep the rate with probability 1 - rho, otherwise draw a fresh one from ``law``."""
    if not 0 <= rho <= 1:
        raise ConfigError(f"rho={rho} outside [0, 1]")
    if rng.random() < rho:
        return replace(profile, rate=float(law.sample(rng, 1)[0]))
    return profile


def redraw_rates(base, n: int, rho: float, law: RedrawLaw | None, mode: str, rng) -> np.ndarray:
    """Per-task (or per-round) rates of shape ``(len(base), n)``.

    Each slot redraws independently with probability ``rho``.  In
    ``transient`` mode a redraw affects that slot only; in ``sticky`` mode
    the new rate persists until the worker's next redraw.
    """
    base = np.asarray(base, dtype=float)
    rates = np.repeat(base[:, None], n, axis=1)
    if rho <= 0 or law is None or n == 0:
        return rates
    hit = rng.random(rates.shape) < rho
    count = int(hit.sum())
    if not count:
        return rates
    rates[hit] = law.sample(rng, count)
    if mode == "transient":
        return rates
    ext = np.concatenate([base[:, None], rates], axis=1)
    idx = np.where(hit, np.arange(1, n + 1), 0)
    np.maximum.accumulate(idx, axis=1, out=idx)
    return np.take_along_axis(ext, idx, axis=1)


@dataclass(frozen=True)
class StaticPlan:
    m: int
    tasks: int  # sub-tasks per worker
    r_th: int


def m_from_ucb(scheme: str, ucb: int, N: int, L: int) -> int | None:
    """Largest per-worker message count whose upload fits the budget, or None."""
    if scheme == "sbp":
        m = min(L, ucb // N - 1)
    elif scheme in ("mm-gasp", "naive"):
        m = ucb // (2 * N)
    else:
        raise ConfigError(f"no static upload model for {scheme!r}")
    return m if m >= 1 else None


def static_plan(scheme: str, ucb: int, N: int, K: int, L: int, T: int) -> StaticPlan | None:
    m = m_from_ucb(scheme, ucb, N, L)
    if m is None:
        return None
    if scheme == "sbp":
        return StaticPlan(m, m, sbp_recovery_threshold(K, L, T, m))
    if scheme == "mm-gasp":
        return StaticPlan(m, m, mm_gasp_recovery_threshold(K, L, T, m))
    # naive: m_A = m_B = m derivatives, so m*m products per worker
    return StaticPlan(m, m * m, naive_recovery_threshold(K, L, T, m, m))


def act_static(durations: np.ndarray, m: int, r_th: int) -> float | None:
    """Time of the r_th-th result when every worker runs its first ``m`` tasks in order."""
    durations = np.asarray(durations, dtype=float)
    if durations.shape[1] < m:
        raise ValueError(f"only {durations.shape[1]} durations per worker, need {m}")
    return act_from_completions(np.cumsum(durations[:, :m], axis=1), m, r_th)


def act_from_completions(completions: np.ndarray, m: int, r_th: int) -> float | None:
    """Same as :func:`act_static` on precomputed per-worker completion times.

    Sharing one ``completions`` array across budgets keeps paired sweeps cheap.
    """
    if m < 1 or completions.shape[0] * m < r_th:
        return None
    return kernels.kth_sorted_rows(completions, m, r_th)


@dataclass(frozen=True)
class RatelessRun:
    act: float
    subtasks: float
    rounds: int


def act_rateless(
    rates,
    nu: float,
    K: int,
    L: int,
    T: int,
    c: int,
    rng: np.random.Generator,
    *,
    eps: float = 0.05,
    rho: float = 0.0,
    law: RedrawLaw | None = None,
    mode: str = "sticky",
    cluster_by: str = "known",
    chunk: int = 128,
    max_rounds: int = 1 << 20,
) -> RatelessRun:
    """Decode time and sub-task count of the clustered rateless baseline.

    Round 1 is a speed-estimation task per worker that yields nothing.  After
    it each worker keeps starting tasks back to back; cluster u's round k is
    done when its slowest member finishes its k-th task.  Cluster 1 yields
    d_1 at that moment, any other cluster yields d_u once both it and
    cluster 1 have finished round k.  The budget check happens outside: the
    run consumes ``subtasks`` tasks of 2 partitions each.
    Returns ``inf`` fields when no cluster can ever yield anything.
    """
    rates = np.asarray(rates, dtype=float)
    N = len(rates)
    t0 = sample_durations(rates, nu, rng)
    speeds = rates if cluster_by == "known" else 1.0 / t0
    plan = cluster_assign(speeds, c)
    sizes = np.array(plan.sizes)
    yields = np.array([useful_per_round(n, u + 1, T) for u, n in enumerate(sizes)])
    target = decode_target(K, L, eps)
    if yields.sum() == 0:
        return RatelessRun(math.inf, math.inf, 0)
    members = [np.array(g) for g in plan.clusters]

    clock, current = t0, rates
    finish = [np.empty(0) for _ in members]
    while True:
        r = redraw_rates(current, chunk, rho, law, mode, rng)
        current = r[:, -1]
        done = clock[:, None] + np.cumsum(sample_durations(r, nu, rng), axis=1)
        clock = done[:, -1]
        finish = [np.concatenate([f, done[g].max(axis=0)]) for f, g in zip(finish, members)]
        times = np.concatenate([finish[0]] + [np.maximum(f, finish[0]) for f in finish[1:]])
        gains = np.repeat(yields, len(finish[0]))
        order = np.argsort(times, kind="stable")
        total = np.cumsum(gains[order])
        hit = int(np.searchsorted(total, target))
        rounds = len(finish[0])
        if hit < len(total):
            t_star = float(times[order][hit])
            # rounds not simulated yet all end after the slowest last round
            if min(f[-1] for f in finish) > t_star:
                sub = N + int(sum(n * np.count_nonzero(f <= t_star) for n, f in zip(sizes, finish)))
                return RatelessRun(t_star, float(sub), rounds)
        if rounds >= max_rounds:
            return RatelessRun(math.inf, math.inf, rounds)


@dataclass
class SweepRow:
    ucb: int
    scheme: str
    c: int | None
    m: int | None
    r_th: float | None
    act_mean: float | None
    act_std: float | None
    feasible_frac: float
    trials: int
    seed: int


@dataclass
class SimOutcome:
    rows: list[SweepRow]
    # per (scheme, ucb): ACT of every trial, NaN where infeasible
    acts: dict = field(default_factory=dict)
    subtasks: dict = field(default_factory=dict)

    def row(self, scheme: str, ucb: int) -> SweepRow:
        for r in self.rows:
            if r.scheme == scheme and r.ucb == ucb:
                return r
        raise KeyError((scheme, ucb))


def trial_streams(seed: int, trial: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent generators for the static and the rateless part of one trial."""
    ss = np.random.SeedSequence([seed, trial])
    a, b = ss.spawn(2)
    return np.random.default_rng(a), np.random.default_rng(b)


def run_trial(cfg: ScenarioConfig, trial: int) -> dict:
    """All scheme/UCB results of one replication, keyed by ``(scheme, ucb)``."""
    rng_static, rng_rateless = trial_streams(cfg.seed, trial)
    out = {}
    plans = {
        (s, u): static_plan(s, u, cfg.N, cfg.K, cfg.L, cfg.T)
        for s in cfg.schemes
        if s in STATIC_SCHEMES
        for u in cfg.ucb
    }
    width = max((p.tasks for p in plans.values() if p is not None), default=0)
    out.update({key: (math.nan, math.nan) for key, plan in plans.items() if plan is None})
    if width:
        rates = redraw_rates(cfg.rates, width, cfg.rho, cfg.law, cfg.static_redraw, rng_static)
        completions = np.cumsum(sample_durations(rates, cfg.nu, rng_static), axis=1)
        for key, plan in plans.items():
            if plan is not None:
                act = act_from_completions(completions, plan.tasks, plan.r_th)
                out[key] = (math.nan if act is None else act, math.nan)
    if "rateless" in cfg.schemes:
        run = act_rateless(
            cfg.rates, cfg.nu, cfg.K, cfg.L, cfg.T, cfg.c, rng_rateless,
            eps=cfg.eps, rho=cfg.rho, law=cfg.law, mode=cfg.rateless_redraw,
            cluster_by=cfg.cluster_by,
        )
        for u in cfg.ucb:
            ok = 2 * run.subtasks <= u
            out[("rateless", u)] = (run.act if ok else math.nan, run.subtasks)
    return out


def _trial_batch(args):
    cfg, trials = args
    return [run_trial(cfg, t) for t in trials]


def _summary(values: np.ndarray) -> tuple[float | None, float | None]:
    ok = values[~np.isnan(values)]
    if not len(ok):
        return None, None
    std = float(np.std(ok, ddof=1)) if len(ok) > 1 else 0.0
    return float(np.mean(ok)), std


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> SimOutcome:
    """Run ``cfg.trials`` replications and aggregate per scheme and UCB point.

    ``workers > 1`` spreads trials over processes; results are merged in
    trial order, so the outcome is identical for any ``workers``.
    """
    trial_ids = list(range(cfg.trials))
    if workers > 1 and cfg.trials > 1:
        batches = [trial_ids[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_trial_batch, [(cfg, b) for b in batches]))
        results = [None] * cfg.trials
        for batch, part in zip(batches, parts):
            for t, res in zip(batch, part):
                results[t] = res
    else:
        results = [run_trial(cfg, t) for t in trial_ids]

    outcome = SimOutcome(rows=[])
    for scheme in cfg.schemes:
        for u in cfg.ucb:
            acts = np.array([r[(scheme, u)][0] for r in results], dtype=float)
            subs = np.array([r[(scheme, u)][1] for r in results], dtype=float)
            outcome.acts[(scheme, u)] = acts
            mean, std = _summary(acts)
            feasible = float(np.mean(~np.isnan(acts)))
            if scheme == "rateless":
                finite = subs[np.isfinite(subs)]
                r_th = float(np.mean(finite)) if len(finite) else None
                outcome.subtasks[(scheme, u)] = subs
                row = SweepRow(u, scheme, cfg.c, None, r_th, mean, std, feasible, cfg.trials, cfg.seed)
            else:
                plan = static_plan(scheme, u, cfg.N, cfg.K, cfg.L, cfg.T)
                m = plan.m if plan else None
                r_th = plan.r_th if plan else None
                row = SweepRow(u, scheme, None, m, r_th, mean, std, feasible, cfg.trials, cfg.seed)
            outcome.rows.append(row)
    return outcome
