"""Exhaustive privacy probe for SBP shares over tiny fields.

With scalar partitions every share is an affine function of the masks, so
the share distribution seen by a worker coalition can be counted exactly by
enumerating every mask assignment.  Privacy holds when that distribution is
the same for every input pair (A, B).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from sbpcodes.errors import InvalidParams, SpaceTooLarge
from sbpcodes.field import PrimeField, falling_factorial

MAX_MASK_SPACE = 10**6


@dataclass(frozen=True)
class ProbeConfig:
    """Scalar-partition SBP instance (r/K = s = t/L = 1) observed by ``subset``."""

    q: int
    K: int
    L: int
    T: int
    m: int
    points: tuple[tuple[int, int], ...]
    subset: tuple[int, ...]

    def __post_init__(self):
        PrimeField(self.q)
        # m > L is allowed here: it cannot be decoded, but the shares are well defined
        if min(self.K, self.L, self.T, self.m) < 1:
            raise InvalidParams("K, L, T, m must all be >= 1")
        if any(not 0 <= w < len(self.points) for w in self.subset):
            raise InvalidParams("subset names a worker without a point")
        if self.mask_space > MAX_MASK_SPACE:
            raise SpaceTooLarge(f"{self.mask_space} mask assignments exceed {MAX_MASK_SPACE}")

    @property
    def n_masks(self) -> int:
        return self.T * (1 + self.m)

    @property
    def mask_space(self) -> int:
        return self.q**self.n_masks


def _share_maps(cfg: ProbeConfig):
    """Affine maps share = D @ (A, B) + M @ masks, one row per observed value.

    Masks are ordered R_1..R_T, then S_{t,j} row-major in (t, j).
    """
    q, K, L, T, m = cfg.q, cfg.K, cfg.L, cfg.T, cfg.m
    f = PrimeField(q)
    data_rows, mask_rows = [], []
    for w in cfg.subset:
        x, y = (v % q for v in cfg.points[w])
        d = np.zeros(K + L, dtype=np.int64)
        mk = np.zeros(cfg.n_masks, dtype=np.int64)
        for k in range(K):
            d[k] = pow(x, k, q)
        for t in range(T):
            mk[t] = pow(x, K + t, q)
        data_rows.append(d)
        mask_rows.append(mk)
        for j in range(m):
            d = np.zeros(K + L, dtype=np.int64)
            mk = np.zeros(cfg.n_masks, dtype=np.int64)
            for l in range(j, L):
                d[K + l] = falling_factorial(l, j, f).value * pow(y, l - j, q) % q
            for t in range(T):
                for jj in range(j, m):
                    coeff = pow(x, K + t, q) * falling_factorial(jj, j, f).value * pow(y, jj - j, q)
                    mk[T + t * m + jj] = coeff % q
            data_rows.append(d)
            mask_rows.append(mk)
    return np.array(data_rows).reshape(-1, K + L), np.array(mask_rows).reshape(-1, cfg.n_masks)


def _all_masks(q: int, n: int) -> np.ndarray:
    grids = np.indices((q,) * n, dtype=np.int64)
    return grids.reshape(n, -1).T


def share_histogram(cfg: ProbeConfig, A, B) -> dict[tuple[int, ...], int]:
    """Count every share tuple the coalition can see, over all mask assignments."""
    A = [int(a) % cfg.q for a in A]
    B = [int(b) % cfg.q for b in B]
    if len(A) != cfg.K or len(B) != cfg.L:
        raise InvalidParams(f"expected {cfg.K} A-entries and {cfg.L} B-entries")
    D, M = _share_maps(cfg)
    offset = D @ np.array(A + B, dtype=np.int64) % cfg.q
    shares = (_all_masks(cfg.q, cfg.n_masks) @ M.T + offset) % cfg.q
    if shares.shape[1] == 0:
        return {(): cfg.mask_space}
    values, counts = np.unique(shares, axis=0, return_counts=True)
    return {tuple(int(v) for v in row): int(c) for row, c in zip(values, counts)}


def assert_independence(h1: dict, h2: dict) -> bool:
    """True iff the two histograms agree exactly, share tuple by share tuple."""
    return h1 == h2


def is_uniform(hist: dict, q: int, width: int) -> bool:
    """Every one of the q**width share tuples occurs equally often."""
    return len(hist) == q**width and len(set(hist.values())) == 1


@dataclass(frozen=True)
class SubsetReport:
    subset: tuple[int, ...]
    in_model: bool
    independent: bool
    uniform: bool
    witness: tuple | None  # an (A, B) pair whose histogram differs from A = B = 0

    @property
    def passed(self) -> bool:
        return self.independent or not self.in_model


def all_inputs(q: int, K: int, L: int):
    for A in itertools.product(range(q), repeat=K):
        for B in itertools.product(range(q), repeat=L):
            yield A, B


def scan_subset(cfg: ProbeConfig) -> SubsetReport:
    reference = share_histogram(cfg, [0] * cfg.K, [0] * cfg.L)
    width = len(cfg.subset) * (1 + cfg.m)
    witness = None
    for A, B in all_inputs(cfg.q, cfg.K, cfg.L):
        if not assert_independence(reference, share_histogram(cfg, A, B)):
            witness = (A, B)
            break
    return SubsetReport(
        subset=cfg.subset,
        in_model=len(cfg.subset) <= cfg.T,
        independent=witness is None,
        uniform=is_uniform(reference, cfg.q, width),
        witness=witness,
    )


def privacy_scan(q: int, K: int, L: int, T: int, m: int, points, subset_size: int | None = None) -> list[SubsetReport]:
    """Check every coalition of ``subset_size`` workers (default T) against all inputs."""
    size = T if subset_size is None else subset_size
    points = tuple(tuple(p) for p in points)
    return [
        scan_subset(ProbeConfig(q, K, L, T, m, points, subset))
        for subset in itertools.combinations(range(len(points)), size)
    ]


def probe_key(q: int, rng: np.random.Generator, N: int | None = None) -> tuple[tuple[int, int], ...]:
    """A valid key: distinct nonzero x's (all of them by default) and uniform y's."""
    n = q - 1 if N is None else N
    if not 1 <= n <= q - 1:
        raise InvalidParams(f"GF({q}) supports at most {q - 1} workers")
    xs = [int(v) + 1 for v in rng.permutation(q - 1)[:n]]
    ys = [int(v) for v in rng.integers(0, q, size=n)]
    return tuple(zip(xs, ys))
