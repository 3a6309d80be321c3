"""End-to-end encode / compute / decode checks against the plain product."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from sbpcodes.errors import DecodingFailure
from sbpcodes.field import PrimeField
from sbpcodes.matrix import BlockMatrix, PartitionSpec
from sbpcodes.naive import (
    NaiveParams,
    naive_decode,
    naive_draw_masks,
    naive_encode,
    naive_keygen,
    naive_orders,
    naive_worker_compute,
)
from sbpcodes.sbp import (
    SbpParams,
    sbp_decode,
    sbp_draw_masks,
    sbp_encode,
    sbp_keygen,
    sbp_worker_compute,
)


def random_arrivals(N: int, per_worker: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """A random arrival order of ``(worker, task index)`` that respects each worker's order.

    Workers get random speeds, so some finish everything and others almost
    nothing before the first R_th results are in.
    """
    speed = rng.exponential(1.0, size=N) + 1e-3
    done = np.cumsum(rng.exponential(1.0, size=(N, per_worker)) / speed[:, None], axis=1)
    flat = np.argsort(done, axis=None, kind="stable")
    return [(int(i) // per_worker, int(i) % per_worker) for i in flat]


def default_workers(r_th: int, per_worker: int) -> int:
    return math.ceil(r_th / per_worker) + 2


@dataclass(frozen=True)
class RoundtripResult:
    ok: bool
    decode_failed: bool
    key: tuple


def sbp_roundtrip(
    K: int, L: int, T: int, m: int, q: int, rng: np.random.Generator,
    *, N: int | None = None, r: int | None = None, s: int = 2, t: int | None = None,
) -> RoundtripResult:
    """Random A, B; encode, compute every result, decode a random arrival prefix."""
    f = PrimeField(q)
    r = 2 * K if r is None else r
    t = 2 * L if t is None else t
    PartitionSpec(r, s, t, K, L)
    params = SbpParams(K, L, T, m, N or default_workers((K + T) * L + m * (K + T - 1), m), f)
    A = BlockMatrix.random(f, r, s, rng)
    B = BlockMatrix.random(f, s, t, rng)
    key = sbp_keygen(params, rng)
    masks = sbp_draw_masks(params, PartitionSpec.of(A, B, K, L), rng)
    shares = sbp_encode(A, B, params, key, masks)
    arrivals = random_arrivals(params.N, m, rng)[: params.recovery_threshold]
    results = [(w, j, sbp_worker_compute(shares[w], j)) for w, j in arrivals]
    try:
        C = sbp_decode(results, params, key)
    except DecodingFailure:
        return RoundtripResult(False, True, key.points)
    return RoundtripResult(C == A @ B, False, key.points)


def naive_roundtrip(
    K: int, L: int, T: int, m_A: int, m_B: int, q: int, rng: np.random.Generator,
    *, N: int | None = None, r: int | None = None, s: int = 2, t: int | None = None,
) -> RoundtripResult:
    f = PrimeField(q)
    r = 2 * K if r is None else r
    t = 2 * L if t is None else t
    per = m_A * m_B
    r_th = (K + m_A * T) * (L + m_B * T)
    params = NaiveParams(K, L, T, m_A, m_B, N or default_workers(r_th, per), f)
    A = BlockMatrix.random(f, r, s, rng)
    B = BlockMatrix.random(f, s, t, rng)
    key = naive_keygen(params, rng)
    masks = naive_draw_masks(params, PartitionSpec.of(A, B, K, L), rng)
    shares = naive_encode(A, B, params, key, masks)
    orders = naive_orders(m_A, m_B)
    arrivals = random_arrivals(params.N, per, rng)[:r_th]
    results = [(w, orders[i], naive_worker_compute(shares[w], *orders[i])) for w, i in arrivals]
    try:
        C = naive_decode(results, params, key)
    except DecodingFailure:
        return RoundtripResult(False, True, key.points)
    return RoundtripResult(C == A @ B, False, key.points)
