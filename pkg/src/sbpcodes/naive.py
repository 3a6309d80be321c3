"""Direct secure extension of bivariate codes: masked A(x) and B(y) separately.

    A(x) = sum_k A_k x^(k-1) + sum_{i<=m_A T} R_i x^(K+i-1)
    B(y) = sum_l B_l y^(l-1) + sum_{i<=m_B T} S_i y^(L+i-1)

Each worker holds m_A x-derivatives of A and m_B y-derivatives of B and can
return m_A * m_B products, at the price of a threshold quadratic in T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbpcodes.errors import (
    DecodingFailure,
    DimensionMismatch,
    FieldTooSmall,
    InvalidParams,
    NonPrefixOrders,
    NotEnoughResults,
    SingularMatrix,
)
from sbpcodes.field import PrimeField, falling_factorial
from sbpcodes.interpolation import interpolate, rectangle_support
from sbpcodes.matrix import (
    BlockMatrix,
    PartitionSpec,
    assemble_product,
    linear_combination,
    mat_mul,
    partition_cols,
    partition_rows,
)
from sbpcodes.sbp import distinct_nonzero


def naive_recovery_threshold(K: int, L: int, T: int, m_A: int, m_B: int) -> int:
    return (K + m_A * T) * (L + m_B * T)


@dataclass(frozen=True)
class NaiveParams:
    K: int
    L: int
    T: int
    m_A: int
    m_B: int
    N: int
    field: PrimeField

    def __post_init__(self):
        if min(self.K, self.L, self.T, self.m_A, self.m_B, self.N) < 1:
            raise InvalidParams("K, L, T, m_A, m_B, N must all be >= 1")

    @property
    def recovery_threshold(self) -> int:
        return naive_recovery_threshold(self.K, self.L, self.T, self.m_A, self.m_B)

    @property
    def support(self):
        return rectangle_support(self.K + self.m_A * self.T, self.L + self.m_B * self.T)

    def check_field(self) -> None:
        top = (self.K + self.m_A * self.T - 1) + (self.L + self.m_B * self.T - 1)
        if self.field.q <= top:
            raise FieldTooSmall(f"q={self.field.q} must exceed {top}")


@dataclass(frozen=True)
class NaiveKey:
    points: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class NaiveMasks:
    R: tuple
    S: tuple


@dataclass(frozen=True)
class NaiveShare:
    worker: int
    a_shares: tuple[BlockMatrix, ...]
    b_shares: tuple[BlockMatrix, ...]


def naive_orders(m_A: int, m_B: int) -> list[tuple[int, int]]:
    """Row-major computation order over (a, b); every prefix is a lower set."""
    return [(a, b) for a in range(m_A) for b in range(m_B)]


def naive_keygen(params: NaiveParams, rng: np.random.Generator) -> NaiveKey:
    params.check_field()
    xs = distinct_nonzero(params.field, params.N, rng)
    ys = distinct_nonzero(params.field, params.N, rng)
    return NaiveKey(tuple(zip(xs, ys)))


def naive_draw_masks(params: NaiveParams, spec: PartitionSpec, rng: np.random.Generator) -> NaiveMasks:
    f = params.field
    R = tuple(BlockMatrix.random(f, *spec.a_block, rng) for _ in range(params.m_A * params.T))
    S = tuple(BlockMatrix.random(f, *spec.b_block, rng) for _ in range(params.m_B * params.T))
    return NaiveMasks(R, S)


def _derivative_eval(field: PrimeField, blocks, z: int, order: int) -> np.ndarray:
    q = field.q
    coeffs, used = [], []
    for e, blk in enumerate(blocks):
        if e >= order:
            coeffs.append(falling_factorial(e, order, field).value * pow(z, e - order, q) % q)
            used.append(blk)
    if not used:
        return field.zeros(np.asarray(blocks[0]).shape)
    return linear_combination(field, coeffs, used)


def naive_encode(A: BlockMatrix, B: BlockMatrix, params: NaiveParams, key: NaiveKey, masks: NaiveMasks) -> list[NaiveShare]:
    f = params.field
    spec = PartitionSpec.of(A, B, params.K, params.L)
    if len(masks.R) != params.m_A * params.T or len(masks.S) != params.m_B * params.T:
        raise DimensionMismatch("mask counts do not match m_A T and m_B T")
    a_poly = partition_rows(A, params.K) + list(masks.R)
    b_poly = partition_cols(B, params.L) + list(masks.S)
    del spec
    shares = []
    for i, (x, y) in enumerate(key.points):
        a_sh = tuple(BlockMatrix(f, _derivative_eval(f, a_poly, x, a)) for a in range(params.m_A))
        b_sh = tuple(BlockMatrix(f, _derivative_eval(f, b_poly, y, b)) for b in range(params.m_B))
        shares.append(NaiveShare(i, a_sh, b_sh))
    return shares


def naive_worker_compute(share: NaiveShare, a: int, b: int) -> BlockMatrix:
    if not (0 <= a < len(share.a_shares) and 0 <= b < len(share.b_shares)):
        raise InvalidParams(f"order ({a}, {b}) out of range")
    return mat_mul(share.a_shares[a], share.b_shares[b])


def _check_row_major_prefix(results, m_A: int, m_B: int) -> None:
    seen: dict[int, list] = {}
    for w, order, _ in results:
        seen.setdefault(w, []).append(tuple(order))
    full = naive_orders(m_A, m_B)
    for w, orders in seen.items():
        if sorted(orders, key=full.index) != full[: len(orders)] or len(set(orders)) != len(orders):
            raise NonPrefixOrders(f"worker {w} reported {orders}, not a row-major prefix")


def naive_decode(results, params: NaiveParams, key: NaiveKey) -> BlockMatrix:
    """Decode from ``(worker, (a, b), block)`` triples; first R_th are used."""
    params.check_field()
    results = list(results)
    need = params.recovery_threshold
    if len(results) < need:
        raise NotEnoughResults(f"{len(results)} results, recovery threshold is {need}")
    results = results[:need]
    for _, order, _ in results:
        a, b = order
        if not (0 <= a < params.m_A and 0 <= b < params.m_B):
            raise InvalidParams(f"order {order} outside the m_A x m_B grid")
    _check_row_major_prefix(results, params.m_A, params.m_B)
    requests = [(key.points[w], tuple(order)) for w, order, _ in results]
    values = [np.asarray(block) for _, _, block in results]
    try:
        coeffs = interpolate(params.field, params.support, requests, values)
    except SingularMatrix as exc:
        raise DecodingFailure(f"{exc}; key={key.points}") from None
    grid = {
        (k, l): BlockMatrix(params.field, coeffs[(k, l)]) for k in range(params.K) for l in range(params.L)
    }
    return assemble_product(grid)


def naive_upload_cost_partitions(N: int, m_A: int, m_B: int) -> int:
    return N * (m_A + m_B)
