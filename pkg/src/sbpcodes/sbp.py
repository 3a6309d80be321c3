"""Secure bivariate polynomial (SBP) codes.

Encoding polynomials, for data blocks A_k, B_l and uniform masks R_t, S_{t,j}:

    A(x)   = sum_k A_k x^(k-1) + sum_t R_t x^(K+t-1)
    B(x,y) = sum_l B_l y^(l-1) + sum_t sum_j S_{t,j} x^(K+t-1) y^(j-1)

Worker i receives A(x_i) and the y-derivatives of orders 0..m-1 of B at
(x_i, y_i), and returns the products A(x_i) d^j B(x_i, y_i) in increasing j.
Every mask term lands on a monomial with x-degree >= K, so the coefficient
of x^(k-1) y^(l-1) with k <= K is exactly A_k B_l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sbpcodes.errors import (
    DecodingFailure,
    DimensionMismatch,
    FieldTooSmall,
    InvalidParams,
    NotEnoughResults,
    SingularMatrix,
)
from sbpcodes.field import PrimeField, falling_factorial
from sbpcodes.interpolation import degree_sum, interpolate, sbp_support
from sbpcodes.matrix import (
    BlockMatrix,
    PartitionSpec,
    assemble_product,
    linear_combination,
    mat_mul,
    partition_cols,
    partition_rows,
)


def sbp_recovery_threshold(K: int, L: int, T: int, m: int) -> int:
    return (K + T) * L + m * (K + T - 1)


def min_field_size(K: int, L: int, T: int, m: int) -> int:
    """Smallest admissible q: it must exceed every degree in the support."""
    return 2 * (K + T - 1) + max(L - 1, m - 1) + 1


@dataclass(frozen=True)
class SbpParams:
    K: int
    L: int
    T: int
    m: int
    N: int
    field: PrimeField

    def __post_init__(self):
        if min(self.K, self.L, self.T, self.m, self.N) < 1:
            raise InvalidParams("K, L, T, m, N must all be >= 1")
        if self.m > self.L:
            raise InvalidParams(f"m={self.m} exceeds L={self.L}")

    @property
    def recovery_threshold(self) -> int:
        return sbp_recovery_threshold(self.K, self.L, self.T, self.m)

    @property
    def support(self):
        return sbp_support(self.K, self.L, self.T, self.m)

    @property
    def feasible(self) -> bool:
        return self.N * self.m >= self.recovery_threshold

    def check_field(self) -> None:
        need = min_field_size(self.K, self.L, self.T, self.m)
        if self.field.q < need:
            raise FieldTooSmall(f"q={self.field.q} must be at least {need} for these parameters")


@dataclass(frozen=True)
class SbpKey:
    points: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.points)

    def validate(self, field: PrimeField) -> None:
        xs = [x % field.q for x, _ in self.points]
        if any(x == 0 for x in xs):
            raise InvalidParams("evaluation x-coordinates must be nonzero")
        if len(set(xs)) != len(xs):
            raise InvalidParams("evaluation x-coordinates must be pairwise distinct")


@dataclass(frozen=True)
class SbpMasks:
    R: tuple  # T blocks, (r/K) x s
    S: tuple  # T rows of m blocks, s x (t/L)


@dataclass(frozen=True)
class SbpShare:
    worker: int
    a_share: BlockMatrix
    b_shares: tuple[BlockMatrix, ...]

    @property
    def m(self) -> int:
        return len(self.b_shares)


def sbp_failure_bound(params: SbpParams) -> Fraction:
    """Upper bound d/q on the probability that R_th ordered results fail to decode."""
    return Fraction(degree_sum(params.support), params.field.q)


def distinct_nonzero(field: PrimeField, n: int, rng: np.random.Generator) -> list[int]:
    if n > field.q - 1:
        raise FieldTooSmall(f"GF({field.q}) has only {field.q - 1} nonzero elements, need {n}")
    if field.q - 1 <= 4 * n:
        return [int(v) + 1 for v in rng.permutation(field.q - 1)[:n]]
    seen: dict[int, None] = {}
    while len(seen) < n:
        for v in rng.integers(1, field.q, size=n - len(seen)):
            seen.setdefault(int(v))
    return list(seen)


def sbp_keygen(params: SbpParams, rng: np.random.Generator) -> SbpKey:
    """Distinct nonzero x_i (uniform without replacement) and uniform y_i."""
    params.check_field()
    xs = distinct_nonzero(params.field, params.N, rng)
    ys = [int(v) for v in params.field.random((params.N,), rng)]
    return SbpKey(tuple(zip(xs, ys)))


def sbp_draw_masks(params: SbpParams, spec: PartitionSpec, rng: np.random.Generator) -> SbpMasks:
    f = params.field
    R = tuple(BlockMatrix.random(f, *spec.a_block, rng) for _ in range(params.T))
    S = tuple(
        tuple(BlockMatrix.random(f, *spec.b_block, rng) for _ in range(params.m))
        for _ in range(params.T)
    )
    return SbpMasks(R, S)


def encode_a(field: PrimeField, A_blocks, R, x: int) -> np.ndarray:
    K = len(A_blocks)
    blocks = list(A_blocks) + list(R)
    coeffs = [pow(x, e, field.q) for e in range(K + len(R))]
    return linear_combination(field, coeffs, blocks)


def encode_b(field: PrimeField, B_blocks, S, K: int, x: int, y: int, j: int) -> np.ndarray:
    """j-th y-derivative of B(x, y) at the point."""
    q = field.q
    coeffs, blocks = [], []
    for l, Bl in enumerate(B_blocks):
        if l >= j:
            coeffs.append(falling_factorial(l, j, field).value * pow(y, l - j, q) % q)
            blocks.append(Bl)
    for t, row in enumerate(S):
        xt = pow(x, K + t, q)
        for jj, Stj in enumerate(row):
            if jj >= j:
                coeffs.append(xt * falling_factorial(jj, j, field).value * pow(y, jj - j, q) % q)
                blocks.append(Stj)
    return linear_combination(field, coeffs, blocks)


def sbp_encode(A: BlockMatrix, B: BlockMatrix, params: SbpParams, key: SbpKey, masks: SbpMasks) -> list[SbpShare]:
    f = params.field
    spec = PartitionSpec.of(A, B, params.K, params.L)
    if len(masks.R) != params.T or len(masks.S) != params.T or any(len(r) != params.m for r in masks.S):
        raise DimensionMismatch("mask counts do not match (T, m)")
    if any(R.shape != spec.a_block for R in masks.R) or any(
        S.shape != spec.b_block for row in masks.S for S in row
    ):
        raise DimensionMismatch("mask block shapes do not match the partition")
    A_blocks = partition_rows(A, params.K)
    B_blocks = partition_cols(B, params.L)
    shares = []
    for i, (x, y) in enumerate(key.points):
        a_share = BlockMatrix(f, encode_a(f, A_blocks, masks.R, x))
        b_shares = tuple(
            BlockMatrix(f, encode_b(f, B_blocks, masks.S, params.K, x, y, j)) for j in range(params.m)
        )
        shares.append(SbpShare(i, a_share, b_shares))
    return shares


def sbp_worker_compute(share: SbpShare, j: int) -> BlockMatrix:
    """The worker's (j+1)-th sub-task: A(x_i) times the j-th y-derivative of B."""
    if not 0 <= j < share.m:
        raise InvalidParams(f"order {j} outside 0..{share.m - 1}")
    return mat_mul(share.a_share, share.b_shares[j])


def sbp_decode(results, params: SbpParams, key: SbpKey) -> BlockMatrix:
    """Reassemble AB from ``(worker, order, block)`` triples in arrival order.

    Only the first R_th results are used.  Orders per worker must form a
    prefix 0..k; any such collection of R_th results decodes unless the
    random evaluation points happen to make the system singular.
    """
    params.check_field()
    results = list(results)
    need = params.recovery_threshold
    if len(results) < need:
        raise NotEnoughResults(f"{len(results)} results, recovery threshold is {need}")
    results = results[:need]
    requests = [(key.points[w], (0, j)) for w, j, _ in results]
    values = [np.asarray(block) for _, _, block in results]
    try:
        coeffs = interpolate(params.field, params.support, requests, values)
    except SingularMatrix as exc:
        raise DecodingFailure(f"{exc}; key={key.points}") from None
    grid = {
        (k, l): BlockMatrix(params.field, coeffs[(k, l)]) for k in range(params.K) for l in range(params.L)
    }
    return assemble_product(grid)


def sbp_upload_cost_bits(params: SbpParams, r: int, s: int, t: int) -> int:
    """N (rs/K + m st/L) ceil(log2 q) bits for the whole static upload."""
    spec = PartitionSpec(r, s, t, params.K, params.L)
    per_worker = spec.r // spec.K * spec.s + params.m * spec.s * (spec.t // spec.L)
    return params.N * per_worker * params.field.bits_per_element()


def sbp_upload_cost_partitions(N: int, m: int) -> int:
    """Upload in partition units when A- and B-blocks have equal size: one A plus m B's."""
    return N * (m + 1)
