"""Dense matrices over GF(q) and the row/column partitioning of the inputs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbpcodes import kernels
from sbpcodes.errors import DimensionMismatch, FieldMismatch, MissingBlock, NonDivisible
from sbpcodes.field import FieldElement, PrimeField


class BlockMatrix:
    """An immutable ``rows x cols`` matrix with entries in one prime field."""

    __slots__ = ("field", "_data")

    def __init__(self, field: PrimeField, data):
        arr = field.array(data)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got shape {arr.shape}")
        arr.setflags(write=False)
        self.field = field
        self._data = arr

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> BlockMatrix:
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> BlockMatrix:
        z = field.zeros((n, n))
        for i in range(n):
            z[i, i] = 1
        return cls(field, z)

    @classmethod
    def random(cls, field: PrimeField, rows: int, cols: int, rng: np.random.Generator) -> BlockMatrix:
        return cls(field, field.random((rows, cols), rng))

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def entries(self) -> list[FieldElement]:
        """Row-major entries as field elements."""
        return [self.field(v) for v in self._data.ravel()]

    def to_numpy(self) -> np.ndarray:
        return self._data.copy()

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self._data == other._data))
        )

    def __hash__(self):
        return hash((self.field, self.shape, tuple(int(v) for v in self._data.ravel())))

    def __repr__(self):
        return f"BlockMatrix({self.field}, {self._data.tolist()})"

    def __matmul__(self, other: BlockMatrix) -> BlockMatrix:
        return mat_mul(self, other)

    def __add__(self, other: BlockMatrix) -> BlockMatrix:
        return mat_add(self, other)

    def __sub__(self, other: BlockMatrix) -> BlockMatrix:
        return mat_add(self, scalar_mul(self.field(-1), other))

    def __neg__(self) -> BlockMatrix:
        return scalar_mul(self.field(-1), self)


@dataclass(frozen=True)
class PartitionSpec:
    """Shapes of A (r x s) and B (s x t) and their K-row / L-column split."""

    r: int
    s: int
    t: int
    K: int
    L: int

    def __post_init__(self):
        if min(self.r, self.s, self.t) < 1 or self.K < 1 or self.L < 1:
            raise NonDivisible("dimensions and partition counts must be positive")
        if self.r % self.K:
            raise NonDivisible(f"K={self.K} does not divide r={self.r}")
        if self.t % self.L:
            raise NonDivisible(f"L={self.L} does not divide t={self.t}")

    @property
    def a_block(self) -> tuple[int, int]:
        return self.r // self.K, self.s

    @property
    def b_block(self) -> tuple[int, int]:
        return self.s, self.t // self.L

    @property
    def product_block(self) -> tuple[int, int]:
        return self.r // self.K, self.t // self.L

    @classmethod
    def of(cls, A: BlockMatrix, B: BlockMatrix, K: int, L: int) -> PartitionSpec:
        if A.cols != B.rows:
            raise DimensionMismatch(f"A is {A.shape}, B is {B.shape}")
        return cls(A.rows, A.cols, B.cols, K, L)


def _same_field(*ms: BlockMatrix) -> PrimeField:
    f = ms[0].field
    for m in ms[1:]:
        if m.field != f:
            raise FieldMismatch(f"{f} vs {m.field}")
    return f


def partition_rows(A: BlockMatrix, K: int) -> list[BlockMatrix]:
    if K < 1 or A.rows % K:
        raise NonDivisible(f"K={K} does not divide {A.rows} rows")
    h = A.rows // K
    data = np.asarray(A)
    return [BlockMatrix(A.field, data[k * h:(k + 1) * h]) for k in range(K)]


def partition_cols(B: BlockMatrix, L: int) -> list[BlockMatrix]:
    if L < 1 or B.cols % L:
        raise NonDivisible(f"L={L} does not divide {B.cols} columns")
    w = B.cols // L
    data = np.asarray(B)
    return [BlockMatrix(B.field, data[:, l * w:(l + 1) * w]) for l in range(L)]


def mat_mul(X: BlockMatrix, Y: BlockMatrix) -> BlockMatrix:
    f = _same_field(X, Y)
    if X.cols != Y.rows:
        raise DimensionMismatch(f"cannot multiply {X.shape} by {Y.shape}")
    return BlockMatrix(f, kernels.matmul_mod(np.asarray(X), np.asarray(Y), f.q))


def mat_add(X: BlockMatrix, Y: BlockMatrix) -> BlockMatrix:
    f = _same_field(X, Y)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"cannot add {X.shape} and {Y.shape}")
    return BlockMatrix(f, (np.asarray(X) + np.asarray(Y)) % f.q)


def scalar_mul(c: FieldElement | int, X: BlockMatrix) -> BlockMatrix:
    if isinstance(c, FieldElement):
        if c.field != X.field:
            raise FieldMismatch(f"{c.field} vs {X.field}")
        c = c.value
    return BlockMatrix(X.field, np.asarray(X) * (int(c) % X.field.q) % X.field.q)


def linear_combination(field: PrimeField, coeffs, blocks) -> np.ndarray:
    """sum_i coeffs[i] * blocks[i] over GF(q), as a raw array."""
    out = None
    for c, b in zip(coeffs, blocks):
        term = np.asarray(b) * (int(c) % field.q) % field.q
        out = term if out is None else (out + term) % field.q
    return out


def assemble_product(blocks) -> BlockMatrix:
    """Stitch a K x L grid of product blocks back into one matrix.

    ``blocks`` is a nested sequence ``blocks[k][l]`` or a mapping keyed by
    ``(k, l)``, both zero-based.
    """
    if isinstance(blocks, dict):
        if not blocks:
            raise MissingBlock("empty block grid")
        K = 1 + max(k for k, _ in blocks)
        L = 1 + max(l for _, l in blocks)
        grid = []
        for k in range(K):
            row = []
            for l in range(L):
                if (k, l) not in blocks:
                    raise MissingBlock((k, l))
                row.append(blocks[(k, l)])
            grid.append(row)
    else:
        grid = [list(row) for row in blocks]
        if not grid or not grid[0]:
            raise MissingBlock("empty block grid")
        L = len(grid[0])
        for k, row in enumerate(grid):
            if len(row) != L:
                raise MissingBlock(f"row {k} has {len(row)} blocks, expected {L}")
            for l, b in enumerate(row):
                if b is None:
                    raise MissingBlock((k, l))
    f = _same_field(*[b for row in grid for b in row])
    shape = grid[0][0].shape
    if any(b.shape != shape for row in grid for b in row):
        raise DimensionMismatch("product blocks must share one shape")
    return BlockMatrix(f, np.block([[np.asarray(b) for b in row] for row in grid]))
