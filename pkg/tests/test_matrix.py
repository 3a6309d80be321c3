import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbpcodes.errors import DimensionMismatch, FieldMismatch, MissingBlock, NonDivisible
from sbpcodes.field import MERSENNE_31, PrimeField
from sbpcodes.matrix import (
    BlockMatrix,
    PartitionSpec,
    assemble_product,
    linear_combination,
    mat_add,
    mat_mul,
    partition_cols,
    partition_rows,
    scalar_mul,
)


def naive_product(A, B, q):
    a = np.array(A, dtype=object)
    b = np.array(B, dtype=object)
    return (a @ b) % q


@pytest.mark.parametrize("q", [7, MERSENNE_31, 2**61 - 1])
def test_mat_mul_matches_object_oracle(backend, rng, q):
    f = PrimeField(q)
    for shape in ((1, 1, 1), (3, 4, 2), (8, 17, 5)):
        r, s, t = shape
        A = BlockMatrix.random(f, r, s, rng)
        B = BlockMatrix.random(f, s, t, rng)
        got = np.array(mat_mul(A, B), dtype=object)
        assert np.array_equal(got, naive_product(A, B, q))


def test_partition_and_assemble_roundtrip(gf, rng):
    A = BlockMatrix.random(gf, 6, 4, rng)
    B = BlockMatrix.random(gf, 4, 9, rng)
    rows = partition_rows(A, 3)
    cols = partition_cols(B, 3)
    assert [b.shape for b in rows] == [(2, 4)] * 3
    assert [b.shape for b in cols] == [(4, 3)] * 3
    grid = {(k, l): rows[k] @ cols[l] for k in range(3) for l in range(3)}
    assert assemble_product(grid) == A @ B
    assert assemble_product([[rows[k] @ cols[l] for l in range(3)] for k in range(3)]) == A @ B


def test_partition_errors(gf, rng):
    A = BlockMatrix.random(gf, 5, 2, rng)
    with pytest.raises(NonDivisible):
        partition_rows(A, 2)
    with pytest.raises(NonDivisible):
        partition_cols(A, 3)
    with pytest.raises(NonDivisible):
        PartitionSpec(5, 2, 4, 2, 2)
    with pytest.raises(DimensionMismatch):
        PartitionSpec.of(A, BlockMatrix.random(gf, 3, 3, rng), 1, 1)


def test_partition_spec_shapes():
    spec = PartitionSpec(6, 5, 8, 3, 4)
    assert spec.a_block == (2, 5)
    assert spec.b_block == (5, 2)
    assert spec.product_block == (2, 2)


def test_assemble_missing_block(gf):
    z = BlockMatrix.zeros(gf, 1, 1)
    with pytest.raises(MissingBlock):
        assemble_product({(0, 0): z, (1, 1): z})
    with pytest.raises(MissingBlock):
        assemble_product([[z, None]])
    with pytest.raises(MissingBlock):
        assemble_product({})


def test_field_mismatch(rng):
    A = BlockMatrix.random(PrimeField(7), 2, 2, rng)
    B = BlockMatrix.random(PrimeField(11), 2, 2, rng)
    with pytest.raises(FieldMismatch):
        mat_mul(A, B)
    with pytest.raises(FieldMismatch):
        mat_add(A, B)


def test_identity_and_arithmetic(gf, rng):
    A = BlockMatrix.random(gf, 3, 3, rng)
    assert A @ BlockMatrix.identity(gf, 3) == A
    assert A + (-A) == BlockMatrix.zeros(gf, 3, 3)
    assert A - A == BlockMatrix.zeros(gf, 3, 3)
    assert scalar_mul(gf(2), A) == A + A
    assert hash(A) == hash(BlockMatrix(gf, np.asarray(A).copy()))


def test_entries_are_field_elements(gf):
    M = BlockMatrix(gf, [[1, 2], [3, MERSENNE_31 + 4]])
    assert [e.value for e in M.entries] == [1, 2, 3, 4]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=MERSENNE_31 - 1), min_size=1, max_size=6),
       st.integers(min_value=0, max_value=2**32))
def test_linear_combination_matches_loop(coeffs, seed):
    f = PrimeField(MERSENNE_31)
    r = np.random.default_rng(seed)
    blocks = [f.random((2, 3), r) for _ in coeffs]
    expect = np.zeros((2, 3), dtype=object)
    for c, b in zip(coeffs, blocks):
        expect = (expect + c * np.array(b, dtype=object)) % MERSENNE_31
    got = linear_combination(f, coeffs, blocks)
    assert np.array_equal(np.array(got, dtype=object), expect)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4),
       st.integers(min_value=1, max_value=3), st.integers(min_value=0, max_value=2**32))
def test_block_product_identity(K, L, s, seed):
    # A_k B_l assembled over the grid equals AB
    f = PrimeField(MERSENNE_31)
    r = np.random.default_rng(seed)
    A = BlockMatrix.random(f, 2 * K, s, r)
    B = BlockMatrix.random(f, s, 3 * L, r)
    A_blocks, B_blocks = partition_rows(A, K), partition_cols(B, L)
    grid = [[A_blocks[k] @ B_blocks[l] for l in range(L)] for k in range(K)]
    assert assemble_product(grid) == A @ B
