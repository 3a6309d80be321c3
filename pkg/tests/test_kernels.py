import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbpcodes import _fallback, kernels

compiled = pytest.mark.skipif(kernels._compiled is None, reason="extension not built")

Q = 2**31 - 1


@compiled
@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(0, 4), st.integers(0, 2**32), st.sampled_from([2, 7, 101, Q]))
def test_solve_agrees(n, k, seed, q):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, q, size=(n, n), dtype=np.int64)
    if seed % 3 == 0 and n > 1:
        M[-1] = M[0]  # force singular
    rhs = rng.integers(0, q, size=(n, k + 1), dtype=np.int64)
    a = kernels._compiled.solve_mod(M.copy(), rhs.copy(), q)
    b = _fallback.solve_mod(M.copy(), rhs.copy(), q)
    assert (a is None) == (b is None)
    if a is not None:
        assert np.array_equal(a, b)
        assert np.array_equal(_fallback.matmul_mod(M, a, q), rhs % q)


@compiled
@settings(max_examples=50, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**32))
def test_matmul_agrees(a, b, c, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, Q, size=(a, b), dtype=np.int64)
    B = rng.integers(0, Q, size=(b, c), dtype=np.int64)
    expect = (A.astype(object) @ B.astype(object)) % Q
    assert np.array_equal(kernels._compiled.matmul_mod(A, B, Q), expect.astype(np.int64))
    assert np.array_equal(_fallback.matmul_mod(A, B, Q), expect.astype(np.int64))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 40), st.integers(1, 20), st.integers(0, 2**32), st.booleans(), st.data())
def test_kth_sorted_rows_against_sort(n, width, seed, ties, data):
    rng = np.random.default_rng(seed)
    d = rng.integers(0, 3, size=(n, width)).astype(float) if ties else rng.exponential(size=(n, width))
    c = np.cumsum(d, axis=1)
    m = data.draw(st.integers(1, width))
    k = data.draw(st.integers(1, n * m))
    want = np.sort(c[:, :m], axis=None)[k - 1]
    assert _fallback.kth_sorted_rows(c, m, k) == want
    assert kernels.kth_sorted_rows(c, m, k) == want
    assert kernels.kth_completion(d[:, :m].copy(), k) == pytest.approx(want, rel=1e-12)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch():
    env = dict(os.environ, SBPCODES_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from sbpcodes import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_object_dtype_uses_fallback():
    q = 2**61 - 1
    M = np.array([[2, 1], [1, 1]], dtype=object)
    rhs = np.array([[q - 1], [5]], dtype=object)
    X = kernels.solve_mod(M, rhs, q)
    assert [(2 * X[0, 0] + X[1, 0]) % q, (X[0, 0] + X[1, 0]) % q] == [q - 1, 5]
