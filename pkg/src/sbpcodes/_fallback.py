"""Pure numpy/Python versions of the compiled kernels.

Every function here is dtype-generic: int64 arrays work when q < 2**31,
object arrays of Python ints work for any q.
"""

import numpy as np


def solve_mod(M, rhs, q):
    a = np.array(M, copy=True)
    b = np.array(rhs, copy=True)
    n = a.shape[0]
    for col in range(n):
        nz = np.flatnonzero(a[col:, col])
        if nz.size == 0:
            return None
        piv = col + int(nz[0])
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        inv = pow(int(a[col, col]), q - 2, q)
        a[col] = a[col] * inv % q
        b[col] = b[col] * inv % q
        f = a[:, col].copy()
        f[col] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            # outer products reduced term by term to stay inside int64
            a[rows] = (a[rows] - f[rows, None] * a[col][None, :] % q) % q
            b[rows] = (b[rows] - f[rows, None] * b[col][None, :] % q) % q
    return b


def matmul_mod(A, B, q):
    A = np.asarray(A)
    B = np.asarray(B)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.result_type(A, B))
    for k in range(A.shape[1]):
        out = (out + np.outer(A[:, k], B[k, :]) % q) % q
    return out


def kth_completion(durations, k):
    d = np.asarray(durations, dtype=np.float64)
    n, m = d.shape
    if k < 1 or k > n * m:
        raise ValueError("k out of range")
    done = np.cumsum(d, axis=1).ravel()
    return float(np.partition(done, k - 1)[k - 1])


def kth_sorted_rows(c, m, k):
    c = np.asarray(c, dtype=np.float64)
    n = c.shape[0]
    if not 1 <= m <= c.shape[1]:
        raise ValueError("m out of range")
    if k < 1 or k > n * m:
        raise ValueError("k out of range")
    return float(np.partition(c[:, :m].ravel(), k - 1)[k - 1])
