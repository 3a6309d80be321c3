# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: modular elimination, modular matmul, order statistics.

All modular kernels assume 0 <= entries < q < 2**31 so that a single product
fits in a signed 64-bit integer.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport free, malloc, qsort

ctypedef cnp.int64_t i64


cdef inline i64 _powmod(i64 base, i64 exp, i64 q) nogil:
    cdef i64 result = 1
    base %= q
    while exp > 0:
        if exp & 1:
            result = (result * base) % q
        base = (base * base) % q
        exp >>= 1
    return result


def solve_mod(M, rhs, long long q):
    """Gauss-Jordan elimination over GF(q).

    Returns the solution array, or None when M is singular.  The pivot of
    each column is the first nonzero entry at or below the diagonal.
    """
    cdef cnp.ndarray[i64, ndim=2] a = np.array(M, dtype=np.int64, copy=True)
    cdef cnp.ndarray[i64, ndim=2] b = np.array(rhs, dtype=np.int64, copy=True)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p = b.shape[1]
    cdef Py_ssize_t col, row, j
    cdef Py_ssize_t piv = 0
    cdef i64 inv, f, tmp
    with nogil:
        for col in range(n):
            piv = -1
            for row in range(col, n):
                if a[row, col] != 0:
                    piv = row
                    break
            if piv < 0:
                break
            if piv != col:
                for j in range(n):
                    tmp = a[col, j]; a[col, j] = a[piv, j]; a[piv, j] = tmp
                for j in range(p):
                    tmp = b[col, j]; b[col, j] = b[piv, j]; b[piv, j] = tmp
            inv = _powmod(a[col, col], q - 2, q)
            for j in range(col, n):
                a[col, j] = (a[col, j] * inv) % q
            for j in range(p):
                b[col, j] = (b[col, j] * inv) % q
            for row in range(n):
                if row == col:
                    continue
                f = a[row, col]
                if f == 0:
                    continue
                for j in range(col, n):
                    a[row, j] = (a[row, j] - f * a[col, j] % q + q) % q
                for j in range(p):
                    b[row, j] = (b[row, j] - f * b[col, j] % q + q) % q
    if piv < 0 and n > 0:
        return None
    return b


def matmul_mod(A, B, long long q):
    cdef cnp.ndarray[i64, ndim=2] a = np.ascontiguousarray(A, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] b = np.ascontiguousarray(B, dtype=np.int64)
    cdef Py_ssize_t r = a.shape[0], s = a.shape[1], t = b.shape[1]
    cdef cnp.ndarray[i64, ndim=2] out = np.zeros((r, t), dtype=np.int64)
    cdef Py_ssize_t i, j, k
    cdef i64 acc
    with nogil:
        for i in range(r):
            for j in range(t):
                acc = 0
                for k in range(s):
                    # each reduced term is < 2**31, so 2**32 terms cannot overflow
                    acc += (a[i, k] * b[k, j]) % q
                out[i, j] = acc % q
    return out


cdef int _cmp_double(const void* a, const void* b) noexcept nogil:
    cdef double x = (<const double*> a)[0], y = (<const double*> b)[0]
    return (x > y) - (x < y)


cdef inline Py_ssize_t _count_le(const double[:, ::1] c, Py_ssize_t i, Py_ssize_t lo,
                                 Py_ssize_t hi, double v) noexcept nogil:
    # number of entries of the sorted slice c[i, lo:hi] that are <= v
    cdef Py_ssize_t a = lo, b = hi, mid
    while a < b:
        mid = (a + b) >> 1
        if c[i, mid] <= v:
            a = mid + 1
        else:
            b = mid
    return a - lo


def kth_sorted_rows(const double[:, ::1] c, Py_ssize_t m, Py_ssize_t k):
    """k-th smallest (1-based) entry of ``c[:, :m]`` when every row is nondecreasing.

    Bisects on the value, shrinking a candidate window per row, and sorts
    the few survivors at the end.  No copy of ``c`` is made.
    """
    cdef Py_ssize_t n = c.shape[0]
    if m < 1 or m > c.shape[1]:
        raise ValueError("m out of range")
    if k < 1 or k > n * m:
        raise ValueError("k out of range")
    cdef Py_ssize_t* lo = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t* hi = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t* cnt = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    cdef double* buf = NULL
    cdef Py_ssize_t i, j, total, below = 0, at_or_below, pos
    cdef double vmin, vmax, pivot, result = 0.0
    cdef bint stuck = False
    try:
        with nogil:
            for i in range(n):
                lo[i] = 0
                hi[i] = m
            while True:
                total = 0
                vmin = 0.0
                vmax = 0.0
                for i in range(n):
                    if hi[i] > lo[i]:
                        if total == 0 or c[i, lo[i]] < vmin:
                            vmin = c[i, lo[i]]
                        if total == 0 or c[i, hi[i] - 1] > vmax:
                            vmax = c[i, hi[i] - 1]
                        total += hi[i] - lo[i]
                if total <= 4 * n + 64 or vmin == vmax or stuck:
                    break
                pivot = vmin + (vmax - vmin) * 0.5
                at_or_below = 0
                for i in range(n):
                    cnt[i] = _count_le(c, i, lo[i], hi[i], pivot)
                    at_or_below += cnt[i]
                if below + at_or_below >= k:
                    if at_or_below == total:
                        stuck = True
                    for i in range(n):
                        hi[i] = lo[i] + cnt[i]
                else:
                    if at_or_below == 0:
                        stuck = True
                    below += at_or_below
                    for i in range(n):
                        lo[i] += cnt[i]
            if vmin == vmax:
                result = vmin
            else:
                buf = <double*> malloc(total * sizeof(double))
                pos = 0
                for i in range(n):
                    for j in range(lo[i], hi[i]):
                        buf[pos] = c[i, j]
                        pos += 1
                qsort(buf, total, sizeof(double), _cmp_double)
                result = buf[k - below - 1]
    finally:
        free(lo)
        free(hi)
        free(cnt)
        free(buf)
    return result


def kth_completion(durations, Py_ssize_t k):
    """k-th smallest (1-based) completion time when row i lists worker i's task durations."""
    done = np.cumsum(np.asarray(durations, dtype=np.float64), axis=1)
    return kth_sorted_rows(np.ascontiguousarray(done), done.shape[1], k)
