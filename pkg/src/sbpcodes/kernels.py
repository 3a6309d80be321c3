"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``SBPCODES_PURE_PYTHON=1`` to force the fallback.  Object-dtype arrays
(fields with q >= 2**31) always take the fallback path.
"""

import os

import numpy as np

from sbpcodes import _fallback

_compiled = None
if not os.environ.get("SBPCODES_PURE_PYTHON"):
    try:
        from sbpcodes import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_INT64_LIMIT = 2**31


def _fast(q, *arrays):
    return _compiled is not None and q < _INT64_LIMIT and all(
        np.asarray(a).dtype == np.int64 for a in arrays
    )


def solve_mod(M, rhs, q):
    """Solve M X = rhs over GF(q); returns None if M is singular."""
    if _fast(q, M, rhs):
        return _compiled.solve_mod(M, rhs, q)
    return _fallback.solve_mod(M, rhs, q)


def matmul_mod(A, B, q):
    if _fast(q, A, B):
        return _compiled.matmul_mod(A, B, q)
    return _fallback.matmul_mod(A, B, q)


def kth_completion(durations, k):
    if _compiled is not None:
        return _compiled.kth_completion(durations, k)
    return _fallback.kth_completion(durations, k)


def kth_sorted_rows(completions, m, k):
    """k-th smallest entry of ``completions[:, :m]``; rows must be nondecreasing."""
    if _compiled is not None:
        return _compiled.kth_sorted_rows(np.ascontiguousarray(completions, dtype=np.float64), m, k)
    return _fallback.kth_sorted_rows(completions, m, k)
