"""Threshold and upload-cost model of GASP and its multi-message variant.

No encoder: the exponent tables come from the GASP construction itself, and
only the resulting recovery thresholds are needed for timing comparisons.
"""

from __future__ import annotations

from sbpcodes.errors import InvalidParams
from sbpcodes.sbp import sbp_recovery_threshold


def gasp_recovery_threshold(K: int, L: int, T: int) -> int:
    if min(K, L, T) < 1:
        raise InvalidParams("K, L, T must all be >= 1")
    if L > K:
        K, L = L, K
    if T < L:
        if T == 1:
            return K * L + K + L
        return K * L + K + L + T * T + T - 3
    if T < K:
        return (K + T) * (L + 1) - 1
    return 2 * K * L + 2 * T - 1


def mm_gasp_recovery_threshold(K: int, L: int, T: int, m: int) -> int:
    """Each worker sees m evaluations, so m*T masks are needed per polynomial."""
    if m < 1:
        raise InvalidParams("m must be >= 1")
    return gasp_recovery_threshold(K, L, m * T)


def mm_gasp_upload_cost_partitions(N: int, m: int) -> int:
    return 2 * N * m


def mm_gasp_upload_cost_bits(N: int, m: int, r: int, s: int, t: int, K: int, L: int, q: int) -> int:
    return N * m * (r // K * s + s * (t // L)) * (q - 1).bit_length()


def crossover_predicate(K: int, L: int, T: int, m: int) -> bool:
    """True when the SBP threshold is strictly below the MM-GASP one."""
    return sbp_recovery_threshold(K, L, T, m) < mm_gasp_recovery_threshold(K, L, T, m)
