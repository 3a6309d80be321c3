"""Counting model of the clustered rateless baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sbpcodes.errors import InvalidParams


@dataclass(frozen=True)
class ClusterPlan:
    """Workers split into c speed groups; ``clusters[0]`` is the fastest."""

    clusters: tuple[tuple[int, ...], ...]

    @property
    def c(self) -> int:
        return len(self.clusters)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.clusters)

    @property
    def membership(self) -> dict[int, int]:
        return {w: u for u, g in enumerate(self.clusters) for w in g}


def cluster_assign(speeds, c: int) -> ClusterPlan:
    """Sort by descending speed (ties by index) and cut into near-equal groups."""
    speeds = np.asarray(speeds, dtype=float)
    N = len(speeds)
    if not 1 <= c <= N:
        raise InvalidParams(f"need 1 <= c <= N, got c={c}, N={N}")
    order = np.lexsort((np.arange(N), -speeds))
    base, extra = divmod(N, c)
    sizes = [base + (1 if u < extra else 0) for u in range(c)]
    groups, pos = [], 0
    for n in sizes:
        groups.append(tuple(int(w) for w in order[pos:pos + n]))
        pos += n
    return ClusterPlan(tuple(groups))


def useful_per_round(n_u: int, u: int, T: int) -> int:
    """Useful results from one finished round of cluster ``u`` (1-based).

    The fastest cluster pays for 2T masks, the others for T; tiny clusters
    yield nothing rather than a negative count.
    """
    if u < 1:
        raise InvalidParams("clusters are numbered from 1")
    if u == 1:
        return max((n_u - 2 * T + 1) // 2, 0)
    return max((n_u - T + 1) // 2, 0)


def decode_target(K: int, L: int, eps) -> int:
    """ceil(K L (1 + eps)), computed exactly on the decimal value of eps."""
    if eps < 0:
        raise InvalidParams("eps must be >= 0")
    e = Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)
    return math.ceil(K * L * (1 + e))
