"""Monomial supports, (Hermite) interpolation matrices and the coefficient solver.

A request is a pair ``(point, order)``: ``point`` is ``(x, y)`` and
``order`` is either an int ``j`` (j-th derivative in y) or a pair ``(a, b)``
(a-th derivative in x, b-th in y).  Row entries at column ``(dx, dy)`` are

    ff(dx, a) * ff(dy, b) * x**(dx - a) * y**(dy - b)

with ``ff`` the falling factorial, or zero when a derivative kills the
monomial.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from sbpcodes.errors import InvalidParams, NonPrefixOrders, SingularMatrix, SizeMismatch
from sbpcodes.field import PrimeField, falling_factorial, solve_linear


@dataclass(frozen=True)
class MonomialSupport:
    """Ordered ``(dx, dy)`` exponent pairs, sorted by dy then dx."""

    degrees: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(self.degrees), key=lambda d: (d[1], d[0])))
        if ordered != tuple(self.degrees):
            object.__setattr__(self, "degrees", ordered)

    def __len__(self):
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __contains__(self, item):
        return tuple(item) in self.index

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {d: i for i, d in enumerate(self.degrees)}

    @property
    def max_degree(self) -> int:
        return max((max(dx, dy) for dx, dy in self.degrees), default=0)


def rectangle_support(nx: int, ny: int) -> MonomialSupport:
    """All x**dx y**dy with dx < nx and dy < ny."""
    return MonomialSupport(tuple((dx, dy) for dy in range(ny) for dx in range(nx)))


def sbp_support(K: int, L: int, T: int, m: int) -> MonomialSupport:
    """Support of A(x)B(x,y) for the secure bivariate code.

    The data rectangle dx <= K+T-1, dy <= L-1 plus the mask strip
    K+T <= dx <= 2K+2T-2, dy <= m-1.
    """
    if min(K, L, T, m) < 1:
        raise InvalidParams("K, L, T, m must all be >= 1")
    if m > L:
        raise InvalidParams(f"m={m} exceeds L={L}")
    top = [(dx, dy) for dy in range(L) for dx in range(K + T)]
    strip = [(dx, dy) for dy in range(m) for dx in range(K + T, 2 * K + 2 * T - 1)]
    return MonomialSupport(tuple(top + strip))


def degree_sum(support: MonomialSupport) -> int:
    """Sum of total degrees dx + dy over the support."""
    return sum(dx + dy for dx, dy in support)


def xi(a: int, b: int) -> int:
    """Closed-form degree sum of the full rectangle 0..a by 0..b."""
    return a * (a + 1) // 2 * (b + 1) + b * (b + 1) // 2 * (a + 1)


def degree_sum_closed_form(K: int, L: int, T: int, m: int) -> int:
    return xi(K + T - 1, L - 1) + xi(2 * K + 2 * T - 2, m - 1) - xi(K + T - 1, m - 1)


def degree_sum_as_printed(K: int, L: int, T: int, m: int) -> int:
    """The failure-bound numerator with the published ``-8K`` coefficient.

    Kept only for reporting next to :func:`degree_sum`; it disagrees with the
    direct sum (21 vs 25 at K=L=2, T=1, m=2).
    """
    s = K + T
    first = m * (3 * s * s + m * s - 8 * K - 6 * T - m + 3)
    second = s * L * (K + L + T - 2)
    return (first + second) // 2


def _split_order(order) -> tuple[int, int]:
    if isinstance(order, (int, np.integer)):
        return 0, int(order)
    a, b = order
    return int(a), int(b)


def derivative_row(field: PrimeField, support: MonomialSupport, point, order) -> np.ndarray:
    """One interpolation-matrix row: a derivative of every monomial at ``point``."""
    a, b = _split_order(order)
    x, y = (int(v) % field.q for v in point)
    q = field.q
    row = field.zeros(len(support))
    for col, (dx, dy) in enumerate(support):
        if dx < a or dy < b:
            continue
        coeff = falling_factorial(dx, a, field).value * falling_factorial(dy, b, field).value
        row[col] = coeff * pow(x, dx - a, q) % q * pow(y, dy - b, q) % q
    return row


def _is_lower_set(orders) -> bool:
    s = set(orders)
    for a, b in s:
        if (a > 0 and (a - 1, b) not in s) or (b > 0 and (a, b - 1) not in s):
            return False
    return True


def check_lower_sets(requests) -> None:
    """Every point's requested orders must be closed under lowering any order."""
    per_point = defaultdict(list)
    for point, order in requests:
        per_point[tuple(int(v) for v in point)].append(_split_order(order))
    for point, orders in per_point.items():
        if not _is_lower_set(orders):
            raise NonPrefixOrders(f"orders {sorted(orders)} at point {point} skip a lower order")


@dataclass(frozen=True)
class InterpolationMatrix:
    matrix: np.ndarray
    tags: tuple = dc_field(default=())

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def build_matrix(field: PrimeField, support: MonomialSupport, requests, tags=None) -> InterpolationMatrix:
    """Square system whose rows are the requested derivative evaluations."""
    requests = list(requests)
    if len(requests) != len(support):
        raise SizeMismatch(f"{len(requests)} requests for {len(support)} unknowns")
    check_lower_sets(requests)
    M = field.zeros((len(support), len(support)))
    for r, (point, order) in enumerate(requests):
        M[r] = derivative_row(field, support, point, order)
    return InterpolationMatrix(M, tuple(tags) if tags is not None else tuple(requests))


def interpolate(field: PrimeField, support: MonomialSupport, requests, values) -> dict:
    """Recover every coefficient block from derivative evaluations.

    ``values[i]`` is the (block-valued) evaluation for ``requests[i]``.
    Returns ``{(dx, dy): block}`` with blocks as raw arrays.
    Raises :class:`SingularMatrix` when the system has no unique solution.
    """
    values = [field.array(np.asarray(v)) for v in values]
    if len(values) != len(requests):
        raise SizeMismatch("one value per request is required")
    M = build_matrix(field, support, requests).matrix
    shape = values[0].shape if values else ()
    rhs = field.zeros((len(values), int(np.prod(shape)) if shape else 1))
    for i, v in enumerate(values):
        rhs[i] = v.reshape(-1)
    try:
        coeffs = solve_linear(field, M, rhs)
    except SingularMatrix:
        raise SingularMatrix("interpolation matrix is singular") from None
    return {deg: coeffs[i].reshape(shape) for i, deg in enumerate(support)}


def evaluate_derivative(field: PrimeField, coefficients: dict, point, order) -> np.ndarray:
    """Forward map: the requested derivative of sum C_{dx,dy} x^dx y^dy at ``point``."""
    support = MonomialSupport(tuple(coefficients))
    row = derivative_row(field, support, point, order)
    out = None
    for c, deg in zip(row, support):
        term = np.asarray(coefficients[deg]) * int(c) % field.q
        out = term if out is None else (out + term) % field.q
    return out
