"""Exact arithmetic in prime fields GF(q) and the dense modular solver."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from sbpcodes import kernels
from sbpcodes.errors import (
    CoefficientOverflow,
    DimensionMismatch,
    FieldMismatch,
    InvalidParams,
    InversionOfZero,
    SingularMatrix,
)

MERSENNE_31 = 2**31 - 1


def _is_prime(n: int) -> bool:
    from sympy import isprime  # deterministic for the sizes used here

    return bool(isprime(n))


@dataclass(frozen=True)
class PrimeField:
    """The field of integers modulo a prime ``q``."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or self.q < 2 or not _is_prime(int(self.q)):
            raise InvalidParams(f"field modulus must be prime, got {self.q!r}")
        object.__setattr__(self, "q", int(self.q))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value) % self.q, self)

    def __repr__(self):
        return f"GF({self.q})"

    @cached_property
    def dtype(self):
        # int64 holds a product of two reduced elements only below 2**31
        return np.int64 if self.q < 2**31 else object

    def array(self, values) -> np.ndarray:
        """Reduce an integer array-like into this field's storage dtype."""
        if self.dtype is object:
            arr = np.array(values, dtype=object)
            out = np.empty(arr.shape, dtype=object)
            out.ravel()[:] = [int(v) % self.q for v in arr.ravel()]
            return out
        return np.mod(np.asarray(values, dtype=np.int64), self.q)

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(0)
            return out
        return np.zeros(shape, dtype=np.int64)

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        """Uniform elements drawn from ``rng``."""
        if self.dtype is object:
            # 64 surplus bits make the modular bias negligible
            nbytes = (self.q.bit_length() + 7) // 8 + 8
            flat = [int.from_bytes(rng.bytes(nbytes), "little") for _ in range(int(np.prod(shape)))]
            return self.array(np.array(flat, dtype=object).reshape(shape))
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def pow(self, base: int, exp: int) -> int:
        return pow(int(base), int(exp), self.q)

    def inv(self, a: int) -> int:
        a = int(a) % self.q
        if a == 0:
            raise InversionOfZero(f"0 has no inverse in GF({self.q})")
        return pow(a, self.q - 2, self.q)

    def bits_per_element(self) -> int:
        """ceil(log2 q): whole bits needed to transmit one element."""
        return (self.q - 1).bit_length()


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def _check(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.field(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.field(self.value - other.value)

    def __rsub__(self, other):
        return self.field(int(other)) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.field(self.value * other.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self.field(-self.value)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exp: int):
        if exp < 0:
            return self.inverse() ** (-exp)
        return self.field(pow(self.value, exp, self.field.q))

    def inverse(self) -> FieldElement:
        return self.field(self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.q})"


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def fe_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def fe_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def falling_factorial(b: int, k: int, field: PrimeField) -> FieldElement:
    """b (b-1) ... (b-k+1) mod q, the k-th derivative coefficient of y**b.

    Zero when k > b.  Degrees at or above q are refused: there the formal
    derivative and Taylor arguments stop being faithful.
    """
    if b < 0 or k < 0:
        raise InvalidParams("degrees must be non-negative")
    if b >= field.q:
        raise CoefficientOverflow(f"degree {b} >= field size {field.q}")
    if k > b:
        return field(0)
    out = 1
    for f in range(b - k + 1, b + 1):
        out = out * f % field.q
    return field(out)


def solve_linear(field: PrimeField, M, rhs) -> np.ndarray:
    """Solve ``M @ X = rhs`` over ``field``.

    ``rhs`` may be a vector or a matrix with one column per independent
    right-hand side.  Singularity depends on ``M`` only, so a singular system
    raises regardless of the data.
    """
    M = field.array(M)
    rhs = field.array(rhs)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"coefficient matrix must be square, got {M.shape}")
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs.reshape(-1, 1)
    if rhs.shape[0] != M.shape[0]:
        raise DimensionMismatch(f"rhs has {rhs.shape[0]} rows, system has {M.shape[0]}")
    X = kernels.solve_mod(M, rhs, field.q)
    if X is None:
        raise SingularMatrix("coefficient matrix is singular")
    return X[:, 0] if vector else X
