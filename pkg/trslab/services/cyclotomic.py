"""Exact cyclotomic integers Z[zeta_p] and character values."""

from __future__ import annotations

import cmath
import logging
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from trslab.services.field_service import FieldElement, FieldSpec

logger = logging.getLogger(__name__)


class CycInt:
    """sum c_i zeta_p^i over the basis 1, zeta, ..., zeta^(p-2).

    zeta^(p-1) is rewritten as -(1 + zeta + ... + zeta^(p-2)), so for p = 2 the
    value is the single integer c_0.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs) -> None:
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) == p:
            top = coeffs[-1]
            coeffs = [c - top for c in coeffs[:-1]]
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients for Z[zeta_{p}], got {len(coeffs)}")
        self.p = p
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_int(cls, p: int, x: int) -> CycInt:
        return cls(p, [x] + [0] * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, e: int) -> CycInt:
        full = [0] * p
        full[e % p] = 1
        return cls(p, full)

    @classmethod
    def from_counts(cls, p: int, counts) -> CycInt:
        """sum_j counts[j] zeta^j for a length-p count vector."""
        return cls(p, list(counts))

    def _lift(self, other) -> CycInt:
        if isinstance(other, int):
            return self.from_int(self.p, other)
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError("mixing different cyclotomic rings")
            return other
        return NotImplemented

    def __repr__(self) -> str:
        return f"CycInt({self.p}, {list(self.coeffs)})"

    def __str__(self) -> str:
        terms = [f"{c:+d}z^{i}" if i else f"{c:+d}" for i, c in enumerate(self.coeffs) if c]
        return "".join(terms).lstrip("+") or "0"

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __add__(self, other) -> CycInt:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return CycInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.p, [-c for c in self.coeffs])

    def __sub__(self, other) -> CycInt:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CycInt:
        return (-self) + other

    def __mul__(self, other) -> CycInt:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        full = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        full[(i + j) % p] += a * b
        return CycInt(p, full)

    __rmul__ = __mul__

    def conj(self) -> CycInt:
        full = [0] * self.p
        for i, c in enumerate(self.coeffs):
            full[(-i) % self.p] += c
        return CycInt(self.p, full)

    def is_integer(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def trace(self) -> int:
        """Sum over all p-1 embeddings."""
        c0 = self.coeffs[0]
        return (self.p - 1) * c0 - sum(self.coeffs[1:])

    def abs_square(self) -> Fraction:
        """|z|^2 averaged over the embeddings, exactly."""
        return Fraction((self * self.conj()).trace(), self.p - 1)

    def to_complex(self) -> complex:
        zeta = np.exp(2j * np.pi * np.arange(self.p - 1) / self.p)
        return complex(np.dot(np.array(self.coeffs, dtype=float), zeta))

    def is_real(self) -> bool:
        return self == self.conj()

    def sign(self) -> int:
        """Sign of a real element at zeta = exp(2 pi i / p), decided exactly."""
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        if self.is_integer():
            c0 = self.coeffs[0]
            return (c0 > 0) - (c0 < 0)
        approx = self.to_complex().real
        # rounding error of the float sum stays below a few ulp per term
        if abs(approx) > 8 * self.p * sum(abs(c) for c in self.coeffs) * sys.float_info.epsilon:
            return 1 if approx > 0 else -1
        logger.debug("float sign of %s inconclusive, bisecting", self)
        return self._exact_sign()

    def _exact_sign(self) -> int:
        """Write the element as f(cos(2 pi / p)) and bisect a rational bracket
        around that root of U_{p-1} until |f(mid)| beats the derivative bound."""
        p = self.p
        f = [0] * (p - 1)
        for i, c in enumerate(self.coeffs):
            if c:
                for d, a in enumerate(_chebyshev(i)):
                    f[d] += c * a
        slope = sum(d * abs(a) for d, a in enumerate(f))  # bounds |f'| on [-1, 1]
        u = _chebyshev(p - 1, second_kind=True)

        guess = Fraction(math.cos(2 * math.pi / p))
        lo, hi = guess - Fraction(1, 10**9), guess + Fraction(1, 10**9)
        u_lo = _horner(u, lo)
        if u_lo * _horner(u, hi) >= 0:
            raise ArithmeticError(f"could not bracket cos(2 pi / {p})")
        while True:
            mid = (lo + hi) / 2
            value = _horner(f, mid)
            u_mid = _horner(u, mid)
            if u_mid == 0 or abs(value) > slope * (hi - lo):
                return (value > 0) - (value < 0)
            if (u_mid > 0) == (u_lo > 0):
                lo, u_lo = mid, u_mid
            else:
                hi = mid

    def abs_square_at_most(self, bound: int) -> bool:
        """|z|^2 <= bound at zeta = exp(2 pi i / p), compared exactly."""
        return (self * self.conj() - bound).sign() <= 0


def _chebyshev(n: int, second_kind: bool = False) -> list[int]:
    """Integer coefficients of T_n (or U_n), lowest degree first."""
    prev, cur = [1], [0, 2] if second_kind else [0, 1]
    if n == 0:
        return prev
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for d, c in enumerate(prev):
            nxt[d] -= c
        prev, cur = cur, nxt
    return cur


def _horner(coeffs: list[int], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


@dataclass(frozen=True)
class MultCharValue:
    """zeta_{q-1}^exponent, or 0 when ``is_zero``."""

    exponent: int
    order: int
    is_zero: bool = False

    def __mul__(self, other: MultCharValue) -> MultCharValue:
        if self.is_zero or other.is_zero:
            return MultCharValue(0, self.order, True)
        return MultCharValue((self.exponent + other.exponent) % self.order, self.order)

    def conj(self) -> MultCharValue:
        return MultCharValue((-self.exponent) % self.order, self.order, self.is_zero)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return cmath.exp(2j * math.pi * self.exponent / self.order)

    def as_int(self) -> int | None:
        """The value as an integer when it is 0 or +-1."""
        if self.is_zero:
            return 0
        if self.exponent == 0:
            return 1
        if 2 * self.exponent == self.order:
            return -1
        return None


def additive_char(field: FieldSpec, a: FieldElement, x: FieldElement) -> CycInt:
    """chi_a(x) = zeta_p^Tr(a x)."""
    return CycInt.zeta_power(field.p, field.trace_int(field.mul(a, x)))


def mult_char(field: FieldSpec, i: int, x: FieldElement) -> MultCharValue:
    """psi_i(xi^j) = zeta_{q-1}^(i j), with psi_0(0) = 1 and psi_i(0) = 0 otherwise."""
    order = field.q - 1
    if x == 0:
        return MultCharValue(0, order, is_zero=(i % order != 0))
    return MultCharValue((i * (x - 1)) % order, order)


def quadratic_char_index(field: FieldSpec) -> int:
    if field.p == 2:
        raise ValueError("quadratic character needs odd q")
    return (field.q - 1) // 2
