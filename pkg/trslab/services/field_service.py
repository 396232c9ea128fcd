"""Finite fields GF(p^m) in canonical-index form.

Elements are plain ints: 0 is the zero element and i >= 1 stands for xi^(i-1),
where xi is the canonical primitive element. Multiplication and inversion are
exponent arithmetic; addition goes through a Zech-logarithm table. Linear
algebra, irreducibility tests and traces are delegated to ``galois``.
"""

import functools
import itertools
import json
import logging
from pathlib import Path

import galois
import numpy as np

from trslab.models import FieldDescriptor

logger = logging.getLogger(__name__)

FieldElement = int

# Largest order we build tables for.
MAX_ORDER = 1 << 22

_OPS = ("add", "sub", "mul", "div", "neg", "inv", "pow")


def split_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    primes, exponents = galois.factors(q)
    if len(primes) != 1:
        raise ValueError(f"{q} is not a prime power")
    return int(primes[0]), int(exponents[0])


def _monic_polys(p: int, degree: int, prime_field):
    """Monic polynomials of the given degree, lexicographic in (c0, c1, ...)."""
    for low in itertools.product(range(p), repeat=degree):
        yield galois.Poly(list(low) + [1], field=prime_field, order="asc")


def _irreducible_by_trial_division(poly: galois.Poly, p: int, prime_field) -> bool:
    m = poly.degree
    for d in range(1, m // 2 + 1):
        for divisor in _monic_polys(p, d, prime_field):
            if (poly % divisor).nonzero_coeffs.size == 0:
                return False
    return True


def _smallest_irreducible(p: int, m: int, prime_field) -> list[int]:
    for candidate in _monic_polys(p, m, prime_field):
        if not candidate.is_irreducible():
            continue
        if not _irreducible_by_trial_division(candidate, p, prime_field):
            raise RuntimeError(f"irreducibility disagreement for {candidate}")
        return [int(c) for c in candidate.coefficients(order="asc")]
    raise RuntimeError(f"no irreducible polynomial of degree {m} over GF({p})")


def _has_full_order(value, q: int, gf) -> bool:
    if q == 2:
        return int(value) == 1
    one = gf(1)
    primes, _ = galois.factors(q - 1)
    return all(value ** ((q - 1) // int(r)) != one for r in primes)


class FieldSpec:
    """GF(p^m) with canonical modulus, canonical generator and lookup tables."""

    def __init__(self, p: int, m: int):
        if m < 1:
            raise ValueError("extension degree m must be >= 1")
        if not galois.is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        q = p**m
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds supported bound {MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = q

        prime_field = galois.GF(p)
        if m == 1:
            self.modulus = [0, 1]
            self.gf = prime_field
        else:
            self.modulus = _smallest_irreducible(p, m, prime_field)
            irreducible = galois.Poly(self.modulus, field=prime_field, order="asc")
            self.gf = galois.GF(q, irreducible_poly=irreducible)

        self.generator = next(v for v in range(1, q) if _has_full_order(self.gf(v), q, self.gf))

        powers = self.gf(self.generator) ** np.arange(q - 1)
        exp_ints = powers.view(np.ndarray).astype(np.int64)
        self._to_int = [0] + exp_ints.tolist()
        index_of = np.zeros(q, dtype=np.int64)
        index_of[exp_ints] = np.arange(1, q)
        self._index_of = index_of.tolist()

        plus_one = (powers + self.gf(1)).view(np.ndarray).astype(np.int64)
        self._zech = index_of[plus_one].tolist()

        if m == 1:
            trace_vals = exp_ints
        else:
            trace_vals = powers.field_trace().view(np.ndarray).astype(np.int64)
        self._trace = [0] + trace_vals.tolist()

        # numpy mirrors for the vectorized paths
        self.int_table = np.array(self._to_int, dtype=np.int64)
        self.index_table = index_of
        self.zech_table = np.array(self._zech, dtype=np.int64)
        self.trace_table = np.array(self._trace, dtype=np.int64)
        logger.debug("Built GF(%d^%d) modulus=%s generator=%d", p, m, self.modulus, self.generator)

    def __reduce__(self):
        return make_field, (self.p, self.m)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, m={self.m})"

    # --- constants and enumeration ---

    zero = 0
    one = 1

    @property
    def xi(self) -> FieldElement:
        return 2 if self.q > 2 else 1

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def prime_element(self, c: int) -> FieldElement:
        """Canonical index of the prime-subfield element c (0 <= c < p)."""
        return self._index_of[c % self.p]

    # --- representation changes ---

    def to_int(self, a: FieldElement) -> int:
        return self._to_int[a]

    def from_int(self, v: int) -> FieldElement:
        return self._index_of[v]

    def coeffs(self, a: FieldElement) -> list[int]:
        v = self._to_int[a]
        out = []
        for _ in range(self.m):
            v, c = divmod(v, self.p)
            out.append(c)
        return out

    def from_coeffs(self, coeffs) -> FieldElement:
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients, got {len(coeffs)}")
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c % self.p
        return self._index_of[v]

    def to_gf(self, indices):
        return self.gf(self.int_table[np.asarray(indices, dtype=np.int64)])

    def from_gf(self, array) -> np.ndarray:
        return self.index_table[np.asarray(array.view(np.ndarray), dtype=np.int64)]

    def descriptor(self) -> FieldDescriptor:
        return FieldDescriptor(p=self.p, m=self.m, modulus=list(self.modulus), generator=self.generator)

    # --- scalar arithmetic ---

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % (self.q - 1) + 1

    def inv(self, a: FieldElement) -> FieldElement:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return (1 - a) % (self.q - 1) + 1

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def neg(self, a: FieldElement) -> FieldElement:
        if a == 0 or self.p == 2:
            return a
        return (a - 1 + (self.q - 1) // 2) % (self.q - 1) + 1

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if a == 0:
            return b
        if b == 0:
            return a
        z = self._zech[(b - a) % (self.q - 1)]
        if z == 0:
            return 0
        return (a + z - 2) % (self.q - 1) + 1

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return ((a - 1) * e) % (self.q - 1) + 1

    def sum(self, values) -> FieldElement:
        total = 0
        for v in values:
            total = self.add(total, v)
        return total

    def arith(self, a: FieldElement, b: FieldElement | int | None, op: str) -> FieldElement:
        if op not in _OPS:
            raise ValueError(f"unknown operation {op!r}")
        if op in ("neg", "inv"):
            return getattr(self, op)(a)
        return getattr(self, op)(a, b)

    def scalar(self, n: int) -> FieldElement:
        """Image of the integer n in the field."""
        return self.prime_element(n)

    def sign(self, e: int) -> FieldElement:
        """(-1)^e as a field element."""
        return 1 if e % 2 == 0 else self.neg(1)

    def sqrt(self, a: FieldElement) -> FieldElement | None:
        """One square root of a, or None when a is a non-square."""
        if a == 0:
            return 0
        if self.p == 2:
            e = a - 1
            return (e * ((self.q) // 2)) % (self.q - 1) + 1
        if (a - 1) % 2:
            return None
        return (a - 1) // 2 + 1

    # --- trace and quadratic character ---

    def trace_int(self, a: FieldElement) -> int:
        return self._trace[a]

    def trace(self, a: FieldElement) -> FieldElement:
        return self._index_of[self._trace[a]]

    def quadratic_char(self, a: FieldElement) -> int:
        if self.p == 2:
            raise ValueError("quadratic character needs odd q")
        if a == 0:
            return 0
        return 1 if (a - 1) % 2 == 0 else -1

    # --- vectorized arithmetic over index arrays ---

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = (a + b - 2) % (self.q - 1) + 1
        return np.where((a == 0) | (b == 0), 0, out)

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        z = self.zech_table[(b - a) % (self.q - 1)]
        out = np.where(z == 0, 0, (a + z - 2) % (self.q - 1) + 1)
        return np.where(a == 0, b, np.where(b == 0, a, out))

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, ((a - 1) * e) % (self.q - 1) + 1)

    def vneg(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return np.where(a == 0, 0, (a - 1 + (self.q - 1) // 2) % (self.q - 1) + 1)

    # --- linear algebra through galois ---

    def rank(self, matrix) -> int:
        return int(np.linalg.matrix_rank(self.to_gf(matrix)))

    def det(self, matrix) -> FieldElement:
        return int(self.from_gf(np.linalg.det(self.to_gf(matrix))))

    def matmul(self, a, b) -> np.ndarray:
        return self.from_gf(self.to_gf(a) @ self.to_gf(b))


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int = 1) -> FieldSpec:
    return FieldSpec(p, m)


def field_of_order(q: int) -> FieldSpec:
    return make_field(*split_prime_power(q))


def save_descriptor(field: FieldSpec, directory: Path) -> Path:
    path = directory / f"gf_{field.p}_{field.m}.json"
    path.write_text(field.descriptor().model_dump_json(indent=2), encoding="utf-8")
    return path


def load_descriptor(path: Path) -> FieldSpec:
    """Rebuild a field from its JSON descriptor, checking it is the canonical one."""
    if not path.exists():
        raise FileNotFoundError(f"Field descriptor not found: {path}")
    desc = FieldDescriptor.model_validate(json.loads(path.read_text(encoding="utf-8")))
    field = make_field(desc.p, desc.m)
    if field.descriptor() != desc:
        raise ValueError(f"descriptor {path} does not match the canonical GF({desc.p}^{desc.m})")
    return field
