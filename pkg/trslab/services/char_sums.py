"""Character sums and point counts over GF(q), with their bound and closed-form checks.

Sums involving only additive characters, the trivial character or the
quadratic character are exact CycInt values; other multiplicative characters
are evaluated as complex floats.
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from trslab.models import CharSumRow
from trslab.services.cyclotomic import CycInt, additive_char, mult_char, quadratic_char_index
from trslab.services.field_service import FieldElement, FieldSpec
from trslab.services.sym_kernel import BivariatePoly, Poly

_COMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    value: CycInt | complex | int
    d: int
    bound_holds: bool


@dataclass(frozen=True)
class ClosedFormReport:
    value: CycInt
    closed_form: CycInt
    matches: bool


@dataclass(frozen=True)
class ConicReport:
    count: int
    expected: int
    matches: bool


def _additive_sum(field: FieldSpec, args: np.ndarray, weights: np.ndarray | None = None) -> CycInt:
    """sum_x w(x) zeta^Tr(args[x]) for an index array of field elements."""
    traces = field.trace_table[np.asarray(args, dtype=np.int64)]
    counts = np.zeros(field.p, dtype=np.int64)
    if weights is None:
        np.add.at(counts, traces, 1)
    else:
        np.add.at(counts, traces, np.asarray(weights, dtype=np.int64))
    return CycInt.from_counts(field.p, counts.tolist())


def _is_exact_psi(field: FieldSpec, psi_index: int) -> bool:
    order = field.q - 1
    return psi_index % order == 0 or (field.p != 2 and psi_index % order == order // 2)


def gauss_sum(field: FieldSpec, psi_index: int, b: FieldElement) -> CycInt | complex:
    """G(psi_i, chi_b) = sum over x != 0 of psi_i(x) chi_b(x)."""
    xs = np.arange(1, field.q)
    args = field.vmul(np.full_like(xs, b), xs)
    order = field.q - 1
    if psi_index % order == 0:
        return _additive_sum(field, args)
    if _is_exact_psi(field, psi_index):
        signs = np.where((xs - 1) % 2 == 0, 1, -1)
        return _additive_sum(field, args, signs)
    traces = field.trace_table[args]
    angles = 2 * np.pi * ((psi_index * (xs - 1)) % order / order + traces / field.p)
    return complex(np.exp(1j * angles).sum())


def check_gauss_shift(field: FieldSpec, psi_index: int, a: FieldElement, b: FieldElement) -> bool:
    """G(psi, chi_ab) == conj(psi(a)) G(psi, chi_b)."""
    if a == 0:
        raise ValueError("a must be nonzero")
    lhs = gauss_sum(field, psi_index, field.mul(a, b))
    rhs = gauss_sum(field, psi_index, b)
    psi_a = mult_char(field, psi_index, a).conj()
    if isinstance(lhs, CycInt):
        return lhs == rhs * psi_a.as_int()
    return abs(lhs - psi_a.to_complex() * rhs) <= _COMPLEX_TOL * field.q


def weil_power_sum(field: FieldSpec, a: FieldElement, b: FieldElement, n: int) -> BoundReport:
    """sum_c chi_1(a c^n + b), checked against (d-1) sqrt(q), d = gcd(n, q-1)."""
    if a == 0:
        raise ValueError("a must be nonzero")
    if n < 1:
        raise ValueError("exponent must be positive")
    cs = np.arange(field.q)
    args = field.vadd(field.vmul(np.full_like(cs, a), field.vpow(cs, n)), np.full_like(cs, b))
    value = _additive_sum(field, args)
    d = math.gcd(n, field.q - 1)
    return BoundReport(value, d, value.abs_square_at_most((d - 1) ** 2 * field.q))


def _quad_values(field: FieldSpec, a2: FieldElement, a1: FieldElement, a0: FieldElement) -> np.ndarray:
    cs = np.arange(field.q)
    sq = field.vmul(cs, cs)
    lin = field.vmul(np.full_like(cs, a1), cs)
    return field.vadd(field.vadd(field.vmul(np.full_like(cs, a2), sq), lin), np.full_like(cs, a0))


def quad_complete_sum(
    field: FieldSpec, a2: FieldElement, a1: FieldElement, a0: FieldElement, b: FieldElement = 1
) -> ClosedFormReport:
    """sum_c chi_b(a2 c^2 + a1 c + a0) next to its closed form."""
    if a2 == 0 or b == 0:
        raise ValueError("a2 and b must be nonzero")
    args = field.vmul(np.full(field.q, b, dtype=np.int64), _quad_values(field, a2, a1, a0))
    value = _additive_sum(field, args)
    f = field
    if f.p == 2:
        if f.add(f.mul(b, a2), f.mul(f.mul(b, b), f.mul(a1, a1))) == 0:
            closed = additive_char(f, b, a0) * f.q
        else:
            closed = CycInt.from_int(f.p, 0)
    else:
        shift = f.sub(a0, f.div(f.mul(a1, a1), f.mul(f.scalar(4), a2)))
        closed = additive_char(f, b, shift) * f.quadratic_char(a2) * gauss_sum(f, quadratic_char_index(f), b)
    return ClosedFormReport(value, closed, value == closed)


def mult_char_poly_sum(field: FieldSpec, psi_index: int, a: FieldElement, f: Poly) -> BoundReport:
    """sum_c psi(a f(c)), with d the number of distinct roots of f."""
    order = (field.q - 1) // math.gcd(psi_index, field.q - 1)
    if order == 1:
        raise ValueError("character must be nontrivial")
    if a == 0:
        raise ValueError("a must be nonzero")
    if not f.is_monic() or f.degree < 1:
        raise ValueError("f must be monic of positive degree")
    factors, multiplicities = f.to_galois().factors()
    if all(int(e) % order == 0 for e in multiplicities):
        raise ValueError(f"f is a {order}-th power")
    d = sum(int(g.degree) for g in factors)

    values = field.vmul(np.full(field.q, a, dtype=np.int64), f.evaluate_many(np.arange(field.q)))
    bound = (d - 1) ** 2 * field.q
    if _is_exact_psi(field, psi_index):
        total = sum(mult_char(field, psi_index, int(v)).as_int() for v in values if v != 0)
        return BoundReport(total, d, total * total <= bound)
    total = complex(sum(mult_char(field, psi_index, int(v)).to_complex() for v in values if v != 0))
    return BoundReport(total, d, abs(total) ** 2 <= bound + _COMPLEX_TOL * field.q)


def kloosterman(field: FieldSpec, a: FieldElement, b: FieldElement) -> BoundReport:
    """K(chi_1; a, b) = sum over c != 0 of chi_1(a c + b / c), checked against 2 sqrt(q)."""
    if a == 0 and b == 0:
        raise ValueError("(a, b) must not both be zero")
    cs = np.arange(1, field.q)
    inv = (1 - cs) % (field.q - 1) + 1
    args = field.vadd(field.vmul(np.full_like(cs, a), cs), field.vmul(np.full_like(cs, b), inv))
    value = _additive_sum(field, args)
    return BoundReport(value, 2, value.abs_square_at_most(4 * field.q))


def conic_count(field: FieldSpec, a1: FieldElement, a2: FieldElement, b: FieldElement) -> ConicReport:
    """#{(X, Y): a1 X^2 + a2 Y^2 = b} against q + v(b) pi(-a1 a2)."""
    if field.p == 2:
        raise ValueError("conic count needs odd q")
    if a1 == 0 or a2 == 0:
        raise ValueError("a1 and a2 must be nonzero")
    xs = np.arange(field.q)
    sq = field.vmul(xs, xs)
    lhs = field.vmul(np.full_like(xs, a1), sq)
    rhs = field.vadd(np.full_like(xs, b), field.vneg(field.vmul(np.full_like(xs, a2), sq)))
    count = int(np.dot(np.bincount(lhs, minlength=field.q), np.bincount(rhs, minlength=field.q)))
    v = field.q - 1 if b == 0 else -1
    expected = field.q + v * field.quadratic_char(field.neg(field.mul(a1, a2)))
    return ConicReport(count, expected, count == expected)


def surface_count(field: FieldSpec, F: BivariatePoly) -> int:
    """Number of zeros of F over GF(q)^2."""
    if F.total_degree > 4:
        raise ValueError("surface counts are limited to total degree 4")
    return int(np.count_nonzero(F.evaluate_grid() == 0))


# ============================================================
# Identity rows for reports
# ============================================================


def _row(identity: str, params: dict, lhs, rhs, passed: bool) -> CharSumRow:
    return CharSumRow(identity=identity, params=params, lhs=str(lhs), rhs=str(rhs), passed=passed)


def _pairs(field: FieldSpec, rng: np.random.Generator, limit: int, first_nonzero: bool = True):
    """All (a, b) pairs when few enough, else a seeded sample."""
    lo = 1 if first_nonzero else 0
    total = (field.q - lo) * field.q
    if total <= limit:
        for a in range(lo, field.q):
            for b in range(field.q):
                yield a, b
        return
    for _ in range(limit):
        yield int(rng.integers(lo, field.q)), int(rng.integers(0, field.q))


def identity_rows(field: FieldSpec, rng: np.random.Generator, limit: int = 4096) -> Iterator[CharSumRow]:
    q, p = field.q, field.p
    yield _row("gauss-trivial", {"b": 1}, gauss_sum(field, 0, 1), -1, gauss_sum(field, 0, 1) == -1)

    if p != 2:
        pi = quadratic_char_index(field)
        for b in field.nonzero():
            g = gauss_sum(field, pi, b)
            sq = g.abs_square()
            yield _row("gauss-abs-square", {"b": b}, sq, q, sq == q and g.abs_square_at_most(q))

    for a, b in _pairs(field, rng, limit):
        psi = (a * 7 + b) % (q - 1)
        ok = check_gauss_shift(field, psi, a, b)
        yield _row("gauss-shift", {"psi": psi, "a": a, "b": b}, ok, True, ok)

    for n in (1, 2, 3, 4):
        for a, b in _pairs(field, rng, max(1, limit // 4)):
            rep = weil_power_sum(field, a, b, n)
            yield _row("weil-power-sum", {"a": a, "b": b, "n": n}, rep.value, f"({rep.d}-1)^2 q", rep.bound_holds)

    for a2, a1 in _pairs(field, rng, max(1, limit // q)):
        for a0 in range(q):
            rep = quad_complete_sum(field, a2, a1, a0)
            yield _row("quad-complete-sum", {"a2": a2, "a1": a1, "a0": a0}, rep.value, rep.closed_form, rep.matches)

    psi = quadratic_char_index(field) if p != 2 else 1
    if q > 2:
        product = Poly(field, [0, 1]) * Poly(field, [1, 1])
        rep = mult_char_poly_sum(field, psi, 1, product)
        yield _row("mult-char-poly-sum", {"psi": psi, "f": "x(x+1)"}, rep.value, f"({rep.d}-1)^2 q", rep.bound_holds)

    for a, b in _pairs(field, rng, limit, first_nonzero=False):
        if a == 0 and b == 0:
            continue
        rep = kloosterman(field, a, b)
        yield _row("kloosterman", {"a": a, "b": b}, rep.value, "4q", rep.bound_holds)

    if p != 2:
        for a1, a2 in _pairs(field, rng, max(1, limit // q)):
            if a2 == 0:
                continue
            for b in range(q):
                rep = conic_count(field, a1, a2, b)
                yield _row("conic-count", {"a1": a1, "a2": a2, "b": b}, rep.count, rep.expected, rep.matches)
