"""Polynomials over a FieldSpec, elementary symmetric tables and subset walks."""

from __future__ import annotations

from collections.abc import Iterator, Sequence

import galois
import numpy as np

from trslab.services.field_service import FieldElement, FieldSpec

# Degree reported for the zero polynomial.
ZERO_DEGREE = -1


class Poly:
    """Dense polynomial, coefficients low-degree-first, trailing zeros stripped."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Sequence[FieldElement] = ()) -> None:
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, c: FieldElement = 1) -> Poly:
        return cls(field, [0] * degree + [c])

    @classmethod
    def from_roots(cls, field: FieldSpec, roots: Sequence[FieldElement]) -> Poly:
        return sigma_from_roots(field, roots)

    @classmethod
    def from_galois(cls, field: FieldSpec, poly: galois.Poly) -> Poly:
        return cls(field, field.from_gf(poly.coefficients(order="asc")).tolist())

    def to_galois(self) -> galois.Poly:
        coeffs = self.coeffs or (0,)
        return galois.Poly(self.field.to_gf(list(coeffs)), order="asc")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def coeff(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: Poly) -> Poly:
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(f, [f.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> Poly:
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        f = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(f)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    def scale(self, c: FieldElement) -> Poly:
        return Poly(self.field, [self.field.mul(c, a) for a in self.coeffs])

    def shift(self, d: int) -> Poly:
        """Multiply by x^d."""
        return Poly(self.field, [0] * d + list(self.coeffs)) if self.coeffs else self

    def derivative(self) -> Poly:
        f = self.field
        return Poly(f, [f.mul(f.scalar(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: FieldElement) -> FieldElement:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def evaluate_many(self, xs) -> np.ndarray:
        f = self.field
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = f.vadd(f.vmul(acc, xs), np.full_like(xs, c))
        return acc


class BivariatePoly:
    """Sparse F(X, Y) as {(i, j): coefficient}."""

    def __init__(self, field: FieldSpec, terms: dict[tuple[int, int], FieldElement]) -> None:
        self.field = field
        self.terms = {exp: c for exp, c in terms.items() if c != 0}

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=ZERO_DEGREE)

    def __call__(self, x: FieldElement, y: FieldElement) -> FieldElement:
        f = self.field
        return f.sum(f.mul(c, f.mul(f.pow(x, i), f.pow(y, j))) for (i, j), c in self.terms.items())

    def evaluate_grid(self) -> np.ndarray:
        """q x q array of F(x, y), indexed [x, y] by canonical index."""
        f = self.field
        xs, ys = np.meshgrid(np.arange(f.q), np.arange(f.q), indexing="ij")
        acc = np.zeros_like(xs)
        for (i, j), c in self.terms.items():
            term = f.vmul(np.full_like(xs, c), f.vmul(f.vpow(xs, i), f.vpow(ys, j)))
            acc = f.vadd(acc, term)
        return acc


# ============================================================
# Elementary symmetric polynomials, sigma and Lambda
# ============================================================


def elementary_symmetric(field: FieldSpec, xs: Sequence[FieldElement]) -> list[FieldElement]:
    """S_0..S_n of xs via S_{i,j} = S_{i,j-1} + S_{i-1,j-1} x_j."""
    s = [1] + [0] * len(xs)
    for j, x in enumerate(xs, start=1):
        for i in range(j, 0, -1):
            s[i] = field.add(s[i], field.mul(s[i - 1], x))
    return s


def _check_distinct(values: Sequence[FieldElement], what: str) -> None:
    if len(set(values)) != len(values):
        raise ValueError(f"{what} must be pairwise distinct")


def sigma_from_roots(field: FieldSpec, roots: Sequence[FieldElement]) -> Poly:
    """prod (x - alpha) = sum_j sigma_j x^(n-j) with sigma_j = (-1)^j S_j."""
    _check_distinct(roots, "roots")
    n = len(roots)
    return Poly(field, list(reversed(signed_symmetric(field, roots)))) if n else Poly(field, [1])


def signed_symmetric(field: FieldSpec, xs: Sequence[FieldElement]) -> list[FieldElement]:
    """[(-1)^j S_j for j = 0..n]; the sigma_j of the roots, or c_j of a subset."""
    return [s if j % 2 == 0 else field.neg(s) for j, s in enumerate(elementary_symmetric(field, xs))]


def sigmas(field: FieldSpec, roots: Sequence[FieldElement]) -> list[FieldElement]:
    _check_distinct(roots, "roots")
    return signed_symmetric(field, roots)


def lambda_from_sigma(field: FieldSpec, sigma: Sequence[FieldElement], length: int) -> list[FieldElement]:
    """Lambda_0..Lambda_length with Lambda_t = -sum_{i=1}^{min(t,n)} sigma_i Lambda_{t-i}."""
    if not sigma or sigma[0] != 1:
        raise ValueError("sigma_0 must be 1")
    n = len(sigma) - 1
    lam = [1]
    for t in range(1, length + 1):
        acc = 0
        for i in range(1, min(t, n) + 1):
            acc = field.add(acc, field.mul(sigma[i], lam[t - i]))
        lam.append(field.neg(acc))
    return lam


class SymTable:
    """Incremental table S_{i,j} = S_i(x_1..x_j) for a growing sequence."""

    def __init__(self, field: FieldSpec, base: Sequence[FieldElement] = ()) -> None:
        self.field = field
        self.elements: list[FieldElement] = []
        self._rows: list[list[FieldElement]] = [[1]]
        for x in base:
            self.push(x)

    def __len__(self) -> int:
        return len(self.elements)

    def push(self, x: FieldElement) -> None:
        f = self.field
        prev = self._rows[-1]
        row = [1]
        for i in range(1, len(prev)):
            row.append(f.add(prev[i], f.mul(prev[i - 1], x)))
        row.append(f.mul(prev[-1], x))
        self._rows.append(row)
        self.elements.append(x)

    def pop(self) -> FieldElement:
        self._rows.pop()
        return self.elements.pop()

    def S(self, i: int, j: int | None = None) -> FieldElement:
        """S_{i,j}; zero for i > j or i < 0. j defaults to the current size."""
        if j is None:
            j = len(self.elements)
        if i < 0 or i > j:
            return 0
        return self._rows[j][i]

    def row(self, j: int | None = None) -> list[FieldElement]:
        return list(self._rows[len(self.elements) if j is None else j])

    def c(self, j: int) -> FieldElement:
        """Coefficient c_j of prod (x - x_i), i.e. (-1)^j S_j."""
        s = self.S(j)
        return s if j % 2 == 0 else self.field.neg(s)

    def cs(self) -> list[FieldElement]:
        return [self.c(j) for j in range(len(self.elements) + 1)]

    def lambda_prime(self, length: int) -> list[FieldElement]:
        return lambda_from_sigma(self.field, self.cs(), length)


# ============================================================
# Colex subset walks
# ============================================================


def colex_subsets(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """r-subsets of range(n) as ascending tuples, in colexicographic order."""
    chosen: list[int] = []

    def walk(r: int, upper: int):
        if r == 0:
            yield tuple(reversed(chosen))
            return
        for top in range(r - 1, upper):
            chosen.append(top)
            yield from walk(r - 1, top)
            chosen.pop()

    if 0 <= r <= n:
        yield from walk(r, n)


def colex_walk(table: SymTable, base: Sequence[FieldElement], r: int) -> Iterator[tuple[int, ...]]:
    """Like colex_subsets over base, keeping table in step with the subset.

    Each yielded tuple holds indices into base; while the caller handles it the
    table contains its existing prefix followed by exactly those elements.
    """
    chosen: list[int] = []

    def walk(r: int, upper: int):
        if r == 0:
            yield tuple(reversed(chosen))
            return
        for top in range(r - 1, upper):
            table.push(base[top])
            chosen.append(top)
            yield from walk(r - 1, top)
            chosen.pop()
            table.pop()

    if 0 <= r <= len(base):
        yield from walk(r, len(base))


# ============================================================
# Generalized Vandermonde minors and interpolation
# ============================================================


def vandermonde_minor(
    field: FieldSpec, xs: Sequence[FieldElement], exponents: Sequence[int]
) -> tuple[FieldElement, FieldElement]:
    """det[x_j^{t_i}] computed directly and as Vandermonde times a Jacobi-Trudi factor.

    With the exponents t_1 = 0 < ... < t_s = m-1 and the missing exponents
    r_1 < ... < r_{s'} of {0..m-1}, the factor is det[S_{s - r_b + a}] over
    a, b < s' (1 when s' = 0).
    """
    s = len(xs)
    exps = list(exponents)
    if len(exps) != s or s == 0:
        raise ValueError("need one exponent per point")
    if exps[0] != 0 or any(b <= a for a, b in zip(exps, exps[1:])):
        raise ValueError("exponents must start at 0 and increase strictly")
    _check_distinct(xs, "points")
    m = exps[-1] + 1
    present = set(exps)
    missing = [e for e in range(m) if e not in present]

    lhs = field.det([[field.pow(x, t) for x in xs] for t in exps])

    vander = 1
    for j in range(s):
        for i in range(j):
            vander = field.mul(vander, field.sub(xs[j], xs[i]))
    S = elementary_symmetric(field, xs)

    def s_at(i: int) -> FieldElement:
        return S[i] if 0 <= i <= s else 0

    if missing:
        delta = field.det([[s_at(s - r + a) for r in missing] for a in range(len(missing))])
    else:
        delta = 1
    return lhs, field.mul(vander, delta)


def lagrange_interpolate(field: FieldSpec, points: Sequence[tuple[FieldElement, FieldElement]]) -> Poly:
    if not points:
        raise ValueError("need at least one point")
    xs = [x for x, _ in points]
    _check_distinct(xs, "interpolation nodes")
    poly = galois.lagrange_poly(field.to_gf(xs), field.to_gf([y for _, y in points]))
    return Poly.from_galois(field, poly)
