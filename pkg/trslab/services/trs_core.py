"""Twisted Reed-Solomon codes TRS_k(A, l, eta) and plain RS codes on the same set."""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from trslab.services.code_lab import LinearCode
from trslab.services.field_service import FieldElement, FieldSpec
from trslab.services.sym_kernel import Poly, lambda_from_sigma, sigma_from_roots, sigmas


@dataclass(frozen=True)
class TrsParams:
    field: FieldSpec
    A: tuple[FieldElement, ...]
    k: int
    l: int
    eta: FieldElement

    def __post_init__(self):
        A = tuple(sorted(int(a) for a in self.A))
        object.__setattr__(self, "A", A)
        if len(set(A)) != len(A):
            raise ValueError("evaluation set has repeated points")
        if any(not 0 <= a < self.field.q for a in A):
            raise ValueError("evaluation point outside the field")
        if not 0 <= self.l <= self.k - 1 <= len(A) - 2:
            raise ValueError(f"need 0 <= l <= k-1 <= n-2, got n={len(A)}, k={self.k}, l={self.l}")
        if not 0 < self.eta < self.field.q:
            raise ValueError("eta must be a nonzero field element")

    @classmethod
    def punctured(cls, field: FieldSpec, k: int, eta: FieldElement) -> TrsParams:
        """A = F_q^*, l = k - 1."""
        return cls(field, tuple(field.nonzero()), k, k - 1, eta)

    @classmethod
    def on(cls, field: FieldSpec, evaluation: str, k: int, l: int, eta: FieldElement) -> TrsParams:
        points = field.nonzero() if evaluation == "nonzero" else field.elements()
        return cls(field, tuple(points), k, l, eta)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def s(self) -> int:
        """Size of the subsets in the deep-hole criterion, n - k - 1."""
        return self.n - self.k - 1

    @property
    def is_punctured_setting(self) -> bool:
        return self.A == tuple(self.field.nonzero()) and self.l == self.k - 1

    def describe(self) -> dict:
        return {"q": self.field.q, "n": self.n, "k": self.k, "l": self.l, "eta": self.eta}

    @functools.cached_property
    def sigma(self) -> list[FieldElement]:
        return sigmas(self.field, self.A)

    def lambdas(self, length: int) -> list[FieldElement]:
        return lambda_from_sigma(self.field, self.sigma, length)

    @functools.cached_property
    def u(self) -> list[FieldElement]:
        """u_i = 1 / prod_{j != i} (alpha_i - alpha_j), read off G'(alpha_i)."""
        dG = sigma_from_roots(self.field, self.A).derivative()
        return [self.field.inv(dG(a)) for a in self.A]


@dataclass(frozen=True)
class TwistPoly:
    """f_0 + ... + f_{k-1} x^{k-1} + eta f_l x^k."""

    params: TrsParams
    f: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.f) != self.params.k:
            raise ValueError(f"expected {self.params.k} free coefficients")

    def expanded(self) -> Poly:
        p = self.params
        return Poly(p.field, list(self.f) + [p.field.mul(p.eta, self.f[p.l])])


def _eval_rows(field: FieldSpec, A: Sequence[FieldElement], polys: Sequence[Poly]) -> np.ndarray:
    return np.array([[poly(a) for a in A] for poly in polys], dtype=np.int64).reshape(len(polys), len(A))


def build_generator(params: TrsParams) -> np.ndarray:
    """Rows x^j for j != l, then x^l + eta x^k, evaluated on A."""
    f = params.field
    rows = [Poly.monomial(f, j) for j in range(params.k) if j != params.l]
    rows.append(Poly.monomial(f, params.l) + Poly.monomial(f, params.k, params.eta))
    return _eval_rows(f, params.A, rows)


def twist_row_poly(params: TrsParams) -> Poly:
    """x^s (1 - eta sum_{j=0}^{k-l} sigma_j x^(k-l-j)) for s = n - k - 1."""
    f = params.field
    d = params.k - params.l
    inner = Poly(f, [params.sigma[d - i] for i in range(d + 1)]).scale(f.neg(params.eta))
    return (Poly(f, [1]) + inner).shift(params.s)


def build_parity_check(params: TrsParams) -> np.ndarray:
    """Rows u_i alpha_i^t for t < n-k-1, then u_i f(alpha_i)."""
    f = params.field
    rows = [Poly.monomial(f, t) for t in range(params.s)] + [twist_row_poly(params)]
    H = _eval_rows(f, params.A, rows)
    u = np.array(params.u, dtype=np.int64)
    return f.vmul(H, np.broadcast_to(u, H.shape))


def encode(params: TrsParams, twist: TwistPoly) -> list[FieldElement]:
    poly = twist.expanded()
    return [poly(a) for a in params.A]


def membership(params: TrsParams, word: Sequence[FieldElement]) -> bool:
    if len(word) != params.n:
        raise ValueError(f"word length {len(word)} does not match n = {params.n}")
    H = build_parity_check(params)
    return not np.any(params.field.matmul(H, np.asarray(word, dtype=np.int64)[:, None]))


@functools.lru_cache(maxsize=256)
def trs_code(params: TrsParams) -> LinearCode:
    return LinearCode(params.field, build_generator(params), build_parity_check(params))


@functools.lru_cache(maxsize=256)
def rs_code(field: FieldSpec, A: tuple[FieldElement, ...], k: int) -> LinearCode:
    """RS_k(A): evaluations of polynomials of degree < k, with its GRS dual as H."""
    A = tuple(sorted(A))
    G = _eval_rows(field, A, [Poly.monomial(field, j) for j in range(k)])
    dG = sigma_from_roots(field, A).derivative()
    u = np.array([field.inv(dG(a)) for a in A], dtype=np.int64)
    H = _eval_rows(field, A, [Poly.monomial(field, t) for t in range(len(A) - k)])
    return LinearCode(field, G, field.vmul(H, np.broadcast_to(u, H.shape)))
