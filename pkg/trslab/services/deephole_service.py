"""Syndrome criterion for deep holes of TRS codes on an arbitrary evaluation set.

A syndrome a = (a_0, ..., a_s) with s = n - k - 1 belongs to deep holes exactly
when, for every s-subset of A, the subset functional sum_r a_r L_r differs from
-a_s. The functional L depends only on the subset, so whole syndrome spaces are
classified one subset at a time over a vectorized prefix grid.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from trslab.models import DeepHoleVerdict
from trslab.services.code_lab import check_budget
from trslab.services.field_service import FieldElement
from trslab.services.sym_kernel import SymTable, colex_walk
from trslab.services.trs_core import TrsParams, TwistPoly, build_parity_check, encode

logger = logging.getLogger(__name__)


def criterion_functional(params: TrsParams, table: SymTable) -> list[FieldElement]:
    """[L_0, ..., L_{s-1}] for the subset currently held in table."""
    f = params.field
    s, d = params.s, params.k - params.l
    if len(table) != s:
        raise ValueError(f"subset must have {s} elements, got {len(table)}")
    c = table.cs()
    lam = table.lambda_prime(d)
    sigma = params.sigma
    L = []
    for r in range(s):
        acc = 0
        for t in range(d + 1):
            inner = 0
            for w in range(max(0, r - t), r + 1):
                inner = f.add(inner, f.mul(c[s - w], lam[t + w - r]))
            acc = f.add(acc, f.mul(sigma[d - t], inner))
        L.append(f.sub(c[s - r], f.mul(params.eta, acc)))
    return L


def _validate_subset(params: TrsParams, subset: Sequence[FieldElement]) -> None:
    if len(subset) != params.s:
        raise ValueError(f"subset must have {params.s} elements, got {len(subset)}")
    if len(set(subset)) != len(subset):
        raise ValueError("subset elements must be distinct")
    if not set(subset) <= set(params.A):
        raise ValueError("subset must be drawn from the evaluation set")


def _validate_syndrome(params: TrsParams, a: Sequence[FieldElement]) -> None:
    if len(a) != params.n - params.k:
        raise ValueError(f"syndrome must have length {params.n - params.k}, got {len(a)}")


def _dot(params: TrsParams, a: Sequence[FieldElement], L: Sequence[FieldElement]) -> FieldElement:
    f = params.field
    acc = 0
    for ar, lr in zip(a, L):
        if ar:
            acc = f.add(acc, f.mul(ar, lr))
    return acc


def criterion_lhs(params: TrsParams, a: Sequence[FieldElement], subset: Sequence[FieldElement]) -> FieldElement:
    _validate_syndrome(params, a)
    _validate_subset(params, subset)
    return _dot(params, a, criterion_functional(params, SymTable(params.field, subset)))


def criterion_residual(params: TrsParams, a: Sequence[FieldElement], subset: Sequence[FieldElement]) -> FieldElement:
    """criterion_lhs + a_s; zero exactly when the subset rejects a."""
    return params.field.add(criterion_lhs(params, a, subset), a[-1])


def is_deep_hole_syndrome(
    params: TrsParams, a: Sequence[FieldElement], budget: int = 10**7
) -> DeepHoleVerdict:
    _validate_syndrome(params, a)
    f, s = params.field, params.s
    check_budget(math.comb(params.n, s), budget, "subset scan")
    target = f.neg(a[-1])
    table = SymTable(f)
    checked = 0
    for idx in colex_walk(table, params.A, s):
        checked += 1
        if _dot(params, a, criterion_functional(params, table)) == target:
            return DeepHoleVerdict(
                is_deep_hole_syndrome=False, witness=[params.A[i] for i in idx], subsets_checked=checked
            )
    return DeepHoleVerdict(is_deep_hole_syndrome=True, subsets_checked=checked)


@dataclass
class SyndromeClassification:
    """Verdict for every syndrome, indexed by its mixed-radix code."""

    params: TrsParams
    deep: np.ndarray
    witness: np.ndarray  # ordinal into subsets of the first rejecting subset, -1 if none
    subsets: list[tuple[FieldElement, ...]]

    @property
    def deep_codes(self) -> np.ndarray:
        return np.flatnonzero(self.deep)

    def witness_of(self, code: int) -> tuple[FieldElement, ...] | None:
        i = int(self.witness[code])
        return None if i < 0 else self.subsets[i]


def classify_all(params: TrsParams, subset_budget: int = 10**7, table_budget: int = 10**7) -> SyndromeClassification:
    f, s, q = params.field, params.s, params.field.q
    check_budget(q ** (s + 1), table_budget, "syndrome table")
    check_budget(math.comb(params.n, s), subset_budget, "subset scan")
    size = q ** (s + 1)
    deep = np.ones(size, dtype=bool)
    witness = np.full(size, -1, dtype=np.int64)
    deep[0] = False

    radix = q ** np.arange(s - 1, -1, -1, dtype=np.int64)
    prefix_codes = np.arange(q**s, dtype=np.int64)
    prefixes = (prefix_codes[:, None] // radix) % q

    subsets = []
    table = SymTable(f)
    for ordinal, idx in enumerate(colex_walk(table, params.A, s)):
        subsets.append(tuple(params.A[i] for i in idx))
        L = criterion_functional(params, table)
        acc = np.zeros(q**s, dtype=np.int64)
        for r, lr in enumerate(L):
            acc = f.vadd(acc, f.vmul(prefixes[:, r], np.full(q**s, lr, dtype=np.int64)))
        codes = prefix_codes * q + f.vneg(acc)
        fresh = witness[codes] == -1
        witness[codes[fresh]] = ordinal
        deep[codes] = False
    logger.info("classified %d syndromes for %s: %d deep", size, params.describe(), int(deep.sum()))
    return SyndromeClassification(params, deep, witness, subsets)


# ============================================================
# Reconstruction and deep-hole words
# ============================================================


def reconstruct(params: TrsParams, a: Sequence[FieldElement]) -> list[FieldElement]:
    """A word with syndrome a, as evaluations of an explicit h(x) on A."""
    _validate_syndrome(params, a)
    f, s, n, k, d = params.field, params.s, params.n, params.k, params.k - params.l
    sigma = params.sigma
    lam = params.lambdas(s + d)
    B = [f.sum(f.mul(sigma[i - j], a[j]) for j in range(i + 1)) for i in range(s + 1)]
    h = [0] * n
    for i in range(s + 1):
        h[n - 1 - i] = f.add(h[n - 1 - i], B[i])
    twist = 0
    for i in range(s):
        inner = f.sum(f.mul(sigma[d - w], lam[s - i + w]) for w in range(d + 1))
        twist = f.add(twist, f.mul(B[i], inner))
    h[k] = f.add(h[k], f.mul(params.eta, twist))

    word = []
    for alpha in params.A:
        acc = 0
        for c in reversed(h):
            acc = f.add(f.mul(acc, alpha), c)
        word.append(acc)

    got = f.matmul(build_parity_check(params), np.asarray(word, dtype=np.int64)[:, None])[:, 0]
    if list(got) != list(a):
        raise RuntimeError(f"reconstruction mismatch: syndrome {list(got)} != {list(a)}")
    return word


def deep_hole_word(
    params: TrsParams, a: Sequence[FieldElement], twist: TwistPoly | None = None, budget: int = 10**7
) -> list[FieldElement]:
    if not is_deep_hole_syndrome(params, a, budget).is_deep_hole_syndrome:
        raise ValueError(f"{list(a)} is not a deep-hole syndrome")
    word = reconstruct(params, a)
    if twist is None:
        return word
    f = params.field
    return [f.add(x, y) for x, y in zip(word, encode(params, twist))]


def family_word(params: TrsParams, scale: FieldElement, twist: TwistPoly | None = None) -> list[FieldElement]:
    """Evaluations of scale * x^k + f for f in the twisted space."""
    f = params.field
    word = [f.mul(scale, f.pow(alpha, params.k)) for alpha in params.A]
    if twist is not None:
        word = [f.add(x, y) for x, y in zip(word, encode(params, twist))]
    return word


@dataclass(frozen=True)
class OffsetFamilyReport:
    found: FieldElement | None
    excluded: int
    subsets: int
    q: int

    @property
    def bound_holds(self) -> bool:
        return self.excluded <= self.subsets


def search_offset_family(params: TrsParams, budget: int = 10**7) -> OffsetFamilyReport:
    """Looks for a with (0, ..., 0, 1, a) a deep-hole syndrome.

    Each subset rules out the single value -L_{s-1}, so at most C(n, k+1)
    values are excluded.
    """
    if params.s < 1:
        raise ValueError("needs n - k - 1 >= 1")
    f = params.field
    check_budget(math.comb(params.n, params.s), budget, "subset scan")
    excluded = set()
    table = SymTable(f)
    count = 0
    for _ in colex_walk(table, params.A, params.s):
        count += 1
        excluded.add(f.neg(criterion_functional(params, table)[-1]))
    found = next((v for v in f.elements() if v not in excluded), None)
    return OffsetFamilyReport(found, len(excluded), count, f.q)


def offset_syndrome(params: TrsParams, value: FieldElement) -> tuple[FieldElement, ...]:
    return (0,) * (params.s - 1) + (1, value)
