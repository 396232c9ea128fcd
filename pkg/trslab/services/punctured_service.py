"""Deep holes of TRS_k(F_q^*, k-1, eta).

Here n = q - 1, sigma = (1, 0, ..., 0, -1) and r = q - k - 2 is both the
subset size of the criterion and the index of the last syndrome entry. The
criterion residual splits into a quadratic in the last subset element, or a
bivariate cubic in the last two, with coefficients f_t / g_t built from the
elementary symmetric values of the remaining prefix.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from trslab.services.code_lab import check_budget, syndrome_from_code
from trslab.services.deephole_service import classify_all, criterion_residual, is_deep_hole_syndrome
from trslab.services.field_service import FieldElement, FieldSpec
from trslab.services.sym_kernel import BivariatePoly, SymTable
from trslab.services.trs_core import TrsParams

logger = logging.getLogger(__name__)

CLASS_TAGS = ("cubic_line", "tail_pair", "leading_only", "geometric", "family")


def require_punctured(params: TrsParams) -> None:
    if not params.is_punctured_setting:
        raise ValueError("needs A = F_q^* and l = k - 1")


def _check_prefix(params: TrsParams, prefix: Sequence[FieldElement], size: int) -> None:
    if len(prefix) != size:
        raise ValueError(f"prefix must have {size} elements, got {len(prefix)}")
    if len(set(prefix)) != size or 0 in prefix:
        raise ValueError("prefix must consist of distinct nonzero elements")


def punctured_word(params: TrsParams, a: Sequence[FieldElement]) -> list[FieldElement]:
    """Evaluations of sum_i a_i x^(q-2-i) on F_q^*, a word with syndrome a."""
    require_punctured(params)
    f = params.field
    if len(a) != params.s + 1:
        raise ValueError(f"syndrome must have length {params.s + 1}")
    return [f.sum(f.mul(ai, f.pow(alpha, f.q - 2 - i)) for i, ai in enumerate(a)) for alpha in params.A]


def split_coefficients(
    field: FieldSpec, eta: FieldElement, a: Sequence[FieldElement], table: SymTable, count: int = 4
) -> list[FieldElement]:
    """[f_1, ..., f_count] with f_t = eta sum_{j<r} (-1)^(r-j+2-t) a_j S_{r-j+2-t}(prefix)."""
    r = len(a) - 1
    out = []
    for t in range(1, count + 1):
        acc = 0
        for j in range(r):
            if a[j]:
                e = r - j + 2 - t
                acc = field.add(acc, field.mul(field.sign(e), field.mul(a[j], table.S(e))))
        out.append(field.mul(eta, acc))
    return out


# ============================================================
# Quadratic and bivariate splits
# ============================================================


@dataclass(frozen=True)
class QuadraticSplit:
    field: FieldSpec
    f1: FieldElement
    f2: FieldElement
    f3: FieldElement
    linear: FieldElement
    constant: FieldElement

    def __call__(self, x: FieldElement) -> FieldElement:
        f = self.field
        return f.add(f.add(f.mul(self.f3, f.mul(x, x)), f.mul(self.linear, x)), self.constant)


def quadratic_split(
    params: TrsParams, a: Sequence[FieldElement], prefix: Sequence[FieldElement], verify: bool = False
) -> QuadraticSplit:
    """Residual as f_3 x^2 + f_3 (S_1 - eta^-1) x + g in the last element x."""
    require_punctured(params)
    f, r = params.field, params.s
    if r < 1:
        raise ValueError("needs r >= 1")
    _check_prefix(params, prefix, r - 1)
    table = SymTable(f, prefix)
    f1, f2, f3 = split_coefficients(f, params.eta, a, table, 3)
    eta_inv = f.inv(params.eta)
    s1 = table.S(1)
    g = f.add(f.sub(f.sub(f.mul(eta_inv, f2), f1), f.mul(s1, f2)), a[r])
    split = QuadraticSplit(f, f1, f2, f3, f.mul(f3, f.sub(s1, eta_inv)), g)
    if verify:
        for x in f.nonzero():
            if x in prefix:
                continue
            if split(x) != criterion_residual(params, a, list(prefix) + [x]):
                raise RuntimeError(f"quadratic split disagrees at x={x} for a={list(a)}")
    return split


@dataclass(frozen=True)
class BivariateSplit:
    field: FieldSpec
    g: tuple[FieldElement, FieldElement, FieldElement, FieldElement]
    beta0: FieldElement  # S_1(prefix) - eta^-1
    a_last: FieldElement

    def __call__(self, x_prev: FieldElement, x_last: FieldElement) -> FieldElement:
        f = self.field
        g1, g2, g3, g4 = self.g
        lead = f.sub(g3, f.mul(g4, x_last))
        total = f.add(x_prev, x_last)
        val = f.mul(lead, f.mul(total, total))
        val = f.add(val, f.mul(f.mul(f.sub(self.beta0, x_last), lead), total))
        val = f.add(val, f.mul(f.add(f.mul(g4, self.beta0), g3), f.mul(x_last, x_last)))
        val = f.sub(val, f.mul(g2, self.beta0))
        return f.add(f.sub(val, g1), self.a_last)

    def surface(self) -> BivariatePoly:
        """The same residual in X = x_prev + x_last, Y = x_last."""
        f = self.field
        g1, g2, g3, g4 = self.g
        b = self.beta0
        return BivariatePoly(
            f,
            {
                (2, 0): g3,
                (2, 1): f.neg(g4),
                (1, 0): f.mul(b, g3),
                (1, 1): f.neg(f.add(f.mul(b, g4), g3)),
                (1, 2): g4,
                (0, 2): f.add(f.mul(g4, b), g3),
                (0, 0): f.add(f.sub(f.neg(f.mul(g2, b)), g1), self.a_last),
            },
        )

    def degeneracy(self) -> FieldElement:
        """beta0 g4 g3^2 + g3^3 - beta0 g2 g4^2 - g1 g4^2 + a_r g4^2."""
        f = self.field
        g1, g2, g3, g4 = self.g
        b = self.beta0
        g4sq = f.mul(g4, g4)
        terms = [
            f.mul(b, f.mul(g4, f.mul(g3, g3))),
            f.pow(g3, 3),
            f.neg(f.mul(b, f.mul(g2, g4sq))),
            f.neg(f.mul(g1, g4sq)),
            f.mul(self.a_last, g4sq),
        ]
        return f.sum(terms)


def bivariate_split(
    params: TrsParams, a: Sequence[FieldElement], prefix: Sequence[FieldElement], verify: bool = False
) -> BivariateSplit:
    require_punctured(params)
    f, r = params.field, params.s
    if r < 2:
        raise ValueError("needs r >= 2")
    _check_prefix(params, prefix, r - 2)
    table = SymTable(f, prefix)
    g = tuple(split_coefficients(f, params.eta, a, table, 4))
    split = BivariateSplit(f, g, f.sub(table.S(1), f.inv(params.eta)), a[r])
    if verify:
        for x_prev in f.nonzero():
            for x_last in f.nonzero():
                if x_prev == x_last or x_prev in prefix or x_last in prefix:
                    continue
                if split(x_prev, x_last) != criterion_residual(params, a, list(prefix) + [x_prev, x_last]):
                    raise RuntimeError(f"bivariate split disagrees at ({x_prev}, {x_last}) for a={list(a)}")
    return split


def complete_pair(
    params: TrsParams, split: BivariateSplit, prefix: Sequence[FieldElement]
) -> tuple[FieldElement, FieldElement] | None:
    """First (x_prev, x_last) in canonical order that extends prefix to a rejecting subset."""
    f = params.field
    used = set(prefix)
    for x_prev in f.nonzero():
        if x_prev in used:
            continue
        for x_last in f.nonzero():
            if x_last in used or x_last == x_prev:
                continue
            if split(x_prev, x_last) == 0:
                return x_prev, x_last
    return None


# ============================================================
# Even characteristic
# ============================================================


def pair_syndrome(params: TrsParams, a_last: FieldElement) -> tuple[FieldElement, ...]:
    """(0, ..., 0, 1, eta^-1, a_r)."""
    r = params.s
    return (0,) * (r - 2) + (1, params.field.inv(params.eta), a_last)


def even_pair_constant(params: TrsParams, a_last: FieldElement, prefix: Sequence[FieldElement]) -> FieldElement:
    """h with residual = eta X Y (X + Y) + h, X = x_prev + x_last, Y = S_1 + eta^-1 + x_last."""
    f = params.field
    if f.p != 2:
        raise ValueError("needs even q")
    split = bivariate_split(params, pair_syndrome(params, a_last), prefix)
    g1, g2, _, _ = split.g
    return f.add(f.add(f.mul(g2, split.beta0), g1), a_last)


def even_pair_form(
    params: TrsParams, a_last: FieldElement, prefix: Sequence[FieldElement], X: FieldElement, Y: FieldElement
) -> FieldElement:
    f = params.field
    h = even_pair_constant(params, a_last, prefix)
    return f.add(f.mul(params.eta, f.mul(X, f.mul(Y, f.add(X, Y)))), h)


def vanishing_product(params: TrsParams, a: Sequence[FieldElement], xs: Sequence[FieldElement]) -> FieldElement:
    """Product polynomial that vanishes on (F_q^*)^(r-2) whenever a is a deep-hole syndrome."""
    require_punctured(params)
    f, r = params.field, params.s
    if f.p != 2:
        raise ValueError("needs even q")
    if r < 3:
        raise ValueError("needs r >= 3")
    if len(xs) != r - 2:
        raise ValueError(f"expected {r - 2} coordinates")
    table = SymTable(f, xs)
    y = f.add(f.inv(params.eta), table.S(1))
    table.push(y)
    ft1, _, ft3 = split_coefficients(f, params.eta, a, table, 3)
    gt = f.add(ft1, a[r])

    value = 1
    for j in range(len(xs)):
        for i in range(j):
            value = f.mul(value, f.sub(xs[j], xs[i]))
    for x in xs:
        value = f.mul(value, f.add(y, x))
    value = f.mul(value, f.mul(ft3, gt))
    value = f.mul(value, f.add(f.mul(ft3, f.mul(y, y)), gt))
    for x in xs:
        value = f.mul(value, f.add(f.mul(ft3, f.mul(x, x)), gt))
    return value


def vanishing_product_degree(q: int, k: int) -> tuple[int, bool]:
    """Per-variable degree bound 4(q-k-2) and whether it stays below q-1."""
    deg = 4 * (q - k - 2)
    return deg, deg < q - 1


class EvenSmallCodimRule:
    """Closed-form deep-hole predicate for k in {q-2, q-3, q-4}, q = 2^m >= 16."""

    def __init__(self, field: FieldSpec, k: int, eta: FieldElement):
        if field.p != 2 or field.q < 16:
            raise ValueError("needs q = 2^m >= 16")
        if k not in (field.q - 2, field.q - 3, field.q - 4):
            raise ValueError("k must be q-2, q-3 or q-4")
        self.field, self.k, self.eta = field, k, eta

    def __call__(self, a: Sequence[FieldElement]) -> bool:
        f, q = self.field, self.field.q
        if self.k == q - 2:
            return any(a)
        if self.k == q - 3:
            a0, a1 = a
            if a0 == 0:
                return a1 != 0
            return f.trace_int(f.div(f.mul(a1, self.eta), a0)) == 1
        a0, a1, a2 = a
        if a0 == 0 and a1 == 0:
            return a2 != 0
        return a0 == 0 and a1 != 0 and f.m % 2 == 1 and a2 == f.div(a1, self.eta)


def classify_even_small_k(field: FieldSpec, k: int, eta: FieldElement) -> EvenSmallCodimRule:
    return EvenSmallCodimRule(field, k, eta)


def codim_one_has_root(field: FieldSpec, eta: FieldElement, a0: FieldElement, a1: FieldElement) -> bool:
    """Whether eta x^2 + x + a1/a0 vanishes at some nonzero x."""
    c = field.div(a1, a0)
    return any(field.add(field.add(field.mul(eta, field.mul(x, x)), x), c) == 0 for x in field.nonzero())


def codim_two_form(
    field: FieldSpec, eta: FieldElement, a: Sequence[FieldElement], x1: FieldElement, lam: FieldElement
) -> FieldElement:
    """Residual for k = q-4 on the subset {x1, lam x1}, as a cubic in x1."""
    f = field
    a0, a1, a2 = a
    one_lam = f.add(1, lam)
    lam_sq = f.mul(lam, lam)
    cubic = f.mul(f.mul(eta, a0), f.add(lam, lam_sq))
    quad = f.add(f.mul(a0, lam), f.mul(f.mul(eta, a1), f.add(one_lam, lam_sq)))
    lin = f.mul(a1, one_lam)
    return f.sum([f.mul(cubic, f.pow(x1, 3)), f.mul(quad, f.mul(x1, x1)), f.mul(lin, x1), a2])


# ============================================================
# Class sets and range arithmetic
# ============================================================


def classset_membership(params: TrsParams, a: Sequence[FieldElement], tag: str) -> bool:
    f, r, eta = params.field, params.s, params.eta
    if tag not in CLASS_TAGS:
        raise ValueError(f"unknown class tag {tag!r}")
    if len(a) != r + 1:
        raise ValueError(f"syndrome must have length {r + 1}")
    if tag == "family":
        return not any(a[:r]) and a[r] != 0
    if f.p == 2:
        raise ValueError("class sets are defined for odd q")
    if tag == "cubic_line":
        if r != 3:
            raise ValueError("cubic_line needs r = 3")
        b = a[2]
        return b != 0 and tuple(a) == (0, f.mul(f.scalar(2), f.mul(b, eta)), b, f.div(b, f.mul(f.scalar(4), eta)))
    if tag == "tail_pair":
        return not any(a[: r - 1])
    if tag == "leading_only":
        return a[0] != 0 and not any(a[1:])
    a0, a1 = a[0], a[1]
    if a0 == 0 or a1 == 0:
        return False
    for j in range(2, r):
        if a[j] != f.div(f.pow(a1, j), f.pow(a0, j - 1)):
            return False
    tail = f.sub(f.div(f.pow(a1, r), f.pow(a0, r - 1)), f.mul(eta, f.div(f.pow(a1, r + 1), f.pow(a0, r))))
    return a[r] == tail


def class_tags(params: TrsParams, a: Sequence[FieldElement]) -> list[str]:
    tags = []
    for tag in CLASS_TAGS:
        if tag == "cubic_line" and params.s != 3:
            continue
        if params.field.p == 2 and tag != "family":
            continue
        if classset_membership(params, a, tag):
            tags.append(tag)
    return tags


def geometric_syndrome(params: TrsParams, a0: FieldElement, a1: FieldElement) -> tuple[FieldElement, ...]:
    f, r = params.field, params.s
    a = [a0, a1] + [f.div(f.pow(a1, j), f.pow(a0, j - 1)) for j in range(2, r)]
    a.append(f.sub(f.div(f.pow(a1, r), f.pow(a0, r - 1)), f.mul(params.eta, f.div(f.pow(a1, r + 1), f.pow(a0, r)))))
    return tuple(a)


def cubic_line_syndrome(params: TrsParams, b: FieldElement) -> tuple[FieldElement, ...]:
    f, eta = params.field, params.eta
    return (0, f.mul(f.scalar(2), f.mul(b, eta)), b, f.div(b, f.mul(f.scalar(4), eta)))


def _at_least_sqrt(lhs: int, c: int, q: int, strict: bool) -> bool:
    """lhs > c sqrt(q) (or >=), decided on integers."""
    if lhs < 0:
        return False
    return lhs * lhs > c * c * q if strict else lhs * lhs >= c * c * q


def even_ranges(q: int, k: int) -> dict[str, bool]:
    """Which of the even-q lower bounds on k hold, each together with 8 <= q, k <= q-5."""
    base = q >= 8 and k <= q - 5
    return {
        "main_strict": base and _at_least_sqrt(4 * k + 8 - 3 * q, 2, q, strict=True),
        "main_inclusive": base and _at_least_sqrt(4 * k + 8 - 3 * q, 2, q, strict=False),
        "pair_bound": base and _at_least_sqrt(4 * k + 10 - 3 * q, 2, q, strict=True),
    }


def odd_range(q: int, k: int) -> bool:
    """(3q - 5 + 3 sqrt(q)) / 4 <= k <= q - 5 with q >= 7."""
    return q >= 7 and k <= q - 5 and _at_least_sqrt(4 * k + 5 - 3 * q, 3, q, strict=False)


def surface_bound_holds(q: int, count: int) -> bool:
    """count >= q - 3 - 3 sqrt(q)."""
    gap = q - 3 - count
    return gap <= 0 or gap * gap <= 9 * q


# ============================================================
# Completeness scans
# ============================================================


@dataclass
class CompletenessReport:
    params: dict
    mode: str
    status: str
    ranges: dict[str, bool]
    deep_count: int = 0
    family_count: int = 0
    samples: int = 0
    rejected: int = 0
    counterexamples: list[list[int]] = dataclass_field(default_factory=list)
    witnesses: list[list[int]] = dataclass_field(default_factory=list)
    seed: int | None = None


def _theorem_in_range(field: FieldSpec, k: int) -> tuple[bool, dict[str, bool]]:
    if field.p == 2:
        ranges = even_ranges(field.q, k)
        return ranges["main_strict"], ranges
    inside = odd_range(field.q, k)
    return inside, {"odd_main": inside}


def completeness_scan(
    params: TrsParams,
    mode: str = "exhaustive",
    subset_budget: int = 10**7,
    table_budget: int = 10**7,
    sample_count: int = 10_000,
    seed: int = 0,
) -> CompletenessReport:
    """Compares the deep-hole syndromes with the family (0, ..., 0, a != 0)."""
    require_punctured(params)
    f, r, q = params.field, params.s, params.field.q
    inside, ranges = _theorem_in_range(f, params.k)

    if mode == "exhaustive":
        check_budget(q ** (r + 1) * math.comb(q - 1, r), subset_budget, "exhaustive completeness")
        cls = classify_all(params, subset_budget, table_budget)
        deep = set(cls.deep_codes.tolist())
        family = set(range(1, q))
        extra = sorted(deep - family)
        report = CompletenessReport(
            params.describe(), mode, "vacuous", ranges, len(deep), len(deep & family),
            counterexamples=[list(syndrome_from_code(f, c, r + 1)) for c in extra[:20]],
        )
        if inside:
            report.status = "pass" if deep == family else "fail"
        return report

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    report = CompletenessReport(params.describe(), mode, "vacuous", ranges, seed=seed)
    family_member = (0,) * r + (1,)
    report.family_count = int(is_deep_hole_syndrome(params, family_member, subset_budget).is_deep_hole_syndrome)
    for i in range(sample_count):
        a = [int(v) for v in rng.integers(0, q, size=r + 1)]
        if not any(a[:r]):
            a[int(rng.integers(0, r))] = int(rng.integers(1, q))
        verdict = is_deep_hole_syndrome(params, a, subset_budget)
        report.samples += 1
        if verdict.is_deep_hole_syndrome:
            report.counterexamples.append(a)
        else:
            report.rejected += 1
            if len(report.witnesses) < 5:
                report.witnesses.append(verdict.witness)
        if (i + 1) % 1000 == 0:
            logger.info("sampled completeness %s: %d/%d", params.describe(), i + 1, sample_count)
    if inside:
        consistent = not report.counterexamples and report.family_count == 1
        report.status = "sampled-consistent" if consistent else "fail"
    return report
