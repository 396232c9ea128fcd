"""Explicit rejecting subsets for the non-family syndromes of TRS_k(F_q^*, k-1, eta).

Each search is guided by an algebraic construction and falls back to a colex
scan. Every subset handed back has been checked against the criterion residual,
so a returned witness is always a genuine rejection.
"""

import logging
from collections.abc import Sequence

from trslab.services.char_sums import surface_count
from trslab.services.deephole_service import criterion_functional, criterion_residual
from trslab.services.field_service import FieldElement, FieldSpec
from trslab.services.punctured_service import (
    bivariate_split,
    class_tags,
    classset_membership,
    complete_pair,
    even_pair_constant,
    pair_syndrome,
    require_punctured,
)
from trslab.services.sym_kernel import SymTable, colex_subsets, colex_walk
from trslab.services.trs_core import TrsParams

logger = logging.getLogger(__name__)


def _require_odd(field: FieldSpec) -> None:
    if field.p == 2:
        raise ValueError("needs odd q")


def _confirm(params: TrsParams, a: Sequence[FieldElement], subset: Sequence[FieldElement]) -> list[FieldElement]:
    subset = sorted(subset)
    if criterion_residual(params, a, subset) != 0:
        raise RuntimeError(f"subset {subset} does not reject {list(a)}")
    return subset


def _scaled(field: FieldSpec, gamma: FieldElement, xs: Sequence[FieldElement]) -> list[FieldElement]:
    return [field.mul(gamma, x) for x in xs]


# ============================================================
# Sum target and leading-only syndromes
# ============================================================


def witness_sum_target(field: FieldSpec, r: int, eta: FieldElement) -> list[FieldElement]:
    """An r-subset of F_q^* whose elements add up to eta^-1."""
    q = field.q
    if not 1 <= r <= q - 2:
        raise ValueError(f"needs 1 <= r <= q - 2, got r={r}")
    if eta == 0:
        raise ValueError("eta must be nonzero")
    xs = list(range(1, r + 1))
    total = field.sum(xs)
    if total == 0:
        xs[0] = r + 1
        total = field.sum(xs)
    scale = field.inv(field.mul(eta, total))
    subset = sorted(_scaled(field, scale, xs))
    if field.sum(subset) != field.inv(eta):
        raise RuntimeError(f"scaled subset {subset} misses the target sum")
    return subset


def witness_leading_only(params: TrsParams, a: Sequence[FieldElement]) -> list[FieldElement]:
    """(a_0, 0, ..., 0) is rejected by any subset with S_1 = eta^-1."""
    require_punctured(params)
    if a[0] == 0 or any(a[1:]):
        raise ValueError(f"{list(a)} is not of the form (a_0, 0, ..., 0)")
    subset = witness_sum_target(params.field, params.s, params.eta)
    return _confirm(params, a, subset)


# ============================================================
# Geometric syndromes
# ============================================================


def witness_geometric(params: TrsParams, a: Sequence[FieldElement]) -> list[FieldElement]:
    """{M} plus the first r - 1 other nonzero elements, M = a_1 / a_0."""
    require_punctured(params)
    f, r = params.field, params.s
    _require_odd(f)
    if not classset_membership(params, a, "geometric"):
        raise ValueError(f"{list(a)} is not a geometric syndrome")
    M = f.div(a[1], a[0])
    others = [x for x in f.nonzero() if x != M][: r - 1]
    return _confirm(params, a, [M] + others)


def geometric_factorization(
    params: TrsParams, a: Sequence[FieldElement], subset: Sequence[FieldElement]
) -> tuple[FieldElement, FieldElement]:
    """(residual, a_0 (1 - eta S_1 - eta M) prod (M - x_j)) for a geometric a."""
    f = params.field
    M = f.div(a[1], a[0])
    table = SymTable(f, subset)
    lhs = f.add(f.sum(f.mul(ar, lr) for ar, lr in zip(a, criterion_functional(params, table))), a[-1])
    factor = f.sub(f.sub(1, f.mul(params.eta, table.S(1))), f.mul(params.eta, M))
    rhs = f.mul(a[0], factor)
    for x in subset:
        rhs = f.mul(rhs, f.sub(M, x))
    return lhs, rhs


# ============================================================
# Tail-pair syndromes (0, ..., 0, a_{r-1}, a_r)
# ============================================================


def _tail_pair_value(field: FieldSpec, eta: FieldElement, b: FieldElement, table: SymTable) -> FieldElement:
    """c_1 - eta c_2 + eta c_1^2 + b for the subset held in table."""
    c1, c2 = table.c(1), table.c(2)
    return field.add(field.add(field.sub(c1, field.mul(eta, c2)), field.mul(eta, field.mul(c1, c1))), b)


def _pair_from_xy(field: FieldSpec, X: FieldElement, Y: FieldElement, used: set) -> tuple | None:
    x_prev, x_last = field.add(X, Y), field.sub(X, Y)
    if Y == 0 or x_prev == 0 or x_last == 0 or x_prev in used or x_last in used:
        return None
    return x_prev, x_last


def _tail_pair_guided(field: FieldSpec, r: int, eta: FieldElement, b: FieldElement) -> list[FieldElement] | None:
    # x_{r-1} = X + Y, x_r = X - Y turns the condition into
    # 3 eta X^2 + eta Y^2 + 2 (eta S_1 - 1) X + f = 0 over the prefix.
    three, two = field.scalar(3), field.scalar(2)
    for idx in colex_subsets(field.q - 1, r - 2):
        prefix = [i + 1 for i in idx]
        table = SymTable(field, prefix)
        s1, s2 = table.S(1), table.S(2)
        lin = field.mul(two, field.sub(field.mul(eta, s1), 1))
        const = field.add(field.sub(field.neg(s1), field.mul(eta, s2)), field.add(field.mul(eta, field.mul(s1, s1)), b))
        used = set(prefix)
        if field.p == 3:
            if lin == 0:
                continue
            for Y in field.nonzero():
                X = field.neg(field.div(field.add(field.mul(eta, field.mul(Y, Y)), const), lin))
                pair = _pair_from_xy(field, X, Y, used)
                if pair:
                    return prefix + list(pair)
            continue
        for X in field.elements():
            rest = field.add(field.add(field.mul(three, field.mul(eta, field.mul(X, X))), field.mul(lin, X)), const)
            Y = field.sqrt(field.neg(field.div(rest, eta)))
            if Y is None:
                continue
            pair = _pair_from_xy(field, X, Y, used)
            if pair:
                return prefix + list(pair)
    return None


def tail_pair_subset(field: FieldSpec, r: int, eta: FieldElement, b: FieldElement) -> list[FieldElement]:
    """An r-subset of F_q^* with c_1 - eta c_2 + eta c_1^2 + b = 0."""
    _require_odd(field)
    if not 3 <= r <= field.q - 3:
        raise ValueError(f"needs 3 <= r <= q - 3, got r={r}")
    subset = _tail_pair_guided(field, r, eta, b)
    if subset is None:
        logger.warning("tail-pair guided search failed for q=%d r=%d b=%d; scanning", field.q, r, b)
        table = SymTable(field)
        nonzero = list(field.nonzero())
        for idx in colex_walk(table, nonzero, r):
            if _tail_pair_value(field, eta, b, table) == 0:
                subset = [nonzero[i] for i in idx]
                break
    if subset is None:
        raise RuntimeError(f"no tail-pair subset for q={field.q}, r={r}, eta={eta}, b={b}")
    subset = sorted(subset)
    if _tail_pair_value(field, eta, b, SymTable(field, subset)) != 0:
        raise RuntimeError(f"tail-pair subset {subset} fails its condition")
    return subset


def witness_tail_pair(params: TrsParams, a: Sequence[FieldElement]) -> list[FieldElement]:
    require_punctured(params)
    r = params.s
    if any(a[: r - 1]) or a[r - 1] == 0:
        raise ValueError(f"{list(a)} is not a tail-pair syndrome outside the family")
    f = params.field
    subset = tail_pair_subset(f, r, params.eta, f.div(a[r], a[r - 1]))
    return _confirm(params, a, subset)


# ============================================================
# Cubic-line syndromes, r = 3
# ============================================================


def _cubic_line_alpha(field: FieldSpec, eta: FieldElement) -> FieldElement:
    half = field.inv(field.mul(field.scalar(2), eta))
    quarter = field.inv(field.mul(field.scalar(4), eta))
    bad = {field.neg(half), field.neg(quarter), field.neg(field.inv(eta)), half}
    return next(x for x in field.nonzero() if x not in bad)


def witness_cubic_line(params: TrsParams, b: FieldElement) -> list[FieldElement]:
    """x_1 = 1/(2 eta) + alpha, x_2 = -alpha, x_3 = -1/(2 eta)."""
    require_punctured(params)
    f = params.field
    _require_odd(f)
    if f.q < 7:
        raise ValueError("needs q >= 7")
    if params.s != 3:
        raise ValueError("cubic-line syndromes need r = 3")
    if b == 0:
        raise ValueError("b must be nonzero")
    half = f.inv(f.mul(f.scalar(2), params.eta))
    alpha = _cubic_line_alpha(f, params.eta)
    subset = [f.add(half, alpha), f.neg(alpha), f.neg(half)]
    a = (0, f.mul(f.scalar(2), f.mul(b, params.eta)), b, f.div(b, f.mul(f.scalar(4), params.eta)))
    return _confirm(params, a, subset)


def cubic_line_identity(
    params: TrsParams, b: FieldElement, X: FieldElement, Y: FieldElement
) -> tuple[FieldElement, FieldElement]:
    """Residual at x_1, x_2 = (X +- Y)/2, x_3 = -X against (b eta/4)(2 eta X - 1)(Y^2 - (X + 1/eta)^2).

    Both sides are polynomials in (X, Y), so the points need not be distinct.
    """
    f, eta = params.field, params.eta
    half = f.inv(f.scalar(2))
    xs = [f.mul(half, f.add(X, Y)), f.mul(half, f.sub(X, Y)), f.neg(X)]
    a = (0, f.mul(f.scalar(2), f.mul(b, eta)), b, f.div(b, f.mul(f.scalar(4), eta)))
    L = criterion_functional(params, SymTable(f, xs))
    lhs = f.add(f.sum(f.mul(ar, lr) for ar, lr in zip(a, L)), a[-1])
    shifted = f.add(X, f.inv(eta))
    rhs = f.mul(f.div(f.mul(b, eta), f.scalar(4)), f.sub(f.mul(f.scalar(2), f.mul(eta, X)), 1))
    rhs = f.mul(rhs, f.sub(f.mul(Y, Y), f.mul(shifted, shifted)))
    return lhs, rhs


# ============================================================
# Symmetric-value witnesses
# ============================================================

SYMMETRIC_KINDS = ("linear", "quadratic")


def _symmetric_step_ok(field: FieldSpec, kind: str, table: SymTable, step: int, last: bool) -> bool:
    S = table.S
    if kind == "linear":
        if S(step) == 0:
            return False
        return not last or field.sub(field.mul(S(1), S(step)), S(step + 1)) != 0
    if S(step - 1) == 0:
        return False
    return field.sub(field.mul(S(step), S(step)), field.mul(S(step - 1), S(step + 1))) != 0


def symmetric_conditions(field: FieldSpec, kind: str, j: int, subset: Sequence[FieldElement]) -> bool:
    """linear: S_j != 0 and S_1 S_j - S_{j+1} != 0; quadratic: S_{j-1} != 0 and S_j^2 - S_{j-1} S_{j+1} != 0."""
    return _symmetric_step_ok(field, kind, SymTable(field, subset), j, last=True)


def witness_symmetric(field: FieldSpec, kind: str, i: int, j: int) -> tuple[list[FieldElement], str]:
    """An i-subset of F_q^* meeting the symmetric conditions at j, and how it was found."""
    _require_odd(field)
    if kind not in SYMMETRIC_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if not 1 <= j <= i - 1 <= field.q - 5:
        raise ValueError(f"needs 1 <= j <= i - 1 <= q - 5, got i={i}, j={j}")

    table = SymTable(field, range(1, i - j + 1))
    for step in range(1, j + 1):
        last = step == j
        pick = None
        for x in field.nonzero():
            if x in table.elements:
                continue
            table.push(x)
            ok = _symmetric_step_ok(field, kind, table, step, last)
            table.pop()
            if ok:
                pick = x
                break
        if pick is None:
            break
        table.push(pick)
    if len(table) == i and symmetric_conditions(field, kind, j, table.elements):
        return sorted(table.elements), "greedy"

    logger.warning("greedy %s extension stalled for q=%d i=%d j=%d; scanning", kind, field.q, i, j)
    nonzero = list(field.nonzero())
    scan = SymTable(field)
    for idx in colex_walk(scan, nonzero, i):
        if _symmetric_step_ok(field, kind, scan, j, last=True):
            return [nonzero[t] for t in idx], "exhaustive"
    raise RuntimeError(f"no {kind} symmetric witness for q={field.q}, i={i}, j={j}")


# ============================================================
# Generic syndromes and surface completion
# ============================================================


def witness_generic(params: TrsParams, a: Sequence[FieldElement]) -> tuple[list[FieldElement], FieldElement]:
    """A prefix and scale gamma with g_4 != 0 and a non-degenerate a_r on gamma * prefix."""
    require_punctured(params)
    f, r = params.field, params.s
    _require_odd(f)
    if not 3 <= r <= f.q - 4:
        raise ValueError(f"needs 3 <= r <= q - 4, got r={r}")
    tags = class_tags(params, a)
    if tags:
        raise ValueError(f"{list(a)} lies in {', '.join(tags)}")
    for idx in colex_subsets(f.q - 1, r - 2):
        prefix = [i + 1 for i in idx]
        for gamma in f.nonzero():
            split = bivariate_split(params, a, _scaled(f, gamma, prefix))
            if split.g[3] != 0 and split.degeneracy() != 0:
                return prefix, gamma
    raise RuntimeError(f"generic witness search exhausted for {list(a)} at {params.describe()}")


def complete_witness(
    params: TrsParams, a: Sequence[FieldElement], prefix: Sequence[FieldElement]
) -> tuple[list[FieldElement] | None, int]:
    """Extends prefix by two points to a rejecting subset; also returns the surface zero count."""
    split = bivariate_split(params, a, prefix)
    count = surface_count(params.field, split.surface())
    pair = complete_pair(params, split, prefix)
    if pair is None:
        return None, count
    return _confirm(params, a, list(prefix) + list(pair)), count


# ============================================================
# Even characteristic
# ============================================================


def witness_even_pair(params: TrsParams, a_last: FieldElement) -> list[FieldElement] | None:
    """Rejecting subset for (0, ..., 0, 1, eta^-1, a_r), preferring prefixes with a nonzero constant."""
    require_punctured(params)
    f, r = params.field, params.s
    if f.p != 2:
        raise ValueError("needs even q")
    if r < 2:
        raise ValueError("needs r >= 2")
    a = pair_syndrome(params, a_last)
    fallback = []
    for idx in colex_subsets(f.q - 1, r - 2):
        base = [i + 1 for i in idx]
        for gamma in f.nonzero() if base else (1,):
            prefix = _scaled(f, gamma, base)
            if even_pair_constant(params, a_last, prefix) == 0:
                fallback.append(prefix)
                continue
            subset, _ = complete_witness(params, a, prefix)
            if subset is not None:
                return subset
    for prefix in fallback:
        subset, _ = complete_witness(params, a, prefix)
        if subset is not None:
            return subset
    return None


def witness_even_leading(params: TrsParams, a0: FieldElement, a1: FieldElement) -> list[FieldElement] | None:
    """Rejecting subset for (a_0, a_1, 0, ..., 0) != 0 in even characteristic."""
    require_punctured(params)
    f, r = params.field, params.s
    if f.p != 2:
        raise ValueError("needs even q")
    if r < 2:
        raise ValueError("needs r >= 2")
    a = (a0, a1) + (0,) * (r - 1)
    if a1 == 0:
        if a0 == 0:
            raise ValueError("syndrome must be nonzero")
        return witness_leading_only(params, a)
    for idx in colex_subsets(f.q - 1, r - 2):
        prefix = [i + 1 for i in idx]
        if bivariate_split(params, a, prefix).g[3] == 0:
            continue
        subset, _ = complete_witness(params, a, prefix)
        if subset is not None:
            return subset
    return None
