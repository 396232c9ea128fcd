"""Registry of verification checks.

A check takes a CheckContext (field, optional code parameters, budgets and a
seeded generator) and returns one CheckRow. Checks that only make sense in a
particular setting return a "vacuous" row saying why.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from trslab.models import CheckRow
from trslab.services.char_sums import identity_rows
from trslab.services.code_lab import (
    BudgetExceeded,
    check_budget,
    coset_leaders,
    covering_radius,
    random_subcode,
    subcode_deep_holes,
    syndrome_from_code,
)
from trslab.services.deephole_service import (
    classify_all,
    criterion_residual,
    family_word,
    is_deep_hole_syndrome,
    offset_syndrome,
    reconstruct,
    search_offset_family,
)
from trslab.services.field_service import FieldSpec
from trslab.services.punctured_service import (
    bivariate_split,
    class_tags,
    classify_even_small_k,
    codim_one_has_root,
    codim_two_form,
    completeness_scan,
    even_pair_form,
    even_ranges,
    geometric_syndrome,
    odd_range,
    pair_syndrome,
    punctured_word,
    quadratic_split,
    surface_bound_holds,
    vanishing_product,
    vanishing_product_degree,
)
from trslab.services.sym_kernel import SymTable, lagrange_interpolate, vandermonde_minor
from trslab.services.trs_core import TrsParams, TwistPoly, rs_code, trs_code
from trslab.services.witness_service import (
    SYMMETRIC_KINDS,
    complete_witness,
    cubic_line_identity,
    geometric_factorization,
    symmetric_conditions,
    witness_cubic_line,
    witness_even_leading,
    witness_even_pair,
    witness_generic,
    witness_geometric,
    witness_leading_only,
    witness_symmetric,
    witness_tail_pair,
)

logger = logging.getLogger(__name__)

# Trial caps for the checks that sample syndromes or subsets.
SPLIT_TRIALS = 100
RECONSTRUCT_TRIALS = 200
WITNESS_TRIALS = 50
MAX_WITNESSES = 5


@dataclass
class CheckContext:
    check: str
    field: FieldSpec
    params: TrsParams | None
    row_params: dict
    rng: np.random.Generator
    mode: str = "exhaustive"
    subset_budget: int = 10**7
    coset_budget: int = 10**7
    codeword_budget: int = 10**7
    sample_count: int = 10_000

    def row(self, status: str, counts: dict | None = None, witnesses: list | None = None, detail: str = "") -> CheckRow:
        return CheckRow(
            check=self.check,
            params=self.row_params,
            status=status,
            witnesses=(witnesses or [])[:MAX_WITNESSES],
            counts=counts or {},
            detail=detail,
        )

    def vacuous(self, detail: str) -> CheckRow:
        return self.row("vacuous", detail=detail)

    def verdict(self, failures: int, counts: dict, witnesses: list | None = None, detail: str = "") -> CheckRow:
        return self.row("fail" if failures else "pass", {**counts, "failures": failures}, witnesses, detail)

    def trials(self, cap: int) -> int:
        return min(self.sample_count, cap)

    def random_syndrome(self, length: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.rng.integers(0, self.field.q, size=length))

    def random_subset(self, pool, size: int) -> list[int]:
        return sorted(int(v) for v in self.rng.choice(np.asarray(list(pool)), size=size, replace=False))


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    scope: str  # "field": once per run, "code": once per (evaluation, k, l, eta)
    fn: Callable[[CheckContext], CheckRow]
    alias: str | None = None
    punctured: bool = False  # only applies with A = F_q^* and l = k - 1


CHECKS: dict[str, CheckSpec] = {}
ALIASES: dict[str, str] = {}


def register(check_id: str, scope: str = "code", alias: str | None = None, punctured: bool = False):
    def decorator(fn):
        CHECKS[check_id] = CheckSpec(check_id, scope, fn, alias, punctured)
        if alias:
            ALIASES[alias] = check_id
        return fn

    return decorator


def resolve_check(name: str) -> str:
    """Registered check id for a check id or its alias."""
    check_id = ALIASES.get(name, name)
    if check_id not in CHECKS:
        raise ValueError(f"unknown check {name!r}")
    return check_id


def run_check(check_id: str, ctx: CheckContext) -> CheckRow:
    spec = CHECKS[resolve_check(check_id)]
    try:
        row = spec.fn(ctx)
    except BudgetExceeded as e:
        row = ctx.row("fail", detail=f"budget exceeded: {e}")
    row.check = spec.check_id
    if row.status == "fail":
        logger.error("check %s failed at %s: %s", spec.check_id, ctx.row_params, row.detail or row.counts)
    return row


def _punctured(ctx: CheckContext, odd: bool | None = None, min_r: int = 0) -> str | None:
    """Reason the check does not apply, or None."""
    p = ctx.params
    if p is None or not p.is_punctured_setting:
        return "needs A = F_q^* and l = k - 1"
    if odd is True and ctx.field.p == 2:
        return "needs odd q"
    if odd is False and ctx.field.p != 2:
        return "needs even q"
    if p.s < min_r:
        return f"needs r = q - k - 2 >= {min_r}, got r = {p.s}"
    return None


# ============================================================
# General evaluation sets
# ============================================================


@register("covering-radius", alias="thm3.1")
def check_covering_radius(ctx: CheckContext) -> CheckRow:
    p = ctx.params
    code = trs_code(p)
    family = code.syndrome(family_word(p, 1))
    res = covering_radius(code, [family], ctx.coset_budget)
    expected = p.n - p.k
    counts = {"covering_radius": res.radius, "expected": expected}
    witnesses = [list(res.witness)] if res.witness else []
    return ctx.verdict(int(res.radius != expected), counts, witnesses, detail=res.method)


@register("subcode-deep-holes", alias="thm3.2")
def check_subcode_deep_holes(ctx: CheckContext) -> CheckRow:
    p = ctx.params
    C0 = rs_code(ctx.field, p.A, p.k + 1)
    failures, checked = 0, 0
    for C in (trs_code(p), random_subcode(C0, ctx.rng)):
        rep = subcode_deep_holes(C0, C, ctx.coset_budget, ctx.codeword_budget)
        failures += int(not rep.passed)
        checked += rep.words_checked
    return ctx.verdict(failures, {"subcodes": 2, "words_checked": checked})


@register("lambda-recurrence", alias="lem2.1")
def check_lambda_recurrence(ctx: CheckContext) -> CheckRow:
    p, f = ctx.params, ctx.field
    n = p.n
    lam = p.lambdas(n)
    bad = []
    for t in range(n + 1):
        poly = lagrange_interpolate(f, [(a, f.pow(a, n - 1 + t)) for a in p.A])
        if poly.coeff(n - 1) != lam[t]:
            bad.append(t)
    return ctx.verdict(len(bad), {"terms": n + 1}, [{"t": t} for t in bad])


@register("vandermonde-minor", scope="field", alias="lem3.6")
def check_vandermonde_minor(ctx: CheckContext) -> CheckRow:
    f, rng = ctx.field, ctx.rng
    trials = ctx.trials(SPLIT_TRIALS)
    bad = []
    for _ in range(trials):
        s = int(rng.integers(1, min(f.q, 6) + 1))
        if s == 1:
            exps = [0]
        else:
            m = s + int(rng.integers(0, 4))
            exps = [0] + ctx.random_subset(range(1, m - 1), s - 2) + [m - 1]
        xs = ctx.random_subset(f.elements(), s)
        lhs, rhs = vandermonde_minor(f, xs, exps)
        if lhs != rhs:
            bad.append({"xs": xs, "exponents": exps, "lhs": lhs, "rhs": rhs})
    return ctx.verdict(len(bad), {"trials": trials}, bad)


@register("syndrome-criterion", alias="thm3.4")
def check_syndrome_criterion(ctx: CheckContext) -> CheckRow:
    p = ctx.params
    cls = classify_all(p, ctx.subset_budget, ctx.coset_budget)
    table = coset_leaders(trs_code(p), ctx.coset_budget)
    oracle = table.weights == p.n - p.k
    diff = np.flatnonzero(cls.deep != oracle)
    witnesses = [list(syndrome_from_code(ctx.field, int(c), p.s + 1)) for c in diff]
    counts = {"syndromes": len(table), "deep": int(cls.deep.sum()), "subsets": len(cls.subsets)}
    return ctx.verdict(len(diff), counts, witnesses)


@register("reconstruction", alias="lem3.7")
def check_reconstruction(ctx: CheckContext) -> CheckRow:
    p, f = ctx.params, ctx.field
    code = trs_code(p)
    trials = ctx.trials(RECONSTRUCT_TRIALS)
    bad = []
    for _ in range(trials):
        a = ctx.random_syndrome(p.n - p.k)
        try:
            word = reconstruct(p, a)
        except RuntimeError as e:
            bad.append({"a": list(a), "error": str(e)})
            continue
        if p.is_punctured_setting and word != punctured_word(p, a):
            bad.append({"a": list(a), "error": "differs from the direct F_q^* word"})
        shifted = f.vadd(np.asarray(word), code.encode(ctx.rng.integers(0, f.q, size=p.k)))
        if code.syndrome(shifted) != a:
            bad.append({"a": list(a), "error": "translate changes the syndrome"})
    return ctx.verdict(len(bad), {"trials": trials}, bad)


@register("family-words", alias="cor3.8")
def check_family_words(ctx: CheckContext) -> CheckRow:
    p, f = ctx.params, ctx.field
    code = trs_code(p)
    table = None
    detail = ""
    try:
        table = coset_leaders(code, ctx.coset_budget)
    except BudgetExceeded as e:
        detail = f"oracle skipped: {e}"
    expected = p.n - p.k
    bad, checked = [], 0

    def judge(word, want=None):
        nonlocal checked
        checked += 1
        syn = code.syndrome(word)
        ok = want is None or syn == want
        ok = ok and is_deep_hole_syndrome(p, syn, ctx.subset_budget).is_deep_hole_syndrome
        if table is not None:
            ok = ok and table.weight_of(syn) == expected
        if not ok:
            bad.append({"syndrome": list(syn)})

    for scale in list(f.nonzero())[:4]:
        twist = TwistPoly(p, tuple(int(v) for v in ctx.rng.integers(0, f.q, size=p.k)))
        judge(family_word(p, scale, twist), (0,) * p.s + (scale,))

    rs = rs_code(f, p.A, p.k + 1)
    for _ in range(4):
        word = rs.encode(ctx.rng.integers(0, f.q, size=p.k + 1))
        if not code.contains(word):
            judge(word)
    return ctx.verdict(len(bad), {"words": checked}, bad, detail)


@register("offset-family", alias="cor3.9")
def check_offset_family(ctx: CheckContext) -> CheckRow:
    p = ctx.params
    if p.s < 1:
        return ctx.vacuous("needs n - k - 1 >= 1")
    rep = search_offset_family(p, ctx.subset_budget)
    failures = int(not rep.bound_holds)
    if rep.found is None:
        failures += int(rep.q > math.comb(p.n, p.k + 1))
        witnesses = []
    else:
        failures += int(not is_deep_hole_syndrome(p, offset_syndrome(p, rep.found), ctx.subset_budget).is_deep_hole_syndrome)
        witnesses = [list(offset_syndrome(p, rep.found))]
    counts = {"excluded": rep.excluded, "subsets": rep.subsets, "q": rep.q}
    return ctx.verdict(failures, counts, witnesses)


# ============================================================
# The A = F_q^*, l = k - 1 setting
# ============================================================


@register("quadratic-split", alias="eq3.6", punctured=True)
def check_quadratic_split(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, min_r=1):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    r = p.s
    zero = quadratic_split(p, (0,) * (r + 1), list(range(1, r)))
    failures = int(any((zero.f1, zero.f2, zero.f3, zero.linear, zero.constant)))
    bad = []
    trials = ctx.trials(SPLIT_TRIALS)
    for _ in range(trials):
        a = ctx.random_syndrome(r + 1)
        prefix = ctx.random_subset(f.nonzero(), r - 1)
        try:
            quadratic_split(p, a, prefix, verify=True)
        except RuntimeError as e:
            bad.append({"a": list(a), "prefix": prefix, "error": str(e)})
    return ctx.verdict(failures + len(bad), {"trials": trials}, bad)


@register("bivariate-split", alias="eq4.6", punctured=True)
def check_bivariate_split(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, min_r=2):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    r = p.s
    bad = []
    trials = ctx.trials(SPLIT_TRIALS)
    for _ in range(trials):
        a = ctx.random_syndrome(r + 1)
        prefix = ctx.random_subset(f.nonzero(), r - 2)
        try:
            bivariate_split(p, a, prefix, verify=True)
        except RuntimeError as e:
            bad.append({"a": list(a), "prefix": prefix, "error": str(e)})

    pair_points = 0
    if f.p == 2:
        prefix = list(range(1, r - 1))
        a_last = int(ctx.rng.integers(0, f.q))
        a = pair_syndrome(p, a_last)
        base = f.add(SymTable(f, prefix).S(1), f.inv(p.eta))
        for x_prev in f.nonzero():
            for x_last in f.nonzero():
                if x_prev == x_last or x_prev in prefix or x_last in prefix:
                    continue
                pair_points += 1
                X, Y = f.add(x_prev, x_last), f.add(base, x_last)
                if even_pair_form(p, a_last, prefix, X, Y) != criterion_residual(p, a, prefix + [x_prev, x_last]):
                    bad.append({"a_last": a_last, "pair": [x_prev, x_last]})
    return ctx.verdict(len(bad), {"trials": trials, "pair_points": pair_points}, bad)


@register("vanishing-product", alias="lem4.1", punctured=True)
def check_vanishing_product(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=False, min_r=3):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    r, q = p.s, f.q
    trials = ctx.trials(WITNESS_TRIALS)
    grid = (q - 1) ** (r - 2)
    check_budget(grid * (trials + 1) + trials * math.comb(q - 1, r), ctx.subset_budget, "vanishing-product grid")
    points = [[x + 1 for x in idx] for idx in np.ndindex(*([q - 1] * (r - 2)))]

    family = (0,) * r + (1,)
    failures = sum(1 for xs in points if vanishing_product(p, family, xs) != 0)
    # eta^-1 + S_1 = 0 would put the derived point at zero, outside F_q^*
    live = [xs for xs in points if f.add(f.inv(p.eta), f.sum(xs)) != 0]
    nonvanishing, bad = 0, []
    for _ in range(trials):
        a = ctx.random_syndrome(r + 1)
        if any(vanishing_product(p, a, xs) != 0 for xs in live):
            nonvanishing += 1
            if is_deep_hole_syndrome(p, a, ctx.subset_budget).is_deep_hole_syndrome:
                bad.append(list(a))
    degree, below = vanishing_product_degree(q, p.k)
    counts = {"grid": grid, "trials": trials, "nonvanishing": nonvanishing, "degree": degree, "degree_below_q_minus_1": int(below)}
    return ctx.verdict(failures + len(bad), counts, bad)


@register("even-pair-syndromes", alias="lem4.2", punctured=True)
def check_even_pair_syndromes(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=False, min_r=2):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    q, r = f.q, p.s
    check_budget(q * q * math.comb(q - 1, r), ctx.subset_budget, "pair-syndrome search")
    in_range = even_ranges(q, p.k)["pair_bound"]
    rejected, deep, bad, witnesses = 0, 0, [], []
    for a_last in f.elements():
        subset = witness_even_pair(p, a_last)
        if subset is not None:
            rejected += 1
            witnesses.append(subset)
            continue
        deep += 1
        if in_range or not is_deep_hole_syndrome(p, pair_syndrome(p, a_last), ctx.subset_budget).is_deep_hole_syndrome:
            bad.append({"a_last": a_last})
    detail = "inside pair range" if in_range else "outside pair range; unrejected syndromes checked against the criterion"
    return ctx.verdict(len(bad), {"rejected": rejected, "deep": deep, "in_range": int(in_range)}, bad or witnesses, detail)


@register("even-leading-syndromes", alias="lem4.3", punctured=True)
def check_even_leading_syndromes(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=False, min_r=2):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    q, r = f.q, p.s
    check_budget(q**3 * math.comb(q - 1, r), ctx.subset_budget, "leading-syndrome search")
    in_range = even_ranges(q, p.k)["main_strict"]
    rejected, unresolved, bad, witnesses = 0, 0, [], []
    for a0 in f.elements():
        for a1 in f.elements():
            if a0 == 0 and a1 == 0:
                continue
            subset = witness_even_leading(p, a0, a1)
            if subset is not None:
                rejected += 1
                witnesses.append(subset)
            elif in_range:
                bad.append({"a0": a0, "a1": a1})
            else:
                unresolved += 1
    counts = {"rejected": rejected, "unresolved": unresolved, "in_range": int(in_range)}
    return ctx.verdict(len(bad), counts, bad or witnesses)


def _completeness(ctx: CheckContext, in_range: bool, ranges: dict) -> CheckRow:
    p = ctx.params
    try:
        rep = completeness_scan(
            p, ctx.mode, ctx.subset_budget, ctx.coset_budget, ctx.sample_count, int(ctx.rng.integers(0, 2**31))
        )
    except BudgetExceeded as e:
        if in_range:
            raise
        return ctx.vacuous(f"outside range {ranges}; scan skipped: {e}")
    counts = {
        "deep": rep.deep_count,
        "family": rep.family_count,
        "samples": rep.samples,
        "rejected": rep.rejected,
        "counterexamples": len(rep.counterexamples),
    }
    detail = f"ranges {ranges}" + (f"; seed {rep.seed}" if rep.seed is not None else "")
    return ctx.row(rep.status, counts, rep.counterexamples or rep.witnesses, detail)


@register("even-completeness", alias="even-main", punctured=True)
def check_even_completeness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=False):
        return ctx.vacuous(reason)
    ranges = even_ranges(ctx.field.q, ctx.params.k)
    return _completeness(ctx, ranges["main_strict"], ranges)


@register("odd-completeness", alias="odd-main", punctured=True)
def check_odd_completeness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=True):
        return ctx.vacuous(reason)
    inside = odd_range(ctx.field.q, ctx.params.k)
    return _completeness(ctx, inside, {"odd_main": inside})


@register("even-small-codim", alias="k-small-even", punctured=True)
def check_even_small_codim(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=False):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    q, k = f.q, p.k
    if q < 16 or k not in (q - 2, q - 3, q - 4):
        return ctx.vacuous("needs q >= 16 and k in {q-2, q-3, q-4}")
    rule = classify_even_small_k(f, k, p.eta)
    cls = classify_all(p, ctx.subset_budget, ctx.coset_budget)
    length = p.s + 1
    bad = []
    for code in range(q**length):
        a = syndrome_from_code(f, code, length)
        if rule(a) != bool(cls.deep[code]):
            bad.append(a)

    detail = ""
    try:
        table = coset_leaders(trs_code(p), ctx.coset_budget)
        oracle_mismatch = int(np.count_nonzero((table.weights == p.n - k) != cls.deep))
    except BudgetExceeded as e:
        oracle_mismatch = 0
        detail = f"coset oracle skipped: {e}"

    extra = 0
    if k == q - 3:
        for a0 in f.nonzero():
            for a1 in f.elements():
                has_root = codim_one_has_root(f, p.eta, a0, a1)
                extra += int(has_root != (f.trace_int(f.div(f.mul(a1, p.eta), a0)) == 0))
    elif k == q - 4:
        for _ in range(ctx.trials(SPLIT_TRIALS)):
            a = ctx.random_syndrome(3)
            x1 = int(ctx.rng.integers(1, q))
            lam = int(ctx.rng.integers(2, q))
            value = codim_two_form(f, p.eta, a, x1, lam)
            extra += int(value != criterion_residual(p, a, sorted([x1, f.mul(lam, x1)])))
    counts = {"syndromes": q**length, "deep": int(cls.deep.sum()), "oracle_mismatch": oracle_mismatch, "form_mismatch": extra}
    return ctx.verdict(len(bad) + oracle_mismatch + extra, counts, bad, detail)


# ============================================================
# Existence witnesses
# ============================================================


@register("sum-target-witness", alias="lem4.7", punctured=True)
def check_sum_target_witness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, min_r=1):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    bad, witnesses = [], []
    for a0 in f.nonzero():
        a = (a0,) + (0,) * p.s
        try:
            witnesses.append(witness_leading_only(p, a))
        except RuntimeError as e:
            bad.append({"a0": a0, "error": str(e)})
    return ctx.verdict(len(bad), {"syndromes": f.q - 1}, bad or witnesses)


@register("geometric-witness", alias="lem4.8-t4", punctured=True)
def check_geometric_witness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=True, min_r=2):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    pairs = [(a0, a1) for a0 in f.nonzero() for a1 in f.nonzero()]
    if len(pairs) > ctx.trials(WITNESS_TRIALS):
        picks = ctx.rng.choice(len(pairs), size=ctx.trials(WITNESS_TRIALS), replace=False)
        pairs = [pairs[int(i)] for i in sorted(picks)]
    bad, witnesses, identities = [], [], 0
    for a0, a1 in pairs:
        a = geometric_syndrome(p, a0, a1)
        try:
            witnesses.append(witness_geometric(p, a))
        except RuntimeError as e:
            bad.append({"a": list(a), "error": str(e)})
        subset = ctx.random_subset(f.nonzero(), p.s)
        lhs, rhs = geometric_factorization(p, a, subset)
        identities += 1
        if lhs != rhs:
            bad.append({"a": list(a), "subset": subset, "lhs": lhs, "rhs": rhs})
    return ctx.verdict(len(bad), {"syndromes": len(pairs), "identities": identities}, bad or witnesses)


def _generic_syndromes(ctx: CheckContext, count: int) -> list[tuple[int, ...]]:
    out = []
    while len(out) < count:
        a = ctx.random_syndrome(ctx.params.s + 1)
        if not class_tags(ctx.params, a):
            out.append(a)
    return out


@register("generic-witness", alias="lem4.8-witness", punctured=True)
def check_generic_witness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=True, min_r=3):
        return ctx.vacuous(reason)
    p = ctx.params
    if p.s > ctx.field.q - 4:
        return ctx.vacuous("needs r <= q - 4")
    bad, witnesses = [], []
    for a in _generic_syndromes(ctx, ctx.trials(WITNESS_TRIALS)):
        try:
            prefix, gamma = witness_generic(p, a)
            witnesses.append({"a": list(a), "prefix": prefix, "gamma": gamma})
        except RuntimeError as e:
            bad.append({"a": list(a), "error": str(e)})
    return ctx.verdict(len(bad), {"syndromes": ctx.trials(WITNESS_TRIALS)}, bad or witnesses)


@register("surface-completion", alias="lem4.9", punctured=True)
def check_surface_completion(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=True, min_r=3):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    if p.s > f.q - 4:
        return ctx.vacuous("needs r <= q - 4")
    in_range = odd_range(f.q, p.k)
    completed, unresolved, bound_ok, bad, witnesses = 0, 0, 0, [], []
    for a in _generic_syndromes(ctx, ctx.trials(WITNESS_TRIALS)):
        prefix, gamma = witness_generic(p, a)
        scaled = [f.mul(gamma, x) for x in prefix]
        subset, count = complete_witness(p, a, scaled)
        bound_ok += int(surface_bound_holds(f.q, count))
        if subset is not None:
            completed += 1
            witnesses.append(subset)
        elif in_range:
            bad.append({"a": list(a), "prefix": scaled, "surface_zeros": count})
        else:
            unresolved += 1
    counts = {"completed": completed, "unresolved": unresolved, "bound_holds": bound_ok, "in_range": int(in_range)}
    return ctx.verdict(len(bad), counts, bad or witnesses)


@register("tail-pair-witness", alias="lem4.10", punctured=True)
def check_tail_pair_witness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=True, min_r=3):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    r = p.s
    guaranteed = 4 * r <= f.q
    bad, witnesses, unresolved = [], [], 0
    for b in f.elements():
        a = (0,) * (r - 1) + (1, b)
        try:
            witnesses.append(witness_tail_pair(p, a))
        except RuntimeError as e:
            if guaranteed:
                bad.append({"b": b, "error": str(e)})
            else:
                unresolved += 1
    counts = {"syndromes": f.q, "unresolved": unresolved, "guaranteed": int(guaranteed)}
    return ctx.verdict(len(bad), counts, bad or witnesses)


@register("cubic-line-witness", alias="lem4.11", punctured=True)
def check_cubic_line_witness(ctx: CheckContext) -> CheckRow:
    if reason := _punctured(ctx, odd=True):
        return ctx.vacuous(reason)
    p, f = ctx.params, ctx.field
    if p.s != 3 or f.q < 7:
        return ctx.vacuous("needs r = 3 and q >= 7")
    bad, witnesses = [], []
    for b in f.nonzero():
        try:
            witnesses.append(witness_cubic_line(p, b))
        except RuntimeError as e:
            bad.append({"b": b, "error": str(e)})
    points = 0
    for X in f.elements():
        for Y in f.elements():
            points += 1
            lhs, rhs = cubic_line_identity(p, 1, X, Y)
            if lhs != rhs:
                bad.append({"X": X, "Y": Y, "lhs": lhs, "rhs": rhs})
    return ctx.verdict(len(bad), {"syndromes": f.q - 1, "identity_points": points}, bad or witnesses)


@register("symmetric-witness", scope="field", alias="appC")
def check_symmetric_witness(ctx: CheckContext) -> CheckRow:
    f = ctx.field
    if f.p == 2:
        return ctx.vacuous("needs odd q")
    if f.q < 7:
        return ctx.vacuous("needs q >= 7 so that some 1 <= j <= i - 1 <= q - 5 exists")
    counts = {"greedy": 0, "exhaustive": 0}
    bad, witnesses = [], []
    for kind in SYMMETRIC_KINDS:
        for i in range(2, f.q - 3):
            for j in range(1, i):
                try:
                    subset, method = witness_symmetric(f, kind, i, j)
                except RuntimeError as e:
                    bad.append({"kind": kind, "i": i, "j": j, "error": str(e)})
                    continue
                counts[method] += 1
                if not symmetric_conditions(f, kind, j, subset):
                    bad.append({"kind": kind, "i": i, "j": j, "subset": subset})
                elif len(witnesses) < MAX_WITNESSES:
                    witnesses.append({"kind": kind, "i": i, "j": j, "subset": subset})
    return ctx.verdict(len(bad), counts, bad or witnesses)


@register("character-sums", scope="field", alias="charsum")
def check_character_sums(ctx: CheckContext) -> CheckRow:
    rows = list(identity_rows(ctx.field, ctx.rng, limit=ctx.trials(4096)))
    failed = [row for row in rows if not row.passed]
    counts = {"rows": len(rows)}
    for row in rows:
        counts[row.identity] = counts.get(row.identity, 0) + 1
    return ctx.verdict(len(failed), counts, [{"identity": r.identity, **r.params} for r in failed])
