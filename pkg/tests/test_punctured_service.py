import itertools

import numpy as np
import pytest

from trslab.services.deephole_service import classify_all, criterion_residual, is_deep_hole_syndrome, reconstruct
from trslab.services.punctured_service import (
    bivariate_split,
    class_tags,
    classify_even_small_k,
    classset_membership,
    codim_one_has_root,
    codim_two_form,
    complete_pair,
    completeness_scan,
    cubic_line_syndrome,
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
from trslab.services.code_lab import syndrome_from_code
from trslab.services.sym_kernel import SymTable
from trslab.services.trs_core import TrsParams, trs_code


def _random_case(field, r, size, rng):
    a = tuple(int(v) for v in rng.integers(0, field.q, size=r + 1))
    prefix = sorted(int(v) for v in rng.choice(np.arange(1, field.q), size=size, replace=False))
    return a, prefix


@pytest.mark.parametrize("fixture, k", [("gf7", 2), ("gf8", 3), ("gf9", 3), ("gf9", 5)])
def test_quadratic_split_matches_residual(fixture, k, request):
    f = request.getfixturevalue(fixture)
    params = TrsParams.punctured(f, k, f.xi)
    rng = np.random.default_rng(k)
    for _ in range(20):
        a, prefix = _random_case(f, params.s, params.s - 1, rng)
        quadratic_split(params, a, prefix, verify=True)


def test_quadratic_split_of_zero_syndrome_vanishes(gf7):
    params = TrsParams.punctured(gf7, 2, 1)
    split = quadratic_split(params, (0, 0, 0, 0), [1, 2])
    assert (split.f1, split.f2, split.f3, split.linear, split.constant) == (0, 0, 0, 0, 0)


@pytest.mark.parametrize("fixture, k", [("gf7", 2), ("gf8", 3), ("gf9", 4)])
def test_bivariate_split_matches_residual(fixture, k, request):
    f = request.getfixturevalue(fixture)
    params = TrsParams.punctured(f, k, 1)
    rng = np.random.default_rng(k + 10)
    for _ in range(10):
        a, prefix = _random_case(f, params.s, params.s - 2, rng)
        split = bivariate_split(params, a, prefix, verify=True)
        surface = split.surface()
        for x_prev, x_last in itertools.permutations([x for x in f.nonzero() if x not in prefix], 2):
            assert surface(f.add(x_prev, x_last), x_last) == split(x_prev, x_last)


def test_complete_pair_extends_to_rejecting_subset(gf7):
    params = TrsParams.punctured(gf7, 2, 1)
    a = (1, 3, 0, 5)
    split = bivariate_split(params, a, [4])
    pair = complete_pair(params, split, [4])
    if pair is not None:
        assert criterion_residual(params, a, sorted([4, *pair])) == 0


def test_split_rejects_wrong_setting(gf7):
    params = TrsParams.on(gf7, "full", 2, 1, 1)
    with pytest.raises(ValueError):
        quadratic_split(params, (0,) * 5, [1, 2, 3])
    punctured = TrsParams.punctured(gf7, 2, 1)
    with pytest.raises(ValueError):
        quadratic_split(punctured, (0,) * 4, [1])
    with pytest.raises(ValueError):
        bivariate_split(punctured, (0,) * 4, [0])


def test_even_pair_form(gf8):
    params = TrsParams.punctured(gf8, 3, gf8.xi)
    prefix = [1]
    base = gf8.add(SymTable(gf8, prefix).S(1), gf8.inv(params.eta))
    for a_last in gf8.elements():
        a = pair_syndrome(params, a_last)
        for x_prev, x_last in itertools.permutations(range(2, gf8.q), 2):
            X, Y = gf8.add(x_prev, x_last), gf8.add(base, x_last)
            assert even_pair_form(params, a_last, prefix, X, Y) == criterion_residual(params, a, [1, x_prev, x_last])


def test_vanishing_product_zero_on_family(gf8, gf16):
    for f, k in ((gf8, 3), (gf16, 11)):
        params = TrsParams.punctured(f, k, 1)
        r = params.s
        family = (0,) * r + (1,)
        for xs in itertools.product(f.nonzero(), repeat=r - 2):
            assert vanishing_product(params, family, list(xs)) == 0


def test_vanishing_product_nonzero_means_not_deep(gf8):
    params = TrsParams.punctured(gf8, 3, 1)
    rng = np.random.default_rng(7)
    for _ in range(30):
        a = tuple(int(v) for v in rng.integers(0, 8, size=4))
        # x = 1 puts eta^-1 + S_1 at zero, outside the evaluation set
        if any(vanishing_product(params, a, [x]) for x in gf8.nonzero() if x != 1):
            assert not is_deep_hole_syndrome(params, a).is_deep_hole_syndrome


def test_vanishing_product_preconditions(gf7, gf8):
    with pytest.raises(ValueError):
        vanishing_product(TrsParams.punctured(gf7, 2, 1), (0, 0, 0, 1), [1])
    with pytest.raises(ValueError):
        vanishing_product(TrsParams.punctured(gf8, 4, 1), (0, 0, 1), [])
    assert vanishing_product_degree(16, 11) == (12, True)
    assert vanishing_product_degree(16, 10) == (16, False)


@pytest.mark.parametrize("k", [12, 13, 14])
def test_even_small_codimension_rule_matches_criterion(gf16, k):
    for eta in (1, gf16.xi):
        params = TrsParams.punctured(gf16, k, eta)
        rule = classify_even_small_k(gf16, k, eta)
        cls = classify_all(params)
        length = params.s + 1
        for code in range(gf16.q**length):
            assert rule(syndrome_from_code(gf16, code, length)) == bool(cls.deep[code])


def test_even_small_codimension_k12_only_leading_zero_pairs(gf16):
    params = TrsParams.punctured(gf16, 12, 1)
    cls = classify_all(params)
    deep = {syndrome_from_code(gf16, int(c), 3) for c in cls.deep_codes}
    assert deep == {(0, 0, a2) for a2 in gf16.nonzero()}


def test_even_small_codimension_preconditions(gf8, gf16):
    with pytest.raises(ValueError):
        classify_even_small_k(gf8, 5, 1)
    with pytest.raises(ValueError):
        classify_even_small_k(gf16, 11, 1)


def test_codim_one_root_iff_trace_zero(gf16):
    for eta in (1, gf16.xi):
        for a0 in gf16.nonzero():
            for a1 in gf16.elements():
                trace = gf16.trace_int(gf16.div(gf16.mul(a1, eta), a0))
                assert codim_one_has_root(gf16, eta, a0, a1) == (trace == 0)


def test_codim_two_form_matches_residual(gf16):
    params = TrsParams.punctured(gf16, 12, gf16.xi)
    rng = np.random.default_rng(12)
    for _ in range(50):
        a = tuple(int(v) for v in rng.integers(0, 16, size=3))
        x1 = int(rng.integers(1, 16))
        lam = int(rng.integers(2, 16))
        subset = sorted([x1, gf16.mul(lam, x1)])
        assert codim_two_form(gf16, params.eta, a, x1, lam) == criterion_residual(params, a, subset)


def test_class_membership(gf7):
    params = TrsParams.punctured(gf7, 2, 1)
    assert class_tags(params, (0, 0, 0, 5)) == ["tail_pair", "family"]
    assert class_tags(params, (1, 0, 0, 0)) == ["leading_only"]
    assert class_tags(params, cubic_line_syndrome(params, 1)) == ["cubic_line"]
    geometric = geometric_syndrome(params, 1, gf7.from_int(2))
    assert classset_membership(params, geometric, "geometric")
    assert class_tags(params, (1, 1, 2, 1)) == []
    with pytest.raises(ValueError):
        classset_membership(params, (0, 0, 0, 1), "unknown")
    with pytest.raises(ValueError):
        classset_membership(TrsParams.punctured(gf7, 1, 1), (0,) * 5, "cubic_line")


def test_class_membership_even_only_family(gf8):
    params = TrsParams.punctured(gf8, 3, 1)
    assert class_tags(params, (0, 0, 0, 3)) == ["family"]
    with pytest.raises(ValueError):
        classset_membership(params, (1, 0, 0, 0), "leading_only")


def test_range_arithmetic_ties():
    assert not odd_range(7, 2)
    assert not odd_range(49, 40)
    assert odd_range(49, 41)
    assert odd_range(49, 44)
    assert not odd_range(49, 45)

    ranges = even_ranges(64, 50)
    assert ranges == {"main_strict": False, "main_inclusive": True, "pair_bound": True}
    assert even_ranges(64, 51)["main_strict"]
    assert not any(even_ranges(16, k)["main_strict"] for k in range(1, 15))
    assert even_ranges(32, 26)["main_strict"]

    assert surface_bound_holds(49, 25)
    assert not surface_bound_holds(49, 24)
    assert surface_bound_holds(7, 0)


def test_completeness_scan_outside_range(gf7):
    params = TrsParams.punctured(gf7, 2, 1)
    report = completeness_scan(params)
    assert report.status == "vacuous"
    assert report.family_count == gf7.q - 1
    assert report.ranges == {"odd_main": False}
    assert report.deep_count >= report.family_count


def test_completeness_scan_even_exhaustive(gf8):
    params = TrsParams.punctured(gf8, 4, 1)
    report = completeness_scan(params)
    assert report.status == "vacuous"
    assert report.family_count == gf8.q - 1
    assert not report.ranges["main_strict"]


def test_completeness_scan_sampled_is_seeded(gf7):
    params = TrsParams.punctured(gf7, 2, 1)
    first = completeness_scan(params, mode="sampled", sample_count=25, seed=3)
    second = completeness_scan(params, mode="sampled", sample_count=25, seed=3)
    assert first == second
    assert first.samples == 25 and first.seed == 3
    assert first.family_count == 1
    with pytest.raises(ValueError):
        completeness_scan(params, mode="guess")


@pytest.mark.slow
def test_completeness_sampled_inside_even_range():
    from trslab.services.field_service import make_field

    f = make_field(2, 5)
    params = TrsParams.punctured(f, 27, 1)
    assert even_ranges(32, 27)["main_strict"]
    report = completeness_scan(params, mode="sampled", sample_count=5, seed=0)
    assert report.status == "sampled-consistent"


@pytest.mark.parametrize("fixture, k", [("gf7", 2), ("gf8", 3), ("gf9", 4)])
def test_punctured_word_has_its_syndrome(fixture, k, request):
    f = request.getfixturevalue(fixture)
    params = TrsParams.punctured(f, k, 1)
    code = trs_code(params)
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = tuple(int(v) for v in rng.integers(0, f.q, size=params.s + 1))
        word = punctured_word(params, a)
        assert word == reconstruct(params, a)
        assert code.syndrome(word) == a


def test_punctured_word_rejects_wrong_length(gf7):
    with pytest.raises(ValueError):
        punctured_word(TrsParams.punctured(gf7, 2, 1), (1, 2))
