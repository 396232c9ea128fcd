import numpy as np
import pytest

from trslab.services.field_service import field_of_order
from trslab.services.trs_core import TrsParams
from trslab.services.verify_service import ALIASES, CHECKS, CheckContext, resolve_check, run_check


def make_ctx(check, field, params=None, **kwargs):
    row_params = params.describe() if params is not None else {"q": field.q}
    return CheckContext(
        check=check, field=field, params=params, row_params=row_params, rng=np.random.default_rng(0), **kwargs
    )


def run(check, field, params=None, **kwargs):
    return run_check(check, make_ctx(check, field, params, **kwargs))


def test_registry():
    assert len(CHECKS) == 24
    field_scoped = {c for c, spec in CHECKS.items() if spec.scope == "field"}
    assert field_scoped == {"vandermonde-minor", "symmetric-witness", "character-sums"}


def test_unknown_check(gf5):
    with pytest.raises(ValueError, match="unknown check"):
        run("no-such-check", gf5)


def test_every_check_has_an_alias():
    assert len(ALIASES) == len(CHECKS)
    for alias, check_id in ALIASES.items():
        assert resolve_check(alias) == check_id
        assert resolve_check(check_id) == check_id
    assert resolve_check("thm3.1") == "covering-radius"
    assert resolve_check("k-small-even") == "even-small-codim"
    assert resolve_check("appC") == "symmetric-witness"


def test_alias_and_id_give_the_same_row(gf5):
    params = TrsParams.on(gf5, "nonzero", 2, 1, 1)
    assert run("thm3.4", gf5, params) == run("syndrome-criterion", gf5, params)


def test_punctured_only_checks():
    punctured = {c for c, spec in CHECKS.items() if spec.punctured}
    assert "even-completeness" in punctured
    assert "even-small-codim" in punctured
    assert "covering-radius" not in punctured
    assert all(CHECKS[c].scope == "code" for c in punctured)


@pytest.mark.parametrize("evaluation, k, l", [("nonzero", 2, 1), ("full", 2, 0), ("full", 3, 1)])
def test_general_checks_pass(gf5, evaluation, k, l):
    params = TrsParams.on(gf5, evaluation, k, l, 1)
    for check in ("covering-radius", "syndrome-criterion", "lambda-recurrence", "family-words"):
        row = run(check, gf5, params)
        assert row.status == "pass", (check, row)
    assert row.params == params.describe()


def test_syndrome_criterion_counts(gf7):
    params = TrsParams.punctured(gf7, 2, gf7.xi)
    row = run("syndrome-criterion", gf7, params)
    assert row.status == "pass"
    assert row.counts["syndromes"] == 7**4
    assert row.counts["failures"] == 0
    assert row.counts["deep"] >= gf7.q - 1


def test_reconstruction_and_subcodes(gf7):
    params = TrsParams.on(gf7, "full", 3, 1, 2)
    assert run("reconstruction", gf7, params, sample_count=20).status == "pass"
    assert run("subcode-deep-holes", gf7, TrsParams.on(gf7, "nonzero", 4, 2, 1)).status == "pass"


def test_covering_radius_at_q9_full_k1_fits_default_budget(gf9):
    params = TrsParams.on(gf9, "full", 1, 0, 1)
    row = run("covering-radius", gf9, params)
    assert row.status == "pass"
    assert row.counts["covering_radius"] == 8
    assert row.detail == "certified"
    assert run("subcode-deep-holes", gf9, params).status == "pass"


def test_budget_refusal_is_a_failed_row(gf7):
    params = TrsParams.punctured(gf7, 2, 1)
    row = run("covering-radius", gf7, params, coset_budget=10)
    assert row.status == "fail"
    assert row.detail.startswith("budget exceeded: ")


def test_setting_mismatch_is_vacuous(gf7, gf8):
    full = TrsParams.on(gf7, "full", 2, 1, 1)
    row = run("quadratic-split", gf7, full)
    assert row.status == "vacuous"
    assert "F_q^*" in row.detail

    row = run("geometric-witness", gf8, TrsParams.punctured(gf8, 3, 1))
    assert (row.status, row.detail) == ("vacuous", "needs odd q")
    row = run("vanishing-product", gf7, TrsParams.punctured(gf7, 2, 1))
    assert (row.status, row.detail) == ("vacuous", "needs even q")
    assert run("offset-family", gf7, TrsParams.on(gf7, "nonzero", 5, 4, 1)).status == "vacuous"


@pytest.mark.parametrize(
    "check", ["quadratic-split", "bivariate-split", "sum-target-witness", "geometric-witness", "cubic-line-witness"]
)
def test_odd_punctured_checks(gf7, check):
    params = TrsParams.punctured(gf7, 2, 1)
    row = run(check, gf7, params, sample_count=30)
    assert row.status == "pass", row


def test_cubic_line_counts(gf7):
    row = run("cubic-line-witness", gf7, TrsParams.punctured(gf7, 2, gf7.xi))
    assert row.counts["identity_points"] == 49
    assert row.counts["syndromes"] == 6


@pytest.mark.parametrize(
    "check", ["bivariate-split", "vanishing-product", "even-pair-syndromes", "even-leading-syndromes"]
)
def test_even_punctured_checks(gf8, check):
    row = run(check, gf8, TrsParams.punctured(gf8, 3, gf8.xi), sample_count=20)
    assert row.status == "pass", row


def test_tail_pair_check_in_guaranteed_range():
    f = field_of_order(13)
    row = run("tail-pair-witness", f, TrsParams.punctured(f, 8, 1))
    assert row.status == "pass"
    assert row.counts["guaranteed"] == 1
    assert row.counts["unresolved"] == 0


def test_completeness_outside_range(gf7, gf8):
    row = run("odd-completeness", gf7, TrsParams.punctured(gf7, 2, 1))
    assert row.status == "vacuous"
    assert row.counts["family"] == 6
    row = run("even-completeness", gf8, TrsParams.punctured(gf8, 4, 1))
    assert row.status == "vacuous"


def test_completeness_budget_outside_range_is_vacuous(gf16):
    row = run("even-completeness", gf16, TrsParams.punctured(gf16, 4, 1), subset_budget=1000)
    assert row.status == "vacuous"
    assert "scan skipped" in row.detail


@pytest.mark.parametrize("k, deep", [(12, 15), (13, 135), (14, 15)])
def test_even_small_codim(gf16, k, deep):
    row = run("even-small-codim", gf16, TrsParams.punctured(gf16, k, gf16.xi), sample_count=40)
    assert row.status == "pass", row
    assert row.counts["deep"] == deep
    assert row.counts["oracle_mismatch"] == 0


def test_even_small_codim_vacuous_for_small_field(gf8):
    assert run("even-small-codim", gf8, TrsParams.punctured(gf8, 5, 1)).status == "vacuous"


@pytest.mark.parametrize("fixture", ["gf5", "gf8", "gf9"])
def test_field_scoped_checks(fixture, request):
    f = request.getfixturevalue(fixture)
    assert run("vandermonde-minor", f, sample_count=40).status == "pass"
    assert run("vandermonde-minor", f).params == {"q": f.q}


@pytest.mark.parametrize("fixture", ["gf5", "gf8"])
def test_character_sums_check(fixture, request):
    f = request.getfixturevalue(fixture)
    row = run("character-sums", f, sample_count=200)
    assert row.status == "pass"
    assert row.counts["rows"] > 0


def test_symmetric_witness_check(gf5, gf7, gf8):
    row = run("symmetric-witness", gf7)
    assert row.status == "pass"
    assert row.counts["greedy"] + row.counts["exhaustive"] == 6
    assert run("symmetric-witness", gf5).status == "vacuous"
    assert run("symmetric-witness", gf8).status == "vacuous"
