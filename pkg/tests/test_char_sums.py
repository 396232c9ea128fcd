import itertools

import numpy as np
import pytest

from trslab.services.char_sums import (
    check_gauss_shift,
    conic_count,
    gauss_sum,
    identity_rows,
    kloosterman,
    mult_char_poly_sum,
    quad_complete_sum,
    surface_count,
    weil_power_sum,
)
from trslab.services.cyclotomic import CycInt, additive_char, quadratic_char_index
from trslab.services.field_service import make_field
from trslab.services.sym_kernel import BivariatePoly, Poly


def test_gauss_sum_trivial_character(gf7):
    assert gauss_sum(gf7, 0, 1) == -1


@pytest.mark.parametrize("fixture", ["gf5", "gf7", "gf9"])
def test_quadratic_gauss_sum_has_norm_q(fixture, request):
    f = request.getfixturevalue(fixture)
    for b in f.nonzero():
        g = gauss_sum(f, quadratic_char_index(f), b)
        assert isinstance(g, CycInt)
        assert g.abs_square() == f.q


def test_quadratic_gauss_sum_square_gf7(gf7):
    # 7 = 3 mod 4, so G^2 = -7
    g = gauss_sum(gf7, 3, 1)
    assert g * g == -7


def test_gauss_shift_exhaustive_gf8(gf8):
    for psi in range(gf8.q - 1):
        for a in gf8.nonzero():
            for b in gf8.elements():
                assert check_gauss_shift(gf8, psi, a, b)


def test_gauss_shift_quadratic_gf9(gf9):
    for a, b in itertools.product(gf9.nonzero(), gf9.elements()):
        assert check_gauss_shift(gf9, 4, a, b)
    with pytest.raises(ValueError):
        check_gauss_shift(gf9, 4, 0, 1)


def test_weil_power_sum(gf8):
    rep = weil_power_sum(gf8, 3, 5, 1)
    assert rep.value == 0 and rep.d == 1 and rep.bound_holds
    rep = weil_power_sum(gf8, 1, 0, 3)
    assert rep.d == 1  # gcd(3, 7)
    with pytest.raises(ValueError):
        weil_power_sum(gf8, 0, 1, 2)


def test_weil_power_sum_gf13_quartic():
    f = make_field(13)
    for a, b in itertools.product(f.nonzero(), f.elements()):
        rep = weil_power_sum(f, a, b, 4)
        assert rep.d == 4
        assert rep.bound_holds


@pytest.mark.parametrize("fixture", ["gf5", "gf7", "gf8", "gf9"])
def test_quad_complete_sum_matches_closed_form(fixture, request):
    f = request.getfixturevalue(fixture)
    for a2, a1, a0 in itertools.product(f.nonzero(), f.elements(), f.elements()):
        assert quad_complete_sum(f, a2, a1, a0).matches


def test_quad_complete_sum_pure_square(gf7):
    pi = quadratic_char_index(gf7)
    for a2 in gf7.nonzero():
        rep = quad_complete_sum(gf7, a2, 0, 0)
        assert rep.value == gauss_sum(gf7, pi, 1) * gf7.quadratic_char(a2)


def test_quad_complete_sum_even_degenerate(gf8):
    for a0 in gf8.elements():
        rep = quad_complete_sum(gf8, 1, 1, a0)
        assert rep.value == additive_char(gf8, 1, a0) * gf8.q


def test_mult_char_poly_sum(gf7, gf9):
    x = Poly(gf7, [0, 1])
    rep = mult_char_poly_sum(gf7, 3, 1, x)
    assert rep.value == 0 and rep.d == 1

    rep = mult_char_poly_sum(gf7, 3, 1, x * Poly(gf7, [1, 1]))
    assert rep.value == -1 and rep.d == 2 and rep.bound_holds

    cubic = Poly.from_roots(gf9, [1, 2, 3])
    rep = mult_char_poly_sum(gf9, 4, 1, cubic)
    assert rep.d == 3 and rep.bound_holds
    rep = mult_char_poly_sum(gf9, 1, 1, cubic)
    assert rep.bound_holds


def test_mult_char_poly_sum_rejects_powers(gf7):
    square = Poly.from_roots(gf7, [2]) * Poly.from_roots(gf7, [2])
    with pytest.raises(ValueError):
        mult_char_poly_sum(gf7, 3, 1, square)
    with pytest.raises(ValueError):
        mult_char_poly_sum(gf7, 0, 1, Poly(gf7, [0, 1]))


def test_kloosterman(gf7, gf16):
    for a in gf7.nonzero():
        assert kloosterman(gf7, a, 0).value == -1
    rep = kloosterman(gf16, 1, 1)
    assert rep.value.is_integer() and rep.bound_holds
    assert kloosterman(gf7, 1, gf7.from_int(2)).bound_holds
    for a, b in itertools.product(gf16.elements(), repeat=2):
        if a or b:
            assert kloosterman(gf16, a, b).bound_holds
    with pytest.raises(ValueError):
        kloosterman(gf7, 0, 0)


def test_conic_count(gf5, gf9):
    assert conic_count(gf5, 1, 1, 0).count == 2 * 5 - 1
    assert conic_count(gf5, 1, 1, 1).count == 4
    for a1, a2, b in itertools.product(gf9.nonzero(), gf9.nonzero(), gf9.elements()):
        assert conic_count(gf9, a1, a2, b).matches


def test_conic_count_rejects_even(gf8):
    with pytest.raises(ValueError):
        conic_count(gf8, 1, 1, 1)


def test_surface_count(gf8):
    assert surface_count(gf8, BivariatePoly(gf8, {(0, 0): 3})) == 0
    assert surface_count(gf8, BivariatePoly(gf8, {(1, 0): 1})) == gf8.q
    assert surface_count(gf8, BivariatePoly(gf8, {(1, 1): 1})) == 2 * gf8.q - 1
    for h in gf8.nonzero():
        F = BivariatePoly(gf8, {(2, 1): 1, (1, 2): 1, (0, 0): h})
        count = surface_count(gf8, F)
        # count >= q - 2 - 2 sqrt(q)
        assert count >= 1
    with pytest.raises(ValueError):
        surface_count(gf8, BivariatePoly(gf8, {(5, 0): 1}))


def test_surface_count_matches_pointwise(gf7):
    F = BivariatePoly(gf7, {(2, 1): 3, (0, 2): 1, (1, 0): 5, (0, 0): 2})
    direct = sum(F(x, y) == 0 for x in gf7.elements() for y in gf7.elements())
    assert surface_count(gf7, F) == direct


@pytest.mark.parametrize("fixture", ["gf5", "gf8"])
def test_identity_rows_all_pass(fixture, request):
    f = request.getfixturevalue(fixture)
    rows = list(identity_rows(f, np.random.default_rng(0), limit=256))
    assert rows
    assert [r for r in rows if not r.passed] == []
    assert rows[0].model_dump(by_alias=True)["pass"] is True
