import itertools
import math
from fractions import Fraction

import pytest

from trslab.services.cyclotomic import CycInt, MultCharValue, additive_char, mult_char, quadratic_char_index


def test_cycint_relations():
    z = CycInt.zeta_power(3, 1)
    assert z * CycInt.zeta_power(3, 2) == 1
    assert CycInt.from_counts(3, [1, 1, 1]) == 0
    assert z.conj() == CycInt.zeta_power(3, 2)
    assert (z * z * z).is_integer()
    assert z.abs_square() == Fraction(1)


def test_binary_ring_is_integers():
    assert CycInt.zeta_power(2, 1) == -1
    assert CycInt(2, [3]).is_integer()
    assert CycInt(2, [3]) * CycInt(2, [-2]) == -6


def test_arithmetic_with_ints():
    z = CycInt.zeta_power(5, 2)
    assert (z + 1) - 1 == z
    assert 2 * z == z + z
    assert 1 - z == -(z - 1)
    assert str(CycInt.from_int(5, 0)) == "0"


def test_mixing_rings_rejected():
    with pytest.raises(ValueError):
        CycInt.zeta_power(3, 1) + CycInt.zeta_power(5, 1)


def test_abs_square_at_most():
    g = CycInt.from_int(7, 3)
    assert g.abs_square_at_most(9)
    assert not g.abs_square_at_most(8)

    # |1 + zeta_5|^2 = 2 + 2 cos(2 pi / 5), the square of the golden ratio
    z = 1 + CycInt.zeta_power(5, 1)
    assert not z.abs_square_at_most(2)
    assert z.abs_square_at_most(3)


def _real(p: int, e: int) -> CycInt:
    return CycInt.zeta_power(p, e) + CycInt.zeta_power(p, -e)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_exact_sign_agrees_with_cosines(p):
    for e in range(1, p):
        x = _real(p, e)
        expected = 1 if math.cos(2 * math.pi * e / p) > 0 else -1
        assert x.sign() == x._exact_sign() == expected
    # 2 cos(2 pi / 7) lies just below 5/4
    assert (4 * _real(7, 1) - 5)._exact_sign() == -1
    assert (1000 * _real(7, 1) - 1246)._exact_sign() == 1


def test_exact_sign_on_close_approximations():
    # 2 cos(2 pi / 5) = (sqrt(5) - 1) / 2, and 987 / 1597 is a Fibonacci ratio close to it
    x = 1597 * _real(5, 1) - 987
    assert x._exact_sign() == 1
    y = 2584 * _real(5, 1) - 1597
    assert y._exact_sign() == -1
    assert x.sign() == 1 and y.sign() == -1


def test_sign_needs_a_real_element():
    with pytest.raises(ValueError, match="not real"):
        CycInt.zeta_power(5, 1).sign()
    assert CycInt.from_int(5, -3).sign() == -1
    assert CycInt.from_int(5, 0).sign() == 0


def test_additive_character(gf9):
    assert all(additive_char(gf9, 0, x) == 1 for x in gf9.elements())
    assert sum(additive_char(gf9, 1, x) for x in gf9.elements()) == 0
    for x, y in itertools.product(gf9.elements(), repeat=2):
        assert additive_char(gf9, 1, gf9.add(x, y)) == additive_char(gf9, 1, x) * additive_char(gf9, 1, y)


def test_additive_character_even_is_sign(gf8):
    for x in gf8.elements():
        assert additive_char(gf8, 1, x) == (-1) ** gf8.trace_int(x)


def test_multiplicative_character(gf7):
    pi = quadratic_char_index(gf7)
    assert pi == 3
    for x in gf7.nonzero():
        assert mult_char(gf7, 0, x).as_int() == 1
        assert mult_char(gf7, pi, x).as_int() == gf7.quadratic_char(x)
        assert mult_char(gf7, pi, gf7.mul(x, x)).as_int() == 1
    assert mult_char(gf7, 0, 0).as_int() == 1
    assert mult_char(gf7, 2, 0).as_int() == 0


def test_multiplicative_character_is_multiplicative(gf9):
    for i in range(8):
        for x, y in itertools.product(gf9.nonzero(), repeat=2):
            assert mult_char(gf9, i, gf9.mul(x, y)) == mult_char(gf9, i, x) * mult_char(gf9, i, y)


def test_mult_char_value_complex():
    v = MultCharValue(1, 4)
    assert v.as_int() is None
    assert abs(v.to_complex() - 1j) < 1e-12
    assert (v * v).as_int() == -1
    assert v.conj().exponent == 3
