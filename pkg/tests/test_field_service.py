import itertools
import pickle

import galois
import numpy as np
import pytest

from trslab.services.field_service import (
    FieldSpec,
    field_of_order,
    load_descriptor,
    make_field,
    save_descriptor,
    split_prime_power,
)


@pytest.mark.parametrize("q, expected", [(2, (2, 1)), (7, (7, 1)), (9, (3, 2)), (16, (2, 4)), (125, (5, 3))])
def test_split_prime_power(q, expected):
    assert split_prime_power(q) == expected


@pytest.mark.parametrize("q", [1, 6, 12, 100])
def test_split_prime_power_rejects(q):
    with pytest.raises(ValueError):
        split_prime_power(q)


def test_constructor_rejects_bad_input():
    with pytest.raises(ValueError):
        FieldSpec(6, 1)
    with pytest.raises(ValueError):
        FieldSpec(2, 0)


def test_prime_field_fast_path():
    f = make_field(2)
    assert f.q == 2
    assert f.modulus == [0, 1]
    assert f.add(1, 1) == 0


def test_gf7_generator_is_three(gf7):
    # 2 has order 3 modulo 7
    assert gf7.generator == 3
    assert gf7.to_int(gf7.xi) == 3


@pytest.mark.parametrize("p, m", [(2, 3), (2, 4), (3, 2), (5, 2)])
def test_modulus_is_smallest_irreducible(p, m):
    f = make_field(p, m)
    gf_p = galois.GF(p)
    modulus = galois.Poly(f.modulus, field=gf_p, order="asc")
    assert modulus.degree == m and f.modulus[-1] == 1
    assert modulus.is_irreducible()
    for low in itertools.product(range(p), repeat=m):
        if list(low) == f.modulus[:-1]:
            break
        assert not galois.Poly(list(low) + [1], field=gf_p, order="asc").is_irreducible()


def test_gf9_modulus_need_not_be_primitive(gf9):
    # x^2 + 1 is irreducible over GF(3) but x has order 4, so the generator is x + 1
    assert gf9.modulus == [1, 0, 1]
    assert gf9.generator == 4
    assert gf9.gf(3) ** 4 == 1
    assert gf9.gf(4) ** 4 != 1


def test_gf16_modulus_and_generator(gf16):
    assert gf16.modulus == [1, 0, 0, 1, 1]
    assert gf16.generator == 2


def test_xi_generates_multiplicative_group(gf16):
    assert {gf16.pow(gf16.xi, e) for e in range(gf16.q - 1)} == set(gf16.nonzero())
    assert all(gf16.pow(a, 15) == 1 for a in gf16.nonzero())


@pytest.mark.parametrize("fixture", ["gf8", "gf9", "gf16"])
def test_arithmetic_agrees_with_galois(fixture, request):
    f = request.getfixturevalue(fixture)
    for a, b in itertools.product(f.elements(), repeat=2):
        ga, gb = f.to_gf(a), f.to_gf(b)
        assert f.to_gf(f.add(a, b)) == ga + gb
        assert f.to_gf(f.sub(a, b)) == ga - gb
        assert f.to_gf(f.mul(a, b)) == ga * gb


def test_inverse_and_negation(gf9):
    for a in gf9.nonzero():
        assert gf9.mul(a, gf9.inv(a)) == 1
        assert gf9.add(a, gf9.neg(a)) == 0
        assert gf9.div(a, a) == 1
    with pytest.raises(ZeroDivisionError):
        gf9.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf9.pow(0, -1)


def test_arith_dispatch(gf7):
    assert gf7.arith(3, 0, "add") == 3
    assert gf7.arith(3, None, "inv") == gf7.inv(3)
    assert gf7.arith(3, 2, "pow") == gf7.mul(3, 3)
    with pytest.raises(ValueError):
        gf7.arith(1, 1, "xor")


def test_scalar_and_sign(gf5):
    assert gf5.to_int(gf5.scalar(3)) == 3
    assert gf5.scalar(5) == 0
    assert gf5.sign(2) == 1
    assert gf5.sign(1) == gf5.neg(1)


@pytest.mark.parametrize("fixture", ["gf7", "gf9"])
def test_sqrt_odd(fixture, request):
    f = request.getfixturevalue(fixture)
    roots = [f.sqrt(a) for a in f.nonzero()]
    assert sum(r is not None for r in roots) == (f.q - 1) // 2
    for a, r in zip(f.nonzero(), roots):
        if r is not None:
            assert f.mul(r, r) == a
    assert f.sqrt(0) == 0


def test_sqrt_even(gf16):
    for a in gf16.elements():
        r = gf16.sqrt(a)
        assert gf16.mul(r, r) == a


def test_trace(gf16, gf8):
    assert gf16.trace_int(0) == 0
    assert sum(gf16.trace_int(x) == 0 for x in gf16.elements()) == 8
    # Tr(1) = m mod 2
    assert gf16.trace_int(1) == 0
    assert gf8.trace_int(1) == 1
    for x in gf16.elements():
        assert gf16.trace(gf16.pow(x, 2)) == gf16.trace(x)


def test_quadratic_char(gf7, gf8):
    assert gf7.quadratic_char(gf7.from_int(3)) == -1
    assert gf7.quadratic_char(1) == 1
    assert gf7.quadratic_char(gf7.xi) == -1
    assert sum(gf7.quadratic_char(x) for x in gf7.elements()) == 0
    with pytest.raises(ValueError):
        gf8.quadratic_char(1)


def test_vectorized_matches_scalar(gf9):
    a, b = np.meshgrid(np.arange(9), np.arange(9), indexing="ij")
    a, b = a.ravel(), b.ravel()
    assert gf9.vadd(a, b).tolist() == [gf9.add(int(x), int(y)) for x, y in zip(a, b)]
    assert gf9.vmul(a, b).tolist() == [gf9.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert gf9.vneg(a).tolist() == [gf9.neg(int(x)) for x in a]
    assert gf9.vpow(a, 3).tolist() == [gf9.pow(int(x), 3) for x in a]


def test_coeffs(gf9):
    for a in gf9.elements():
        assert gf9.from_coeffs(gf9.coeffs(a)) == a
    with pytest.raises(ValueError):
        gf9.from_coeffs([1])


def test_linear_algebra(gf7):
    identity = [[1, 0], [0, 1]]
    assert gf7.rank(identity) == 2
    assert gf7.det(identity) == 1
    assert gf7.rank([[2, 3], [2, 3]]) == 1


def test_pickles_to_cached_instance(gf9):
    assert pickle.loads(pickle.dumps(gf9)) is make_field(3, 2)
    assert field_of_order(9) is gf9


def test_descriptor_file(gf16, tmp_path):
    path = save_descriptor(gf16, tmp_path)
    assert path.name == "gf_2_4.json"
    assert load_descriptor(path) is gf16

    tampered = gf16.descriptor().model_copy(update={"generator": gf16.generator + 1})
    path.write_text(tampered.model_dump_json(), encoding="utf-8")
    with pytest.raises(ValueError):
        load_descriptor(path)
    with pytest.raises(FileNotFoundError):
        load_descriptor(tmp_path / "missing.json")
