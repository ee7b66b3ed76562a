import pytest
from hypothesis import given, strategies as st

import ribetjac as rj
from ribetjac.finite_field import FieldSpec, find_modulus, is_prime, factorize


def test_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        FieldSpec(15)


def test_rejects_reducible_modulus():
    # x^2 - 1 = (x-1)(x+1); and x^2 + 1 splits too since -1 is a square mod 13
    with pytest.raises(ValueError):
        FieldSpec(13, 2, modulus=(12, 0, 1))
    with pytest.raises(ValueError):
        FieldSpec(13, 2, modulus=(1, 0, 1))


def test_rejects_oversized_field():
    with pytest.raises(rj.FieldTooLarge):
        FieldSpec(2099, 3, max_size=2**21)


def test_parse_field_literals():
    f = rj.parse_field("13^2:2,0,1")
    assert f.p == 13 and f.m == 2 and f.modulus == (2, 0, 1)
    assert rj.parse_field("13").m == 1
    auto = rj.parse_field("13^2")
    assert auto.modulus == find_modulus(13, 2)
    assert rj.parse_field(auto.literal()) == auto


def test_modulus_search_is_deterministic():
    assert find_modulus(13, 2) == find_modulus(13, 2)
    # the degree-5 search must exclude quadratic*cubic splits, not just roots
    mod5 = find_modulus(13, 5)
    spec = FieldSpec(13, 5, modulus=mod5)
    x = spec((0, 1, 0, 0, 0))
    assert x ** (13**5) == x and x ** 13 != x


def test_sqrt_minus_one_in_f13(f13):
    # exhaustive: 5 is the smallest square root of -1 mod 13
    roots = [a for a in range(13) if (a * a) % 13 == 12]
    assert roots == [5, 8]
    assert f13(5) * f13(5) == f13(12)


def test_pow_examples(f13):
    x = f13(7)
    assert x ** 1 == x
    assert x ** (13 - 1) == f13.one
    assert f13(5) ** 2 == f13(12)
    assert x ** -1 == x.inverse()
    with pytest.raises(rj.DivisionByZero):
        f13.zero ** -2


def test_mult_order_examples(f13):
    assert rj.mult_order(f13.one) == 1
    # direct powering oracle: 5, 12, 8, 1
    seq = [f13(5)]
    while seq[-1] != f13.one:
        seq.append(seq[-1] * f13(5))
    assert len(seq) == 4
    assert rj.mult_order(f13(5)) == 4
    with pytest.raises(rj.ZeroElement):
        rj.mult_order(f13.zero)


def test_mult_order_certificate(f13_2):
    for idx in (2, 17, 100, 69):
        x = f13_2.from_index(idx)
        d = rj.mult_order(x)
        assert x ** d == f13_2.one
        assert (13**2 - 1) % d == 0
        for ell, _ in factorize(d):
            assert x ** (d // ell) != f13_2.one


def test_field_mismatch(f13, f13_2):
    with pytest.raises(rj.FieldMismatch):
        f13(1) + f13_2.one
    with pytest.raises(rj.DivisionByZero):
        f13(1) / f13(0)


@st.composite
def f13_2_elements(draw):
    spec = rj.parse_field("13^2:2,0,1")
    return spec.from_index(draw(st.integers(0, 13**2 - 1)))


@given(f13_2_elements(), f13_2_elements(), f13_2_elements())
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x


@given(f13_2_elements())
def test_frobenius_and_inverse(x):
    assert x ** (13**2) == x
    if not x.is_zero():
        assert x * x.inverse() == x.spec.one
        assert x ** (13**2 - 1) == x.spec.one


def test_random_law_sample_200():
    # the fixed-count form of the ring-law check, as the suite runs it
    from ribetjac.invariants import check_field_laws
    for res in check_field_laws(rj.parse_field("13^2:2,0,1")):
        assert res.passed, res.name


def test_is_prime_small():
    assert [p for p in range(2, 30) if is_prime(p)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
