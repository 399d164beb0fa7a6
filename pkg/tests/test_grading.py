import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from z22susy.grading import Degree, DimensionError, display_order, koszul_sign, parse_degree

DEGREES = [Degree(b) for b in ((0, 0), (1, 1), (0, 1), (1, 0))]
bits = st.tuples(st.integers(0, 1), st.integers(0, 1)).map(Degree)


def test_sign_table_matches_scalar_product():
    # hand-written from <a,b> = a1 b1 + a2 b2 mod 2
    expected = {
        ((0, 0), (0, 0)): 1, ((0, 0), (1, 1)): 1, ((0, 0), (0, 1)): 1, ((0, 0), (1, 0)): 1,
        ((1, 1), (1, 1)): 1, ((1, 1), (0, 1)): -1, ((1, 1), (1, 0)): -1,
        ((0, 1), (0, 1)): -1, ((0, 1), (1, 0)): 1, ((1, 0), (1, 0)): -1,
    }
    for (a, b), s in expected.items():
        assert koszul_sign(Degree(a), Degree(b)) == s
        assert koszul_sign(Degree(b), Degree(a)) == s


def test_exotic_degree_commutes_with_itself():
    z = Degree((1, 1))
    assert z.self_sign == 1 and z.parity == 0


def test_spinor_sectors_cross_commute():
    assert koszul_sign(Degree((0, 1)), Degree((1, 0))) == 1


@given(bits, bits, bits)
def test_sign_is_bilinear(a, b, c):
    assert koszul_sign(a + b, c) == koszul_sign(a, c) * koszul_sign(b, c)


@given(bits, bits)
def test_addition_is_an_abelian_group(a, b):
    assert a + b == b + a
    assert a + a == Degree.zero()


def test_display_order():
    assert display_order() == DEGREES


def test_parse_degree():
    assert parse_degree("(1, 0)") == Degree((1, 0))
    with pytest.raises(ValueError):
        parse_degree("(2,0)")
    with pytest.raises(ValueError):
        parse_degree("1,0")


def test_mixed_lengths_rejected():
    with pytest.raises(DimensionError):
        Degree((1, 0)) + Degree((1, 0, 0))
    with pytest.raises(DimensionError):
        koszul_sign(Degree((1,)), Degree((1, 1)))


def test_bits_must_be_binary():
    with pytest.raises(ValueError):
        Degree((0, 2))


def test_all_pairs_symmetric():
    for a, b in itertools.product(DEGREES, repeat=2):
        assert koszul_sign(a, b) == koszul_sign(b, a)
