import pytest
from hypothesis import given, settings, strategies as st

from cobarkit.polynomial import Monomial, TruncatedPolynomial

CONFIGS = [(1, 1), (2, 4), (3, 4), (3, 1)]


@st.composite
def polys(draw, e, m):
    n = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n):
        mono = (draw(st.integers(0, 6)), draw(st.integers(0, 3)), draw(st.integers(0, m + 1)))
        terms[mono] = draw(st.integers(-20, 20))
    return TruncatedPolynomial(terms, e, m)


@pytest.mark.parametrize("e,m", CONFIGS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_ring_axioms(e, m, data):
    a = data.draw(polys(e, m))
    b = data.draw(polys(e, m))
    c = data.draw(polys(e, m))
    one = TruncatedPolynomial.one(e, m)
    zero = TruncatedPolynomial.zero(e, m)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * one == a
    assert a + zero == a
    assert a - a == zero


def test_truncation_and_modulus():
    v1 = TruncatedPolynomial.monomial(v1=1, modulus_e=3, v1_order=4)
    assert v1 ** 4 == 0
    assert v1 ** 3 != 0
    two = TruncatedPolynomial.monomial(coeff=2, modulus_e=3, v1_order=4)
    assert two ** 3 == 0


def test_power_matches_repeated_product():
    x = TruncatedPolynomial({(1, 0, 0): 1, (0, 1, 0): 3, (0, 0, 1): 1}, 3, 4)
    acc = TruncatedPolynomial.one(3, 4)
    for n in range(9):
        assert x ** n == acc
        acc = acc * x


def test_config_mismatch():
    a = TruncatedPolynomial.monomial(t1=1, modulus_e=3)
    b = TruncatedPolynomial.monomial(t1=1, modulus_e=2)
    with pytest.raises(ValueError):
        a + b


def test_monomial_degree_and_str():
    m = Monomial(t1=2, t2=1, v1=1)
    assert m.internal_degree == 2 * 2 + 6 + 2
    assert str(m) == "v1 t1^2 t2"
    assert str(Monomial()) == "1"
