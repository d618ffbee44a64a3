import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from cobarkit.ext_tables import (NONZERO, UNKNOWN, ZERO, ExtClass, ExtGenerator, QMonomial,
                                 bracket_with_juggling, c, classes_in_degree, degree_of,
                                 exceptional_collisions, ext_class, g, h, massey_lookup,
                                 monomials_in_degree, multiply, normalize_product, psi_q,
                                 regrade, tables, xi_coproduct)


@pytest.mark.parametrize("text,expected", [
    ("h_5 h_6", "0"),
    ("h_4^2 h_6", "h_5^3"),
    ("h_5^3", "h_5^3"),
    ("h_1 h_4^3", "0"),
    ("h_0^2 h_3^2", "0"),
    ("h_0 h_2^2", "0"),
    ("h_0^2 h_2", "h_1^3"),
    ("h_3 c_3", "0"),
    ("h_2 c_3", "0"),
    ("h_3^4", "0"),
])
def test_normal_forms(text, expected):
    assert str(ext_class(text)) == expected


@pytest.mark.parametrize("text", ["h_1 c_4", "h_0^3 h_5", "h_1 h_5^3", "g_4", "h_0 c_3",
                                  "h_0 h_4", "h_3^2", "h_2^3", "c_0"])
def test_certified_nonzero(text):
    x = ext_class(text)
    assert x.is_nonzero, x
    assert x.reason


@pytest.mark.parametrize("text", ["h_0^4", "h_0 g_4", "h_2^2 g_1"])
def test_uncertified(text):
    x = ext_class(text)
    assert not x.is_zero
    assert x.certainty == UNKNOWN


def test_zero_class_flags():
    z = ext_class("h_5 h_6")
    assert z.is_zero and not z.is_nonzero
    assert z.certainty == ZERO
    assert z.reason
    assert multiply(z, ext_class("h_0")).is_zero


def test_g0_does_not_exist():
    assert normalize_product([g(0)]).is_zero


def test_ext2_matches_adams_basis():
    # Ext^2 has basis h_i h_j with i <= j and j != i + 1
    for t in range(4, 1200, 2):
        got = {str(x) for x in classes_in_degree(2, t)}
        want = set()
        for i in range(10):
            for j in range(i, 10):
                if j != i + 1 and (2 << i) + (2 << j) == t:
                    want.add(str(normalize_product([h(i), h(j)])))
        assert got == want, t
        assert all(x.certainty == NONZERO for x in classes_in_degree(2, t))


def test_generator_degrees():
    # t-degrees are doubled: h_i sits in t = 2^(i+1)
    assert h(4).t_degree == 32
    assert c(4).t_degree == 11 << 5
    assert g(4).t_degree == 3 << 7
    assert degree_of(g(4)) == (4, 0, 384)
    assert degree_of(QMonomial([0, 0, 0])) == (0, 3, 3)
    assert degree_of((QMonomial([0, 0, 0]), normalize_product([g(4)]))) == (4, 3, 387)
    assert regrade(4, 3, 387) == (7, 387, 192)
    with pytest.raises(ValueError):
        regrade(1, 1, 4)
    with pytest.raises(TypeError):
        degree_of(3)


def test_q_monomial():
    q = QMonomial([5, 0, 1])
    assert list(q) == [0, 1, 5]
    assert q.filtration == 6
    assert str(q) == "q_0q_1q_5"
    assert str(QMonomial([0, 0])) == "q_0^2"
    assert QMonomial([0, 0]).is_q0_power
    with pytest.raises(ValueError):
        QMonomial([-1])


GENS = [h(i) for i in range(8)] + [c(i) for i in range(4)] + [g(i) for i in range(1, 4)]


@settings(max_examples=500, deadline=None, derandomize=True)
@given(st.lists(st.sampled_from(GENS), min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_normalize_confluence(gens, rnd):
    base = normalize_product(gens)
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    assert normalize_product(shuffled) == base
    cut = rnd.randrange(len(gens) + 1)
    left = normalize_product(shuffled[:cut])
    right = normalize_product(shuffled[cut:])
    assert multiply(left, right) == base
    # renormalizing a normal form is the identity
    if not base.is_zero:
        assert normalize_product(base.monomial) == base


def _reduce_mod2(items):
    return {k for k, v in Counter(items).items() if v % 2}


def _xi(k, e):
    return (0, 0) if k == 0 else (k, e)


@pytest.mark.parametrize("n", range(7))
def test_psi_coassociative(n):
    left = []
    for (k, e), i in psi_q(n):
        for a, b in xi_coproduct(k, e):
            left.append((_xi(*a), _xi(*b), i))
    right = []
    for (k, e), m in psi_q(n):
        for (k2, e2), i in psi_q(m):
            right.append((_xi(k, e), _xi(k2, e2), i))
    assert _reduce_mod2(left) == _reduce_mod2(right)


def test_psi_q_values():
    assert psi_q(2) == [((2, 2), 0), ((1, 4), 1), ((0, 0), 2)]
    with pytest.raises(ValueError):
        psi_q(-1)


def test_psi_q_degrees():
    # xi_k^e has t-degree e (2^k - 1); psi preserves t-degree
    for n in range(8):
        for (k, e), i in psi_q(n):
            assert e * ((1 << k) - 1) + (2 << i) - 1 == (2 << n) - 1


def test_massey_rows():
    hit = massey_lookup([ext_class("h_5"), ext_class("h_6"), ext_class("h_5")])
    assert str(hit.value) == "h_6^2"
    assert hit.citation
    hit = massey_lookup([ext_class(f"h_{k}") for k in (4, 5, 6)] + [ext_class("h_5^2")])
    assert str(hit.value) == "c_4"
    assert massey_lookup([ext_class("h_0"), ext_class("h_1"), ext_class("h_7")]) is None
    # below the tabulated range
    assert massey_lookup([ext_class("h_1"), ext_class("h_2"), ext_class("h_1")]) is None


def test_juggling_gives_zero():
    a = normalize_product([h(5), h(5)]).monomial
    hit = bracket_with_juggling([ext_class("h_5"), ext_class("h_6")], a, h(6))
    assert hit is not None and hit.value.is_zero


def test_monomials_in_degree():
    assert (h(0), h(0), h(0)) in monomials_in_degree(3, 6)
    assert monomials_in_degree(1, 6) == []
    assert [str(x) for x in classes_in_degree(1, 128)] == ["h_6"]


def test_exceptional_warnings():
    assert exceptional_collisions(4, 130)
    assert not exceptional_collisions(4, 131)


def test_tables_carry_citations():
    t = tables()
    for row in t.nonzero_facts:
        assert row.citation
    for row in t.massey_rows:
        assert row.citation
