import pytest

from cobarkit.cobar import word
from cobarkit.hopf_algebroid import (BarPolynomial, RightUnitDisabledError, StructureConfig,
                                     comultiply, format_word, right_unit_v1)


def delta(a, b, cfg):
    return comultiply(BarPolynomial.word((a, b), config=cfg))


def inner_terms(x, scale):
    """Terms of a 2-fold element with both factors nontrivial, exponents in units of scale."""
    out = {}
    for k, c in x.terms.items():
        if (k[1] or k[2]) and (k[3] or k[4]):
            out[tuple(e // scale for e in k[1:])] = c
    return out


def test_delta_generators():
    cfg = StructureConfig(3, 4)
    assert str(delta(1, 0, cfg)) == "[1 | t1] + [t1 | 1]"
    d = delta(0, 1, cfg)
    assert d.coefficient((0, 0, 1, 0, 0)) == 1
    assert d.coefficient((0, 1, 0, 2, 0)) == 7
    assert d.coefficient((1, 1, 0, 1, 0)) == 1
    assert d.coefficient((0, 0, 0, 0, 1)) == 1


def test_delta_t1_power_mod16_display():
    n = 2
    d = delta(1 << (n + 3), 0, StructureConfig(4, 4))
    got = inner_terms(d, 1 << n)
    want = {(i, 0, 8 - i, 0): c for i, c in zip(range(1, 8), (8, 12, 8, 6, 8, 12, 8))}
    assert got == want


def test_delta_t1_three_times_power_mod8_display():
    n = 2
    d = delta(3 << (n + 2), 0, StructureConfig(3, 4))
    got = inner_terms(d, 1 << n)
    coeffs = dict(zip(range(1, 12), (4, 2, 4, 7, None, 4, None, 7, 4, 2, 4)))
    want = {(i, 0, 12 - i, 0): c for i, c in coeffs.items() if c is not None}
    assert got == want


def test_delta_t1_five_times_power_mod4_display():
    n = 2
    d = delta(5 << (n + 1), 0, StructureConfig(2, 4))
    got = inner_terms(d, 1 << n)
    want = {(i, 0, 10 - i, 0): c for i, c in ((1, 2), (2, 1), (4, 2), (6, 2), (8, 1), (9, 2))}
    assert got == want


def test_delta_t2_power_display():
    n = 2
    d = delta(0, 1 << (n + 4), StructureConfig(3, 4))
    want_rows = [
        (1, (0, 16, 0, 0)), (4, (4, 12, 8, 0)), (4, (0, 12, 0, 4)), (6, (8, 8, 16, 0)),
        (4, (4, 8, 8, 4)), (6, (0, 8, 0, 8)), (4, (12, 4, 24, 0)), (4, (8, 4, 16, 4)),
        (4, (4, 4, 8, 8)), (4, (0, 4, 0, 12)), (1, (16, 0, 32, 0)), (4, (12, 0, 24, 4)),
        (6, (8, 0, 16, 8)), (4, (4, 0, 8, 12)), (1, (0, 0, 0, 16)),
    ]
    want = {(0,) + tuple(e << n for e in exps): c for c, exps in want_rows}
    assert d.terms == want


@pytest.mark.parametrize("k", [4, 5, 6, 7])
def test_delta_t2_power_has_no_v1_from_16_on(k):
    assert not delta(0, 1 << k, StructureConfig(3, 4)).has_v1()


@pytest.mark.parametrize("k", [2, 3])
def test_delta_t2_small_powers_keep_v1(k):
    assert delta(0, 1 << k, StructureConfig(3, 4)).has_v1()


def test_right_unit():
    cfg = StructureConfig(3, 4)
    eta = right_unit_v1(cfg)
    assert eta.coefficient((0, 0, 1)) == 1
    assert eta.coefficient((1, 0, 0)) == 2
    off = StructureConfig(3, 4, right_unit_enabled=False)
    with pytest.raises(RightUnitDisabledError):
        right_unit_v1(off)
    with pytest.raises(RightUnitDisabledError):
        word((1, 0), v1=1, config=off).differential()


def test_invariant_ideals():
    assert StructureConfig(3, 4).is_invariant()
    assert StructureConfig(1, 1).is_invariant()
    assert not StructureConfig(3, 1).is_invariant()
    assert not StructureConfig(2, 1).is_invariant()
    assert not StructureConfig(3, 2).is_invariant()


def test_format_word():
    assert format_word((0, 16, 0, 16, 0)) == "[t1^16 | t1^16]"
    assert format_word((2, 1, 1, 0, 0)) == "v1^2 [t1 t2 | 1]"
