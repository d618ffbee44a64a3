"""May weights of bar words and the May E1 names of power-of-two words.

A factor t_i^(2^k) has weight 2i - 1 and is named h_{i,k} on the May E1
page.  General exponents are weighted digit by digit, so t1^a t2^b weighs
popcount(a) + 3 popcount(b).
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from .cobar import CobarElement
from .hopf_algebroid import format_word

Monomial = tuple  # sorted tuple of (i, k) pairs, with repetition


class UnsupportedWeightError(ValueError):
    """May weight requested for a word carrying v1."""


def may_weight(key: tuple) -> int:
    """Weight of a single word given by its key (v1, a1, b1, ...)."""
    if key[0]:
        raise UnsupportedWeightError(f"word {format_word(key)} carries v1")
    return sum(a.bit_count() for a in key[1::2]) + 3 * sum(b.bit_count() for b in key[2::2])


def word_weight(x: CobarElement) -> int:
    """Weight of a single-term cochain."""
    if len(x) != 1:
        raise ValueError("word_weight expects exactly one word")
    (key,) = x.terms
    return may_weight(key)


def max_weight(x: CobarElement) -> int:
    return max((may_weight(k) for k in x.terms), default=0)


def leading_part(x: CobarElement, threshold: int) -> CobarElement:
    """Sub-sum of the words of weight strictly above `threshold`."""
    return x._new({k: c for k, c in x.terms.items() if may_weight(k) > threshold})


class MayClass:
    """An F2-linear combination of monomials in the h_{i,k}."""

    __slots__ = ("monomials",)

    def __init__(self, monomials: Iterable[Monomial] = ()):
        acc: Counter = Counter(tuple(sorted(m)) for m in monomials)
        self.monomials = frozenset(m for m, c in acc.items() if c % 2)

    @classmethod
    def h(cls, i: int, k: int, power: int = 1) -> MayClass:
        return cls([((i, k),) * power])

    def __add__(self, other: MayClass) -> MayClass:
        return MayClass._from_set(self.monomials ^ other.monomials)

    def __mul__(self, other: MayClass) -> MayClass:
        return MayClass(a + b for a in self.monomials for b in other.monomials)

    @classmethod
    def _from_set(cls, s: frozenset) -> MayClass:
        x = cls.__new__(cls)
        x.monomials = s
        return x

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MayClass):
            return NotImplemented
        return self.monomials == other.monomials

    def __hash__(self) -> int:
        return hash(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    @staticmethod
    def _fmt(m: Monomial) -> str:
        counts = Counter(m)
        parts = []
        for (i, k) in sorted(counts):
            e = counts[(i, k)]
            parts.append(f"h({i},{k})" + (f"^{e}" if e > 1 else ""))
        return " ".join(parts) if parts else "1"

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        return " + ".join(self._fmt(m) for m in sorted(self.monomials))

    def __repr__(self) -> str:
        return f"MayClass({self})"


def _factor_symbol(a: int, b: int) -> tuple[int, int]:
    if a and not b and a & (a - 1) == 0:
        return (1, a.bit_length() - 1)
    if b and not a and b & (b - 1) == 0:
        return (2, b.bit_length() - 1)
    raise ValueError(f"factor t1^{a} t2^{b} is not a single power-of-two generator")


def e1_class(x: CobarElement) -> MayClass:
    """May E1 name of a cochain whose words are bars of t_i^(2^k), read mod 2."""
    mons = []
    for key, c in x.terms.items():
        if key[0]:
            raise UnsupportedWeightError(f"word {format_word(key)} carries v1")
        if not c & 1:
            continue
        mons.append(tuple(_factor_symbol(key[i], key[i + 1]) for i in range(1, len(key), 2)))
    return MayClass(mons)
