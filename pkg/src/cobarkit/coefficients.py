"""Residues modulo 2^e and binomial coefficients modulo powers of two.

Binomials are computed without forming C(n, k): the 2-adic valuation comes
from Kummer's carry count and the odd part from products of odd residues,
which are periodic modulo 2^e.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

MAX_EXPONENT = 16


def _check_exponent(e: int) -> None:
    if not isinstance(e, int) or e < 1 or e > MAX_EXPONENT:
        raise ValueError(f"modulus exponent must be in 1..{MAX_EXPONENT}, got {e!r}")


@dataclass(frozen=True, slots=True)
class Residue:
    """An element of Z/2^e stored as an integer in [0, 2^e)."""

    value: int
    exponent_e: int

    def __post_init__(self) -> None:
        _check_exponent(self.exponent_e)
        object.__setattr__(self, "value", self.value % (1 << self.exponent_e))

    @property
    def modulus(self) -> int:
        return 1 << self.exponent_e

    def _other(self, other: object) -> int:
        if isinstance(other, Residue):
            if other.exponent_e != self.exponent_e:
                raise ValueError(
                    f"modulus mismatch: 2^{self.exponent_e} vs 2^{other.exponent_e}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return Residue(self.value + v, self.exponent_e)

    __radd__ = __add__

    def __sub__(self, other: object) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return Residue(self.value - v, self.exponent_e)

    def __rsub__(self, other: object) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return Residue(v - self.value, self.exponent_e)

    def __mul__(self, other: object) -> Residue:
        v = self._other(other)
        if v is NotImplemented:
            return NotImplemented
        return Residue(self.value * v, self.exponent_e)

    __rmul__ = __mul__

    def __neg__(self) -> Residue:
        return Residue(-self.value, self.exponent_e)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Residue):
            return self.value == other.value and self.exponent_e == other.exponent_e
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.exponent_e))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"Residue({self.value} mod 2^{self.exponent_e})"

    def valuation(self) -> int:
        """2-adic valuation; returns exponent_e for zero."""
        if self.value == 0:
            return self.exponent_e
        return (self.value & -self.value).bit_length() - 1


def carries(a: int, b: int) -> int:
    """Number of carries when adding a and b in base 2 (Kummer)."""
    return a.bit_count() + b.bit_count() - (a + b).bit_count()


@lru_cache(maxsize=None)
def _odd_table(e: int) -> tuple[list[int], int]:
    # table[x] = product of odd numbers <= x, for 0 <= x < 2^e, reduced mod 2^e
    m = 1 << e
    table = [1] * m
    acc = 1
    for x in range(1, m):
        if x & 1:
            acc = acc * x % m
        table[x] = acc
    # acc is now the product of every odd residue below 2^e
    return table, acc


def _odd_product(x: int, e: int) -> int:
    """Product of the odd integers in [1, x], modulo 2^e."""
    table, full = _odd_table(e)
    m = 1 << e
    q, r = divmod(x, m)
    return pow(full, q, m) * table[r] % m


def _odd_factorial(n: int, e: int) -> int:
    """Odd part of n! modulo 2^e, via n! = 2^v * prod_i F(n >> i)."""
    m = 1 << e
    acc = 1
    while n > 1:
        acc = acc * _odd_product(n, e) % m
        n >>= 1
    return acc


def binom_mod(n: int, k: int, e: int) -> Residue:
    """C(n, k) modulo 2^e."""
    _check_exponent(e)
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    v = carries(k, n - k)
    if v >= e:
        return Residue(0, e)
    m = 1 << e
    num = _odd_factorial(n, e)
    den = _odd_factorial(k, e) * _odd_factorial(n - k, e) % m
    return Residue((num * pow(den, -1, m) << v) % m, e)


def congruence_rule(a: int, b: int, c: int, n: int, k: int) -> Residue:
    """Right-hand side of C(a 2^(n+k), b 2^n + c) mod 2^(k+1).

    The congruence says this equals C(a 2^k, b) when c = 0 and vanishes when
    0 < c < 2^n.
    """
    if a < 1 or b < 0 or c < 0 or n < 0 or k < 0:
        raise ValueError("congruence_rule needs a >= 1 and b, c, n, k >= 0")
    if c >= 1 << n:
        raise ValueError(f"c={c} must be below 2^n={1 << n}")
    e = k + 1
    if c:
        return Residue(0, e)
    if b > a << k:
        return Residue(0, e)
    return binom_mod(a << k, b, e)


def nonzero_binomial_indices(n: int, e: int) -> Iterator[int]:
    """Yield, in increasing order, the i in [0, n] with C(n, i) != 0 mod 2^e.

    These are the i whose subtraction n - i has fewer than e borrows, found
    by a depth-first walk over the bits of n; the walk never touches the
    other indices, so n may be huge when the answer is short.
    """
    _check_exponent(e)
    if n < 0:
        raise ValueError("n must be nonnegative")
    width = max(n.bit_length(), 1)
    out: list[int] = []

    def walk(pos: int, borrow: int, count: int, acc: int) -> None:
        if pos == width:
            if borrow == 0:
                out.append(acc)
            return
        bit = (n >> pos) & 1
        for x in (0, 1):
            d = bit - x - borrow
            if d < 0:
                if count + 1 >= e:
                    continue
                walk(pos + 1, 1, count + 1, acc | (x << pos))
            else:
                walk(pos + 1, 0, count, acc | (x << pos))

    walk(0, 0, 0, 0)
    out.sort()
    yield from out
