"""Sparse polynomials in t1, t2, v1 over Z/2^e, truncated at v1^m.

The module has two layers.  The low layer is a handful of functions on
plain dicts mapping exponent tuples to integer coefficients; one tuple
position holds the v1 exponent and is truncated, every other position is
a free exponent.  The cobar engine uses these functions directly with
tuples of the form (v1, a1, b1, ..., as, bs).  The high layer is
`TruncatedPolynomial`, a single-factor polynomial with a fixed modulus and
truncation order.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .coefficients import MAX_EXPONENT

EXPONENT_LIMIT = 1 << 62

Terms = dict  # dict[tuple[int, ...], int]


def _check_config(modulus_e: int, v1_order: int) -> None:
    if not 1 <= modulus_e <= MAX_EXPONENT:
        raise ValueError(f"modulus_e must be in 1..{MAX_EXPONENT}, got {modulus_e}")
    if v1_order < 1:
        raise ValueError(f"v1_order must be positive, got {v1_order}")


def max_exponent(terms: Mapping[tuple, int]) -> int:
    return max((max(k) for k in terms), default=0)


def clean(terms: Mapping[tuple, int], mod: int) -> Terms:
    """Reduce coefficients mod `mod` and drop zeros."""
    out = {}
    for k, c in terms.items():
        c %= mod
        if c:
            out[k] = c
    return out


def add_into(acc: Terms, terms: Mapping[tuple, int], mod: int, scale: int = 1) -> None:
    """acc += scale * terms, in place, keeping acc free of zeros."""
    for k, c in terms.items():
        v = (acc.get(k, 0) + scale * c) % mod
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def mul(a: Mapping[tuple, int], b: Mapping[tuple, int], mod: int,
        v1_index: int, v1_order: int) -> Terms:
    """Product of two sparse polynomials with the same key length."""
    if not a or not b:
        return {}
    if max_exponent(a) + max_exponent(b) > EXPONENT_LIMIT:
        raise OverflowError("exponent exceeds 2^62")
    if len(a) > len(b):
        a, b = b, a
    out: Terms = {}
    get = out.get
    bitems = list(b.items())
    for ka, ca in a.items():
        va = ka[v1_index]
        for kb, cb in bitems:
            if va + kb[v1_index] >= v1_order:
                continue
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = get(k, 0) + ca * cb
    return clean(out, mod)


def power(a: Mapping[tuple, int], n: int, unit: tuple, mod: int,
          v1_index: int, v1_order: int) -> Terms:
    """a**n by repeated squaring; `unit` is the all-zero key."""
    if n < 0:
        raise ValueError("negative power")
    result: Terms = {unit: 1 % mod} if mod > 1 else {}
    base = dict(a)
    while n:
        if n & 1:
            result = mul(result, base, mod, v1_index, v1_order)
        n >>= 1
        if n:
            base = mul(base, base, mod, v1_index, v1_order)
    return result


class Monomial(NamedTuple):
    """t1^t1 t2^t2 v1^v1; tuple order gives the canonical lex order."""

    t1: int = 0
    t2: int = 0
    v1: int = 0

    @property
    def internal_degree(self) -> int:
        return internal_degree(self)

    def __str__(self) -> str:
        parts = []
        for name, e in (("v1", self.v1), ("t1", self.t1), ("t2", self.t2)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return " ".join(parts) if parts else "1"


def internal_degree(m: Monomial) -> int:
    """|t1| = 2, |t2| = 6, |v1| = 2."""
    return 2 * m.t1 + 6 * m.t2 + 2 * m.v1


_V1 = 2  # position of v1 inside a Monomial


class TruncatedPolynomial:
    """Polynomial in t1, t2, v1 with coefficients in Z/2^e, modulo v1^m."""

    __slots__ = ("_terms", "modulus_e", "v1_order")

    def __init__(self, terms: Mapping | Iterable = (), modulus_e: int = 3,
                 v1_order: int = 4):
        _check_config(modulus_e, v1_order)
        self.modulus_e = modulus_e
        self.v1_order = v1_order
        mod = 1 << modulus_e
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Terms = {}
        for m, c in items:
            m = Monomial(*m)
            if min(m) < 0:
                raise ValueError(f"negative exponent in {m}")
            if max(m) > EXPONENT_LIMIT:
                raise OverflowError("exponent exceeds 2^62")
            if m.v1 >= v1_order:
                continue
            acc[m] = acc.get(m, 0) + int(c)
        self._terms = clean(acc, mod)

    # construction helpers
    @classmethod
    def _raw(cls, terms: Terms, modulus_e: int, v1_order: int) -> TruncatedPolynomial:
        p = cls.__new__(cls)
        p._terms = {Monomial(*k): c for k, c in terms.items()}
        p.modulus_e = modulus_e
        p.v1_order = v1_order
        return p

    @classmethod
    def monomial(cls, t1: int = 0, t2: int = 0, v1: int = 0, coeff: int = 1,
                 modulus_e: int = 3, v1_order: int = 4) -> TruncatedPolynomial:
        return cls({Monomial(t1, t2, v1): coeff}, modulus_e, v1_order)

    @classmethod
    def one(cls, modulus_e: int = 3, v1_order: int = 4) -> TruncatedPolynomial:
        return cls.monomial(modulus_e=modulus_e, v1_order=v1_order)

    @classmethod
    def zero(cls, modulus_e: int = 3, v1_order: int = 4) -> TruncatedPolynomial:
        return cls({}, modulus_e, v1_order)

    @property
    def modulus(self) -> int:
        return 1 << self.modulus_e

    @property
    def terms(self) -> dict[Monomial, int]:
        """Terms in canonical order (a fresh dict)."""
        return {m: self._terms[m] for m in sorted(self._terms)}

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, m: Monomial | tuple) -> int:
        return self._terms.get(Monomial(*m), 0)

    def _compatible(self, other: TruncatedPolynomial) -> None:
        if not isinstance(other, TruncatedPolynomial):
            raise TypeError(f"expected TruncatedPolynomial, got {type(other).__name__}")
        if (self.modulus_e, self.v1_order) != (other.modulus_e, other.v1_order):
            raise ValueError(
                "configuration mismatch: "
                f"(2^{self.modulus_e}, v1^{self.v1_order}) vs "
                f"(2^{other.modulus_e}, v1^{other.v1_order})"
            )

    def _lift(self, other) -> TruncatedPolynomial:
        if isinstance(other, int):
            return TruncatedPolynomial({Monomial(): other}, self.modulus_e, self.v1_order)
        self._compatible(other)
        return other

    # ring operations
    def add(self, other: TruncatedPolynomial) -> TruncatedPolynomial:
        other = self._lift(other)
        acc = dict(self._terms)
        add_into(acc, other._terms, self.modulus)
        return TruncatedPolynomial._raw(acc, self.modulus_e, self.v1_order)

    def negate(self) -> TruncatedPolynomial:
        return TruncatedPolynomial._raw(
            clean({m: -c for m, c in self._terms.items()}, self.modulus),
            self.modulus_e, self.v1_order)

    def multiply(self, other: TruncatedPolynomial) -> TruncatedPolynomial:
        other = self._lift(other)
        return TruncatedPolynomial._raw(
            mul(self._terms, other._terms, self.modulus, _V1, self.v1_order),
            self.modulus_e, self.v1_order)

    def power(self, n: int) -> TruncatedPolynomial:
        return TruncatedPolynomial._raw(
            power(self._terms, n, Monomial(), self.modulus, _V1, self.v1_order),
            self.modulus_e, self.v1_order)

    __add__ = add
    __mul__ = multiply
    __pow__ = power

    def __radd__(self, other) -> TruncatedPolynomial:
        return self.add(other)

    def __rmul__(self, other) -> TruncatedPolynomial:
        return self.multiply(other)

    def __neg__(self) -> TruncatedPolynomial:
        return self.negate()

    def __sub__(self, other) -> TruncatedPolynomial:
        return self.add(self._lift(other).negate())

    def __rsub__(self, other) -> TruncatedPolynomial:
        return self._lift(other).add(self.negate())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self._lift(other)
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return (self.modulus_e == other.modulus_e and self.v1_order == other.v1_order
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.modulus_e, self.v1_order, frozenset(self._terms.items())))

    def reduce(self, modulus_e: int) -> TruncatedPolynomial:
        """Image under Z/2^e -> Z/2^e' for e' <= e."""
        if modulus_e > self.modulus_e:
            raise ValueError("can only reduce to a smaller modulus")
        return TruncatedPolynomial(self._terms, modulus_e, self.v1_order)

    # grading
    def degrees(self) -> set[int]:
        return {internal_degree(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def internal_degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop() if degs else 0

    # Frobenius-style doubling
    def termwise_square(self) -> TruncatedPolynomial:
        return TruncatedPolynomial._raw(
            {Monomial(2 * m.t1, 2 * m.t2, 2 * m.v1): c for m, c in self._terms.items()
             if 2 * m.v1 < self.v1_order},
            self.modulus_e, self.v1_order)

    def is_termwise_square_of(self, q: TruncatedPolynomial) -> bool:
        self._compatible(q)
        return self == q.termwise_square()

    # serialization
    def to_records(self) -> list[dict[str, int]]:
        return [{"coeff": c, "t1": m.t1, "t2": m.t2, "v1": m.v1} for m, c in self]

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, int]], modulus_e: int = 3,
                     v1_order: int = 4) -> TruncatedPolynomial:
        return cls(((Monomial(r.get("t1", 0), r.get("t2", 0), r.get("v1", 0)), r["coeff"])
                    for r in records), modulus_e, v1_order)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self:
            s = str(m)
            out.append(s if c == 1 and s != "1" else (f"{c}" if s == "1" else f"{c} {s}"))
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"TruncatedPolynomial({self}, mod 2^{self.modulus_e}, v1^{self.v1_order})"
