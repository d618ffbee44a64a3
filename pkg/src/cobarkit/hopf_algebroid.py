"""Structure maps of (BP_*, BP_*BP) on the t1, t2, v1 fragment at p = 2.

Elements of the s-fold tensor power are stored as sparse dicts keyed by
(v1, a1, b1, ..., as, bs): a single left coefficient v1^v followed by the
exponents of t1 and t2 in each tensor factor.  Because every coefficient is
kept on the far left, a v1 that a structure map produces inside factor i
has to be moved across factors 1..i-1.  Moving v1 across a factor
multiplies that factor by the right unit eta_R(v1) = v1 + 2 t1, so a v1
produced just left of factor i becomes v1 + 2 (t1^(1) + ... + t1^(i-1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping

from . import polynomial as P
from .coefficients import binom_mod, nonzero_binomial_indices
from .polynomial import Monomial, TruncatedPolynomial


class RightUnitDisabledError(ValueError):
    """A structure map needed eta_R(v1) while the right unit is switched off."""


@dataclass(frozen=True)
class StructureConfig:
    """Ambient reduction: coefficients mod 2^modulus_e, truncation at v1^v1_order.

    With right_unit_enabled=False every v1 is treated as if it commuted
    with the t's.  That breaks coassociativity of the t2 diagonal mod 4, so
    it exists only to compare against recipes that ignore the right unit.
    """

    modulus_e: int = 3
    v1_order: int = 4
    right_unit_enabled: bool = True

    def __post_init__(self) -> None:
        P._check_config(self.modulus_e, self.v1_order)

    @property
    def modulus(self) -> int:
        return 1 << self.modulus_e

    def with_modulus(self, modulus_e: int) -> StructureConfig:
        return StructureConfig(modulus_e, self.v1_order, self.right_unit_enabled)

    def is_invariant(self) -> bool:
        """Whether (2^e, v1^m) is stable under eta_R, i.e. a Hopf algebroid ideal.

        Only then do the face maps descend to the quotient and d o d = 0
        hold there.
        """
        m = self.v1_order
        return all(comb(m, i) << i & (self.modulus - 1) == 0 for i in range(1, m + 1))


DEFAULT_CONFIG = StructureConfig()


def unit_key(slots: int) -> tuple:
    return (0,) * (1 + 2 * slots)


def _fmt_factor(a: int, b: int) -> str:
    parts = []
    for name, e in (("t1", a), ("t2", b)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return " ".join(parts) if parts else "1"


def format_word(key: tuple) -> str:
    """Bracket notation for a key, v1 written in front of the bracket."""
    v = key[0]
    body = " | ".join(_fmt_factor(key[1 + 2 * i], key[2 + 2 * i])
                      for i in range((len(key) - 1) // 2))
    prefix = "" if v == 0 else ("v1 " if v == 1 else f"v1^{v} ")
    return f"{prefix}[{body}]"


def word_sort_key(key: tuple) -> tuple:
    """Flattened (t1, t2, v1) exponents per factor; v1 rides on factor 1."""
    s = (len(key) - 1) // 2
    if s == 0:
        return (0, 0, key[0])
    flat = []
    for i in range(s):
        flat += [key[1 + 2 * i], key[2 + 2 * i], key[0] if i == 0 else 0]
    return tuple(flat)


class BarPolynomial:
    """Element of the s-fold tensor ring over Z/2^e[v1]/(v1^m)."""

    __slots__ = ("slots", "terms", "config")

    def __init__(self, slots: int, terms: Mapping[tuple, int] | Iterable = (),
                 config: StructureConfig = DEFAULT_CONFIG):
        if slots < 0:
            raise ValueError("number of tensor factors must be nonnegative")
        self.slots = slots
        self.config = config
        width = 1 + 2 * slots
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for k, c in items:
            k = tuple(k)
            if len(k) != width:
                raise ValueError(f"key {k} does not have {width} entries")
            if min(k, default=0) < 0:
                raise ValueError(f"negative exponent in {k}")
            if max(k, default=0) > P.EXPONENT_LIMIT:
                raise OverflowError("exponent exceeds 2^62")
            if k[0] >= config.v1_order:
                continue
            acc[k] = acc.get(k, 0) + int(c)
        self.terms = P.clean(acc, config.modulus)

    @classmethod
    def _raw(cls, slots: int, terms: dict, config: StructureConfig):
        x = cls.__new__(cls)
        x.slots = slots
        x.terms = terms
        x.config = config
        return x

    def _new(self, terms: dict, slots: int | None = None):
        return type(self)._raw(self.slots if slots is None else slots, terms, self.config)

    @classmethod
    def word(cls, *factors: tuple[int, int], coeff: int = 1, v1: int = 0,
             config: StructureConfig = DEFAULT_CONFIG):
        """Monomial coeff * v1^v1 [t1^a1 t2^b1 | ...] from (a, b) pairs."""
        key = [v1]
        for a, b in factors:
            key += [a, b]
        return cls(len(factors), {tuple(key): coeff}, config)

    @classmethod
    def one(cls, slots: int, config: StructureConfig = DEFAULT_CONFIG):
        return cls(slots, {unit_key(slots): 1}, config)

    @classmethod
    def zero(cls, slots: int, config: StructureConfig = DEFAULT_CONFIG):
        return cls(slots, {}, config)

    def _check(self, other: BarPolynomial) -> None:
        if not isinstance(other, BarPolynomial):
            raise TypeError(f"expected a bar polynomial, got {type(other).__name__}")
        if other.config != self.config:
            raise ValueError(f"configuration mismatch: {self.config} vs {other.config}")
        if other.slots != self.slots:
            raise ValueError(f"factor count mismatch: {self.slots} vs {other.slots}")

    def __add__(self, other: BarPolynomial):
        self._check(other)
        acc = dict(self.terms)
        P.add_into(acc, other.terms, self.config.modulus)
        return self._new(acc)

    def __sub__(self, other: BarPolynomial):
        self._check(other)
        acc = dict(self.terms)
        P.add_into(acc, other.terms, self.config.modulus, -1)
        return self._new(acc)

    def __neg__(self):
        return self._new(P.clean({k: -c for k, c in self.terms.items()}, self.config.modulus))

    def scale(self, c: int):
        return self._new(P.clean({k: c * v for k, v in self.terms.items()}, self.config.modulus))

    def __rmul__(self, c: int):
        if not isinstance(c, int):
            return NotImplemented
        return self.scale(c)

    def __mul__(self, other):
        """Ring product inside the tensor ring (factorwise multiplication)."""
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        cfg = self.config
        return self._new(P.mul(self.terms, other.terms, cfg.modulus, 0, cfg.v1_order))

    def __pow__(self, n: int):
        cfg = self.config
        return self._new(P.power(self.terms, n, unit_key(self.slots), cfg.modulus, 0,
                                 cfg.v1_order))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BarPolynomial):
            return NotImplemented
        return (self.slots == other.slots and self.config == other.config
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.slots, self.config, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return sorted(self.terms.items(), key=lambda kv: word_sort_key(kv[0]))

    def coefficient(self, key: tuple) -> int:
        return self.terms.get(tuple(key), 0)

    def has_v1(self) -> bool:
        return any(k[0] for k in self.terms)

    def reduce(self, modulus_e: int):
        """Image under Z/2^e -> Z/2^e' (e' <= e)."""
        if modulus_e > self.config.modulus_e:
            raise ValueError("can only reduce to a smaller modulus")
        cfg = self.config.with_modulus(modulus_e)
        return type(self)._raw(self.slots, P.clean(self.terms, cfg.modulus), cfg)

    def collapse(self, slot: int):
        """Apply the augmentation to factor `slot` (1-based), dropping it."""
        if not 1 <= slot <= self.slots:
            raise IndexError(f"slot {slot} out of range 1..{self.slots}")
        i = 2 * slot - 1
        acc: dict = {}
        for k, c in self.terms.items():
            if k[i] or k[i + 1]:
                continue
            nk = k[:i] + k[i + 2:]
            acc[nk] = acc.get(nk, 0) + c
        return self._new(P.clean(acc, self.config.modulus), self.slots - 1)

    def termwise_square(self):
        m = self.config.v1_order
        return self._new({tuple(2 * x for x in k): c for k, c in self.terms.items()
                          if 2 * k[0] < m})

    def is_termwise_square_of(self, other: BarPolynomial) -> bool:
        self._check(other)
        return self == other.termwise_square()

    def internal_degrees(self) -> set[int]:
        out = set()
        for k in self.terms:
            a = sum(k[1::2])
            b = sum(k[2::2])
            out.add(2 * k[0] + 2 * a + 6 * b)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, c in self:
            w = format_word(k)
            out.append(w if c == 1 else f"{c} {w}")
        return " + ".join(out)

    def __repr__(self) -> str:
        cfg = self.config
        return (f"{type(self).__name__}({self}, s={self.slots}, "
                f"mod 2^{cfg.modulus_e}, v1^{cfg.v1_order})")


def as_bar(p: TruncatedPolynomial, config: StructureConfig | None = None) -> BarPolynomial:
    """A single-factor polynomial viewed as a one-fold bar polynomial."""
    cfg = config or StructureConfig(p.modulus_e, p.v1_order)
    return BarPolynomial(1, {(m.v1, m.t1, m.t2): c for m, c in p}, cfg)


# ---------------------------------------------------------------- units

def right_unit_v1(config: StructureConfig = DEFAULT_CONFIG) -> TruncatedPolynomial:
    """eta_R(v1) = v1 + 2 t1."""
    if not config.right_unit_enabled:
        raise RightUnitDisabledError("right unit requested but disabled in config")
    return TruncatedPolynomial({Monomial(v1=1): 1, Monomial(t1=1): 2},
                               config.modulus_e, config.v1_order)


def right_unit(p: TruncatedPolynomial, config: StructureConfig | None = None
               ) -> TruncatedPolynomial:
    """eta_R on a t-free polynomial in v1 (a ring map)."""
    cfg = config or StructureConfig(p.modulus_e, p.v1_order)
    if any(m.t1 or m.t2 for m, _ in p):
        raise ValueError("right unit applies to coefficients (t-free polynomials) only")
    eta = right_unit_v1(cfg)
    out = TruncatedPolynomial.zero(cfg.modulus_e, cfg.v1_order)
    for m, c in p:
        out = out + eta.power(m.v1) * c
    return out


# ---------------------------------------------------------------- diagonals

def comultiply_t1(config: StructureConfig = DEFAULT_CONFIG) -> BarPolynomial:
    """Delta(t1) = t1|1 + 1|t1."""
    return BarPolynomial(2, {(0, 1, 0, 0, 0): 1, (0, 0, 0, 1, 0): 1}, config)


def comultiply_t2(config: StructureConfig = DEFAULT_CONFIG) -> BarPolynomial:
    """Delta(t2) = t2|1 - t1|t1^2 + v1 t1|t1 + 1|t2."""
    return BarPolynomial(2, {(0, 0, 1, 0, 0): 1, (0, 1, 0, 2, 0): -1,
                             (1, 1, 0, 1, 0): 1, (0, 0, 0, 0, 1): 1}, config)


def comultiply(p: TruncatedPolynomial | BarPolynomial,
               config: StructureConfig | None = None) -> BarPolynomial:
    """Delta as a ring map on a single-factor polynomial."""
    if isinstance(p, TruncatedPolynomial):
        p = as_bar(p, config)
    if p.slots != 1:
        raise ValueError("comultiply expects a single tensor factor")
    return inner_face(p, 1)


# ---------------------------------------------------------------- face images
# The images below live in s+1 factors; only factors <= i+1 are touched.

@lru_cache(maxsize=4096)
def _t1_image(i: int, a: int, s: int, config: StructureConfig) -> dict:
    width = 1 + 2 * (s + 1)
    pos = 2 * i - 1
    out = {}
    for r in nonzero_binomial_indices(a, config.modulus_e):
        k = [0] * width
        k[pos] = r
        k[pos + 2] = a - r
        out[tuple(k)] = binom_mod(a, r, config.modulus_e).value
    return out


def _key(width: int, *positions: int) -> tuple:
    k = [0] * width
    for p in positions:
        k[p] += 1
    return tuple(k)


@lru_cache(maxsize=4096)
def _t2_base(i: int, s: int, config: StructureConfig) -> dict:
    """Image of t2 in factor i under the i-th inner face."""
    w = 1 + 2 * (s + 1)
    p = 2 * i - 1  # t1 of factor i; t2 at p+1; the next factor starts at p+2
    mod = config.modulus
    terms: dict = {}
    P.add_into(terms, {_key(w, p + 1): 1}, mod)
    P.add_into(terms, {_key(w, p, p + 2, p + 2): -1}, mod)
    P.add_into(terms, {_key(w, p + 3): 1}, mod)
    if config.v1_order > 1:
        P.add_into(terms, {_key(w, 0, p, p + 2): 1}, mod)
    if config.right_unit_enabled:
        # the v1 above, moved left across factors 1..i-1
        for f in range(1, i):
            P.add_into(terms, {_key(w, 2 * f - 1, p, p + 2): 2}, mod)
    return terms


@lru_cache(maxsize=4096)
def _t2_image(i: int, b: int, s: int, config: StructureConfig) -> dict:
    width = 1 + 2 * (s + 1)
    if b == 0:
        return {(0,) * width: 1 % config.modulus}
    if b == 1:
        return _t2_base(i, s, config)
    half = _t2_image(i, b // 2, s, config)
    sq = P.mul(half, half, config.modulus, 0, config.v1_order)
    if b & 1:
        sq = P.mul(sq, _t2_base(i, s, config), config.modulus, 0, config.v1_order)
    return sq


@lru_cache(maxsize=8192)
def inner_image(i: int, a: int, b: int, s: int, config: StructureConfig) -> dict:
    """Image of t1^a t2^b sitting in factor i of an s-fold word under d_i."""
    t1 = _t1_image(i, a, s, config)
    if b == 0:
        return t1
    return P.mul(t1, _t2_image(i, b, s, config), config.modulus, 0, config.v1_order)


@lru_cache(maxsize=1024)
def left_unit_image(v: int, s: int, config: StructureConfig) -> dict:
    """Image of the left coefficient v1^v under d_0: (v1 + 2 t1^(1))^v."""
    width = 1 + 2 * (s + 1)
    if v == 0:
        return {(0,) * width: 1 % config.modulus}
    if not config.right_unit_enabled:
        raise RightUnitDisabledError(
            "d_0 on a word with a v1 coefficient needs the right unit, which is disabled")
    base = {}
    k = [0] * width
    k[0] = 1
    base[tuple(k)] = 1
    k = [0] * width
    k[1] = 1
    base[tuple(k)] = 2 % config.modulus
    base = P.clean(base, config.modulus)
    return P.power(base, v, (0,) * width, config.modulus, 0, config.v1_order)


def inner_face(x: BarPolynomial, i: int) -> BarPolynomial:
    """d_i for 1 <= i <= s: apply the diagonal to factor i."""
    s = x.slots
    if not 1 <= i <= s:
        raise IndexError(f"inner face index {i} out of range 1..{s}")
    cfg = x.config
    mod, m = cfg.modulus, cfg.v1_order
    pos = 2 * i - 1
    acc: dict = {}
    get = acc.get
    for key, c in x.terms.items():
        a, b = key[pos], key[pos + 1]
        base = key[:pos] + (0, 0, 0, 0) + key[pos + 2:]
        v = base[0]
        for ik, ic in inner_image(i, a, b, s, cfg).items():
            if ik[0] + v >= m:
                continue
            nk = tuple(p + q for p, q in zip(base, ik))
            acc[nk] = get(nk, 0) + c * ic
    return x._new(P.clean(acc, mod), s + 1)


def left_face(x: BarPolynomial) -> BarPolynomial:
    """d_0: a new unit factor on the left; v1 passes through eta_R."""
    s = x.slots
    cfg = x.config
    mod = cfg.modulus
    acc: dict = {}
    for key, c in x.terms.items():
        v = key[0]
        base = (0, 0, 0) + key[1:]
        for ik, ic in left_unit_image(v, s, cfg).items():
            nk = tuple(p + q for p, q in zip(base, ik))
            acc[nk] = acc.get(nk, 0) + c * ic
    return x._new(P.clean(acc, mod), s + 1)


def right_face(x: BarPolynomial) -> BarPolynomial:
    """d_{s+1}: a new unit factor on the right."""
    return x._new({k + (0, 0): c for k, c in x.terms.items()}, x.slots + 1)
