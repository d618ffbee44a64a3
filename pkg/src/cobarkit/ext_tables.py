"""A closed table of facts about Ext over P through homological degree 4.

Everything here is read from data/ext_tables.json, which carries one
citation per row.  Products that the table cannot decide come back with
certainty "unknown"; callers must treat that as "cannot conclude".

Generators are pairs (family, index) with family in {"h", "c", "g"}.
Degrees follow the P convention: h_n sits in (1, 2^(n+1)), c_n in
(3, 11 2^(n+1)) and g_n in (4, 3 2^(n+3)).
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple, Sequence

FAMILIES = ("h", "c", "g")
NONZERO = "nonzero"
UNKNOWN = "unknown"
ZERO = "zero"


class ExtGenerator(NamedTuple):
    family: str
    index: int

    @property
    def s_degree(self) -> int:
        return _GEN_INFO()[self.family][0]

    @property
    def t_degree(self) -> int:
        _, coeff, shift = _GEN_INFO()[self.family]
        return coeff << (self.index + shift)

    def __str__(self) -> str:
        return f"{self.family}_{self.index}"


def h(i: int) -> ExtGenerator:
    return ExtGenerator("h", i)


def c(i: int) -> ExtGenerator:
    return ExtGenerator("c", i)


def g(i: int) -> ExtGenerator:
    return ExtGenerator("g", i)


Monomial = tuple  # sorted tuple of ExtGenerator, with repetition


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    counts = Counter(m)
    parts = []
    for gen in sorted(counts, key=_gen_order):
        e = counts[gen]
        parts.append(str(gen) + (f"^{e}" if e > 1 else ""))
    return " ".join(parts)


def _gen_order(x: ExtGenerator) -> tuple:
    return (FAMILIES.index(x.family), x.index)


def _canon(gens: Iterable[ExtGenerator]) -> Monomial:
    return tuple(sorted(gens, key=_gen_order))


@dataclass(frozen=True)
class ExtClass:
    """Zero, or a normalized monomial with a certainty flag.

    `reason` names the relation that fired for zero classes and the
    certifying table row for nonzero ones.
    """

    monomial: Monomial | None
    certainty: str = UNKNOWN
    reason: str = field(default="", compare=False)

    @classmethod
    def zero(cls, reason: str = "") -> ExtClass:
        return cls(None, ZERO, reason)

    @property
    def is_zero(self) -> bool:
        return self.monomial is None

    @property
    def is_nonzero(self) -> bool:
        return self.monomial is not None and self.certainty == NONZERO

    @property
    def s_degree(self) -> int:
        return sum(x.s_degree for x in self.monomial or ())

    @property
    def t_degree(self) -> int:
        return sum(x.t_degree for x in self.monomial or ())

    def __str__(self) -> str:
        if self.monomial is None:
            return "0"
        return format_monomial(self.monomial)


class QMonomial(tuple):
    """Nondecreasing tuple of indices i for factors q_i."""

    def __new__(cls, indices: Iterable[int] = ()):
        idx = sorted(indices)
        if idx and idx[0] < 0:
            raise ValueError("q indices must be nonnegative")
        return super().__new__(cls, idx)

    @property
    def k_degree(self) -> int:
        return len(self)

    @property
    def t_degree(self) -> int:
        return sum((2 << i) - 1 for i in self)

    @property
    def filtration(self) -> int:
        return sum(self)

    @property
    def is_q0_power(self) -> bool:
        return all(i == 0 for i in self)

    def __str__(self) -> str:
        if not self:
            return "1"
        counts = Counter(self)
        return "".join(f"q_{i}" + (f"^{e}" if e > 1 else "") for i, e in sorted(counts.items()))

    def __repr__(self) -> str:
        return f"QMonomial({list(self)})"


class TriDegree(NamedTuple):
    s: int
    k: int
    t: int


# ---------------------------------------------------------------- data loading

_TOKEN = re.compile(r"([hcg])_(\d+|\{n(?:([+-])(\d+))?\})(?:\^(\d+))?$")


@dataclass(frozen=True)
class Template:
    """A monomial whose indices are absolute or offsets from a parameter n."""

    factors: tuple  # (family, absolute: bool, value, exponent)

    @classmethod
    def parse(cls, text: str) -> Template:
        out = []
        for tok in text.split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad monomial token {tok!r}")
            fam, idx, sign, off, exp = m.groups()
            e = int(exp) if exp else 1
            if idx.startswith("{"):
                v = int(off) if off else 0
                out.append((fam, False, -v if sign == "-" else v, e))
            else:
                out.append((fam, True, int(idx), e))
        return cls(tuple(out))

    def instantiate(self, n: int) -> Monomial | None:
        gens = []
        for fam, absolute, v, e in self.factors:
            i = v if absolute else n + v
            if i < 0:
                return None
            gens.extend([ExtGenerator(fam, i)] * e)
        return _canon(gens)

    def candidate_ns(self, m: Monomial) -> set[int]:
        """Values of n for which this template could produce m."""
        ns = set()
        for fam, absolute, v, _ in self.factors:
            if absolute:
                continue
            ns.update(x.index - v for x in m if x.family == fam)
        return ns or {0}


@dataclass(frozen=True)
class Row:
    template: Template
    min_n: int
    citation: str
    ident: str = ""
    other: Template | None = None

    def matches(self, m: Monomial) -> int | None:
        for n in sorted(self.template.candidate_ns(m)):
            if n >= self.min_n and self.template.instantiate(n) == m:
                return n
        return None


@dataclass(frozen=True)
class MasseyRow:
    bracket: tuple  # of Template
    value: Template
    min_n: int
    citation: str


@dataclass(frozen=True)
class ExtTables:
    version: int
    generators: dict
    zero_relations: tuple
    equal_relations: tuple
    certification: dict
    nonzero_facts: tuple
    massey_rows: tuple
    exceptional: tuple


def _load_raw() -> dict:
    text = resources.files("cobarkit").joinpath("data/ext_tables.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=1)
def tables() -> ExtTables:
    raw = _load_raw()
    gens = {r["family"]: r for r in raw["generators"]}
    zero, equal = [], []
    for r in raw["relations"]:
        row = Row(Template.parse(r["monomial"]), r["min_n"], r["citation"], r["id"],
                  Template.parse(r["other"]) if "other" in r else None)
        (zero if r["kind"] == "zero" else equal).append(row)
    facts = tuple(Row(Template.parse(r["monomial"]), r["min_n"], r["citation"])
                  for r in raw["nonzero"])
    massey = tuple(MasseyRow(tuple(Template.parse(b) for b in r["bracket"]),
                             Template.parse(r["value"]), r["min_n"], r["citation"])
                   for r in raw["massey"])
    return ExtTables(raw["version"], gens, tuple(zero), tuple(equal),
                     {r["s"]: r for r in raw["certification"]}, facts, massey,
                     tuple(raw["exceptional"]))


@lru_cache(maxsize=1)
def _GEN_INFO() -> dict:
    return {f: (r["s"], r["t_coeff"], r["t_shift"]) for f, r in tables().generators.items()}


def generator_min_index(family: str) -> int:
    return tables().generators[family]["min_index"]


# ---------------------------------------------------------------- normalization

def _contains(m: Monomial, sub: Monomial) -> bool:
    need = Counter(sub)
    have = Counter(m)
    return all(have[x] >= e for x, e in need.items())


def _remove(m: Monomial, sub: Monomial) -> list:
    rest = Counter(m)
    rest.subtract(sub)
    return list(rest.elements())


def _moves(m: Monomial) -> Iterator[Monomial]:
    """Monomials reachable from m by one application of an equality relation."""
    for row in tables().equal_relations:
        for lhs_t, rhs_t in ((row.template, row.other), (row.other, row.template)):
            for fam, absolute, v, _ in lhs_t.factors:
                if absolute:
                    continue
                for n in {x.index - v for x in m if x.family == fam}:
                    if n < row.min_n:
                        continue
                    lhs, rhs = lhs_t.instantiate(n), rhs_t.instantiate(n)
                    if lhs is not None and rhs is not None and _contains(m, lhs):
                        yield _canon(_remove(m, lhs) + list(rhs))


def equivalence_class(m: Monomial) -> frozenset:
    seen = {m}
    todo = [m]
    while todo:
        x = todo.pop()
        for y in _moves(x):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def _vanishing(m: Monomial) -> str | None:
    for row in tables().zero_relations:
        for n in sorted(row.template.candidate_ns(m)):
            if n < row.min_n:
                continue
            sub = row.template.instantiate(n)
            if sub is not None and _contains(m, sub):
                return row.ident
    return None


def _preferred(cls: frozenset) -> Monomial:
    # fewest distinct generators first, so h_{n+1}^3 beats h_n^2 h_{n+2}
    return min(cls, key=lambda x: (len(set(x)), [_gen_order(y) for y in x]))


def _certify(cls: frozenset, s: int) -> tuple[str, str]:
    rule = tables().certification.get(s)
    if rule is None:
        return UNKNOWN, ""
    if rule["rule"] in ("unit", "reduced-monomial"):
        return NONZERO, rule["citation"]
    for row in tables().nonzero_facts:
        for x in cls:
            if row.matches(x) is not None:
                return NONZERO, row.citation
    return UNKNOWN, ""


@lru_cache(maxsize=None)
def _normalize(m: Monomial) -> ExtClass:
    for x in m:
        if x.family not in FAMILIES:
            raise ValueError(f"unknown family {x.family!r}")
        if x.index < generator_min_index(x.family):
            return ExtClass.zero(f"{x} does not exist")
    cls = equivalence_class(m)
    for x in sorted(cls, key=lambda y: [_gen_order(z) for z in y]):
        why = _vanishing(x)
        if why:
            return ExtClass.zero(why)
    certainty, reason = _certify(cls, sum(x.s_degree for x in m))
    return ExtClass(_preferred(cls), certainty, reason)


def normalize_product(gens: Iterable[ExtGenerator]) -> ExtClass:
    """Normalize a product of generators; zero, certified nonzero or unknown."""
    return _normalize(_canon(ExtGenerator(*x) for x in gens))


def multiply(*classes: ExtClass) -> ExtClass:
    gens = []
    for x in classes:
        if x.is_zero:
            return ExtClass.zero(x.reason)
        gens.extend(x.monomial)
    return normalize_product(gens)


def ext_class(text: str) -> ExtClass:
    """Parse "h_0 h_5^2 c_3" style text (absolute indices) into an ExtClass."""
    if text.strip() in ("", "1"):
        return normalize_product(())
    return normalize_product(Template.parse(text).instantiate(0))


# ---------------------------------------------------------------- comodule map

def psi_q(n: int) -> list[tuple[tuple[int, int], int]]:
    """psi(q_n) = sum_i xi_{n-i}^(2^(i+1)) (x) q_i as ((k, exponent), i) pairs.

    The pair (0, e) stands for xi_0 = 1.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [((n - i, 0 if i == n else 2 << i), i) for i in range(n + 1)]


def xi_coproduct(k: int, e: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Delta(xi_k^e) for e a power of two (or 0 when k = 0), termwise."""
    if k == 0:
        return [((0, 0), (0, 0))]
    return [((k - i, 0 if i == k else e << i), (i, 0 if i == 0 else e)) for i in range(k + 1)]


# ---------------------------------------------------------------- Massey products

@dataclass(frozen=True)
class MasseyValue:
    value: ExtClass
    citation: str


def massey_lookup(bracket: Sequence[ExtClass]) -> MasseyValue | None:
    """Tabulated value of a bracket, or None when no row matches."""
    if any(x.is_zero for x in bracket):
        return None
    mons = [x.monomial for x in bracket]
    for row in tables().massey_rows:
        if len(row.bracket) != len(mons):
            continue
        ns = set()
        for t, m in zip(row.bracket, mons):
            ns |= t.candidate_ns(m)
        for n in sorted(ns):
            if n < row.min_n:
                continue
            inst = [t.instantiate(n) for t in row.bracket]
            if None in inst:
                continue
            if all(_normalize(i).monomial == m for i, m in zip(inst, mons)):
                return MasseyValue(normalize_product(row.value.instantiate(n)), row.citation)
    return None


def _sub_multisets(m: Monomial) -> list[Monomial]:
    out = set()
    for r in range(len(m), 0, -1):
        out.update(combinations(m, r))
    return sorted(out, key=lambda x: (-len(x), [_gen_order(y) for y in x]))


def bracket_with_juggling(prefix: Sequence[ExtClass], a: Monomial,
                          killer: ExtGenerator) -> MasseyValue | None:
    """A value of <prefix..., a> read off the table, pulling factors out of a.

    Uses <x, y, bc> containing <x, y, b> c, which needs killer * b = 0; the
    largest tabulated b wins.  Returns None when nothing applies.
    """
    for b in _sub_multisets(a):
        if not normalize_product((killer,) + b).is_zero:
            continue
        hit = massey_lookup(list(prefix) + [normalize_product(b)])
        if hit is None:
            continue
        rest = _remove(a, b)
        return MasseyValue(multiply(hit.value, normalize_product(rest)), hit.citation)
    return None


# ---------------------------------------------------------------- degrees

def degree_of(x) -> TriDegree:
    """(s, k, t) of an ExtClass, a QMonomial, a generator, or a (q, ext) pair."""
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], QMonomial):
        a, b = degree_of(x[0]), degree_of(x[1])
        return TriDegree(a.s + b.s, a.k + b.k, a.t + b.t)
    if isinstance(x, QMonomial):
        return TriDegree(0, x.k_degree, x.t_degree)
    if isinstance(x, ExtGenerator):
        return TriDegree(x.s_degree, 0, x.t_degree)
    if isinstance(x, ExtClass):
        return TriDegree(x.s_degree, 0, x.t_degree)
    raise TypeError(f"no degree for {type(x).__name__}")


def regrade(s: int, k: int, t: int) -> tuple[int, int, int]:
    """(s, k, t) -> motivic (a, t, w) = (s + k, t, (t - k) / 2)."""
    if (t - k) % 2:
        raise ValueError(f"t - k = {t - k} is odd; no motivic weight")
    return (s + k, t, (t - k) // 2)


# ---------------------------------------------------------------- enumeration

def monomials_in_degree(s: int, t: int) -> list[Monomial]:
    """All generator monomials (before relations) of degree (s, t)."""
    gens = []
    for fam, r in tables().generators.items():
        gs = r["s"]
        if gs > s:
            continue
        i = r["min_index"]
        while (r["t_coeff"] << (i + r["t_shift"])) <= t:
            gens.append(ExtGenerator(fam, i))
            i += 1
    gens.sort(key=_gen_order)
    out = []

    def walk(start: int, s_left: int, t_left: int, acc: list) -> None:
        if s_left == 0:
            if t_left == 0:
                out.append(tuple(acc))
            return
        for j in range(start, len(gens)):
            x = gens[j]
            if x.s_degree <= s_left and x.t_degree <= t_left:
                acc.append(x)
                walk(j, s_left - x.s_degree, t_left - x.t_degree, acc)
                acc.pop()

    walk(0, s, t, [])
    return out


def classes_in_degree(s: int, t: int) -> list[ExtClass]:
    """Distinct nonzero-or-unknown normalized classes of degree (s, t)."""
    seen = {}
    for m in monomials_in_degree(s, t):
        x = _normalize(m)
        if not x.is_zero:
            seen.setdefault(x.monomial, x)
    return [seen[k] for k in sorted(seen, key=lambda y: [_gen_order(z) for z in y])]


def exceptional_collisions(s: int, t: int) -> list[str]:
    """Untabulated Ext generators living in degree (s, t), as warnings."""
    out = []
    for row in tables().exceptional:
        if row["s"] != s or t % row["t_coeff"]:
            continue
        q = t // row["t_coeff"]
        if q >= 2 and q & (q - 1) == 0:
            i = q.bit_length() - 2
            out.append(f"exceptional class {row['name']}({i}) in degree ({s}, {t}) is not modeled; "
                       f"see {row['citation']}")
    return out
