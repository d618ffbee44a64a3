"""The cobar complex of (BP_*, BP_*BP) on t1, t2, v1, modulo (2^e, v1^m).

Degree-s cochains are sums of words coeff * v1^v [x1 | ... | xs].  The
face maps are ring maps (the complex is a cosimplicial ring) and the
differential is the alternating sum d = sum_i (-1)^i d_i.  On reduced words
(no factor equal to 1) the unit factors produced by adjacent faces cancel
in pairs, so the differential of a reduced cochain is again reduced.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import polynomial as P
from .hopf_algebroid import (
    DEFAULT_CONFIG,
    BarPolynomial,
    StructureConfig,
    format_word,
    inner_face,
    left_face,
    right_face,
    word_sort_key,
)

KEY_COCYCLE_CONFIG = StructureConfig(3, 4)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COBARKIT_THREADS", "1")))
    except ValueError:
        return 1


class CobarElement(BarPolynomial):
    """A homogeneous cochain of cobar degree s."""

    __slots__ = ()

    def __init__(self, degree_s: int, terms: Mapping[tuple, int] | Iterable = (),
                 config: StructureConfig = DEFAULT_CONFIG, check: bool = True):
        super().__init__(degree_s, terms, config)
        if check and len(self.internal_degrees()) > 1:
            raise ValueError(f"cochain is not homogeneous: degrees {sorted(self.internal_degrees())}")

    @property
    def degree_s(self) -> int:
        return self.slots

    @classmethod
    def from_bar(cls, x: BarPolynomial) -> CobarElement:
        return cls._raw(x.slots, dict(x.terms), x.config)

    def is_reduced(self) -> bool:
        return all(k[i] or k[i + 1] for k in self.terms for i in range(1, len(k), 2))

    def reduced(self) -> CobarElement:
        """Drop words with a unit factor (projection to the normalized complex)."""
        return self._new({k: c for k, c in self.terms.items()
                          if all(k[i] or k[i + 1] for i in range(1, len(k), 2))})

    def internal_degree(self) -> int:
        degs = self.internal_degrees()
        return degs.pop() if degs else 0

    # ----------------------------------------------------------- faces
    def face_map(self, i: int) -> CobarElement:
        s = self.slots
        if not 0 <= i <= s + 1:
            raise IndexError(f"face index {i} out of range 0..{s + 1}")
        if i == 0:
            return left_face(self)
        if i == s + 1:
            return right_face(self)
        return inner_face(self, i)

    def differential(self) -> CobarElement:
        s = self.slots
        mod = self.config.modulus
        n = _threads()
        if n > 1 and len(self.terms) > 64:
            with ThreadPoolExecutor(max_workers=n) as ex:
                faces = list(ex.map(self.face_map, range(s + 2)))
        else:
            faces = [self.face_map(i) for i in range(s + 2)]
        acc: dict = {}
        for i, f in enumerate(faces):
            P.add_into(acc, f.terms, mod, -1 if i & 1 else 1)
        return self._new(acc, s + 1)

    # ----------------------------------------------------------- products
    def concatenate(self, other: CobarElement) -> CobarElement:
        """Bar product x|y; a v1 carried by y moves left across x via eta_R."""
        if not isinstance(other, BarPolynomial):
            raise TypeError("can only concatenate cochains")
        if other.config != self.config:
            raise ValueError(f"configuration mismatch: {self.config} vs {other.config}")
        cfg = self.config
        s, r = self.slots, other.slots
        mod, m = cfg.modulus, cfg.v1_order
        acc: dict = {}
        for kx, cx in self.terms.items():
            for ky, cy in other.terms.items():
                v = ky[0]
                base = (kx[0],) + kx[1:] + ky[1:]
                if v == 0:
                    img = {(0,) * (1 + 2 * (s + r)): 1}
                else:
                    img = _transport(v, s, r, cfg)
                for ik, ic in img.items():
                    if ik[0] + base[0] >= m:
                        continue
                    nk = tuple(p + q for p, q in zip(base, ik))
                    acc[nk] = acc.get(nk, 0) + cx * cy * ic
        return type(self)._raw(s + r, P.clean(acc, mod), cfg)

    def __or__(self, other: CobarElement) -> CobarElement:
        return self.concatenate(other)

    # ----------------------------------------------------------- serialization
    def to_json_obj(self) -> dict:
        cfg = self.config
        terms = []
        for k, c in self:
            word = [{"t1": k[1 + 2 * i], "t2": k[2 + 2 * i], "v1": k[0] if i == 0 else 0}
                    for i in range(self.slots)]
            if self.slots == 0:
                word = [{"t1": 0, "t2": 0, "v1": k[0]}] if k[0] else []
            terms.append({"coeff": c, "word": word})
        return {"modulus_e": cfg.modulus_e, "v1_order": cfg.v1_order,
                "degree_s": self.slots, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping, right_unit_enabled: bool = True) -> CobarElement:
        cfg = StructureConfig(obj["modulus_e"], obj["v1_order"], right_unit_enabled)
        s = obj["degree_s"]
        terms = []
        for t in obj["terms"]:
            word = t["word"]
            v = sum(f.get("v1", 0) for f in word)
            key = [v]
            if s:
                if len(word) != s:
                    raise ValueError(f"word of length {len(word)} in degree {s}")
                for f in word:
                    key += [f.get("t1", 0), f.get("t2", 0)]
            terms.append((tuple(key), t["coeff"]))
        return cls(s, terms, cfg)

    @classmethod
    def from_json(cls, text: str, right_unit_enabled: bool = True) -> CobarElement:
        return cls.from_json_obj(json.loads(text), right_unit_enabled)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        lines = []
        for k, c in self:
            w = format_word(k)
            lines.append(w if c == 1 else f"{c} {w}")
        return "\n".join(lines)

    def word_multiset(self) -> dict[tuple, int]:
        return {k: c for k, c in self}


def _transport(v: int, s: int, r: int, cfg: StructureConfig) -> dict:
    """(v1 + 2 sum_{k<=s} t1^(k))^v in s + r factors."""
    width = 1 + 2 * (s + r)
    base = {}
    k = [0] * width
    k[0] = 1
    base[tuple(k)] = 1
    if cfg.right_unit_enabled:
        for f in range(1, s + 1):
            k = [0] * width
            k[2 * f - 1] = 1
            base[tuple(k)] = 2
    base = P.clean(base, cfg.modulus)
    return P.power(base, v, (0,) * width, cfg.modulus, 0, cfg.v1_order)


# ---------------------------------------------------------------- constructors

def word(*factors: tuple[int, int], coeff: int = 1, v1: int = 0,
         config: StructureConfig = DEFAULT_CONFIG) -> CobarElement:
    """coeff * v1^v1 [t1^a1 t2^b1 | ...] from (a, b) pairs."""
    return CobarElement.word(*factors, coeff=coeff, v1=v1, config=config)


def unit(config: StructureConfig = DEFAULT_CONFIG) -> CobarElement:
    return CobarElement(0, {(0,): 1}, config)


def face_map(i: int, x: CobarElement) -> CobarElement:
    return x.face_map(i)


def differential(x: CobarElement) -> CobarElement:
    return x.differential()


def bar_concatenate(x: CobarElement, y: CobarElement) -> CobarElement:
    return x.concatenate(y)


def halve(x: CobarElement, modulus_e: int) -> CobarElement:
    """x / 2 as a cochain mod 2^modulus_e; x must be computed mod 2^(modulus_e+1)."""
    if x.config.modulus_e != modulus_e + 1:
        raise ValueError("halve expects an input one modulus step finer")
    odd = [k for k, c in x.terms.items() if c & 1]
    if odd:
        raise ArithmeticError(f"cannot halve: odd coefficient on {format_word(odd[0])}")
    cfg = x.config.with_modulus(modulus_e)
    return CobarElement._raw(x.slots, P.clean({k: c >> 1 for k, c in x.terms.items()},
                                              cfg.modulus), cfg)


def make_T(j: int, config: StructureConfig = KEY_COCYCLE_CONFIG) -> CobarElement:
    """T_j = d([t1^(2^j)]) / 2, computed one modulus step finer and halved.

    The sign follows the differential d = sum (-1)^i d_i used everywhere
    here, so d(T_j) = 0 and d(t1^(2^j) | T_(j+1)) = 2 T_j | T_(j+1).
    """
    if j < 1:
        raise ValueError("j must be positive")
    if config.modulus_e >= P.MAX_EXPONENT:
        raise ValueError("make_T needs modulus_e below the cap")
    fine = config.with_modulus(config.modulus_e + 1)
    d = word((1 << j, 0), config=fine).differential()
    return halve(d, config.modulus_e)


def make_correction(j: int, config: StructureConfig = KEY_COCYCLE_CONFIG,
                    lift: int = 7) -> CobarElement:
    """The degree-3 correction c_j; `lift` is the coefficient of its second word."""
    if j < 3:
        raise ValueError("the correction term needs j >= 3")
    q = 1 << (j - 2)  # 2^(j-2)
    h = 2 * q         # 2^(j-1)
    f = 4 * q         # 2^j

    def w(*fs: tuple[int, int], coeff: int = 1) -> CobarElement:
        return word(*fs, coeff=coeff, config=config)

    def t1(e: int) -> tuple[int, int]:
        return (e, 0)

    def t2(e: int) -> tuple[int, int]:
        return (0, e)

    def mul_factors(x: tuple[tuple[int, int], ...], y: tuple[tuple[int, int], ...]):
        return tuple((a + c, b + d) for (a, b), (c, d) in zip(x, y))

    c = w(t1(h), t1(3 * h), t1(f))
    c += w(t2(h), t1(h), t1(f), coeff=lift)
    c += w(t2(q), t2(q), t2(h), coeff=2)
    left = (t1(q), t1(h), t2(h))
    for sym in ((t2(q), (0, 0), (0, 0)), ((0, 0), t2(q), (0, 0))):
        c += w(*mul_factors(left, sym), coeff=2)
    for base in ((t1(h), t1(h), t1(h)), (t1(q), t1(q), t1(f))):
        for sym in ((t2(h), (0, 0), (0, 0)), ((0, 0), t2(h), (0, 0)),
                    ((0, 0), (0, 0), t2(h))):
            c += w(*mul_factors(base, sym), coeff=2)
    c += w(t1(3 * q), t1(5 * q), t1(f), coeff=2)
    c += w(t1(f), t1(3 * h), t1(h), coeff=2)
    c += w(t1(3 * h), t1(f), t1(h), coeff=2)
    c += w(t1(q), t2(q), t1(2 * f), coeff=2)
    c += w(t1(h), t2(h), t1(f), coeff=2)
    return c


# ---------------------------------------------------------------- verification

@dataclass
class VerificationReport:
    name: str
    passed: bool
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)
    counterexample: str | None = None
    seconds: float = 0.0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{self.name}: {status}"]
        for k, v in self.checks.items():
            parts.append(f"  {k}: {'ok' if v else 'FAILED'}")
        if self.counterexample:
            parts.append(f"  counterexample: {self.counterexample}")
        return "\n".join(parts)

    def to_json_obj(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks,
                "details": self.details, "counterexample": self.counterexample}


def key_product(j: int, config: StructureConfig = KEY_COCYCLE_CONFIG) -> CobarElement:
    """T_j | T_(j+1)."""
    return make_T(j, config).concatenate(make_T(j + 1, config))


def residual(j: int, config: StructureConfig = KEY_COCYCLE_CONFIG,
             correction: bool = True, lift: int = 7) -> CobarElement:
    """R_j = T_j | T_(j+1) + d(c_j)."""
    r = key_product(j, config)
    if correction:
        r = r + make_correction(j, config, lift).differential()
    return r


def divide_by_four_mod2(x: CobarElement) -> CobarElement:
    """x / 4 reduced mod 2, for x whose coefficients all lie in {0, 4} mod 8."""
    if x.config.modulus_e != 3:
        raise ValueError("expects a mod 8 cochain")
    bad = [k for k, c in x.terms.items() if c % 4]
    if bad:
        raise ArithmeticError(f"not divisible by 4 at {format_word(bad[0])}")
    cfg = x.config.with_modulus(1)
    return CobarElement._raw(x.slots, P.clean({k: c >> 2 for k, c in x.terms.items()}, 2), cfg)


def verify_key_cocycle(j: int, config: StructureConfig = KEY_COCYCLE_CONFIG,
                       correction: bool = True, lift: int = 7) -> VerificationReport:
    """Check that T_j | T_(j+1) + d(c_j) vanishes modulo (4, v1^4)."""
    if j < 5:
        raise ValueError("the key cocycle is stated for j >= 5")
    start = time.perf_counter()
    r = residual(j, config, correction, lift)
    report = VerificationReport(f"key cocycle j={j}", True)
    bad = [(k, c) for k, c in r if c % 4]
    report.checks["coefficients in {0,4}"] = not bad
    v1_terms = [(k, c) for k, c in r if k[0]]
    report.checks["no v1 terms"] = not v1_terms
    report.details["terms"] = len(r)
    if bad:
        k, c = bad[0]
        report.counterexample = f"{c} {format_word(k)}"
    elif v1_terms:
        k, c = v1_terms[0]
        report.counterexample = f"{c} {format_word(k)}"
    if not bad:
        q = divide_by_four_mod2(r)
        dq = q.differential()
        report.checks["R/4 mod 2 is a cocycle"] = not dq
        if dq and report.counterexample is None:
            k, c = dq.sorted_terms()[0]
            report.counterexample = f"d(R/4): {c} {format_word(k)}"
    else:
        report.checks["R/4 mod 2 is a cocycle"] = False
    report.passed = all(report.checks.values())
    report.seconds = time.perf_counter() - start
    return report


def verify_witness(j: int, config: StructureConfig = KEY_COCYCLE_CONFIG) -> VerificationReport:
    """Check d(t1^(2^j) | T_(j+1)) = 2 T_j | T_(j+1)."""
    start = time.perf_counter()
    lhs = word((1 << j, 0), config=config).concatenate(make_T(j + 1, config)).differential()
    rhs = key_product(j, config).scale(2)
    diff = lhs - rhs
    report = VerificationReport(f"witness j={j}", not diff)
    report.checks["d(t1^(2^j)|T_(j+1)) = 2 T_j|T_(j+1)"] = not diff
    report.details["terms"] = len(lhs)
    if diff:
        k, c = diff.sorted_terms()[0]
        report.counterexample = f"{c} {format_word(k)}"
    report.seconds = time.perf_counter() - start
    return report


def verify_stabilization(j: int, against: int,
                         config: StructureConfig = KEY_COCYCLE_CONFIG) -> VerificationReport:
    """Check R_j = termwise_square^(j-against)(R_against)."""
    if j <= against:
        raise ValueError("stabilization compares a larger j against a smaller one")
    start = time.perf_counter()
    base = residual(against, config)
    target = residual(j, config)
    x = base
    for _ in range(j - against):
        x = x.termwise_square()
    ok = x == target
    report = VerificationReport(f"stabilization j={j} against {against}", ok)
    report.checks[f"R_{j} = Sq^{j - against}(R_{against})"] = ok
    if not ok:
        k, c = (x - target).sorted_terms()[0]
        report.counterexample = f"{c} {format_word(k)}"
    report.seconds = time.perf_counter() - start
    return report
