"""Acceptance criteria 1-9, one check each.

Every check returns (passed, detail).  The results are collected in RESULTS
and printed as one PASS/FAIL line per criterion at the end of the pytest
run (see conftest.py), or directly with `python tests/test_acceptance.py`.

Two criteria are red by design and marked strict xfail:
  7  the h^3 cells that the method leaves as "or 0" are fully resolved by
     the chart engine, which reports them as surviving, not undecided;
  8  d∘d fails in the (4, v1) and (8, v1) quotients, which eta_R does not
     preserve.
"""

import json
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ALL_CONFIGS, config_id, random_element  # noqa: E402
from test_coefficients import pascal_rows  # noqa: E402
from test_cross_oracle import (CFG as ORACLE_CFG, add, cobar_diff, from_package,  # noqa: E402
                               mono3, to_package)
from test_ext_tables import GENS, _reduce_mod2, _xi  # noqa: E402
from test_hopf_algebroid import delta, inner_terms  # noqa: E402

from cobarkit.algah import (UNDECIDED, apply_differentials, enumerate_e1, figure,  # noqa: E402
                            first_empty_page)
from cobarkit.cobar import (divide_by_four_mod2, make_correction, make_T, residual,  # noqa: E402
                            verify_key_cocycle, verify_witness)
from cobarkit.coefficients import congruence_rule  # noqa: E402
from cobarkit.ext_tables import multiply, normalize_product, psi_q, xi_coproduct  # noqa: E402
from cobarkit.hopf_algebroid import StructureConfig  # noqa: E402
from cobarkit.may import e1_class, leading_part, MayClass  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def _canon(x):
    return json.dumps(x.to_json_obj(), sort_keys=True, separators=(",", ":"))


def criterion_1():
    start = time.perf_counter()
    rep = verify_key_cocycle(5)
    secs = time.perf_counter() - start
    ok = rep.passed and secs < 10
    return ok, f"checks {rep.checks}, {rep.details.get('terms')} terms, {secs:.2f}s (< 10s)"


def criterion_2():
    start = time.perf_counter()
    r5, r6, r7 = (residual(j) for j in (5, 6, 7))
    ok6 = _canon(r5.termwise_square()) == _canon(r6)
    ok7 = _canon(r6.termwise_square()) == _canon(r7)
    secs = time.perf_counter() - start
    return ok6 and ok7 and secs < 60, f"R6 {ok6}, R7 {ok7}, {secs:.2f}s (< 60s)"


def criterion_3():
    got = {j: verify_witness(j).passed for j in (5, 6)}
    return all(got.values()), f"witness identity by j: {got}"


def criterion_4():
    bad = []
    for j in range(5, 10):
        t = make_T(j)
        if t.differential():
            bad.append(f"d(T_{j}) != 0")
        if str(t.reduce(1)) != f"[t1^{1 << (j - 1)} | t1^{1 << (j - 1)}]":
            bad.append(f"T_{j} mod 2")
    return not bad, "j=5..9 ok" if not bad else ", ".join(bad)


def criterion_5():
    bad = []
    for j in (5, 6, 7):
        lead = leading_part(divide_by_four_mod2(residual(j)), 11)
        if len(lead) != 3 or e1_class(lead) != MayClass.h(2, j - 2, 4):
            bad.append(f"j={j}: {len(lead)} terms, class {e1_class(lead)}")
    return not bad, "j=5,6,7: 3 terms, h(2,j-2)^4" if not bad else "; ".join(bad)


def criterion_6():
    n = 2
    d = delta(1 << (n + 3), 0, StructureConfig(4, 4))
    want = {(i, 0, 8 - i, 0): c for i, c in zip(range(1, 8), (8, 12, 8, 6, 8, 12, 8))}
    a = inner_terms(d, 1 << n) == want

    d = delta(3 << (n + 2), 0, StructureConfig(3, 4))
    coeffs = zip(range(1, 12), (4, 2, 4, 7, None, 4, None, 7, 4, 2, 4))
    want = {(i, 0, 12 - i, 0): c for i, c in coeffs if c is not None}
    b = inner_terms(d, 1 << n) == want

    d = delta(0, 1 << (n + 4), StructureConfig(3, 4))
    rows = [
        (1, (0, 16, 0, 0)), (4, (4, 12, 8, 0)), (4, (0, 12, 0, 4)), (6, (8, 8, 16, 0)),
        (4, (4, 8, 8, 4)), (6, (0, 8, 0, 8)), (4, (12, 4, 24, 0)), (4, (8, 4, 16, 4)),
        (4, (4, 4, 8, 8)), (4, (0, 4, 0, 12)), (1, (16, 0, 32, 0)), (4, (12, 0, 24, 4)),
        (6, (8, 0, 16, 8)), (4, (4, 0, 8, 12)), (1, (0, 0, 0, 16)),
    ]
    c = d.terms == {(0,) + tuple(e << n for e in ex): k for k, ex in rows}
    return a and b and c, f"t1^32 mod 16 {a}, t1^48 mod 8 {b}, t2^64 mod (8,v1^4) {c}"


def criterion_7():
    problems = []
    notes = []
    for n in (4, 5, 6):
        for name, count in (("algA-1", 21), ("algA-2a", 32)):
            got = len(enumerate_e1(figure(name, n)))
            if got != count:
                problems.append(f"{name} n={n}: {got} entries")
        for name, power in (("algA-1", 3), ("algA-3", 2), ("algA-3b", 1)):
            left = apply_differentials(figure(name, n)).survivors()
            want = ("q_0^3" if power == 3 else "q_0^2" if power == 2 else "q_0") + f" . h_{n + 2}^3"
            if [e.name() for e in left] != [want]:
                problems.append(f"{name} n={n}: survivors {[e.name() for e in left]}")
            elif left[0].status != UNDECIDED:
                notes.append(f"{name} n={n}: {left[0].status}")
        for name, page in (("algA-2a", 3), ("algA-4", 2), ("algA-1-3", 2), ("algA-1-2", 2)):
            got = first_empty_page(apply_differentials(figure(name, n)))
            if got != page:
                problems.append(f"{name} n={n}: empty from E{got}")
    head = "counts 21/32, survivor sets and (1,k) empty pages ok" if not problems else \
        "; ".join(problems)
    if notes:
        head += ("; 'or 0' cells resolved instead of undecided: q0^k h^3 decided as "
                 f"{', '.join(sorted({x.split(': ')[1] for x in notes}))} in {len(notes)} charts")
    return not problems and not notes, head


def _faces_ok(x):
    s = x.degree_s
    for j in range(s + 3):
        for i in range(j):
            if x.face_map(i).face_map(j) != x.face_map(j - 1).face_map(i):
                return False
    return True


def criterion_8():
    failed = []
    rng = random.Random(8)
    for cfg in ALL_CONFIGS:
        bad = 0
        for s in range(4):
            for _ in range(200):
                x = random_element(rng, s, cfg)
                if x.differential().differential() or not _faces_ok(x):
                    bad += 1
        lb = 0
        for _ in range(100):
            s, r = rng.randrange(3), rng.randrange(3)
            x, y = random_element(rng, s, cfg), random_element(rng, r, cfg)
            lhs = (x | y).differential()
            rhs = (x.differential() | y) + (x | y.differential()).scale(-1 if s & 1 else 1)
            lb += lhs != rhs
        if bad or lb:
            failed.append(f"{config_id(cfg)} (d∘d/faces {bad}/800, Leibniz {lb}/100)")

    rows = pascal_rows(8 << 9, 1 << 4)
    sweep_bad = 0
    for k in range(4):
        for n in range(7):
            for a in range(1, 9):
                big = a << (n + k)
                for b in range(17):
                    for c in range(1 << n):
                        i = (b << n) + c
                        if i <= big and int(congruence_rule(a, b, c, n, k)) != rows[big][i] % (2 << k):
                            sweep_bad += 1
    if sweep_bad:
        failed.append(f"binomial sweep {sweep_bad} mismatches")

    for n in range(7):
        left = [(_xi(*a), _xi(*b), i) for (k, e), i in psi_q(n) for a, b in xi_coproduct(k, e)]
        right = [(_xi(k, e), _xi(k2, e2), i) for (k, e), m in psi_q(n) for (k2, e2), i in psi_q(m)]
        if _reduce_mod2(left) != _reduce_mod2(right):
            failed.append(f"psi(q_{n}) not coassociative")

    conf_bad = 0
    for _ in range(500):
        gens = [rng.choice(GENS) for _ in range(rng.randrange(1, 6))]
        base = normalize_product(gens)
        shuffled = list(gens)
        rng.shuffle(shuffled)
        cut = rng.randrange(len(gens) + 1)
        if normalize_product(shuffled) != base or multiply(
                normalize_product(shuffled[:cut]), normalize_product(shuffled[cut:])) != base:
            conf_bad += 1
    if conf_bad:
        failed.append(f"normalize confluence {conf_bad}/500")

    if failed:
        return False, "fails in " + "; ".join(failed) + "; all other suites pass"
    return True, "all property suites pass"


def criterion_9():
    c = make_correction(5, ORACLE_CFG)
    ok_c = from_package(c.differential()) == cobar_diff(from_package(c))
    agree = 0
    for seed in range(20):
        rng = random.Random(seed)
        poly = {}
        for _ in range(rng.randrange(1, 6)):
            t1 = tuple(rng.randrange(0, 9) for _ in range(3))
            t2 = tuple(rng.randrange(0, 4) for _ in range(3))
            poly = add(poly, mono3(t1, t2, rng.randrange(1, 8)))
        agree += from_package(to_package(poly, 3).differential()) == cobar_diff(poly)
    return ok_c and agree == 20, f"c_5 {ok_c}, random elements {agree}/20"


CHECKS = {i: globals()[f"criterion_{i}"] for i in range(1, 10)}
RED = {
    7: "the engine resolves the q0^k h^3 cells (as surviving) instead of leaving them undecided",
    8: "(4, v1) and (8, v1) are not invariant ideals, so d∘d and the face identities fail there",
}


def _run(i):
    if i not in RESULTS:
        try:
            RESULTS[i] = CHECKS[i]()
        except Exception as err:  # report, then let the assertion fail
            RESULTS[i] = (False, f"{type(err).__name__}: {err}")
    return RESULTS[i]


def format_line(i):
    ok, detail = RESULTS[i]
    return f"criterion {i}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("i", [i for i in CHECKS if i not in RED])
def test_criterion(i):
    ok, detail = _run(i)
    assert ok, detail


@pytest.mark.parametrize("i", sorted(RED))
def test_red_criterion(i, request):
    request.node.add_marker(pytest.mark.xfail(strict=True, reason=RED[i]))
    ok, detail = _run(i)
    assert ok, detail


if __name__ == "__main__":
    for i in CHECKS:
        _run(i)
        print(format_line(i), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
