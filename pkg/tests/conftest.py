import sys
import random

import pytest
from hypothesis import strategies as st

from cobarkit.cobar import CobarElement
from cobarkit.hopf_algebroid import StructureConfig

ALL_CONFIGS = [StructureConfig(e, m) for e in (1, 2, 3) for m in (1, 4)]
INVARIANT_CONFIGS = [c for c in ALL_CONFIGS if c.is_invariant()]
NON_INVARIANT_CONFIGS = [c for c in ALL_CONFIGS if not c.is_invariant()]


def config_id(cfg):
    return f"mod{cfg.modulus}-v1^{cfg.v1_order}"


def random_element(rng, s, cfg, nterms=3, max_t1=8, max_t2=2):
    terms = []
    for _ in range(nterms):
        key = [rng.randrange(cfg.v1_order)]
        for _ in range(s):
            key += [rng.randrange(max_t1 + 1), rng.randrange(max_t2 + 1)]
        terms.append((tuple(key), rng.randrange(1, cfg.modulus)))
    return CobarElement(s, terms, cfg, check=False)


@st.composite
def elements(draw, s, cfg, max_terms=3):
    n = draw(st.integers(1, max_terms))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_element(random.Random(seed), s, cfg, nterms=n)


@pytest.fixture
def rng():
    return random.Random(20240501)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(i))
