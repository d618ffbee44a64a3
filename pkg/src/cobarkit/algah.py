"""The algebraic Atiyah-Hirzebruch spectral sequence over F_2[q_0, q_1, ...].

E_1 is Ext_P tensored with F_2[q_0, q_1, ...], q_i in filtration i and
degree (s, k, t) = (0, 1, 2^(i+1) - 1).  A chart for degree (s, k, t)
works with the columns 0, ..., s + 1 at the same (k, t).  Differentials
are applied page by page (r = 1, 2, 3, 4, 6) with the formulas

    d1(q_{m+1} a)   = q_m h_m a
    d2(q_{m+1}^2 a) = q_m^2 h_{m+1} a
    d2(q_{m+2} a)   = q_m <h_m, h_{m+1}, a>                 if h_{m+1} a = 0
    d4(q_{m+2}^2 a) = q_m^2 <h_{m+1}, h_{m+2}, a>           if h_{m+2} a = 0
    d3(q_{m+3} a)   = q_m <h_m, h_{m+1}, h_{m+2}, a>        if h_{m+2} a = 0
                                                      and 0 in <h_{m+1}, h_{m+2}, a>
    d6(q_{m+3}^2 a) = q_m^2 <h_{m+1}, h_{m+2}, h_{m+3}, a>  if h_{m+3} a = 0
                                                      and 0 in <h_{m+2}, h_{m+3}, a>

extended over products of q's by the Leibniz rule.  Targets are reduced
against earlier targets by Gaussian elimination over F_2, so a differential
is drawn only when some surviving target term is certified nonzero.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .ext_tables import (ExtClass, ExtGenerator, QMonomial, bracket_with_juggling,
                         classes_in_degree, exceptional_collisions, format_monomial, h,
                         normalize_product)

PAGES = (1, 2, 3, 4, 6)
MIN_N = 4

ALIVE = "alive"
SOURCE = "source"
TARGET = "target"
SURVIVES = "survives"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class DegreeFamily:
    """Degree (s, k, t) with t = alpha + beta 2^(n+3) at a concrete n."""

    s: int
    k: int
    alpha: int
    beta: int
    n: int = MIN_N

    def __post_init__(self) -> None:
        if self.n < MIN_N:
            raise ValueError(f"n must be at least {MIN_N}, got {self.n}")
        if self.s < 0 or self.k < 0 or self.t <= 0:
            raise ValueError(f"bad degree ({self.s}, {self.k}, {self.t})")

    @property
    def t(self) -> int:
        return self.alpha + (self.beta << (self.n + 3))

    def at(self, n: int) -> DegreeFamily:
        return DegreeFamily(self.s, self.k, self.alpha, self.beta, n)

    def column(self, s: int) -> DegreeFamily:
        return DegreeFamily(s, self.k, self.alpha, self.beta, self.n)

    def label(self) -> str:
        tail = f" + {self.alpha}" if self.alpha else ""
        return f"({self.s}, {self.k}, {self.beta}*2^(n+3){tail}) at n={self.n}"


FIGURES = {
    "algA-1": DegreeFamily(3, 3, 3, 3),
    "algA-3": DegreeFamily(3, 2, 2, 3),
    "algA-3b": DegreeFamily(3, 1, 1, 3),
    "algA-2a": DegreeFamily(1, 5, 3, 3),
    "algA-2b": DegreeFamily(1, 5, 3, 3),
    "algA-4": DegreeFamily(1, 4, 2, 3),
    "algA-1-3": DegreeFamily(1, 3, 1, 3),
    "algA-1-2": DegreeFamily(1, 2, 0, 3),
}

# filtration window shown by the two halves of the (1, 5) chart
FIGURE_FILTRATION = {
    "algA-2a": lambda n: (4 * n, None),
    "algA-2b": lambda n: (None, 3 * n + 8),
}


def figure(name: str, n: int = MIN_N) -> DegreeFamily:
    try:
        return FIGURES[name].at(n)
    except KeyError:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None


Key = tuple  # (QMonomial, ext monomial)


def format_entry(q: QMonomial, ext: tuple | None) -> str:
    return f"{q} . {format_monomial(ext) if ext is not None else '0'}"


@dataclass
class AHChartEntry:
    q_part: QMonomial
    ext_part: ExtClass
    s: int
    status: str = ALIVE
    page: int | None = None
    arrow_r: int | None = None
    partner: str = ""
    note: str = ""
    warnings: list = field(default_factory=list)

    @property
    def ah_filtration(self) -> int:
        return self.q_part.filtration

    @property
    def key(self) -> Key:
        return (self.q_part, self.ext_part.monomial)

    @property
    def certainty(self) -> str:
        return self.ext_part.certainty

    @property
    def permanent(self) -> bool:
        return self.q_part.is_q0_power

    def name(self) -> str:
        return format_entry(self.q_part, self.ext_part.monomial)

    def __str__(self) -> str:
        return self.name()

    def to_json_obj(self) -> dict:
        return {
            "ah_filtration": self.ah_filtration,
            "s": self.s,
            "entry": self.name(),
            "status": self.status,
            "arrow_r": self.arrow_r,
            "partner": self.partner,
            "certainty": self.certainty,
            "page": self.page,
            "note": self.note,
        }


def _row_order(e: AHChartEntry) -> tuple:
    return (-e.ah_filtration, e.s, tuple(e.q_part), str(e.ext_part))


# ---------------------------------------------------------------- E_1

def _q_monomials(k: int, t: int) -> list[QMonomial]:
    top = 0
    while (2 << (top + 1)) - 1 <= t:
        top += 1
    out = []

    def walk(start: int, left: int, t_left: int, acc: list) -> None:
        if left == 0:
            out.append(QMonomial(acc))
            return
        for i in range(start, top + 1):
            w = (2 << i) - 1
            if w * left > t_left:
                break
            acc.append(i)
            walk(i, left - 1, t_left - w, acc)
            acc.pop()

    walk(0, k, t, [])
    return out


@lru_cache(maxsize=None)
def _e1(s: int, k: int, t: int) -> tuple:
    entries, warnings = [], []
    for q in _q_monomials(k, t):
        rest = t - q.t_degree
        if rest < 0:
            continue
        warnings.extend(f"{q} . {w}" for w in exceptional_collisions(s, rest))
        for x in classes_in_degree(s, rest):
            entries.append((q, x))
    return tuple(entries), tuple(warnings)


def enumerate_e1(deg: DegreeFamily) -> list[AHChartEntry]:
    """E_1 basis in degree deg, rows ordered by descending filtration."""
    raw, warnings = _e1(deg.s, deg.k, deg.t)
    out = [AHChartEntry(q, x, deg.s) for q, x in raw]
    for e in out:
        e.warnings = [w for w in warnings if w.startswith(f"{e.q_part} . ")]
    out.sort(key=_row_order)
    return out


def e1_warnings(deg: DegreeFamily) -> list[str]:
    return list(_e1(deg.s, deg.k, deg.t)[1])


# ---------------------------------------------------------------- differentials

class _Undecided(Exception):
    pass


def _replace(q: QMonomial, remove: Iterable[int], add: Iterable[int]) -> QMonomial:
    c = Counter(q)
    c.subtract(remove)
    c.update(add)
    return QMonomial(c.elements())


def _times(a: tuple, *gens: ExtGenerator) -> ExtClass:
    return normalize_product(a + gens)


def _require_zero(x: ExtClass, what: str) -> None:
    if x.is_zero:
        return
    if x.is_nonzero:
        raise _Undecided(f"{what} = {x} is nonzero, so the formula does not apply")
    raise _Undecided(f"cannot certify {what} = 0")


def _bracket(prefix: list[ExtGenerator], a: tuple, killer: ExtGenerator, what: str) -> ExtClass:
    hit = bracket_with_juggling([normalize_product((x,)) for x in prefix], a, killer)
    if hit is None:
        raise _Undecided(f"no tabulated value for {what}")
    return hit.value


def raw_differential(q: QMonomial, a: tuple, r: int) -> list[tuple[QMonomial, ExtClass]]:
    """Leibniz sum of the page-r formulas on q . a; raises _Undecided."""
    counts = Counter(q)
    out = []
    for i, e in sorted(counts.items()):
        single = e % 2 == 1
        square = e % 4 in (2, 3)
        if r == 1 and single and i >= 1:
            out.append((_replace(q, [i], [i - 1]), _times(a, h(i - 1))))
        elif r == 2:
            if square and i >= 1:
                out.append((_replace(q, [i, i], [i - 1, i - 1]), _times(a, h(i))))
            if single and i >= 2:
                what = f"h_{i - 1} a"
                _require_zero(_times(a, h(i - 1)), what)
                v = _bracket([h(i - 2), h(i - 1)], a, h(i - 1),
                             f"<h_{i - 2}, h_{i - 1}, {format_monomial(a)}>")
                out.append((_replace(q, [i], [i - 2]), v))
        elif r == 3 and single and i >= 3:
            _require_zero(_times(a, h(i - 1)), f"h_{i - 1} a")
            z = _bracket([h(i - 2), h(i - 1)], a, h(i - 1),
                         f"<h_{i - 2}, h_{i - 1}, {format_monomial(a)}>")
            _require_zero(z, f"<h_{i - 2}, h_{i - 1}, a>")
            v = _bracket([h(i - 3), h(i - 2), h(i - 1)], a, h(i - 1),
                         f"<h_{i - 3}, h_{i - 2}, h_{i - 1}, {format_monomial(a)}>")
            out.append((_replace(q, [i], [i - 3]), v))
        elif r == 4 and square and i >= 2:
            _require_zero(_times(a, h(i)), f"h_{i} a")
            v = _bracket([h(i - 1), h(i)], a, h(i), f"<h_{i - 1}, h_{i}, {format_monomial(a)}>")
            out.append((_replace(q, [i, i], [i - 2, i - 2]), v))
        elif r == 6 and square and i >= 3:
            _require_zero(_times(a, h(i)), f"h_{i} a")
            z = _bracket([h(i - 1), h(i)], a, h(i), f"<h_{i - 1}, h_{i}, {format_monomial(a)}>")
            _require_zero(z, f"<h_{i - 1}, h_{i}, a>")
            v = _bracket([h(i - 2), h(i - 1), h(i)], a, h(i),
                         f"<h_{i - 2}, h_{i - 1}, h_{i}, {format_monomial(a)}>")
            out.append((_replace(q, [i, i], [i - 3, i - 3]), v))
    # F_2 sum: identical terms cancel
    acc = Counter((tq, x.monomial) for tq, x in out if not x.is_zero)
    classes = {(tq, x.monomial): x for tq, x in out if not x.is_zero}
    return [(tq, classes[(tq, m)]) for (tq, m), c in sorted(acc.items(), key=_term_order) if c % 2]


def _term_order(item) -> tuple:
    (q, m), _ = item
    return (tuple(q), format_monomial(m))


# ---------------------------------------------------------------- chart engine

@dataclass
class Arrow:
    r: int
    source: Key
    targets: list  # keys of the raw target terms
    pivot: Key


@dataclass
class Chart:
    degree: DegreeFamily
    cells: dict  # Key -> AHChartEntry
    arrows: list
    warnings: list

    @property
    def entries(self) -> list[AHChartEntry]:
        """The E_1 basis in the chart's own column."""
        return sorted((e for e in self.cells.values() if e.s == self.degree.s), key=_row_order)

    def survivors(self) -> list[AHChartEntry]:
        return [e for e in self.entries if e.status in (SURVIVES, UNDECIDED, ALIVE)]

    def arrows_touching(self, s: int) -> list[Arrow]:
        out = []
        for a in self.arrows:
            cols = {self.cells[a.source].s} | {self.cells[k].s for k in a.targets}
            if s in cols:
                out.append(a)
        return out

    def displayed(self) -> list[AHChartEntry]:
        """Rows of the emitted table: own column plus arrow partners."""
        s = self.degree.s
        keys = {e.key for e in self.entries}
        for a in self.arrows_touching(s):
            keys.add(a.source)
            keys.update(a.targets)
        for e in self.cells.values():
            if e.s == s + 1 and e.permanent and e.ext_part.is_nonzero:
                keys.add(e.key)
        return sorted((self.cells[k] for k in keys), key=_row_order)


class _Engine:
    def __init__(self, deg: DegreeFamily, depth: int | None = None):
        self.deg = deg
        self.cells: dict[Key, AHChartEntry] = {}
        self.relations: dict[Key, frozenset] = {}
        self.arrows: list[Arrow] = []
        self.warnings: list[str] = []
        if depth is None:
            depth = deg.s
        self.source_columns = [c for c in range(deg.s, deg.s - depth - 1, -1) if c >= 0]
        for col in self.source_columns:
            for e in enumerate_e1(deg.column(col)):
                self.cells[e.key] = e
            self.warnings.extend(e1_warnings(deg.column(col)))
        # permanent classes one column up, for display and survival questions
        up = deg.s + 1
        rest = deg.t - deg.k
        for x in classes_in_degree(up, rest):
            q = QMonomial([0] * deg.k)
            self.cells.setdefault((q, x.monomial), AHChartEntry(q, x, up))
        self.warnings.extend(e1_warnings(deg.column(up)))

    def cell(self, q: QMonomial, x: ExtClass, s: int) -> AHChartEntry:
        key = (q, x.monomial)
        if key not in self.cells:
            self.cells[key] = AHChartEntry(q, x, s)
        return self.cells[key]

    def reduce(self, keys: Iterable[Key]) -> frozenset:
        acc: set = set()
        todo = list(keys)
        while todo:
            k = todo.pop()
            e = self.cells[k]
            if e.status == SOURCE:
                continue
            if e.status == TARGET:
                todo.extend(self.relations[k])
                continue
            acc ^= {k}
        return frozenset(acc)

    def run(self) -> Chart:
        for r in PAGES:
            for col in self.source_columns:
                todo = [e for e in self.cells.values()
                        if e.s == col and e.status == ALIVE and not e.permanent]
                for e in sorted(todo, key=_row_order):
                    if e.status == ALIVE:
                        self.step(e, r)
        self.finish()
        return Chart(self.deg, self.cells, self.arrows, sorted(set(self.warnings)))

    def step(self, e: AHChartEntry, r: int) -> None:
        try:
            terms = raw_differential(e.q_part, e.ext_part.monomial, r)
        except _Undecided as why:
            e.status, e.page, e.note = UNDECIDED, r, f"d{r}: {why}"
            return
        keys = [self.cell(q, x, e.s + 1).key for q, x in terms]
        vec = self.reduce(keys)
        if not vec:
            return
        ranked = sorted(vec, key=lambda k: (self.cells[k].status != ALIVE, _row_order(self.cells[k])))
        certified = [k for k in ranked if self.cells[k].ext_part.is_nonzero]
        if not certified:
            e.status, e.page = UNDECIDED, r
            e.note = f"d{r} target {self.describe(vec)} is not certified nonzero"
            return
        pivot = certified[0]
        p = self.cells[pivot]
        e.status, e.page, e.arrow_r = SOURCE, r, r
        e.partner = self.describe(keys)
        p.status, p.page, p.arrow_r, p.partner = TARGET, r, r, e.name()
        for k in vec - {pivot}:
            other = self.cells[k]
            if not other.partner:
                other.partner = f"summand of d{r}({e.name()})"
        self.relations[pivot] = vec - {pivot}
        self.arrows.append(Arrow(r, e.key, keys, pivot))

    def describe(self, keys: Iterable[Key]) -> str:
        names = sorted(self.cells[k].name() for k in keys)
        return " + ".join(names)

    def finish(self) -> None:
        s = self.deg.s
        for e in self.cells.values():
            if e.s != s or e.status != ALIVE:
                continue
            if not e.permanent:
                e.status = UNDECIDED
                e.note = "no formula decides its longer differentials"
                continue
            if not e.ext_part.is_nonzero:
                e.status = UNDECIDED
                e.note = "nonvanishing of the Ext class is not certified"
                continue
            hitters = [x for x in self.cells.values()
                       if x.s == s - 1 and x.status in (ALIVE, UNDECIDED) and not x.permanent
                       and x.ah_filtration > e.ah_filtration]
            if hitters:
                e.status = UNDECIDED
                first = sorted(hitters, key=_row_order)[0]
                e.note = f"may be hit by a longer differential, e.g. from {first.name()}"
            else:
                e.status = SURVIVES
                e.note = "permanent cycle and nothing left to hit it"


def apply_differentials(deg: DegreeFamily, depth: int | None = None) -> Chart:
    """Run pages 1, 2, 3, 4, 6 on column s of deg and `depth` columns below it.

    The default runs every column down to s = 0, so statuses of the lower
    columns never rest on unchecked liveness further down.
    """
    return _Engine(deg, depth).run()


def survivors(deg: DegreeFamily) -> list[AHChartEntry]:
    """Own-column entries that are neither sources nor targets at the end."""
    return apply_differentials(deg).survivors()


def first_empty_page(chart: Chart) -> int | None:
    """Smallest r with E_r empty in the chart's column, or None."""
    entries = chart.entries
    if any(e.status not in (SOURCE, TARGET) for e in entries):
        return None
    return max((e.page for e in entries), default=0) + 1


# ---------------------------------------------------------------- emission

TSV_COLUMNS = ("ah_filtration", "s", "entry", "status", "arrow_r", "partner")


def _window(rows: list[AHChartEntry], lo: int | None, hi: int | None) -> list[AHChartEntry]:
    return [e for e in rows if (lo is None or e.ah_filtration >= lo)
            and (hi is None or e.ah_filtration <= hi)]


def chart_rows(chart: Chart, figure_name: str | None = None) -> list[AHChartEntry]:
    rows = chart.displayed()
    if figure_name in FIGURE_FILTRATION:
        rows = _window(rows, *FIGURE_FILTRATION[figure_name](chart.degree.n))
    return rows


def emit_chart(chart: Chart, fmt: str = "tsv", figure_name: str | None = None) -> str:
    """Deterministic TSV or JSON rendering of a chart."""
    rows = chart_rows(chart, figure_name)
    total = len(chart.entries)
    shown = sum(1 for e in rows if e.s == chart.degree.s)
    if fmt == "tsv":
        lines = [f"# degree {chart.degree.label()}",
                 f"# E1 entries in column {chart.degree.s}: {total} ({shown} in this window)"]
        lines += [f"# warning: {w}" for w in chart.warnings]
        lines.append("\t".join(TSV_COLUMNS))
        for e in rows:
            lines.append("\t".join(str(x) for x in (
                e.ah_filtration, e.s, e.name(), e.status,
                "" if e.arrow_r is None else e.arrow_r, e.partner)))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        d = chart.degree
        obj = {
            "degree": {"s": d.s, "k": d.k, "t": d.t, "n": d.n, "alpha": d.alpha, "beta": d.beta},
            "columns": list(TSV_COLUMNS),
            "e1_entries": total,
            "rows": [e.to_json_obj() for e in rows],
            "warnings": chart.warnings,
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if fmt == "pretty":
        lines = [f"degree {chart.degree.label()}",
                 f"E1 entries in column {chart.degree.s}: {total} ({shown} in this window)"]
        for e in rows:
            tail = f"  d{e.arrow_r} {'->' if e.status == SOURCE else '<-'} {e.partner}" \
                if e.arrow_r else ""
            lines.append(f"[{e.ah_filtration:>3}, s={e.s}] {e.name():<40} {e.status}{tail}")
        lines += [f"warning: {w}" for w in chart.warnings]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
