"""Bounded enumeration of critical branchings and their joinability.

Sources are built by gluing left-hand sides of rule instances along a shared
run of sites (suffix of one equal to a prefix of the other, or one contained in
the other), and by inserting one extra site into a left-hand side or into a
bare nail loop. Each is optionally decorated with dots on a freshly nailed
strand. Each
source is instantiated over every strand coloring and weight assignment within
bounds. Pairs of overlapping redexes are then reduced both ways.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

from .diagrams import (
    BLACK, BX, DOT, NAIL, DiagramError, Element, Monomial, Weight, resolve,
)
from .rewriting import RULES, X, BudgetExceeded, RewriteSystem, loop_word

Raw = tuple[tuple[int | None, int], ...]


@dataclass(frozen=True)
class BranchingBounds:
    max_black: int = 3
    max_colored: int = 2
    max_gap: int = 2   # largest nail-loop index
    max_dots: int = 3  # dots on a nailed strand; also the largest integral weight tried


@dataclass
class Branching:
    source: Monomial
    rules: tuple[str, str]
    left: Element
    right: Element
    joinable: bool | None  # None when the reduction budget ran out


@dataclass
class BranchingReport:
    bounds: BranchingBounds
    loop_rules: bool
    sources: int = 0
    peiffer: int = 0
    branchings: list[Branching] = field(default_factory=list)

    @property
    def non_joinable(self) -> list[Branching]:
        return [b for b in self.branchings if b.joinable is False]

    @property
    def exhausted(self) -> list[Branching]:
        return [b for b in self.branchings if b.joinable is None]

    @property
    def ok(self) -> bool:
        return all(b.joinable for b in self.branchings)

    def summary(self) -> dict:
        return {
            "sources": self.sources,
            "critical": len(self.branchings),
            "peiffer_skipped": self.peiffer,
            "non_joinable": len(self.non_joinable),
            "budget_exhausted": len(self.exhausted),
        }


def _sort_key(raw: Raw):
    return (len(raw), [(-1 if k is None else k, p) for k, p in raw])


def _width(raw: Raw) -> int:
    """Number of strands the word touches."""
    return max(p if k == DOT else 1 if k == NAIL else p + 1 for k, p in raw) + 1


def lhs_patterns(max_pos: int, max_gap: int) -> list[Raw]:
    """Left-hand sides of every rule instance anchored at positions <= max_pos."""
    out = set()
    anchors = [(k, p) for p in range(max_pos + 1) for k in (DOT, NAIL, BX)]
    for rule in RULES:
        for kind, pos in anchors:
            if kind == NAIL and pos != 0:
                continue
            for label, pattern, _ in rule.instances((kind, pos), None):
                if label.startswith("nail-loop[") and int(label[10:-1]) > max_gap:
                    continue
                out.add(tuple((None if k == X else k, p) for k, p in pattern))
    return sorted(out, key=_sort_key)


def glue(a: Raw, b: Raw) -> Iterator[Raw]:
    """Words in which an occurrence of `a` and one of `b` share at least one site."""
    for k in range(1, min(len(a), len(b)) + 1):
        if a[-k:] == b[:k]:
            yield a + b[k:]
    if len(b) < len(a):
        for i in range(1, len(a) - len(b)):
            if a[i:i + len(b)] == b:
                yield a


def insertions(raw: Raw, max_pos: int) -> Iterator[Raw]:
    """The word with one extra crossing or dot at any height and position."""
    extra = [(None, p) for p in range(1, max_pos)] + [(DOT, p) for p in range(1, max_pos + 1)]
    for i in range(len(raw) + 1):
        for site in extra:
            yield raw[:i] + (site,) + raw[i:]


def _decorate(raw: Raw, max_dots: int) -> Iterator[Raw]:
    """The word itself, plus p dots right after each nail."""
    yield raw
    for i, (k, _) in enumerate(raw):
        if k == NAIL:
            for p in range(1, max_dots + 1):
                yield raw[:i + 1] + ((DOT, 1),) * p + raw[i + 1:]


def _colorings(n: int, bounds: BranchingBounds, weights: Sequence[Weight]):
    """(mu, bottom) with n strands, colored strand 1 leftmost."""
    for r in range(1, bounds.max_colored + 1):
        if n - r > bounds.max_black or n - r < 0:
            continue
        for cpos in combinations(range(1, n), r - 1):
            seq = [BLACK] * n
            seq[0] = 1
            for c, p in enumerate(cpos, start=2):
                seq[p] = c
            for mu in product(weights, repeat=r):
                yield tuple(mu), tuple(seq)


def default_weights(bounds: BranchingBounds) -> tuple[Weight, ...]:
    return tuple(Weight.integral(n) for n in range(bounds.max_dots + 1)) + (Weight.beta(0),)


def source_words(bounds: BranchingBounds) -> list[Raw]:
    max_pos = bounds.max_black + bounds.max_colored - 1
    pats = lhs_patterns(max_pos - 1, bounds.max_gap)
    words = set(pats)
    for a in pats:
        for b in pats:
            words.update(glue(a, b))
    loops = [tuple(loop_word(ell + 3)) for ell in range(bounds.max_gap + 1)]
    for w in pats + loops:
        words.update(insertions(w, max_pos))
    out = set()
    for w in words:
        if _width(w) <= bounds.max_black + bounds.max_colored:
            out.update(_decorate(w, bounds.max_dots))
    return sorted(out, key=_sort_key)


def source_monomials(bounds: BranchingBounds,
                     weights: Sequence[Weight] | None = None) -> Iterator[Monomial]:
    weights = tuple(weights) if weights is not None else default_weights(bounds)
    seen = set()
    for raw in source_words(bounds):
        n = max(_width(raw), 2)
        for mu, seq in _colorings(n, bounds, weights):
            try:
                m = Monomial.build(mu, seq, resolve(seq, raw))
            except DiagramError:
                continue
            if m not in seen:
                seen.add(m)
                yield m


def branchings_at(m: Monomial, rw: RewriteSystem) -> tuple[list[Branching], int]:
    """Overlapping redex pairs of `m` with verdicts, and the count of disjoint pairs."""
    out = []
    disjoint = 0
    for r1, r2 in combinations(rw.redexes(m), 2):
        if not set(r1.occurrence) & set(r2.occurrence):
            disjoint += 1
            continue
        left, right = rw.apply(m, r1), rw.apply(m, r2)
        try:
            joinable = rw.normal_form(left) == rw.normal_form(right)
        except BudgetExceeded:
            joinable = None
        out.append(Branching(m, (r1.rule, r2.rule), left, right, joinable))
    return out, disjoint


def _scan_chunk(args) -> list[tuple[list[Branching], int]]:
    sources, loop_rules, delta_mode = args
    rw = RewriteSystem(delta_mode=delta_mode, loop_rules=loop_rules)
    return [branchings_at(m, rw) for m in sources]


def enumerate_critical_branchings(bounds: BranchingBounds = BranchingBounds(), loop_rules: bool = True,
                                  rewriter: RewriteSystem | None = None,
                                  weights: Sequence[Weight] | None = None,
                                  workers: int = 1) -> BranchingReport:
    rw = rewriter or RewriteSystem(loop_rules=loop_rules)
    report = BranchingReport(bounds, rw.loop_rules)
    if bounds.max_black == 0:
        return report
    sources = list(source_monomials(bounds, weights))
    if workers > 1:
        size = -(-len(sources) // (4 * workers))
        chunks = [(sources[i:i + size], rw.loop_rules, rw.delta_mode) for i in range(0, len(sources), size)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for chunk in pool.map(_scan_chunk, chunks) for r in chunk]
    else:
        results = [branchings_at(m, rw) for m in sources]
    for found, disjoint in results:
        report.sources += 1
        report.branchings.extend(found)
        report.peiffer += disjoint
    return report


def nail_loop_braid_source(mu: Sequence[Weight], gap: Sequence[int]) -> Monomial:
    """Two strands cross while a third strand from their right sits on the nail.

    `gap` lists the labels of the strands between the nail and the crossing pair."""
    bottom = (1, *gap, BLACK, BLACK, BLACK)
    s = len(bottom) - 1
    raw = list(loop_word(s))
    nail = raw.index((NAIL, 0))
    raw.insert(nail + 1, (None, s - 1))
    return Monomial.build(mu, bottom, resolve(bottom, raw))


def nail_loop_braid_family(bounds: BranchingBounds = BranchingBounds(),
                           weights: Sequence[Weight] | None = None) -> Iterator[Monomial]:
    """The braid-inside-a-nail-loop sources over every gap coloring within bounds."""
    weights = tuple(weights) if weights is not None else default_weights(bounds)
    for ell in range(bounds.max_gap + 1):
        for colored in product((False, True), repeat=ell):
            r = 1 + sum(colored)
            if r > bounds.max_colored or ell - sum(colored) + 3 > bounds.max_black:
                continue
            gap, c = [], 1
            for is_colored in colored:
                if is_colored:
                    c += 1
                    gap.append(c)
                else:
                    gap.append(BLACK)
            for mu in product(weights, repeat=r):
                yield nail_loop_braid_source(mu, gap)
