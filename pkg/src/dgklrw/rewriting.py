"""Oriented rewriting of monomials modulo braid-like isotopy.

A left-hand side occurs in a canonical word W when its sites can be mapped to
sites of W so that, on every position, the images are consecutive in W's chain
of sites touching that position, and the image set is convex for the
dependency order. The occurrence is then rewritten in place: the word is
relinearized as (ancestors, occurrence, rest) and the occurrence replaced.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .diagrams import (
    BLACK, BX, DOT, MX, NAIL, Element, Monomial, Site, Weight, apply_site,
    crossing_kind, support,
)
from .scalars import DeltaPoly

X = "X"  # pattern wildcard for a crossing of either kind
KEEP, ZERO = "keep", "zero"
FIRST, LAST = "first", "last"

RawWord = list[tuple[int | None, int]]


class BudgetExceeded(RuntimeError):
    """Raised when a reduction exceeds its step budget (termination bug)."""


class DescentViolation(AssertionError):
    """Raised when a rewrite step fails to decrease the termination order."""


# --- word analysis ------------------------------------------------------------


class WordContext:
    """Chains and running sequences of a canonical word."""

    __slots__ = ("m", "sites", "seqs", "chains", "chain_pos")

    def __init__(self, m: Monomial):
        self.m = m
        self.sites = m.sites
        self.seqs = m.sequences()
        chains: dict[int, list[int]] = {}
        chain_pos: dict[tuple[int, int], int] = {}
        for h, s in enumerate(self.sites):
            for x in support(s):
                lst = chains.setdefault(x, [])
                chain_pos[(h, x)] = len(lst)
                lst.append(h)
        self.chains = chains
        self.chain_pos = chain_pos

    def neighbours(self, h: int, step: int) -> Iterable[int]:
        for x in support(self.sites[h]):
            c = self.chain_pos[(h, x)] + step
            chain = self.chains[x]
            if 0 <= c < len(chain):
                yield chain[c]

    def closure(self, start: Iterable[int], step: int, stop: set[int]) -> set[int]:
        """Sites reachable from `start` strictly along `step`, not passing through `stop`."""
        seen: set[int] = set()
        todo = list(start)
        while todo:
            h = todo.pop()
            for k in self.neighbours(h, step):
                if k not in seen and k not in stop:
                    seen.add(k)
                    todo.append(k)
        return seen

    def embed(self, pattern: Sequence[tuple], anchor: int) -> tuple[int, ...] | None:
        """Map pattern sites onto W with pattern[0] -> anchor, following chains."""
        n = len(pattern)
        pchains: dict[int, list[int]] = {}
        ppos: dict[tuple[int, int], int] = {}
        supports = []
        for j, (kc, pos) in enumerate(pattern):
            sup = (pos,) if kc == DOT else (0, 1) if kc == NAIL else (pos, pos + 1)
            supports.append(sup)
            for x in sup:
                lst = pchains.setdefault(x, [])
                ppos[(j, x)] = len(lst)
                lst.append(j)
        image = [-1] * n
        image[0] = anchor
        todo = [0]
        while todo:
            j = todo.pop()
            h = image[j]
            if not _site_matches(self.sites[h], pattern[j]):
                return None
            for x in supports[j]:
                a = ppos[(j, x)]
                c = self.chain_pos.get((h, x))
                if c is None:
                    return None
                chain = self.chains[x]
                for step in (-1, 1):
                    if 0 <= a + step < len(pchains[x]):
                        jj = pchains[x][a + step]
                        if not 0 <= c + step < len(chain):
                            return None
                        hh = chain[c + step]
                        if image[jj] == -1:
                            image[jj] = hh
                            todo.append(jj)
                        elif image[jj] != hh:
                            return None
        if -1 in image or len(set(image)) != n:
            return None
        return tuple(image)

    def split(self, occurrence: Sequence[int]) -> tuple[list[int], list[int]] | None:
        """(ancestors, rest) if the occurrence is convex, else None."""
        occ = set(occurrence)
        below = self.closure(occ, -1, occ)
        above = self.closure(occ, 1, occ)
        if below & above:
            return None
        rest = [h for h in range(len(self.sites)) if h not in occ and h not in below]
        return sorted(below), rest


def _site_matches(site: Site, pat: tuple) -> bool:
    kind, pos = site
    kc, ppos = pat
    if kc == X:
        return kind in (BX, MX) and pos == ppos
    return kind == kc and pos == ppos


# --- rule families ------------------------------------------------------------


@dataclass(frozen=True)
class RewriteRule:
    """One rule family, matched structurally from an anchor site."""

    name: str
    order: int
    instances: Callable  # (site, seq_at_anchor) -> iterable of (label, pattern, rhs_fn)
    description: str = ""


def _dots(pos: int, n: int) -> RawWord:
    return [(DOT, pos)] * n


def _dot_sum(mu_w: Weight, build: Callable[[int, int], RawWord], sign: int):
    """sign * sum_{u+v=mu-1} build(u, v); empty for generic weights."""
    if mu_w.generic:
        return []
    return [(DeltaPoly(sign), build(u, mu_w.value - 1 - u)) for u in range(mu_w.value)]


def _r2_instances(site, seq):
    kind, p = site
    if kind not in (BX, MX):
        return
    pattern = [(X, p), (X, p)]

    def rhs(lab, mu, mode):
        a, b = lab[p], lab[p + 1]
        if a == BLACK and b == BLACK:
            return []
        color = a or b
        w = mu[color - 1]
        dot_pos = p + 1 if a != BLACK else p
        if w.generic:
            return [] if mode == ZERO else [(DeltaPoly.delta(), [])]
        return [(DeltaPoly(1), _dots(dot_pos, w.value))]

    yield "R2", pattern, rhs


def _r3_instances(site, seq):
    kind, q = site
    if kind not in (BX, MX) or q < 1:
        return
    p = q - 1
    pattern = [(X, p + 1), (X, p), (X, p + 1)]

    def rhs(lab, mu, mode):
        terms = [(DeltaPoly(1), [(None, p), (None, p + 1), (None, p)])]
        mid = lab[p + 1]
        if mid != BLACK:
            terms += _dot_sum(mu[mid - 1], lambda u, v: _dots(p, u) + _dots(p + 2, v), -1)
        return terms

    yield "R3", pattern, rhs


def _dot_instances(site, seq):
    kind, d = site
    if kind != DOT:
        return

    def left(lab, mu, mode):
        main = (DeltaPoly(1), [(None, d), (DOT, d + 1)])
        if lab[d] == BLACK and lab[d + 1] == BLACK:
            return [main, (DeltaPoly(1), [])]
        return [main]

    def right(lab, mu, mode):
        main = (DeltaPoly(1), [(None, d - 1), (DOT, d - 1)])
        if lab[d - 1] == BLACK and lab[d] == BLACK:
            return [main, (DeltaPoly(-1), [])]
        return [main]

    yield "dot-left", [(DOT, d), (X, d)], left
    if d >= 1:
        yield "dot-right", [(DOT, d), (X, d - 1)], right


def _nail_instances(site, seq):
    kind, pos = site
    if kind == DOT and pos == 1:
        yield "nail-dot", [(DOT, 1), (NAIL, 0)], lambda lab, mu, mode: [(DeltaPoly(1), [(NAIL, 0), (DOT, 1)])]
    if kind == NAIL:
        yield "nail-nail", [(NAIL, 0), (NAIL, 0)], lambda lab, mu, mode: []

        def swap(lab, mu, mode):
            if lab[1] != BLACK or lab[2] != BLACK:
                return None
            return [(DeltaPoly(-1), [(BX, 1), (NAIL, 0), (BX, 1), (NAIL, 0)])]

        yield "nail-swap", [(NAIL, 0), (X, 1), (NAIL, 0), (X, 1)], swap


def loop_word(start: int) -> RawWord:
    """Strand at `start` crosses left to position 1, is nailed, and returns."""
    return ([(None, j) for j in range(start - 1, 0, -1)] + [(NAIL, 0)]
            + [(None, j) for j in range(1, start)])


def _loop_instances(site, seq):
    kind, j = site
    if kind not in (BX, MX) or j < 1:
        return
    ell = j - 1
    s = ell + 3
    pattern = [(X, ell + 1)] + [(X if k is None else k, p) for k, p in loop_word(s)]

    def rhs(lab, mu, mode):
        a, b = lab[ell + 1], lab[ell + 2]
        terms = [(DeltaPoly(1), loop_word(s) + [(None, ell + 1)])]
        if a == BLACK and b != BLACK:
            def t(u, v):
                return (_dots(ell + 1, u) + _dots(ell + 3, v)
                        + [(None, i) for i in range(ell, 0, -1)] + [(NAIL, 0)]
                        + [(None, i) for i in range(1, ell + 3)])
            terms += _dot_sum(mu[b - 1], t, 1)
        elif a != BLACK and b == BLACK:
            def t(u, v):
                return ([(None, i) for i in range(ell + 2, 0, -1)] + [(NAIL, 0)]
                        + [(None, i) for i in range(1, ell + 1)]
                        + _dots(ell + 1, u) + _dots(ell + 3, v))
            terms += _dot_sum(mu[a - 1], t, -1)
        return terms

    yield f"nail-loop[{ell}]", pattern, rhs


RULES: tuple[RewriteRule, ...] = (
    RewriteRule("R2", 0, _r2_instances, "double crossing"),
    RewriteRule("R3", 1, _r3_instances, "braid move, with dot-sum correction"),
    RewriteRule("dot", 2, _dot_instances, "dot slides through crossings"),
    RewriteRule("nail", 3, _nail_instances, "nail relations"),
    RewriteRule("loop", 4, _loop_instances, "crossing slides through a nail loop"),
)


@dataclass(frozen=True)
class Redex:
    rule: str
    family: int
    occurrence: tuple[int, ...]
    terms: tuple  # ((DeltaPoly, RawWord), ...)

    @property
    def key(self) -> tuple[int, int, int]:
        return (max(self.occurrence), self._leftmost, self.family)

    _leftmost: int = field(default=0, compare=False)


def resolve_word(seq, raw: RawWord) -> list[Site]:
    out = []
    for kind, pos in raw:
        if kind is None or kind == X:
            kind = crossing_kind(seq, pos)
        out.append((kind, pos))
        seq = apply_site(seq, (kind, pos))
    return out


# --- termination order --------------------------------------------------------


def _strand_ids(m: Monomial) -> list[list[int]]:
    ids = list(range(len(m.bottom)))
    out = [ids[:]]
    for kind, pos in m.sites:
        if kind in (BX, MX):
            ids[pos], ids[pos + 1] = ids[pos + 1], ids[pos]
        out.append(ids[:])
    return out


def weight_vector(m: Monomial) -> tuple[int, int, int, int]:
    """(a, b, c) termination weight plus the tiebreak d.

    d counts crossings on each nailed strand above its nail; it orders the
    nail-swap rule, which leaves (a, b, c) unchanged, and any context adds the
    same amount to both sides."""
    ids = _strand_ids(m)
    sites = m.sites
    a = sum(pos for kind, pos in sites if kind in (BX, MX))
    b = 0
    c = 0
    d = 0
    for h, (kind, pos) in enumerate(sites):
        if kind == DOT:
            s = ids[h][pos]
            for hh in range(h + 1, len(sites)):
                k2, p2 = sites[hh]
                if k2 in (BX, MX) and s in (ids[hh][p2], ids[hh][p2 + 1]):
                    b += 1
                elif k2 == NAIL and ids[hh][1] == s:
                    b += 1
        elif kind == NAIL:
            s = ids[h][1]
            for hh in range(h + 1, len(sites)):
                k2, p2 = sites[hh]
                if k2 in (BX, MX) and s in (ids[hh][p2], ids[hh][p2 + 1]):
                    d += 1
            for hh in range(h):
                k2, p2 = sites[hh]
                if k2 not in (BX, MX):
                    continue
                at = ids[hh].index(s)
                if p2 + 1 < at:
                    c += 1
    return a, b, c, d


def termination_weight(m: Monomial) -> tuple[int, int, int]:
    return weight_vector(m)[:3]


# --- the rewriting system -----------------------------------------------------


class RewriteSystem:
    """Rule set plus reduction strategy, delta mode and memo cache."""

    def __init__(self, delta_mode: str = KEEP, strategy: str = FIRST, loop_rules: bool = True,
                 check_descent: bool = False, budget: int = 200_000,
                 cache_dir: str | os.PathLike | None = None):
        if delta_mode not in (KEEP, ZERO):
            raise ValueError(f"unknown delta mode {delta_mode!r}")
        if strategy not in (FIRST, LAST):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.delta_mode = delta_mode
        self.strategy = strategy
        self.loop_rules = loop_rules
        self.check_descent = check_descent
        self.budget = budget
        self.rules = tuple(r for r in RULES if loop_rules or r.name != "loop")
        self._nf: dict[Monomial, Element] = {}
        self.steps = 0
        if cache_dir is None:
            cache_dir = os.environ.get("DGKLRW_CACHE_DIR") or None
        self.cache_dir = Path(cache_dir) if cache_dir else None

    # redex search

    def redexes(self, m: Monomial) -> list[Redex]:
        ctx = WordContext(m)
        found: dict[tuple, Redex] = {}
        for h, site in enumerate(ctx.sites):
            seq = ctx.seqs[h]
            for rule in self.rules:
                for label, pattern, rhs_fn in rule.instances(site, seq):
                    occ = ctx.embed(pattern, h)
                    if occ is None:
                        continue
                    split = ctx.split(occ)
                    if split is None:
                        continue
                    below, _ = split
                    lab = self._local_labels(ctx, occ)
                    terms = rhs_fn(lab, m.mu, self.delta_mode)
                    if terms is None:
                        continue
                    left = min(min(support(ctx.sites[i])) for i in occ)
                    key = (label, occ)
                    if key not in found:
                        found[key] = Redex(label, rule.order, occ, tuple(terms), left)
        return sorted(found.values(), key=lambda r: (r.key, r.rule, r.occurrence))

    @staticmethod
    def _local_labels(ctx: WordContext, occ: Sequence[int]) -> dict[int, int]:
        lab: dict[int, int] = {}
        for h in sorted(occ):
            for x in support(ctx.sites[h]):
                if x not in lab:
                    lab[x] = ctx.seqs[h][x]
        return lab

    def apply(self, m: Monomial, redex: Redex) -> Element:
        ctx = WordContext(m)
        below, rest = ctx.split(redex.occurrence)
        seq = m.bottom
        prefix = [ctx.sites[h] for h in below]
        for s in prefix:
            seq = apply_site(seq, s)
        suffix = [ctx.sites[h] for h in rest]
        pairs = []
        for coeff, raw in redex.terms:
            if self.delta_mode == ZERO:
                coeff = DeltaPoly(coeff.at_zero())
                if not coeff:
                    continue
            word = prefix + resolve_word(seq, raw) + suffix
            pairs.append((Monomial(m.mu, m.bottom, word), coeff))
        out = Element.accumulate(pairs)
        if self.check_descent:
            w0 = weight_vector(m)
            for t in out.terms:
                if not weight_vector(t) < w0:
                    raise DescentViolation(f"{redex.rule}: {m!r} -> {t!r} does not decrease {w0}")
        return out

    def reduce_once(self, m: Monomial) -> Element | None:
        found = self.redexes(m)
        if not found:
            return None
        redex = found[0] if self.strategy == FIRST else found[-1]
        self.steps += 1
        return self.apply(m, redex)

    def is_normal(self, m: Monomial) -> bool:
        return not self.redexes(m)

    # normal forms

    def _disk_path(self, m: Monomial) -> Path | None:
        if self.cache_dir is None:
            return None
        tag = f"{self.delta_mode}|{int(self.loop_rules)}|".encode() + m.encode()
        return self.cache_dir / (hashlib.sha256(tag).hexdigest() + ".json")

    def normal_form_monomial(self, m: Monomial) -> Element:
        hit = self._nf.get(m)
        if hit is not None:
            return hit
        path = self._disk_path(m)
        if path is not None and path.exists():
            out = Element.from_json(json.loads(path.read_text()), m.mu)
            self._nf[m] = out
            return out
        out = self._compute(m)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(out.to_json(m.mu), sort_keys=True))
        return out

    def _compute(self, root: Monomial) -> Element:
        # explicit stack: (monomial, reduct or None)
        stack: list[tuple[Monomial, Element | None]] = [(root, None)]
        budget = self.budget
        while stack:
            m, reduct = stack[-1]
            if m in self._nf:
                stack.pop()
                continue
            if reduct is None:
                reduct = self.reduce_once(m)
                budget -= 1
                if budget < 0:
                    raise BudgetExceeded(f"step budget exceeded reducing {root!r}")
                if reduct is None:
                    self._nf[m] = Element.of(m)
                    stack.pop()
                    continue
                stack[-1] = (m, reduct)
                pending = [t for t in reduct.terms if t not in self._nf]
                if pending:
                    stack.extend((t, None) for t in pending)
                    continue
            pairs = []
            for t, c in reduct.terms.items():
                for u, cu in self._nf[t].terms.items():
                    pairs.append((u, c * cu))
            self._nf[m] = Element.accumulate(pairs)
            stack.pop()
        return self._nf[root]

    def normal_form(self, e: Element | Monomial) -> Element:
        if isinstance(e, Monomial):
            return self.normal_form_monomial(e)
        if self.delta_mode == ZERO:
            e = e.specialize_delta0()
        pairs = []
        for m, c in e.terms.items():
            for u, cu in self.normal_form_monomial(m).terms.items():
                pairs.append((u, c * cu))
        return Element.accumulate(pairs)

    def product(self, upper: Element | Monomial, lower: Element | Monomial) -> Element:
        """Normal form of upper * lower."""
        upper = Element.of(upper) if isinstance(upper, Monomial) else upper
        lower = Element.of(lower) if isinstance(lower, Monomial) else lower
        return self.normal_form(upper * lower)


_SYSTEMS: dict[tuple, RewriteSystem] = {}


def system(delta_mode: str = KEEP, strategy: str = FIRST, loop_rules: bool = True) -> RewriteSystem:
    key = (delta_mode, strategy, loop_rules)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = RewriteSystem(delta_mode, strategy, loop_rules)
    return _SYSTEMS[key]


def reduce_once(m: Monomial, delta_mode: str = KEEP) -> Element | None:
    return system(delta_mode).reduce_once(m)


def normal_form(e: Element | Monomial, delta_mode: str = KEEP) -> Element:
    return system(delta_mode).normal_form(e)
