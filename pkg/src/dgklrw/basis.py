"""Basis of 1_kappa T 1_rho: permutation diagrams, nail profiles and dots,
plus graded dimension series."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator, Sequence

from .diagrams import (
    BLACK, DOT, NAIL, Monomial, Weight, apply_site, black_positions, compositions,
    crossing_kind, sequence_of,
)
from .scalars import GradingVector, LaurentQL, QLSeries


@dataclass(frozen=True)
class PermDiagram:
    """Wiring from the bottom sequence 1_rho to the top sequence 1_kappa.

    `targets[i]` is the top position of the strand starting at bottom position i.
    """

    bottom: tuple[int, ...]
    top: tuple[int, ...]
    targets: tuple[int, ...]

    @property
    def word(self) -> tuple[tuple[int, int], ...]:
        return left_adjusted_word(self.bottom, self.targets)

    def length(self) -> int:
        return len(self.word)


def left_adjusted_word(bottom: Sequence[int], targets: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Reduced word with least index sum: place the strand bound for the rightmost
    free slot first, at the bottom, then recurse on the strands to its left."""
    n = len(targets)
    cur = list(range(n))  # strand ids by current position
    by_target = {t: s for s, t in enumerate(targets)}
    seq = tuple(bottom)
    word = []
    for k in range(n - 1, 0, -1):
        i = cur.index(by_target[k])
        for p in range(i, k):
            site = (crossing_kind(seq, p), p)
            word.append(site)
            seq = apply_site(seq, site)
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
    return tuple(word)


def enumerate_permutation_diagrams(kappa: Sequence[int], rho: Sequence[int]) -> list[PermDiagram]:
    """All wirings rho -> kappa with colored strands fixed in order."""
    bottom, top = sequence_of(rho), sequence_of(kappa)
    if len(bottom) != len(top) or len(rho) != len(kappa):
        return []
    bb, tb = black_positions(bottom), black_positions(top)
    bc = [i for i, lab in enumerate(bottom) if lab != BLACK]
    tc = [i for i, lab in enumerate(top) if lab != BLACK]
    out = []
    for perm in permutations(range(len(bb))):
        targets = [0] * len(bottom)
        for i, j in zip(bc, tc):
            targets[i] = j
        for k, j in enumerate(perm):
            targets[bb[k]] = tb[j]
        out.append(PermDiagram(bottom, top, tuple(targets)))
    out.sort(key=lambda w: (len(w.word), w.word))
    return out


@dataclass(frozen=True)
class BasisKey:
    """(w, l, a): l and a are indexed by top black strands, left to right."""

    w: PermDiagram
    l: tuple[int, ...]
    a: tuple[int, ...]

    def to_json(self) -> dict:
        return {"targets": list(self.w.targets), "l": list(self.l), "a": list(self.a)}


def _trajectories(bottom, word):
    """positions[h][strand] before site h, for h = 0..len(word)."""
    n = len(bottom)
    pos = list(range(n))
    ids = list(range(n))
    out = [tuple(pos)]
    for kind, p in word:
        if kind not in (DOT, NAIL):
            a, b = ids[p], ids[p + 1]
            ids[p], ids[p + 1] = b, a
            pos[a], pos[b] = p + 1, p
        out.append(tuple(pos))
    return out, ids


def build_basis_element(mu: Sequence[Weight], key: BasisKey) -> Monomial:
    w = key.w
    word = list(w.word)
    traj, top_ids = _trajectories(w.bottom, word)
    top_blacks = black_positions(w.top)
    nailed = [top_ids[top_blacks[i]] for i, bit in enumerate(key.l) if bit]
    # Each loop sits at the bottom of the window where its strand is leftmost,
    # but never below a loop already placed for a strand further right
    # unless its window closes first.
    windows = []
    for s in nailed:
        path = [traj[h][s] for h in range(len(word) + 1)]
        lo = min(path)
        if lo < 1:
            raise AssertionError("a black strand cannot reach the leftmost position")
        first = path.index(lo)
        last = first
        while last + 1 < len(path) and path[last + 1] == lo:
            last += 1
        windows.append((lo, first, last, s))
    inserts: dict[int, list[int]] = {}
    floor = 0
    for lo, first, last, s in sorted(windows, key=lambda t: (-t[0], t[1])):
        h = min(max(first, floor), last)
        inserts.setdefault(h, []).append(s)
        floor = max(floor, h)
    sites = []
    seq = w.bottom
    for h in range(len(word) + 1):
        for s in inserts.get(h, []):
            start = traj[h][s]
            raw = [(None, j) for j in range(start - 1, 0, -1)] + [(NAIL, 0)]
            raw += [(None, j) for j in range(1, start)]
            for kind, p in raw:
                site = (crossing_kind(seq, p) if kind is None else kind, p)
                sites.append(site)
                seq = apply_site(seq, site)
        if h < len(word):
            sites.append(word[h])
            seq = apply_site(seq, word[h])
    for i, n in enumerate(key.a):
        sites.extend([(DOT, top_blacks[i])] * n)
    return Monomial(mu, w.bottom, sites)


def _dot_vectors(b: int, max_total: int) -> Iterator[tuple[int, ...]]:
    if b == 0:
        yield ()
        return
    for total in range(max_total + 1):
        yield from _exact(total, b)


def _exact(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _exact(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class BasisEntry:
    key: BasisKey
    monomial: Monomial
    degree: GradingVector


def enumerate_basis(mu: Sequence[Weight], kappa: Sequence[int], rho: Sequence[int],
                    qcap: int) -> list[BasisEntry]:
    """All basis elements of 1_kappa T 1_rho with q-degree < qcap, in stable order."""
    mu = tuple(mu)
    out = []
    for w in enumerate_permutation_diagrams(kappa, rho):
        b = len(black_positions(w.top))
        for l in product((0, 1), repeat=b):
            base = build_basis_element(mu, BasisKey(w, l, (0,) * b))
            d0 = base.degree()
            if d0.q >= qcap:
                continue
            for a in _dot_vectors(b, (qcap - 1 - d0.q) // 2):
                key = BasisKey(w, l, a)
                m = build_basis_element(mu, key) if any(a) else base
                out.append(BasisEntry(key, m, d0 + GradingVector(0, 2 * sum(a), 0)))
    out.sort(key=lambda e: (e.degree.q, e.degree.h, e.degree.l, e.key.w.word, e.key.l, e.key.a))
    return out


@dataclass
class PoincareSeries:
    """Graded dimension with h kept as a separate marker: {h: q,lambda-series}."""

    order: int
    by_h: dict[int, QLSeries]

    def euler(self) -> QLSeries:
        total = QLSeries(self.order)
        for h, s in self.by_h.items():
            total = total + (s if h % 2 == 0 else -s)
        return total

    def __eq__(self, other):
        if not isinstance(other, PoincareSeries):
            return NotImplemented
        hs = set(self.by_h) | set(other.by_h)
        empty = QLSeries(min(self.order, other.order))
        return all(self.by_h.get(h, empty) == other.by_h.get(h, empty) for h in hs)

    def __str__(self):
        if not self.by_h:
            return f"0 + O(q^{self.order})"
        return " + ".join(f"h^{h}*({s.poly})" for h, s in sorted(self.by_h.items())) + f" + O(q^{self.order})"


def graded_dimension(mu: Sequence[Weight], kappa: Sequence[int], rho: Sequence[int], qcap: int,
                     mode: str = "poincare"):
    entries = enumerate_basis(mu, kappa, rho, qcap)
    if mode == "euler":
        acc: dict[tuple[int, int], int] = {}
        for e in entries:
            k = (e.degree.q, e.degree.l)
            acc[k] = acc.get(k, 0) + (-1) ** e.degree.h
        return QLSeries(qcap, LaurentQL(acc))
    if mode != "poincare":
        raise ValueError(f"unknown mode {mode!r}")
    by_h: dict[int, dict] = {}
    for e in entries:
        k = (e.degree.q, e.degree.l)
        d = by_h.setdefault(e.degree.h, {})
        d[k] = d.get(k, 0) + 1
    return PoincareSeries(qcap, {h: QLSeries(qcap, LaurentQL(d)) for h, d in by_h.items()})


def lowest_q_degree(mu: Sequence[Weight], rho: Sequence[int]) -> int:
    """Least q-exponent among basis elements of T_b 1_rho (dots only raise it)."""
    mu = tuple(mu)
    best = 0
    for kappa in compositions(sum(rho), len(rho)):
        for w in enumerate_permutation_diagrams(kappa, rho):
            b = len(black_positions(w.top))
            for l in product((0, 1), repeat=b):
                best = min(best, build_basis_element(mu, BasisKey(w, l, (0,) * b)).degree().q)
    return best
