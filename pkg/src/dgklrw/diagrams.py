"""Diagram model: weights, strand sequences, generator stacks and their
canonical form modulo braid-like isotopy.

A strand sequence is a tuple of labels: 0 for a black strand, i >= 1 for the
i-th colored strand. A monomial is a stack of sites (kind, pos) read bottom to
top; positions index the running sequence at the height of the site.
Two sites commute iff their supports are disjoint, and a commutation never
changes any position, so a monomial is a trace and its canonical form is the
greedy lexicographically least linearization.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import DeltaPoly, GradingVector

BLACK = 0

DOT, NAIL, BX, MX = 0, 1, 2, 3
KIND_NAMES = {DOT: "Dot", NAIL: "Nail", BX: "BlackCrossing", MX: "MixedCrossing"}
KIND_CODES = {v: k for k, v in KIND_NAMES.items()}
KIND_CODES.update({"D": DOT, "N": NAIL, "BX": BX, "MX": MX})
CROSSING_ALIASES = {"Crossing", "X"}

Site = tuple[int, int]
Sequence_ = tuple[int, ...]


class DiagramError(ValueError):
    """Invalid diagram data; the message names the violated invariant."""


@dataclass(frozen=True, order=True)
class Weight:
    """Integral weight n >= 0, or generic weight beta + z."""

    generic: bool
    value: int

    def __post_init__(self):
        if not self.generic and self.value < 0:
            raise DiagramError("integral weight must be nonnegative")

    @classmethod
    def integral(cls, n: int) -> "Weight":
        return cls(False, n)

    @classmethod
    def beta(cls, z: int = 0) -> "Weight":
        return cls(True, z)

    @classmethod
    def parse(cls, token: str) -> "Weight":
        token = token.strip()
        if len(token) < 2 or token[0] not in "ig":
            raise DiagramError(f"bad weight token {token!r} (expected iN or gZ)")
        try:
            value = int(token[1:])
        except ValueError as exc:
            raise DiagramError(f"bad weight token {token!r}") from exc
        return cls(token[0] == "g", value)

    @property
    def is_integral(self) -> bool:
        return not self.generic

    def grading(self) -> tuple[int, int]:
        """(q, lambda) exponents of q^weight."""
        return (self.value, 1) if self.generic else (self.value, 0)

    def token(self) -> str:
        return ("g" if self.generic else "i") + str(self.value)

    def to_json(self) -> dict:
        return {"type": "generic" if self.generic else "integral", "value": self.value}

    @classmethod
    def from_json(cls, data: Mapping) -> "Weight":
        kind = data.get("type")
        if kind not in ("integral", "generic"):
            raise DiagramError(f"bad weight type {kind!r}")
        return cls(kind == "generic", int(data["value"]))

    def __str__(self):
        if self.generic:
            return "b" if self.value == 0 else f"b{self.value:+d}"
        return str(self.value)


def parse_weights(text: str) -> tuple[Weight, ...]:
    return tuple(Weight.parse(t) for t in text.split(",") if t.strip())


# --- strand sequences and compositions ---------------------------------------


def sequence_of(rho: Sequence[int]) -> Sequence_:
    """Strand sequence of the idempotent 1_rho: mu_1, b_1 blacks, mu_2, ..."""
    if len(rho) < 1:
        raise DiagramError("composition must have at least one part")
    seq: list[int] = []
    for i, b in enumerate(rho, start=1):
        if b < 0:
            raise DiagramError("composition parts must be nonnegative")
        seq.append(i)
        seq.extend([BLACK] * b)
    return tuple(seq)


def composition_of(seq: Sequence[int]) -> tuple[int, ...]:
    parts: list[int] = []
    for lab in seq:
        if lab == BLACK:
            if not parts:
                raise DiagramError("leftmost strand not colored")
            parts[-1] += 1
        else:
            parts.append(0)
    return tuple(parts)


def compositions(b: int, r: int) -> list[tuple[int, ...]]:
    """All weak compositions of b into r parts, lexicographically decreasing."""
    if r == 1:
        return [(b,)]
    out = []
    for first in range(b, -1, -1):
        for rest in compositions(b - first, r - 1):
            out.append((first,) + rest)
    return out


def admissible(rho: Sequence[int], mu: Sequence[Weight]) -> bool:
    """rho in P^{r,mu}_b: parts capped at integral weights."""
    return all(w.generic or b <= w.value for b, w in zip(rho, mu))


def support(site: Site) -> tuple[int, ...]:
    kind, pos = site
    if kind == DOT:
        return (pos,)
    if kind == NAIL:
        return (0, 1)
    return (pos, pos + 1)


def apply_site(seq: Sequence_, site: Site) -> Sequence_:
    kind, pos = site
    if kind in (BX, MX):
        s = list(seq)
        s[pos], s[pos + 1] = s[pos + 1], s[pos]
        return tuple(s)
    return tuple(seq)


def site_problem(seq: Sequence_, site: Site) -> str | None:
    kind, pos = site
    n = len(seq)
    if kind == DOT:
        if not 0 <= pos < n:
            return f"dot position {pos} out of range"
        if seq[pos] != BLACK:
            return "dot on a colored strand"
        return None
    if kind == NAIL:
        if pos != 0:
            return "nail must act on positions (0, 1)"
        if n < 2 or seq[1] != BLACK:
            return "nail needs a black strand at position 1"
        return None
    if kind in (BX, MX):
        if not 0 <= pos < n - 1:
            return f"crossing position {pos} out of range"
        if pos == 0:
            return "leftmost strand not colored"
        a, b = seq[pos], seq[pos + 1]
        if a != BLACK and b != BLACK:
            return "crossing between two colored strands"
        if kind == BX and (a != BLACK or b != BLACK):
            return "black crossing on a colored strand"
        if kind == MX and a == BLACK and b == BLACK:
            return "mixed crossing between two black strands"
        return None
    return f"unknown generator kind {kind!r}"


def crossing_kind(seq: Sequence_, pos: int) -> int:
    return BX if seq[pos] == BLACK and seq[pos + 1] == BLACK else MX


def sequence_problem(seq: Sequence_, r: int | None = None) -> str | None:
    if not seq or seq[0] == BLACK:
        return "leftmost strand not colored"
    colors = [lab for lab in seq if lab != BLACK]
    if colors != list(range(1, len(colors) + 1)):
        return "colored strands out of order"
    if r is not None and len(colors) != r:
        return f"expected {r} colored strands, found {len(colors)}"
    return None


def canonical_sites(sites: Sequence[Site]) -> tuple[Site, ...]:
    """Greedy least linearization of the dependency order of the sites."""
    n = len(sites)
    if n < 2:
        return tuple(sites)
    last_on: dict[int, int] = {}
    indeg = [0] * n
    succs: list[list[int]] = [[] for _ in range(n)]
    for j, site in enumerate(sites):
        preds = set()
        for x in support(site):
            i = last_on.get(x)
            if i is not None:
                preds.add(i)
            last_on[x] = j
        for i in preds:
            succs[i].append(j)
        indeg[j] = len(preds)
    heap = [(min(support(s)), s[0], j) for j, s in enumerate(sites) if indeg[j] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, _, j = heapq.heappop(heap)
        out.append(sites[j])
        for k in succs[j]:
            indeg[k] -= 1
            if indeg[k] == 0:
                s = sites[k]
                heapq.heappush(heap, (min(support(s)), s[0], k))
    return tuple(out)


def generator_degree(mu: Sequence[Weight], seq: Sequence_, site: Site) -> GradingVector:
    kind, pos = site
    if kind == DOT:
        return GradingVector(0, 2, 0)
    if kind == BX:
        return GradingVector(0, -2, 0)
    if kind == MX:
        color = seq[pos] or seq[pos + 1]
        qe, le = mu[color - 1].grading()
        return GradingVector(0, qe, le)
    qe, le = mu[0].grading()
    return GradingVector(1, 2 * qe, 2 * le)


class Monomial:
    """A stack of generator sites over a bottom strand sequence, in canonical form."""

    __slots__ = ("mu", "bottom", "sites", "_top", "_hash", "_degree")

    def __init__(self, mu: Sequence[Weight], bottom: Sequence[int], sites: Iterable[Site] = (),
                 *, canonical: bool = False):
        self.mu = tuple(mu)
        self.bottom = tuple(bottom)
        sites = tuple((int(k), int(p)) for k, p in sites)
        self.sites = sites if canonical else canonical_sites(sites)
        self._top = None
        self._hash = None
        self._degree = None

    @classmethod
    def build(cls, mu: Sequence[Weight], bottom: Sequence[int], sites: Iterable[Site] = ()) -> "Monomial":
        """Validated constructor; raises DiagramError with the first problem."""
        m = cls.__new__(cls)
        m.mu, m.bottom = tuple(mu), tuple(bottom)
        m.sites = tuple((int(k), int(p)) for k, p in sites)
        m._top = m._hash = m._degree = None
        problem = validate_monomial(m)
        if problem:
            raise DiagramError(problem)
        return cls(mu, bottom, m.sites)

    @classmethod
    def identity(cls, mu: Sequence[Weight], rho: Sequence[int]) -> "Monomial":
        return cls(mu, sequence_of(rho), (), canonical=True)

    @property
    def top(self) -> Sequence_:
        if self._top is None:
            seq = self.bottom
            for s in self.sites:
                seq = apply_site(seq, s)
            self._top = seq
        return self._top

    @property
    def rho(self) -> tuple[int, ...]:
        """Bottom composition."""
        return composition_of(self.bottom)

    @property
    def kappa(self) -> tuple[int, ...]:
        """Top composition."""
        return composition_of(self.top)

    def sequences(self) -> list[Sequence_]:
        """Running sequence before each site, followed by the top sequence."""
        out = [self.bottom]
        for s in self.sites:
            out.append(apply_site(out[-1], s))
        return out

    def degree(self) -> GradingVector:
        if self._degree is None:
            g = GradingVector()
            seq = self.bottom
            for s in self.sites:
                g = g + generator_degree(self.mu, seq, s)
                seq = apply_site(seq, s)
            self._degree = g
        return self._degree

    def __len__(self):
        return len(self.sites)

    def key(self):
        return (self.bottom, self.sites)

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.bottom == other.bottom and self.sites == other.sites and self.mu == other.mu

    def __lt__(self, other: "Monomial"):
        return (len(self.sites), self.bottom, self.sites) < (len(other.sites), other.bottom, other.sites)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.mu, self.bottom, self.sites))
        return self._hash

    def encode(self) -> bytes:
        """Canonical byte encoding used as a cache key."""
        mu = ",".join(w.token() for w in self.mu)
        bottom = ",".join(map(str, self.bottom))
        sites = ";".join(f"{k}:{p}" for k, p in self.sites)
        return f"{mu}|{bottom}|{sites}".encode()

    def __repr__(self):
        short = {DOT: "D", NAIL: "N", BX: "BX", MX: "MX"}
        body = " ".join(f"{short[k]}{p}" for k, p in self.sites)
        return f"<{composition_of(self.bottom)}: {body or 'id'}>"

    def to_json(self) -> dict:
        return {
            "rho": list(composition_of(self.bottom)),
            "sites": [{"kind": KIND_NAMES[k], "pos": p} for k, p in self.sites],
        }

    @classmethod
    def from_json(cls, mu: Sequence[Weight], data: Mapping) -> "Monomial":
        bottom = sequence_of(data["rho"])
        seq = bottom
        sites = []
        for entry in data.get("sites", []):
            name, pos = entry["kind"], int(entry["pos"])
            if name in CROSSING_ALIASES:
                if not 0 <= pos < len(seq) - 1:
                    raise DiagramError(f"crossing position {pos} out of range")
                kind = crossing_kind(seq, pos)
            elif name in KIND_CODES:
                kind = KIND_CODES[name]
            else:
                raise DiagramError(f"unknown generator kind {name!r}")
            sites.append((kind, pos))
            seq = apply_site(seq, (kind, pos))
        return cls.build(mu, bottom, sites)


def validate_monomial(m: Monomial) -> str | None:
    """None if valid, else a diagnostic naming the first violated invariant."""
    problem = sequence_problem(m.bottom, len(m.mu))
    if problem:
        return problem
    seq = m.bottom
    for h, s in enumerate(m.sites):
        problem = site_problem(seq, s)
        if problem:
            return f"{problem} at height {h}"
        seq = apply_site(seq, s)
    return None


def degree(m: Monomial) -> GradingVector:
    return m.degree()


def canonical_form(m: Monomial) -> Monomial:
    return Monomial(m.mu, m.bottom, m.sites)


def compose(upper: Monomial, lower: Monomial) -> Monomial | None:
    """upper stacked on lower (the algebra product upper*lower); None is zero."""
    if lower.top != upper.bottom or lower.mu != upper.mu:
        return None
    return Monomial(lower.mu, lower.bottom, lower.sites + upper.sites)


def flip(m: Monomial) -> Monomial:
    """Vertical mirror image."""
    return Monomial(m.mu, m.top, tuple(reversed(m.sites)))


def black_positions(seq: Sequence_) -> list[int]:
    return [i for i, lab in enumerate(seq) if lab == BLACK]


def loop_sites(start: int) -> list[Site]:
    """Labels-free loop of the strand at `start`: left to position 1, nail, back."""
    down = [(None, j) for j in range(start - 1, 0, -1)]
    return down + [(NAIL, 0)] + [(None, j) for j in range(1, start)]


def resolve(seq: Sequence_, raw: Iterable[tuple[int | None, int]]) -> list[Site]:
    """Fill in crossing kinds (None) from the running sequence."""
    out = []
    for kind, pos in raw:
        if kind is None:
            kind = crossing_kind(seq, pos)
        out.append((kind, pos))
        seq = apply_site(seq, (kind, pos))
    return out


def theta(mu: Sequence[Weight], k: int, rho: Sequence[int], p: int = 0) -> Monomial:
    """Tightened nail on the k-th black strand of 1_rho, with p dots at the nail."""
    seq = sequence_of(rho)
    blacks = black_positions(seq)
    if not 1 <= k <= len(blacks):
        raise DiagramError(f"theta index k={k} out of range 1..{len(blacks)}")
    start = blacks[k - 1]
    raw = [(None, j) for j in range(start - 1, 0, -1)] + [(NAIL, 0)]
    raw += [(DOT, 1)] * p + [(None, j) for j in range(1, start)]
    return Monomial(mu, seq, resolve(seq, raw))


# --- linear combinations ------------------------------------------------------


class Element:
    """Finite sum of monomials with delta-polynomial coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, DeltaPoly | int] | None = None):
        clean: dict[Monomial, DeltaPoly] = {}
        if terms:
            for m, c in terms.items():
                c = DeltaPoly(c) if isinstance(c, int) else c
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def of(cls, m: Monomial | None, coeff: DeltaPoly | int = 1) -> "Element":
        return cls() if m is None else cls({m: coeff})

    @classmethod
    def accumulate(cls, pairs: Iterable[tuple[Monomial, DeltaPoly | int]]) -> "Element":
        acc: dict[Monomial, DeltaPoly] = {}
        for m, c in pairs:
            c = DeltaPoly(c) if isinstance(c, int) else c
            prev = acc.get(m)
            acc[m] = c if prev is None else prev + c
        return cls(acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Monomial, DeltaPoly]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0]))

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms)

    def coefficient(self, m: Monomial) -> DeltaPoly:
        return self.terms.get(m, DeltaPoly())

    def __add__(self, other: "Element") -> "Element":
        return Element.accumulate(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "Element":
        return Element({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: DeltaPoly | int) -> "Element":
        return Element({m: v * c for m, v in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, DeltaPoly)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        """self stacked on top of other."""
        if isinstance(other, (int, DeltaPoly)):
            return self.scale(other)
        if isinstance(other, Monomial):
            other = Element.of(other)
        if not isinstance(other, Element):
            return NotImplemented
        pairs = []
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m = compose(a, b)
                if m is not None:
                    pairs.append((m, ca * cb))
        return Element.accumulate(pairs)

    def specialize_delta0(self) -> "Element":
        return Element({m: DeltaPoly(c.at_zero()) for m, c in self.terms.items()})

    def degrees(self) -> set[GradingVector]:
        return {m.degree() for m in self.terms}

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Element(0)"
        return "Element(" + " + ".join(f"({c})*{m!r}" for m, c in self) + ")"

    def to_json(self, mu: Sequence[Weight] | None = None) -> dict:
        if mu is None:
            mu = next(iter(self.terms)).mu if self.terms else ()
        return {
            "mu": [w.to_json() for w in mu],
            "terms": [dict(m.to_json(), coeff=c.to_json()) for m, c in self],
        }

    @classmethod
    def from_json(cls, data: Mapping, mu: Sequence[Weight] | None = None) -> "Element":
        if mu is None:
            mu = tuple(Weight.from_json(w) for w in data["mu"])
        if "terms" not in data:
            return cls.of(Monomial.from_json(mu, data))
        return cls.accumulate(
            (Monomial.from_json(mu, t), DeltaPoly.from_json(t.get("coeff", 1)))
            for t in data["terms"]
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)
