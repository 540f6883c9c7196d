"""Named diagram identities, each checked by reducing both sides to normal form."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .diagrams import (
    BLACK, DOT, NAIL, Element, Monomial, Weight, resolve, theta,
)
from .rewriting import RewriteSystem, system

Raw = list[tuple[int | None, int]]

DEFAULT_WEIGHTS = (Weight.integral(0), Weight.integral(1), Weight.integral(2), Weight.beta(0))


@dataclass(frozen=True)
class IdentityBounds:
    max_gap: int = 2          # dashed strands between the nail and the active strands
    max_dots: int = 3         # p, dots carried by a nailed strand
    max_slide_dots: int = 3   # N or u, dots slid across crossings or nails
    max_crossings: int = 3    # k, strands crossed
    max_black: int = 4        # cap for the omega and theta families
    weights: tuple[Weight, ...] = DEFAULT_WEIGHTS


@dataclass
class IdentityCase:
    name: str
    left: Element
    right: Element
    params: dict = field(default_factory=dict)


@dataclass
class IdentityFailure:
    case: IdentityCase
    left_nf: Element
    right_nf: Element


@dataclass
class IdentityReport:
    checked: int
    by_family: dict[str, int]
    failures: list[IdentityFailure]

    @property
    def ok(self) -> bool:
        return not self.failures


def _crossings(start: int, stop: int) -> Raw:
    """Strand at `start` moves one step at a time to `stop`."""
    step = -1 if stop < start else 1
    if step < 0:
        return [(None, j) for j in range(start - 1, stop - 1, -1)]
    return [(None, j) for j in range(start, stop)]


def _dots(pos: int, n: int) -> Raw:
    return [(DOT, pos)] * n


def _mono(mu: Sequence[Weight], bottom: Sequence[int], raw: Raw) -> Monomial:
    return Monomial.build(mu, bottom, resolve(bottom, raw))


def _el(mu, bottom, raw: Raw, coeff: int = 1) -> Element:
    return Element.of(_mono(mu, bottom, raw), coeff)


def _gap_layouts(gap: int, weights: Sequence[Weight]) -> Iterator[tuple[tuple[Weight, ...], tuple[int, ...]]]:
    """(mu, bottom) for mu_1 followed by `gap` dashed strands.

    Dashed strands range over black and every colored weight in the palette."""
    for mu1 in weights:
        for kinds in product([None, *weights], repeat=gap):
            mu = [mu1]
            seq = [1]
            for k in kinds:
                if k is None:
                    seq.append(BLACK)
                else:
                    mu.append(k)
                    seq.append(len(mu))
            yield tuple(mu), tuple(seq)


# --- families -----------------------------------------------------------------


def double_nail_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """A strand nailed twice with p dots between the visits is zero."""
    for gap in range(bounds.max_gap + 1):
        for mu, seq in _gap_layouts(gap, bounds.weights):
            bottom = seq + (BLACK,)
            s = len(bottom) - 1
            for p in range(bounds.max_dots + 1):
                loop = _crossings(s, 1) + [(NAIL, 0)] + _crossings(1, s)
                raw = loop + _dots(s, p) + loop
                yield IdentityCase("double-nail", _el(mu, bottom, raw), Element(),
                                   {"gap": gap, "p": p, "mu": [w.token() for w in mu]})


def nail_crossing_nail_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """Two strands each nailed once, with a crossing between and around the nails, is zero."""
    for mu1 in bounds.weights:
        for extra in range(2):
            bottom = (1,) + (BLACK,) * (2 + extra)
            raw = [(None, 1), (NAIL, 0), (None, 1), (NAIL, 0), (None, 1)]
            yield IdentityCase("nail-crossing-nail", _el((mu1,), bottom, raw), Element(),
                               {"mu": mu1.token(), "extra": extra})


def dot_slide_crossings_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """u dots slide from the top to the bottom of a strand crossing k strands leftwards."""
    mu = (bounds.weights[0],)
    for k in range(1, bounds.max_crossings + 1):
        bottom = (1,) + (BLACK,) * (k + 1)
        base, top = 1, 1 + k
        for u in range(bounds.max_slide_dots + 1):
            left = _el(mu, bottom, _crossings(top, base) + _dots(base, u))
            right = _el(mu, bottom, _dots(top, u) + _crossings(top, base))
            for ell in range(k):
                for s in range(u):
                    t = u - 1 - s
                    raw = (_dots(top, t) + _crossings(top, base + ell + 1)
                           + _crossings(base + ell, base) + _dots(base, s))
                    right = right + _el(mu, bottom, raw)
            yield IdentityCase("dot-slide-crossings", left, right, {"k": k, "u": u})


def _nail_train(k: int) -> Raw:
    """Strand D at 1 passes under k strands, each pulled to the nail in turn."""
    raw: Raw = []
    for j in range(1, k + 1):
        raw += _crossings(j + 1, 1) + [(NAIL, 0)]
    return raw


def dot_slide_nails_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """N dots slide along a strand passing k nailed strands."""
    for mu1 in bounds.weights:
        mu = (mu1,)
        for k in range(1, bounds.max_crossings + 1):
            bottom = (1,) + (BLACK,) * (k + 1)
            for n in range(bounds.max_slide_dots + 1):
                left = _el(mu, bottom, _dots(1, n) + _nail_train(k))
                right = _el(mu, bottom, _nail_train(k) + _dots(k + 1, n))
                for ell in range(k):
                    for u in range(n):
                        v = n - 1 - u
                        raw = _crossings(ell + 2, k + 1) + _dots(k + 1, v) + [(NAIL, 0)]
                        for i in range(1, ell + 1):
                            raw += _crossings(i + 1, 1) + [(NAIL, 0)]
                        raw += _dots(ell + 1, u) + _crossings(ell + 1, 1)
                        for j in range(ell + 2, k + 1):
                            raw += _crossings(j, 1) + [(NAIL, 0)]
                        right = right + _el(mu, bottom, raw, (-1) ** ell)
                yield IdentityCase("dot-slide-nails", left, right,
                                   {"mu": mu1.token(), "k": k, "N": n})


def nailed_r3_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """A crossing of two strands commutes past a dotted nail loop of a third strand."""
    for gap in range(bounds.max_gap + 1):
        for mu, seq in _gap_layouts(gap, bounds.weights):
            bottom = seq + (BLACK,) * 3
            s = len(bottom) - 1
            c = s - 2
            for p in range(bounds.max_dots + 1):
                loop = _crossings(s, 1) + [(NAIL, 0)] + _dots(1, p) + _crossings(1, s)
                left = _el(mu, bottom, [(None, c)] + loop)
                right = _el(mu, bottom, loop + [(None, c)])
                yield IdentityCase("nailed-R3", left, right,
                                   {"gap": gap, "p": p, "mu": [w.token() for w in mu]})


def _omega(j: int) -> Raw:
    return _crossings(j, 1) + [(NAIL, 0)]


def omega_exchange_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """omega_i omega_j = 0 for i = 1, and -tau_1 omega_j omega_{i-1} for 1 < i <= j."""
    for mu1 in bounds.weights:
        mu = (mu1,)
        for b in range(1, bounds.max_black + 1):
            bottom = (1,) + (BLACK,) * b
            for j in range(1, b + 1):
                for i in range(1, j + 1):
                    left = _el(mu, bottom, _omega(j) + _omega(i))
                    if i == 1:
                        right = Element()
                    else:
                        right = _el(mu, bottom, _omega(i - 1) + _omega(j) + [(None, 1)], -1)
                    yield IdentityCase("omega-exchange", left, right,
                                       {"mu": mu1.token(), "b": b, "i": i, "j": j})


def theta_cases(bounds: IdentityBounds) -> Iterator[IdentityCase]:
    """Tightened nails anticommute and square to zero."""
    for mu1 in bounds.weights:
        mu = (mu1,)
        for b in range(1, bounds.max_black + 1):
            rho = (b,)
            for k in range(1, b + 1):
                for ell in range(k, b + 1):
                    tk, tl = Element.of(theta(mu, k, rho)), Element.of(theta(mu, ell, rho))
                    yield IdentityCase("theta-anticommute", tk * tl + tl * tk, Element(),
                                       {"mu": mu1.token(), "b": b, "k": k, "l": ell})


FAMILIES = {
    "double-nail": double_nail_cases,
    "nail-crossing-nail": nail_crossing_nail_cases,
    "dot-slide-crossings": dot_slide_crossings_cases,
    "dot-slide-nails": dot_slide_nails_cases,
    "nailed-R3": nailed_r3_cases,
    "omega-exchange": omega_exchange_cases,
    "theta-anticommute": theta_cases,
}


def identity_cases(bounds: IdentityBounds = IdentityBounds(),
                   families: Sequence[str] | None = None) -> Iterator[IdentityCase]:
    for name in families or FAMILIES:
        yield from FAMILIES[name](bounds)


def run_identity_suite(bounds: IdentityBounds = IdentityBounds(),
                       families: Sequence[str] | None = None,
                       rewriter: RewriteSystem | None = None) -> IdentityReport:
    rw = rewriter or system()
    by_family: dict[str, int] = {}
    failures = []
    checked = 0
    for case in identity_cases(bounds, families):
        checked += 1
        by_family[case.name] = by_family.get(case.name, 0) + 1
        lnf, rnf = rw.normal_form(case.left), rw.normal_form(case.right)
        if lnf != rnf:
            failures.append(IdentityFailure(case, lnf, rnf))
    return IdentityReport(checked, by_family, failures)
