"""Differential, Euler characteristics, the direct-sum decomposition of T_b 1_rho,
and standard-module complexes with their K-classes."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .basis import PoincareSeries, graded_dimension, lowest_q_degree
from .diagrams import (
    DOT, NAIL, DiagramError, Element, Monomial, Weight, compositions, resolve, sequence_of,
)
from .oracle import WeightVector, expand_tilde_in_v, shapovalov_pair
from .rewriting import KEEP, RewriteSystem, system
from .scalars import GradingVector, LaurentQL, QLSeries, RationalQL, series_expand

Comp = tuple[int, ...]


# --- differential ------------------------------------------------------------


@dataclass(frozen=True)
class DgElement:
    """Element homogeneous in the homological degree."""

    element: Element
    h: int

    @classmethod
    def of(cls, e: Element | Monomial) -> "DgElement":
        if isinstance(e, Monomial):
            e = Element.of(e)
        hs = {m.degree().h for m in e.monomials()}
        if len(hs) > 1:
            raise ValueError(f"element is not homogeneous in h: {sorted(hs)}")
        return cls(e, hs.pop() if hs else 0)


def differential_word(m: Monomial) -> Element:
    """d on a single word, before normalization.

    Each nail becomes mu_1 dots on the strand it touches (or zero for generic mu_1);
    the sign counts the nails above it."""
    mu1 = m.mu[0]
    if not mu1.is_integral:
        return Element()
    pairs = []
    nails = [i for i, (kind, _) in enumerate(m.sites) if kind == NAIL]
    for rank, i in enumerate(nails):
        above = len(nails) - 1 - rank
        sites = m.sites[:i] + ((DOT, 1),) * mu1.value + m.sites[i + 1:]
        pairs.append((Monomial(m.mu, m.bottom, sites), (-1) ** above))
    return Element.accumulate(pairs)


def differential(e: DgElement | Element | Monomial, rewriter: RewriteSystem | None = None) -> DgElement:
    """d_mu extended by the graded Leibniz rule, returned in normal form."""
    rw = rewriter or system()
    if isinstance(e, DgElement):
        h, e = e.h, e.element
    else:
        e = Element.of(e) if isinstance(e, Monomial) else e
        h = DgElement.of(e).h
    acc = Element()
    for m, c in e:
        acc = acc + differential_word(m).scale(c)
    return DgElement(rw.normal_form(acc), h - 1)


def euler_characteristic(mu: Sequence[Weight], kappa: Sequence[int], rho: Sequence[int],
                         qcap: int) -> QLSeries:
    return graded_dimension(mu, kappa, rho, qcap, mode="euler")


# --- decomposition of T_b 1_rho ----------------------------------------------


def _shift_series(ps: PoincareSeries, g: GradingVector, order: int) -> PoincareSeries:
    out = {}
    for h, s in ps.by_h.items():
        poly = s.poly.shift(g.q, g.l)
        out[h + g.h] = QLSeries(order, poly)
    return PoincareSeries(order, out)


def _add_series(a: PoincareSeries, b: PoincareSeries) -> PoincareSeries:
    order = min(a.order, b.order)
    out = {h: s.truncate(order) for h, s in a.by_h.items()}
    for h, s in b.by_h.items():
        out[h] = out[h] + s.truncate(order) if h in out else s.truncate(order)
    return PoincareSeries(order, out)


def projective_series(mu: Sequence[Weight], rho: Sequence[int], qcap: int) -> PoincareSeries:
    """Poincare series of T_b 1_rho summed over all top idempotents."""
    total = PoincareSeries(qcap, {})
    for kappa in compositions(sum(rho), len(rho)):
        total = _add_series(total, graded_dimension(mu, kappa, rho, qcap))
    return total


def _weight_degree(w: Weight, times: int = 1) -> GradingVector:
    qe, le = w.grading()
    return GradingVector(0, qe * times, le * times)


@dataclass
class Summand:
    label: str
    shift: GradingVector
    mu: tuple[Weight, ...]
    rho: Comp


@dataclass
class TDecompReport:
    lhs: PoincareSeries
    rhs: PoincareSeries
    summands: list[Summand]
    mismatch: tuple[int, int] | None = None

    @property
    def equal(self) -> bool:
        return self.mismatch is None


def decomposition_summands(mu: Sequence[Weight], rho: Sequence[int], qcap: int) -> list[Summand]:
    """Summands of T_b 1_rho with q-shift below `qcap`: the part whose top has no black
    strand right of the last colored strand, then one summand per (block i, strand t,
    dots p, nailed or not) for the strand ending at the top right."""
    mu, rho = tuple(mu), tuple(rho)
    r, b = len(rho), sum(rho)
    out: list[Summand] = []
    if r >= 2:
        merged = rho[:-2] + (rho[-2] + rho[-1],)
        out.append(Summand("restrict", _weight_degree(mu[-1], rho[-1]), mu[:-1], merged))
    elif b == 0:
        out.append(Summand("restrict", GradingVector(0, 0, 0), mu, rho))
    for i in range(r):
        if rho[i] == 0:
            continue
        hat = rho[:i] + (rho[i] - 1,) + rho[i + 1:]
        right = GradingVector(0, 0, 0)
        for s in range(i + 1, r):
            right = right + _weight_degree(mu[s]) + GradingVector(0, -2 * rho[s], 0)
        left_colors = GradingVector(0, 0, 0)
        for s in range(i + 1):
            left_colors = left_colors + _weight_degree(mu[s], 2)
        left_blacks = sum(rho[:i])
        # the summand's own lowest degree can be negative
        floor = lowest_q_degree(mu, hat)
        for t in range(rho[i]):
            g1 = right + GradingVector(0, -2 * (rho[i] - t - 1), 0)
            g2 = g1 + left_colors + GradingVector(1, -4 * (left_blacks + t), 0)
            for name, g in (("G1", g1), ("G2", g2)):
                p = 0
                while g.q + 2 * p + floor < qcap:
                    out.append(Summand(f"{name}({i + 1},{t},{p})", g + GradingVector(0, 2 * p, 0), mu, hat))
                    p += 1
    return out


def tdecomp_report(mu: Sequence[Weight], rho: Sequence[int], qcap: int) -> TDecompReport:
    """Compare the Poincare series of T_b 1_rho with the sum of its shifted summands."""
    mu, rho = tuple(mu), tuple(rho)
    lhs = projective_series(mu, rho, qcap)
    rhs = PoincareSeries(qcap, {})
    summands = []
    cache: dict[tuple, PoincareSeries] = {}
    for s in decomposition_summands(mu, rho, qcap):
        if s.shift.q + lowest_q_degree(s.mu, s.rho) >= qcap:
            continue
        need = qcap - s.shift.q
        key = (s.mu, s.rho, need)
        if key not in cache:
            cache[key] = projective_series(s.mu, s.rho, need)
        rhs = _add_series(rhs, _shift_series(cache[key], s.shift, qcap))
        summands.append(s)
    mismatch = None
    for h in sorted(set(lhs.by_h) | set(rhs.by_h)):
        a = lhs.by_h.get(h, QLSeries(qcap))
        b = rhs.by_h.get(h, QLSeries(qcap))
        qe = a.first_mismatch(b)
        if qe is not None:
            mismatch = (h, qe)
            break
    return TDecompReport(lhs, rhs, summands, mismatch)


# --- standard modules ----------------------------------------------------------


Index = tuple[int, int]  # (block l, 1-based position t) with l >= 2 (1-based)


def index_set(rho: Sequence[int]) -> list[Index]:
    return [(l + 1, t) for l in range(1, len(rho)) for t in range(1, rho[l] + 1)]


def moved_composition(rho: Sequence[int], j: Iterable[Index]) -> Comp:
    out = list(rho)
    for l, _ in j:
        out[l - 1] -= 1
        out[l - 2] += 1
    return tuple(out)


def summand_shift(mu: Sequence[Weight], j: Iterable[Index]) -> GradingVector:
    g = GradingVector(0, 0, 0)
    for l, t in j:
        qe, le = mu[l - 1].grading()
        g = g + GradingVector(0, qe - 2 * t + 2, le)
    return g


@dataclass
class StandardComplex:
    mu: tuple[Weight, ...]
    rho: Comp
    J: list[Index]
    summands: dict[tuple[Index, ...], tuple[Comp, GradingVector]]
    maps: dict[tuple[tuple[Index, ...], Index], tuple[int, Monomial]] = field(default_factory=dict)

    def kclass(self) -> dict[Comp, LaurentQL]:
        acc: dict[Comp, LaurentQL] = {}
        for j, (rj, g) in self.summands.items():
            term = LaurentQL.monomial(g.q, g.l, (-1) ** len(j))
            acc[rj] = acc.get(rj, LaurentQL(0)) + term
        return {k: v for k, v in acc.items() if not v.is_zero()}

    def summand_multiset(self) -> Counter:
        return Counter((rj, len(j), g.q, g.l) for j, (rj, g) in self.summands.items())


def tau(mu: Sequence[Weight], rho: Sequence[int], j: Sequence[Index], removed: Index) -> Monomial:
    """Map component 1_{rho_j} T 1_{rho_j'} for j' = j minus `removed`: the strand
    `removed` crosses its colored strand leftwards."""
    l, bp = removed
    jprime = [x for x in j if x != removed]
    bottom = sequence_of(moved_composition(rho, jprime))
    colored = [i for i, lab in enumerate(bottom) if lab != 0]
    c = colored[l - 1]
    p1 = sum(1 for (l2, t) in j if l2 == l and t < bp)
    p2 = bp - 1 - p1
    raw = [(None, pos) for pos in range(c + p2, c - p1 - 1, -1)]
    m = Monomial(tuple(mu), bottom, resolve(bottom, raw))
    if m.top != sequence_of(moved_composition(rho, j)):
        raise DiagramError("standard complex map lands in the wrong idempotent")
    return m


def _sign(j: Sequence[Index], removed: Index) -> int:
    return (-1) ** sum(1 for x in j if x > removed)


def build_standard_complex(mu: Sequence[Weight], rho: Sequence[int],
                           rewriter: RewriteSystem | None = None, check: bool = True) -> StandardComplex:
    mu, rho = tuple(mu), tuple(rho)
    J = index_set(rho)
    summands = {}
    maps = {}
    for k in range(len(J) + 1):
        for j in combinations(J, k):
            summands[j] = (moved_composition(rho, j), summand_shift(mu, j))
            for x in j:
                maps[(j, x)] = (_sign(j, x), tau(mu, rho, j, x))
    cx = StandardComplex(mu, rho, J, summands, maps)
    if check:
        bad = d_squared_witnesses(cx, rewriter)
        if bad:
            raise ArithmeticError(f"d^2 nonzero on {bad[0]}")
    return cx


def d_squared_witnesses(cx: StandardComplex, rewriter: RewriteSystem | None = None) -> list:
    """All pairs of two-step paths whose signed sum does not reduce to zero.

    The internal differential on the summand indexed by j carries the sign (-1)^|j|,
    so it anticommutes with the crossing maps (which carry no nails) automatically."""
    rw = rewriter or system(KEEP)
    bad = []
    for j in cx.summands:
        for a, b in combinations(j, 2):
            total = Element()
            for first, second in ((a, b), (b, a)):
                s1, t1 = cx.maps[(j, first)]
                j1 = tuple(x for x in j if x != first)
                s2, t2 = cx.maps[(j1, second)]
                total = total + (Element.of(t1) * Element.of(t2)).scale(s1 * s2)
            if not rw.normal_form(total).is_zero():
                bad.append((j, a, b))
    return bad


def standard_kclass(mu: Sequence[Weight], rho: Sequence[int]) -> dict[Comp, LaurentQL]:
    return build_standard_complex(mu, rho, check=False).kclass()


def recursive_cone_summands(mu: Sequence[Weight], rho: Sequence[int]) -> Counter:
    """Summands (composition, h, q, lambda) of the iterated-cone model of the standard
    module: V^{t,l}_{r1,r2} = cone(q^{mu-2l+2} V^{t,l-1}_{F r1, r2} -> V^{t+1,l-1}_{r1,r2})."""
    mu, rho = tuple(mu), tuple(rho)
    out: Counter = Counter()

    def walk(rho1: Comp, t: int, l: int, rho2: Comp, h: int, q: int, lam: int):
        if l == 0:
            head = rho1 + (t,)
            if not rho2:
                out[(head, h, q, lam)] += 1
            else:
                walk(head, 0, rho2[0], rho2[1:], h, q, lam)
            return
        walk(rho1, t + 1, l - 1, rho2, h, q, lam)
        qe, le = mu[len(rho1)].grading()
        bumped = rho1[:-1] + (rho1[-1] + 1,)
        walk(bumped, t, l - 1, rho2, h + 1, q + qe - 2 * l + 2, lam + le)

    walk((), rho[0], 0, rho[1:], 0, 0, 0)
    return out


def recursive_cone_kclass(mu: Sequence[Weight], rho: Sequence[int]) -> dict[Comp, LaurentQL]:
    acc: dict[Comp, LaurentQL] = {}
    for (comp, h, q, lam), n in recursive_cone_summands(mu, rho).items():
        acc[comp] = acc.get(comp, LaurentQL(0)) + LaurentQL.monomial(q, lam, n * (-1) ** h)
    return {k: v for k, v in acc.items() if not v.is_zero()}


def oracle_kclass(mu: Sequence[Weight], rho: Sequence[int]) -> dict[Comp, LaurentQL]:
    return {k: c.as_laurent() for k, c in expand_tilde_in_v(mu, rho).coeffs.items()}


# --- Euler characteristic against Shapovalov values ---------------------------


@dataclass
class EulerShapovalovRow:
    kappa: Comp
    rho: Comp
    euler: QLSeries
    shapovalov: RationalQL
    unit: tuple[int, int, int] | None  # (sign, q, lambda) with euler = unit * shapovalov
    matches: bool


@dataclass
class EulerShapovalovReport:
    mu: tuple[Weight, ...]
    b: int
    rows: list[EulerShapovalovRow]

    @property
    def units(self) -> set[tuple[int, int, int]]:
        return {row.unit for row in self.rows if row.unit is not None}

    @property
    def ok(self) -> bool:
        return all(row.matches for row in self.rows) and len(self.units) <= 1


def _measure_unit(euler: QLSeries, shap: QLSeries) -> tuple[int, int, int] | None:
    ea, sa = euler.exponents(), shap.exponents()
    if not ea or not sa:
        return (1, 0, 0) if not ea and not sa else None
    e0, s0 = euler.coefficient(ea[0]), shap.coefficient(sa[0])
    if not e0.is_monomial() or not s0.is_monomial():
        ratio = e0.divide_exact(s0)
        if ratio is None or not ratio.is_monomial():
            return None
    else:
        ratio = e0.divide_exact(s0)
    ((qe, le), c), = ratio.items()
    if qe != 0 or c not in (1, -1):
        return None
    return (c, ea[0] - sa[0], le)


def euler_vs_shapovalov(mu: Sequence[Weight], b: int, qcap: int) -> EulerShapovalovReport:
    """For every (kappa, rho) in the weight space, measure the unit monomial relating the
    Euler characteristic of 1_kappa T 1_rho to (v_kappa, v_rho), and check the series agree."""
    mu = tuple(mu)
    rows = []
    for kappa in compositions(b, len(mu)):
        for rho in compositions(b, len(mu)):
            euler = euler_characteristic(mu, kappa, rho, qcap)
            shap = shapovalov_pair(WeightVector.basis_vector(mu, kappa), WeightVector.basis_vector(mu, rho))
            rows.append(EulerShapovalovRow(kappa, rho, euler, shap, None, False))
    # measure on the rows with the most information, then apply one unit to every row
    units = Counter()
    for row in rows:
        if row.shapovalov.is_zero():
            continue
        u = _measure_unit(row.euler, series_expand(row.shapovalov, qcap))
        row.unit = u
        if u is not None:
            units[u] += 1
    unit = units.most_common(1)[0][0] if units else (1, 0, 0)
    sign, qs, ls = unit
    for row in rows:
        shap = series_expand(row.shapovalov, qcap - qs)
        scaled = QLSeries(qcap, shap.poly.shift(qs, ls) * sign)
        row.matches = row.euler == scaled
        if row.shapovalov.is_zero():
            row.unit = None
    return EulerShapovalovReport(mu, b, rows)
