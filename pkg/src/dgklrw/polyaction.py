"""The polynomial representation on k[delta][x_1..x_b] (x) Lambda(omega_1..omega_b) eps_rho.

Variables are indexed from 0 by black strands, counted from the left.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .diagrams import (
    BLACK, BX, DOT, MX, NAIL, Element, Monomial, Weight, apply_site, compositions,
    sequence_of, site_problem,
)
from .rewriting import KEEP, ZERO, RULES, resolve_word
from .scalars import DeltaPoly

Term = tuple[tuple[int, ...], tuple[int, ...]]  # (omega subset, x exponents)


class InexactDivision(ArithmeticError):
    pass


class PolElement:
    """Sum of omega_S x^alpha eps_label with delta-polynomial coefficients."""

    __slots__ = ("label", "terms")

    def __init__(self, label: Sequence[int], terms: Mapping[Term, DeltaPoly | int] | None = None):
        self.label = tuple(label)
        clean: dict[Term, DeltaPoly] = {}
        for k, c in (terms or {}).items():
            c = DeltaPoly(c) if isinstance(c, int) else c
            if c:
                clean[k] = c
        self.terms = clean

    @property
    def b(self) -> int:
        return sum(1 for lab in self.label if lab == BLACK)

    @classmethod
    def basis_vector(cls, label, omega: Iterable[int] = (), alpha: Sequence[int] | None = None):
        label = tuple(label)
        b = sum(1 for lab in label if lab == BLACK)
        alpha = tuple(alpha) if alpha is not None else (0,) * b
        return cls(label, {(tuple(sorted(omega)), alpha): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolElement") -> "PolElement":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.label != self.label:
            raise ValueError("adding PolElements with different labels")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return PolElement(self.label, out)

    def __neg__(self):
        return PolElement(self.label, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: DeltaPoly | int) -> "PolElement":
        return PolElement(self.label, {k: v * c for k, v in self.terms.items()})

    def relabel(self, label) -> "PolElement":
        return PolElement(label, self.terms)

    def __eq__(self, other):
        if not isinstance(other, PolElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.label == other.label and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "PolElement(0)"
        parts = []
        for (S, a), c in sorted(self.terms.items()):
            mono = "".join(f"w{i + 1}" for i in S)
            mono += "".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(a) if e)
            parts.append(f"({c}){mono or '1'}")
        return f"PolElement({self.label}: " + " + ".join(parts) + ")"


def _add(acc: dict, key, c):
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def omega_times(i: int, f: PolElement) -> PolElement:
    """Left multiplication by omega_i."""
    out: dict[Term, DeltaPoly] = {}
    for (S, a), c in f.terms.items():
        if i in S:
            continue
        sign = -1 if sum(1 for j in S if j < i) % 2 else 1
        _add(out, (tuple(sorted(S + (i,))), a), c * sign)
    return PolElement(f.label, out)


def x_times(i: int, f: PolElement, power: int = 1) -> PolElement:
    out = {}
    for (S, a), c in f.terms.items():
        a = list(a)
        a[i] += power
        out[(S, tuple(a))] = c
    return PolElement(f.label, out)


def _swap(a: tuple[int, ...], i: int) -> tuple[int, ...]:
    a = list(a)
    a[i], a[i + 1] = a[i + 1], a[i]
    return tuple(a)


def _check_index(i: int, f: PolElement):
    if not 0 <= i < f.b - 1:
        raise IndexError(f"transposition index {i} out of range for b={f.b}")


def sigma(i: int, f: PolElement) -> PolElement:
    """Twisted action of the transposition (i, i+1) (0-based)."""
    _check_index(i, f)
    out: dict[Term, DeltaPoly] = {}
    for (S, a), c in f.terms.items():
        sa = _swap(a, i)
        _add(out, (S, sa), c)
        if i in S and i + 1 not in S:
            S2 = tuple(sorted(set(S) - {i} | {i + 1}))
            # (x_i - x_{i+1}) omega_{S'} sigma(x^a)
            b1 = list(sa)
            b1[i] += 1
            _add(out, (S2, tuple(b1)), c)
            b2 = list(sa)
            b2[i + 1] += 1
            _add(out, (S2, tuple(b2)), -c)
    return PolElement(f.label, out)


def _divided_difference(a: tuple[int, ...], i: int) -> list[tuple[tuple[int, ...], int]]:
    """(x^a - x^{s_i a}) / (x_i - x_{i+1}) as a list of (exponent, coeff)."""
    p, q = a[i], a[i + 1]
    if p == q:
        return []
    sign = 1
    if p < q:
        p, q, sign = q, p, -1
    out = []
    for j in range(p - q):
        e = list(a)
        e[i], e[i + 1] = p - 1 - j, q + j
        out.append((tuple(e), sign))
    return out


def demazure(i: int, f: PolElement) -> PolElement:
    """(f - sigma_i f) / (x_i - x_{i+1}), computed termwise."""
    _check_index(i, f)
    out: dict[Term, DeltaPoly] = {}
    for (S, a), c in f.terms.items():
        for e, s in _divided_difference(a, i):
            _add(out, (S, e), c * s)
        if i in S and i + 1 not in S:
            S2 = tuple(sorted(set(S) - {i} | {i + 1}))
            _add(out, (S2, _swap(a, i)), -c)
    return PolElement(f.label, out)


def demazure_by_division(i: int, f: PolElement) -> PolElement:
    """Reference Demazure operator: literal subtraction then exact division."""
    g = f - sigma(i, f)
    out: dict[Term, DeltaPoly] = {}
    groups: dict[tuple, dict[int, dict[int, DeltaPoly]]] = {}
    for (S, a), c in g.terms.items():
        rest = (S, a[:i] + (0, 0) + a[i + 2:])
        groups.setdefault(rest, {}).setdefault(a[i], {})[a[i + 1]] = c
    for (S, base), coeffs in groups.items():
        # divide sum_k coeffs[k](y) x^k by (x - y): Horner from the top degree
        n = max(coeffs)
        carry: dict[int, DeltaPoly] = {}
        for k in range(n, 0, -1):
            ck = dict(coeffs.get(k, {}))
            for e, c in carry.items():
                ck[e] = ck.get(e, DeltaPoly()) + c
            ck = {e: c for e, c in ck.items() if c}
            for e, c in ck.items():
                key = list(base)
                key[i], key[i + 1] = k - 1, e
                _add(out, (S, tuple(key)), c)
            carry = {e + 1: c for e, c in ck.items()}
        remainder = dict(coeffs.get(0, {}))
        for e, c in carry.items():
            remainder[e] = remainder.get(e, DeltaPoly()) + c
        if any(c for c in remainder.values()):
            raise InexactDivision("Demazure numerator not divisible by x_i - x_{i+1}")
    return PolElement(f.label, out)


def _black_index(seq, pos: int) -> int:
    return sum(1 for lab in seq[:pos] if lab == BLACK)


def act_site(mu: Sequence[Weight], site, f: PolElement, delta_mode: str = KEEP) -> PolElement:
    seq = f.label
    kind, pos = site
    new_label = apply_site(seq, site)
    if f.is_zero():
        return PolElement(new_label)
    problem = site_problem(seq, site)
    if problem:
        raise ValueError(problem)
    if kind == DOT:
        return x_times(_black_index(seq, pos), f).relabel(new_label)
    if kind == NAIL:
        return omega_times(0, f).relabel(new_label)
    if kind == BX:
        return demazure(_black_index(seq, pos), f).relabel(new_label)
    # mixed crossing
    if seq[pos] == BLACK:
        return f.relabel(new_label)
    w = mu[seq[pos] - 1]
    k = _black_index(seq, pos + 1)
    if w.generic:
        if delta_mode == ZERO:
            return PolElement(new_label)
        return f.scale(DeltaPoly.delta()).relabel(new_label)
    return x_times(k, f, w.value).relabel(new_label)


def act_word(mu, bottom, sites, f: PolElement, delta_mode: str = KEEP) -> PolElement:
    if f.label != tuple(bottom):
        return PolElement(f.label)
    for s in sites:
        f = act_site(mu, s, f, delta_mode)
    return f


def act(g, f: PolElement, delta_mode: str = KEEP) -> PolElement:
    """Action of a monomial or element on f; zero unless bottoms match f's label."""
    if isinstance(g, Monomial):
        return act_word(g.mu, g.bottom, g.sites, f, delta_mode)
    out = None
    for m, c in g.terms.items():
        if m.bottom != f.label:
            continue
        if delta_mode == ZERO:
            c = DeltaPoly(c.at_zero())
        img = act_word(m.mu, m.bottom, m.sites, f, delta_mode).scale(c)
        out = img if out is None else out + img
    if out is None:
        top = next(iter(g.terms)).top if g.terms else f.label
        return PolElement(top)
    return out


def probe_vectors(label, cap: int) -> list[PolElement]:
    """All omega_S x^alpha eps_label with |alpha| <= cap."""
    label = tuple(label)
    b = sum(1 for lab in label if lab == BLACK)
    out = []
    for S_size in range(b + 1):
        for S in combinations(range(b), S_size):
            for alpha in _exponents(b, cap):
                out.append(PolElement(label, {(S, alpha): 1}))
    return out


def _exponents(b: int, cap: int):
    if b == 0:
        yield ()
        return
    for total in range(cap + 1):
        yield from _compositions_exact(total, b)


def _compositions_exact(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions_exact(total - first, parts - 1):
            yield (first,) + rest


# --- relation verification ----------------------------------------------------


def rule_instances(mu: Sequence[Weight], seq, delta_mode: str = KEEP, loop_rules: bool = True):
    """Every rule instance whose left-hand side starts at the bottom of `seq`.

    Yields (label, lhs sites, [(coeff, rhs sites)]).
    """
    seq = tuple(seq)
    n = len(seq)
    anchors = [(DOT, p) for p in range(n)] + [(NAIL, 0)]
    anchors += [(BX, p) for p in range(n - 1)] + [(MX, p) for p in range(n - 1)]
    anchors = [a for a in anchors if site_problem(seq, a) is None]
    for rule in RULES:
        if rule.name == "loop" and not loop_rules:
            continue
        for anchor in anchors:
            for label, pattern, rhs_fn in rule.instances(anchor, seq):
                raw = [(None if k == "X" else k, p) for k, p in pattern]
                try:
                    lhs = resolve_word(seq, raw)
                except IndexError:
                    continue
                if lhs[0] != anchor:
                    continue
                cur, ok = seq, True
                for s in lhs:
                    if site_problem(cur, s):
                        ok = False
                        break
                    cur = apply_site(cur, s)
                if not ok:
                    continue
                terms = rhs_fn(dict(enumerate(seq)), mu, delta_mode)
                if terms is None:
                    continue
                rhs = [(c, resolve_word(seq, w)) for c, w in terms]
                yield label, lhs, rhs


@dataclass
class RelationReport:
    checked: int
    vectors: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_relations(mu: Sequence[Weight], b: int, cap: int, delta_mode: str = KEEP,
                     loop_rules: bool = True, commutations: bool = True) -> RelationReport:
    """Both sides of every relation instance act identically on all test vectors."""
    mu = tuple(mu)
    checked = vectors = 0
    failures = []
    for rho in compositions(b, len(mu)):
        seq = sequence_of(rho)
        tests = probe_vectors(seq, cap)
        relations = list(rule_instances(mu, seq, delta_mode, loop_rules))
        if commutations:
            relations += list(_commutation_instances(seq))
        for label, lhs, rhs in relations:
            checked += 1
            for f in tests:
                vectors += 1
                left = act_word(mu, seq, lhs, f, delta_mode)
                right = PolElement(left.label)
                for c, w in rhs:
                    c = DeltaPoly(c.at_zero()) if delta_mode == ZERO else c
                    right = right + act_word(mu, seq, w, f, delta_mode).scale(c)
                if left != right:
                    failures.append((rho, label, lhs, f))
                    break
    return RelationReport(checked, vectors, failures)


def _commutation_instances(seq):
    n = len(seq)
    sites = [(DOT, p) for p in range(n)] + [(NAIL, 0)]
    sites += [(k, p) for p in range(n - 1) for k in (BX, MX)]
    sites = [s for s in sites if site_problem(seq, s) is None]
    for s1 in sites:
        after = apply_site(seq, s1)
        for s2 in sites:
            if set(_sup(s1)) & set(_sup(s2)) or site_problem(after, s2):
                continue
            yield "commute", [s1, s2], [(DeltaPoly(1), [s2, s1])]


def _sup(site):
    kind, pos = site
    return (pos,) if kind == DOT else (0, 1) if kind == NAIL else (pos, pos + 1)


# --- rank ---------------------------------------------------------------------

_PRIME = 2_147_483_647


def _matrix(elements: Sequence[Element], tests: Sequence[PolElement], delta_mode: str):
    rows = []
    for e in elements:
        row: dict[tuple, DeltaPoly] = {}
        for j, f in enumerate(tests):
            img = act(e, f, delta_mode)
            for k, c in img.terms.items():
                row[(j, img.label) + k] = c
        rows.append(row)
    return rows


def _rank_mod_p(rows, delta_value: int) -> int:
    cols: dict = {}
    mat = []
    for row in rows:
        vec = {}
        for k, c in row.items():
            v = c.evaluate(delta_value) % _PRIME
            if v:
                vec[cols.setdefault(k, len(cols))] = v
        mat.append(vec)
    rank = 0
    pivots: dict[int, dict[int, int]] = {}
    for vec in mat:
        vec = dict(vec)
        while vec:
            col = min(vec)
            if col not in pivots:
                inv = pow(vec[col], _PRIME - 2, _PRIME)
                pivots[col] = {k: v * inv % _PRIME for k, v in vec.items()}
                rank += 1
                break
            f = vec[col]
            for k, v in pivots[col].items():
                nv = (vec.get(k, 0) - f * v) % _PRIME
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
    return rank


def _rank_bareiss(rows) -> int:
    """Fraction-free elimination over Z[delta]."""
    keys = sorted({k for row in rows for k in row})
    mat = [[row.get(k, DeltaPoly()) for k in keys] for row in rows]
    if not mat or not keys:
        return 0
    m, n = len(mat), len(keys)
    rank, prev = 0, DeltaPoly(1)
    col = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        p = mat[rank][col]
        for r in range(rank + 1, m):
            for c in range(col + 1, n):
                num = mat[r][c] * p - mat[r][col] * mat[rank][c]
                mat[r][c] = delta_divide_exact(num, prev)
            mat[r][col] = DeltaPoly()
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def delta_divide_exact(num: DeltaPoly, den: DeltaPoly) -> DeltaPoly:
    if den == DeltaPoly(1):
        return num
    rem = dict(num.items())
    dd = den.degree()
    lead = den.terms[dd]
    quot: dict[int, int] = {}
    while rem:
        e = max(rem)
        if e < dd or rem[e] % lead:
            raise InexactDivision("Bareiss step not exact")
        f = rem[e] // lead
        quot[e - dd] = f
        for k, c in den.items():
            v = rem.get(k + e - dd, 0) - f * c
            if v:
                rem[k + e - dd] = v
            else:
                rem.pop(k + e - dd, None)
    return DeltaPoly(quot)


def independence_rank(elements: Sequence[Element], tests: Sequence[PolElement],
                      delta_mode: str = KEEP, seed: int = 0) -> int:
    """Rank over Frac(Z[delta]) of the action matrix (elements x test-vector coordinates).

    A specialization at a random delta modulo a large prime gives a lower bound;
    when it is already full the answer is certified, otherwise Bareiss decides.
    """
    rows = _matrix(elements, tests, delta_mode)
    rng = random.Random(seed)
    low = _rank_mod_p(rows, rng.randrange(2, 10**6))
    if low == len(rows):
        return low
    return _rank_bareiss(rows)
