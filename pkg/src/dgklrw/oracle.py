"""Decategorified side: U_q(sl2) acting on tensor products of Verma modules M(beta+z)
and integrable modules V(N), the two tensor bases, and Shapovalov forms.

Vectors are kept in one of two coordinate systems indexed by compositions:
"tilde" (pure tensors F^{b_1}v (x) ... (x) F^{b_r}v) and "v" (iterated F on partial
tensor products, see `v_to_tilde`). All coefficients are exact RationalQL values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .diagrams import Weight, admissible, compositions
from .scalars import LaurentQL, RationalQL, quantum_integer

TILDE = "tilde"
V = "v"

Comp = tuple[int, ...]


def weight_monomial(mu: Weight, shift: int = 0) -> LaurentQL:
    """q^{mu + shift} as a Laurent monomial (lambda = q^beta)."""
    qe, le = mu.grading()
    return LaurentQL.monomial(qe + shift, le)


def total_weight(mu: Sequence[Weight], b: int) -> tuple[int, int]:
    """(beta-coefficient, integer part) of |mu| - 2b."""
    k = sum(w.grading()[1] for w in mu)
    z = sum(w.grading()[0] for w in mu) - 2 * b
    return k, z


def _bracket(mu: Weight, shift: int) -> RationalQL:
    qe, le = mu.grading()
    return quantum_integer(le, qe + shift)


@dataclass
class WeightVector:
    """Vector of weight |mu| - 2b, stored in the v or tilde coordinates."""

    mu: tuple[Weight, ...]
    b: int
    coeffs: dict[Comp, RationalQL] = field(default_factory=dict)
    basis: str = V

    def __post_init__(self):
        self.mu = tuple(self.mu)
        clean = {}
        for rho, c in self.coeffs.items():
            c = RationalQL.coerce(c)
            if c.is_zero():
                continue
            if len(rho) != len(self.mu) or sum(rho) != self.b or min(rho, default=0) < 0:
                raise ValueError(f"composition {rho} does not fit weight space b={self.b}")
            clean[tuple(rho)] = c
        if self.basis == TILDE:
            # pure tensors past an integral cap vanish
            clean = {rho: c for rho, c in clean.items() if admissible(rho, self.mu)}
        elif self.basis != V:
            raise ValueError(f"unknown basis tag {self.basis!r}")
        self.coeffs = clean

    @classmethod
    def basis_vector(cls, mu, rho: Sequence[int], basis: str = V) -> "WeightVector":
        return cls(tuple(mu), sum(rho), {tuple(rho): RationalQL(1)}, basis)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "WeightVector"):
        if self.mu != other.mu or self.b != other.b or self.basis != other.basis:
            raise ValueError("weight vectors live in different spaces or coordinates")

    def __add__(self, other: "WeightVector") -> "WeightVector":
        self._check(other)
        out = dict(self.coeffs)
        for rho, c in other.coeffs.items():
            out[rho] = out[rho] + c if rho in out else c
        return WeightVector(self.mu, self.b, out, self.basis)

    def __neg__(self) -> "WeightVector":
        return self.scale(-1)

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        return self + (-other)

    def scale(self, c) -> "WeightVector":
        c = RationalQL.coerce(c)
        return WeightVector(self.mu, self.b, {rho: c * x for rho, x in self.coeffs.items()}, self.basis)

    def coefficient(self, rho: Sequence[int]) -> RationalQL:
        return self.coeffs.get(tuple(rho), RationalQL(0))

    def to_tilde(self) -> "WeightVector":
        if self.basis == TILDE:
            return self
        out = WeightVector(self.mu, self.b, {}, TILDE)
        for rho, c in self.coeffs.items():
            out = out + v_to_tilde(self.mu, rho).scale(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        if self.mu != other.mu or self.b != other.b:
            return False
        if self.basis != other.basis:
            return self.to_tilde() == other.to_tilde()
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)

    def __repr__(self):
        body = " + ".join(f"({c})*{self.basis}{list(rho)}" for rho, c in sorted(self.coeffs.items()))
        return body or "0"

    def to_json(self) -> dict:
        return {
            "mu": [w.to_json() for w in self.mu],
            "b": self.b,
            "basis": self.basis,
            "terms": [{"rho": list(rho), "coeff": str(c)} for rho, c in sorted(self.coeffs.items())],
        }


# --- pure-tensor coordinates -------------------------------------------------


def _factor_k(mu: Weight, i: int) -> LaurentQL:
    return weight_monomial(mu, -2 * i)


def tilde_f(w: WeightVector) -> WeightVector:
    """F(x_1 (x) ... (x) x_r) = sum_k x_1 .. F x_k (x) K x_{k+1} .. K x_r."""
    out: dict[Comp, RationalQL] = {}
    for rho, c in w.coeffs.items():
        for k in range(len(rho)):
            coeff = c
            for j in range(k + 1, len(rho)):
                coeff = coeff * _factor_k(w.mu[j], rho[j])
            new = rho[:k] + (rho[k] + 1,) + rho[k + 1:]
            out[new] = out[new] + coeff if new in out else coeff
    return WeightVector(w.mu, w.b + 1, out, TILDE)


def tilde_e(w: WeightVector) -> WeightVector:
    """E(x_1 (x) ... (x) x_r) = sum_k K^-1 x_1 .. K^-1 x_{k-1} (x) E x_k (x) x_{k+1} ..."""
    if w.b == 0:
        return WeightVector(w.mu, 0, {}, TILDE)
    out: dict[Comp, RationalQL] = {}
    for rho, c in w.coeffs.items():
        for k in range(len(rho)):
            i = rho[k]
            if i == 0:
                continue
            coeff = c * quantum_integer(0, i) * _bracket(w.mu[k], -i + 1)
            for j in range(k):
                coeff = coeff * _factor_k(w.mu[j], rho[j]) ** -1
            new = rho[:k] + (i - 1,) + rho[k + 1:]
            out[new] = out[new] + coeff if new in out else coeff
    return WeightVector(w.mu, w.b - 1, out, TILDE)


def _k_scalar(mu: Sequence[Weight], b: int) -> LaurentQL:
    k, z = total_weight(mu, b)
    return LaurentQL.monomial(z, k)


@lru_cache(maxsize=None)
def _v_to_tilde(mu: tuple[Weight, ...], rho: Comp) -> WeightVector:
    r = len(rho)
    if r == 1:
        return WeightVector(mu, rho[0], {rho: RationalQL(1)}, TILDE)
    head = _v_to_tilde(mu[:-1], rho[:-1])
    w = WeightVector(mu, head.b, {k + (0,): c for k, c in head.coeffs.items()}, TILDE)
    for _ in range(rho[-1]):
        w = tilde_f(w)
    return w


def v_to_tilde(mu: Sequence[Weight], rho: Sequence[int]) -> WeightVector:
    """v_rho = F^{b_r}( ... F^{b_2}(F^{b_1} v (x) v) ... (x) v) in pure-tensor coordinates."""
    return _v_to_tilde(tuple(mu), tuple(rho))


# --- v-basis operators -------------------------------------------------------


@lru_cache(maxsize=None)
def _e_on_v(mu: tuple[Weight, ...], rho: Comp) -> tuple[tuple[Comp, RationalQL], ...]:
    r, b = len(rho), sum(rho)
    if b == 0:
        return ()
    out: dict[Comp, RationalQL] = {}
    br = rho[-1]
    if br:
        k, z = total_weight(mu, b)
        s = RationalQL(0)
        for i in range(1, br + 1):
            s = s + quantum_integer(k, z + 2 * i)
        out[rho[:-1] + (br - 1,)] = s
    if r > 1:
        for sub, c in _e_on_v(mu[:-1], rho[:-1]):
            key = sub + (br,)
            out[key] = out[key] + c if key in out else c
    return tuple((k_, c) for k_, c in out.items() if not c.is_zero())


def apply_efk(op: str, w: WeightVector) -> WeightVector:
    """Apply E, F, K or K^-1 (op in {"E", "F", "K", "Kinv"}) in the coordinates of `w`."""
    if op in ("K", "Kinv"):
        scalar = _k_scalar(w.mu, w.b)
        return w.scale(scalar if op == "K" else scalar** -1)
    if w.basis == TILDE:
        if op == "F":
            return tilde_f(w)
        if op == "E":
            return tilde_e(w)
        raise ValueError(f"unknown operator {op!r}")
    if op == "F":
        return WeightVector(w.mu, w.b + 1, {rho[:-1] + (rho[-1] + 1,): c for rho, c in w.coeffs.items()}, V)
    if op == "E":
        if w.b == 0:
            return WeightVector(w.mu, 0, {}, V)
        out: dict[Comp, RationalQL] = {}
        for rho, c in w.coeffs.items():
            for key, e in _e_on_v(w.mu, rho):
                out[key] = out[key] + c * e if key in out else c * e
        return WeightVector(w.mu, w.b - 1, out, V)
    raise ValueError(f"unknown operator {op!r}")


# --- tilde -> v expansion ----------------------------------------------------


def expand_tilde_in_v(mu: Sequence[Weight], rho: Sequence[int]) -> WeightVector:
    """Expand the pure tensor F^{b_1}v (x) ... (x) F^{b_r}v over the v_rho' symbols by
    moving every F to the left with x (x) F(y) = F(x (x) y) - w(y) F(x) (x) y.

    The result ranges over all compositions (not only admissible ones)."""
    mu = tuple(mu)
    rho = tuple(rho)
    terms = _expand(mu, (), rho[0], 0, rho[1:])
    return WeightVector(mu, sum(rho), {k: RationalQL(c) for k, c in terms}, V)


@lru_cache(maxsize=None)
def _expand(mu: tuple[Weight, ...], rho1: Comp, t: int, l: int, rho2: Comp):
    """F^t(v_rho1 (x) F^l v_mu) (x) tilde v_rho2 with mu = mu[len(rho1)], as (comp, LaurentQL)."""
    if l == 0:
        head = rho1 + (t,)
        if not rho2:
            return ((head, LaurentQL(1)),)
        return _expand(mu, head, 0, rho2[0], rho2[1:])
    acc: dict[Comp, LaurentQL] = {}
    for k, c in _expand(mu, rho1, t + 1, l - 1, rho2):
        acc[k] = acc.get(k, LaurentQL(0)) + c
    w = weight_monomial(mu[len(rho1)], 2 - 2 * l)
    bumped = rho1[:-1] + (rho1[-1] + 1,)
    for k, c in _expand(mu, bumped, t, l - 1, rho2):
        acc[k] = acc.get(k, LaurentQL(0)) - w * c
    return tuple((k, c) for k, c in sorted(acc.items()) if not c.is_zero())


def expand_v_in_tilde(mu: Sequence[Weight], rho: Sequence[int]) -> WeightVector:
    return v_to_tilde(mu, rho)


# --- Shapovalov forms --------------------------------------------------------


@lru_cache(maxsize=None)
def single_factor_form(mu: Weight, i: int) -> RationalQL:
    """(F^i v, F^i v) for one factor, from the adjunction (F x, y) = (x, q E K y)."""
    if i == 0:
        return RationalQL(1)
    if mu.is_integral and i > mu.value:
        return RationalQL(0)
    # q E K F^i v = q * K-eigenvalue * [i][mu - i + 1] * F^{i-1} v
    k_eigen = weight_monomial(mu, -2 * i)
    e_coeff = quantum_integer(0, i) * _bracket(mu, -i + 1)
    return single_factor_form(mu, i - 1) * (e_coeff * (k_eigen * LaurentQL.q(1)))


def _form_tilde(a: WeightVector, b: WeightVector) -> RationalQL:
    total = RationalQL(0)
    for rho, c in a.coeffs.items():
        d = b.coeffs.get(rho)
        if d is None:
            continue
        value = c * d
        for w, i in zip(a.mu, rho):
            value = value * single_factor_form(w, i)
        total = total + value
    return total


def shapovalov_pair(w1: WeightVector, w2: WeightVector) -> RationalQL:
    """Product form on pure tensors, extended bilinearly."""
    if w1.mu != w2.mu:
        raise ValueError("vectors over different weight strings")
    if w1.b != w2.b:
        return RationalQL(0)
    return _form_tilde(w1.to_tilde(), w2.to_tilde())


def all_vectors(mu: Sequence[Weight], b: int, basis: str = TILDE, restrict: bool = True) -> list[WeightVector]:
    mu = tuple(mu)
    out = []
    for rho in compositions(b, len(mu)):
        if restrict and not admissible(rho, mu):
            continue
        out.append(WeightVector.basis_vector(mu, rho, basis))
    return out


@dataclass
class OracleReport:
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_sl2_relations(mu: Sequence[Weight], bmax: int) -> OracleReport:
    """KE = q^2 EK, KF = q^-2 FK, EF - FE = (K - K^-1)/(q - q^-1) on tilde basis vectors,
    plus agreement of the v-basis E with the pure-tensor E."""
    rep = OracleReport()
    q_minus = LaurentQL.q(1) - LaurentQL.q(-1)
    for b in range(bmax + 1):
        for w in all_vectors(mu, b):
            ef = tilde_e(tilde_f(w))
            fe = tilde_f(tilde_e(w)) if b else WeightVector(w.mu, b, {}, TILDE)
            k = _k_scalar(w.mu, b)
            rhs = w.scale(RationalQL(k - k** -1, q_minus))
            rep.checked += 1
            if ef - fe != rhs:
                rep.failures.append(f"[E,F] on {w}")
            if b:
                ke = apply_efk("K", tilde_e(w))
                ek = tilde_e(apply_efk("K", w)).scale(LaurentQL.q(2))
                if ke != ek:
                    rep.failures.append(f"KE on {w}")
            kf = apply_efk("K", tilde_f(w))
            fk = tilde_f(apply_efk("K", w)).scale(LaurentQL.q(-2))
            if kf != fk:
                rep.failures.append(f"KF on {w}")
        for rho in compositions(b, len(mu)):
            v = WeightVector.basis_vector(mu, rho, V)
            if b and apply_efk("E", v).to_tilde() != tilde_e(v.to_tilde()):
                rep.failures.append(f"E on v{list(rho)}")
            if apply_efk("F", v).to_tilde() != tilde_f(v.to_tilde()):
                rep.failures.append(f"F on v{list(rho)}")
    return rep


def check_hermitian(mu: Sequence[Weight], bmax: int) -> OracleReport:
    """(F x, y) = (x, q E K y) on all pairs of tilde basis vectors."""
    rep = OracleReport()
    for b in range(bmax):
        for x in all_vectors(mu, b):
            for y in all_vectors(mu, b + 1):
                lhs = _form_tilde(tilde_f(x), y)
                rhs = _form_tilde(x, tilde_e(apply_efk("K", y)).scale(LaurentQL.q(1)))
                rep.checked += 1
                if lhs != rhs:
                    rep.failures.append(f"({list(x.coeffs)}, {list(y.coeffs)})")
    return rep


def check_expansion(mu: Sequence[Weight], b: int) -> OracleReport:
    """expand_tilde_in_v evaluated back in pure-tensor coordinates is the pure tensor."""
    rep = OracleReport()
    for rho in compositions(b, len(mu)):
        if not admissible(rho, mu):
            continue
        rep.checked += 1
        if expand_tilde_in_v(mu, rho).to_tilde() != WeightVector.basis_vector(mu, rho, TILDE):
            rep.failures.append(f"tilde v{list(rho)}")
    return rep


def tilde_to_v_matrix(mu: Sequence[Weight], b: int) -> dict[Comp, dict[Comp, RationalQL]]:
    """Rows: admissible rho, columns: v-symbols in the expansion of tilde v_rho."""
    return {rho: dict(expand_tilde_in_v(mu, rho).coeffs)
            for rho in compositions(b, len(mu)) if admissible(rho, mu)}


def invert_unitriangular(mu: Sequence[Weight], b: int) -> dict[Comp, WeightVector]:
    """v_rho in tilde coordinates, recovered by inverting the tilde -> v expansion on
    the generic weight string (where every composition is admissible)."""
    mu = tuple(mu)
    if any(w.is_integral for w in mu):
        raise ValueError("inversion is only unitriangular over generic weights")
    rows = tilde_to_v_matrix(mu, b)
    # order compositions so the expansion of tilde v_rho involves rho first
    order = sorted(rows, key=lambda rho: tuple(-x for x in _partial_sums(rho)))
    solved: dict[Comp, WeightVector] = {}
    for rho in order:
        acc = WeightVector.basis_vector(mu, rho, TILDE)
        diag = rows[rho][rho]
        for other, c in rows[rho].items():
            if other == rho:
                continue
            acc = acc - solved[other].scale(c)
        solved[rho] = acc.scale(diag.inverse())
    return solved


def _partial_sums(rho: Iterable[int]) -> tuple[int, ...]:
    out, s = [], 0
    for x in rho:
        s += x
        out.append(s)
    return tuple(out)


def kclass_table(mu: Sequence[Weight], rho: Sequence[int]) -> Mapping[Comp, LaurentQL]:
    return {k: c.as_laurent() for k, c in expand_tilde_in_v(mu, rho).coeffs.items()}
