"""Exact scalars: delta-polynomials, Laurent polynomials and fractions in (q, lambda),
truncated ascending q-series, and the (h, q, lambda) grading group.

Everything here is immutable. Coefficients are Python ints (arbitrary precision).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class GradingVector:
    """Tri-degree h^h q^q lambda^l (lambda stands for q^beta)."""

    h: int = 0
    q: int = 0
    l: int = 0

    def __add__(self, other: "GradingVector") -> "GradingVector":
        return GradingVector(self.h + other.h, self.q + other.q, self.l + other.l)

    def __sub__(self, other: "GradingVector") -> "GradingVector":
        return GradingVector(self.h - other.h, self.q - other.q, self.l - other.l)

    def __neg__(self) -> "GradingVector":
        return GradingVector(-self.h, -self.q, -self.l)

    def __mul__(self, k: int) -> "GradingVector":
        return GradingVector(self.h * k, self.q * k, self.l * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"(h={self.h}, q={self.q}, l={self.l})"


def _clean(terms: Mapping) -> dict:
    return {k: v for k, v in terms.items() if v}


class DeltaPoly:
    """Polynomial in one variable delta with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {0: terms}
        t = _clean(terms)
        if any(e < 0 for e in t):
            raise ValueError("negative delta exponent")
        self._terms = dict(sorted(t.items()))
        self._hash = None

    @classmethod
    def delta(cls, power: int = 1) -> "DeltaPoly":
        return cls({power: 1})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._terms)

    def degree(self) -> int:
        return max(self._terms) if self._terms else -1

    def at_zero(self) -> int:
        return self._terms.get(0, 0)

    def evaluate(self, value: int) -> int:
        return sum(c * value**e for e, c in self._terms.items())

    def _coerce(self, other) -> "DeltaPoly":
        if isinstance(other, DeltaPoly):
            return other
        if isinstance(other, int):
            return DeltaPoly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return DeltaPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DeltaPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return DeltaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a delta-polynomial")
        result = DeltaPoly(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = DeltaPoly(other)
        if not isinstance(other, DeltaPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"DeltaPoly({self._terms})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                parts.append(str(c))
            else:
                mono = "d" if e == 1 else f"d^{e}"
                parts.append(mono if c == 1 else ("-" + mono if c == -1 else f"{c}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [[e, c] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, data) -> "DeltaPoly":
        if isinstance(data, int):
            return cls(data)
        return cls({int(e): int(c) for e, c in data})


class LaurentQL:
    """Laurent polynomial in q and lambda; keys are (q-exponent, lambda-exponent)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | int | None = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {(0, 0): terms}
        self._terms = dict(sorted(_clean(terms).items()))
        self._hash = None

    @classmethod
    def monomial(cls, qe: int = 0, le: int = 0, coeff: int = 1) -> "LaurentQL":
        return cls({(qe, le): coeff})

    @classmethod
    def q(cls, power: int = 1) -> "LaurentQL":
        return cls.monomial(power, 0)

    @classmethod
    def lam(cls, power: int = 1) -> "LaurentQL":
        return cls.monomial(0, power)

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def content(self) -> int:
        return reduce(gcd, self._terms.values(), 0)

    def min_q(self) -> int:
        return min(k[0] for k in self._terms)

    def min_l(self) -> int:
        return min(k[1] for k in self._terms)

    def shift(self, qe: int, le: int = 0) -> "LaurentQL":
        return LaurentQL({(a + qe, b + le): c for (a, b), c in self._terms.items()})

    def _coerce(self, other):
        if isinstance(other, LaurentQL):
            return other
        if isinstance(other, int):
            return LaurentQL(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentQL(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQL({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalQL):
            return NotImplemented
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, int], int] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentQL(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible Laurent polynomials")
            ((a, b), c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentQL({(a * n, b * n): c ** (-n)})
        result = LaurentQL(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute_q_inverse(self) -> "LaurentQL":
        """q -> q^{-1}, lambda -> lambda^{-1} (bar involution)."""
        return LaurentQL({(-a, -b): c for (a, b), c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentQL(other)
        if isinstance(other, RationalQL):
            return RationalQL(self) == other
        if not isinstance(other, LaurentQL):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"LaurentQL({self._terms})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in self._terms.items():
            mono = []
            if a:
                mono.append("q" if a == 1 else f"q^{a}")
            if b:
                mono.append("l" if b == 1 else f"l^{b}")
            m = "*".join(mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")

    def divide_exact(self, other: "LaurentQL") -> "LaurentQL | None":
        """Quotient if `other` divides self in Z[q^±, l^±], else None.

        Lex long division (q first, then lambda) after shifting both into the
        polynomial ring; a zero remainder certifies exact division.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentQL()
        sq, sl = self.min_q(), self.min_l()
        oq, ol = other.min_q(), other.min_l()
        num = self.shift(-sq, -sl)
        den = other.shift(-oq, -ol)
        lead_key = max(den._terms)
        lead_c = den._terms[lead_key]
        quotient: dict[tuple[int, int], int] = {}
        rem = dict(num._terms)
        while rem:
            k = max(rem)
            c = rem[k]
            if c % lead_c:
                return None
            dq, dl = k[0] - lead_key[0], k[1] - lead_key[1]
            if dq < 0 or dl < 0:
                return None
            f = c // lead_c
            quotient[(dq, dl)] = quotient.get((dq, dl), 0) + f
            for (a, b), cc in den._terms.items():
                kk = (a + dq, b + dl)
                v = rem.get(kk, 0) - f * cc
                if v:
                    rem[kk] = v
                else:
                    rem.pop(kk, None)
        return LaurentQL(quotient).shift(sq - oq, sl - ol)


class RationalQL:
    """Fraction of Laurent polynomials in q, lambda.

    Normalized by common integer content, a positive lowest denominator term,
    the denominator's lowest-exponent shift, and cancellation when the
    denominator divides the numerator exactly. Equality is cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentQL | int, den: LaurentQL | int = 1):
        num = LaurentQL(num) if isinstance(num, int) else num
        den = LaurentQL(den) if isinstance(den, int) else den
        if den.is_zero():
            raise ZeroDivisionError("RationalQL with zero denominator")
        if num.is_zero():
            num, den = LaurentQL(), LaurentQL(1)
        else:
            num, den = self._normalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num: LaurentQL, den: LaurentQL):
        if not den.is_monomial():
            quotient = num.divide_exact(den)
            if quotient is not None:
                return quotient, LaurentQL(1)
        qe, le = den.min_q(), den.min_l()
        num, den = num.shift(-qe, -le), den.shift(-qe, -le)
        g = gcd(num.content(), den.content())
        lowest = den._terms[min(den._terms)]
        if lowest < 0:
            g = -g
        if g != 1:
            num = LaurentQL({k: c // g for k, c in num.items()})
            den = LaurentQL({k: c // g for k, c in den.items()})
        return num, den

    @classmethod
    def coerce(cls, x) -> "RationalQL":
        if isinstance(x, RationalQL):
            return x
        if isinstance(x, (int, LaurentQL)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalQL")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == LaurentQL(1)

    def as_laurent(self) -> LaurentQL:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def __add__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RationalQL(self.num + other.num, self.den)
        return RationalQL(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalQL(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalQL(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalQL":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalQL(self.den, self.num)

    def __truediv__(self, other):
        return self * self.coerce(other).inverse()

    def __rtruediv__(self, other):
        return self.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalQL(self.num**n, self.den**n)

    def __eq__(self, other):
        try:
            other = self.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not syntactic

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"RationalQL({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"


class QLSeries:
    """Ascending q-series truncated strictly below `order`, Laurent in lambda."""

    __slots__ = ("order", "poly")

    def __init__(self, order: int, poly: LaurentQL | Mapping | int | None = None):
        if poly is None:
            poly = LaurentQL()
        elif not isinstance(poly, LaurentQL):
            poly = LaurentQL(poly)
        self.order = order
        self.poly = LaurentQL({k: c for k, c in poly.items() if k[0] < order})

    def coefficient(self, qe: int) -> LaurentQL:
        """Lambda-Laurent coefficient of q^qe (as a LaurentQL with q-exponent 0)."""
        if qe >= self.order:
            raise ValueError(f"q^{qe} is beyond the truncation order {self.order}")
        return LaurentQL({(0, b): c for (a, b), c in self.poly.items() if a == qe})

    def exponents(self) -> list[int]:
        return sorted({a for a, _ in self.poly.terms})

    def truncate(self, order: int) -> "QLSeries":
        return QLSeries(min(order, self.order), self.poly)

    def __add__(self, other: "QLSeries") -> "QLSeries":
        return QLSeries(min(self.order, other.order), self.poly + other.poly)

    def __sub__(self, other: "QLSeries") -> "QLSeries":
        return QLSeries(min(self.order, other.order), self.poly - other.poly)

    def __neg__(self):
        return QLSeries(self.order, -self.poly)

    def _low(self) -> int:
        """Least q-exponent that may be nonzero; unknown terms start at the order."""
        return min(self.poly.min_q(), self.order) if self.poly else self.order

    def _shifted_order(self, other: "QLSeries") -> int:
        # a_i b_j is exact for i + j < min(ord_a + low_b, ord_b + low_a)
        return min(self.order + other._low(), other.order + self._low())

    def __mul__(self, other):
        if isinstance(other, (int, LaurentQL)):
            other = LaurentQL(other) if isinstance(other, int) else other
            shift = other.min_q() if other else 0
            return QLSeries(self.order + shift, self.poly * other)
        if not isinstance(other, QLSeries):
            return NotImplemented
        return QLSeries(self._shifted_order(other), self.poly * other.poly)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QLSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return self.truncate(order).poly == other.truncate(order).poly

    __hash__ = None

    def first_mismatch(self, other: "QLSeries") -> int | None:
        """Lowest q-exponent where the two series differ (within the common window)."""
        order = min(self.order, other.order)
        diff = (self.poly - other.poly)
        exps = sorted({a for a, _ in diff.terms if a < order})
        return exps[0] if exps else None

    def __repr__(self):
        return f"QLSeries(order={self.order}, {self.poly})"

    def __str__(self):
        return f"{self.poly} + O(q^{self.order})"


def quantum_integer(k: int, z: int) -> RationalQL:
    """[k*beta + z]_q = (l^k q^z - l^-k q^-z) / (q - q^-1)."""
    if k == 0:
        sign = 1 if z >= 0 else -1
        n = abs(z)
        return RationalQL(LaurentQL({(n - 1 - 2 * j, 0): sign for j in range(n)}))
    num = LaurentQL({(z, k): 1, (-z, -k): -1})
    den = LaurentQL({(1, 0): 1, (-1, 0): -1})
    return RationalQL(num, den)


def quantum_factorial(n: int) -> RationalQL:
    out = RationalQL(1)
    for i in range(1, n + 1):
        out = out * quantum_integer(0, i)
    return out


def series_expand(f: RationalQL | LaurentQL | int, order: int) -> QLSeries:
    """Ascending expansion in q of an exact fraction, truncated below `order`."""
    f = RationalQL.coerce(f)
    if f.is_zero():
        return QLSeries(order)
    den = f.den
    mq = den.min_q()
    low = [(k, c) for k, c in den.items() if k[0] == mq]
    if len(low) != 1 or low[0][1] not in (1, -1):
        raise ValueError("non-invertible leading term")
    (_, ml), mc = low[0]
    quotient: dict[tuple[int, int], int] = {}
    rem = dict(f.num.items())
    while rem:
        lowest_q = min(a for a, _ in rem)
        e = lowest_q - mq
        if e >= order:
            break
        for (a, b), c in [(k, v) for k, v in rem.items() if k[0] == lowest_q]:
            piece = ((e, b - ml), c * mc)  # mc is its own inverse
            quotient[piece[0]] = quotient.get(piece[0], 0) + piece[1]
            for (dq, dl), dc in den.items():
                kk = (dq + e, dl + b - ml)
                v = rem.get(kk, 0) - piece[1] * dc
                if v:
                    rem[kk] = v
                else:
                    rem.pop(kk, None)
    return QLSeries(order, LaurentQL(quotient))


def sum_laurent(values: Iterable[LaurentQL]) -> LaurentQL:
    out = LaurentQL()
    for v in values:
        out = out + v
    return out
