import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgklrw.diagrams import (
    BLACK, BX, DOT, MX, NAIL, DiagramError, Element, Monomial, Weight, canonical_form,
    compose, degree, flip, parse_weights, sequence_of, theta, validate_monomial,
)
from dgklrw.sampling import random_monomial
from dgklrw.scalars import DeltaPoly, GradingVector
from oracles import linearizations
from strategies import monomials

B = Weight.beta
I = Weight.integral


def test_weight_tokens_roundtrip():
    assert parse_weights("i2,g-1,g0") == (I(2), B(-1), B(0))
    for w in (I(0), I(3), B(2), B(-4)):
        assert Weight.parse(w.token()) == w
        assert Weight.from_json(w.to_json()) == w
    with pytest.raises(DiagramError):
        Weight.parse("x0")
    with pytest.raises(DiagramError):
        I(-1)


def test_identity_is_valid():
    m = Monomial.identity((B(0), I(1)), (1, 2))
    assert validate_monomial(m) is None
    assert m.top == m.bottom == (1, BLACK, 2, BLACK, BLACK)


def test_black_leftmost_rejected():
    with pytest.raises(DiagramError, match="leftmost strand not colored"):
        Monomial.build((B(0),), (BLACK, 1), ())


def test_colored_colored_crossing_rejected():
    with pytest.raises(DiagramError, match="two colored"):
        Monomial.build((B(0), B(0), B(0)), (1, 2, 3), [(MX, 1)])


def test_diagnostic_names_height():
    with pytest.raises(DiagramError, match="height 1"):
        Monomial.build((B(0),), (1, BLACK, BLACK), [(DOT, 1), (DOT, 0)])


def test_crossing_at_zero_rejected():
    with pytest.raises(DiagramError, match="leftmost strand not colored"):
        Monomial.build((B(0),), (1, BLACK), [(MX, 0)])


def test_compose_idempotents():
    mu = (B(0), B(0))
    one = Monomial.identity(mu, (1, 1))
    assert compose(one, one) == one
    assert compose(Monomial.identity(mu, (2, 0)), one) is None


def test_compose_dots():
    mu = (B(0),)
    dot = Monomial.build(mu, (1, BLACK), [(DOT, 1)])
    assert compose(dot, dot) == Monomial.build(mu, (1, BLACK), [(DOT, 1), (DOT, 1)])


def test_degree_examples():
    mu = (B(0),)
    assert degree(Monomial.build(mu, (1, BLACK), [(DOT, 1)])) == GradingVector(0, 2, 0)
    assert degree(Monomial.build(mu, (1, BLACK, BLACK), [(BX, 1)])) == GradingVector(0, -2, 0)
    assert degree(Monomial.build((B(1),), (1, BLACK), [(NAIL, 0)])) == GradingVector(1, 2, 2)
    assert degree(Monomial.build((B(0), I(3)), (1, BLACK, 2), [(MX, 1)])) == GradingVector(0, 3, 0)
    assert degree(Monomial.build((B(0), B(-2)), (1, BLACK, 2), [(MX, 1)])) == GradingVector(0, -2, 1)


def test_canonical_distant_dots():
    mu = (B(0),)
    a = Monomial(mu, (1, BLACK, BLACK, BLACK), [(DOT, 3), (DOT, 1)])
    b = Monomial(mu, (1, BLACK, BLACK, BLACK), [(DOT, 1), (DOT, 3)])
    assert a == b
    assert a.sites == ((DOT, 1), (DOT, 3))


def test_canonical_left_dot_before_crossing():
    m = Monomial((B(0),), (1, BLACK, BLACK, BLACK), [(BX, 2), (DOT, 1)])
    assert m.sites == ((DOT, 1), (BX, 2))


def test_canonical_dependent_order_kept():
    m = Monomial((B(0),), (1, BLACK, BLACK), [(DOT, 2), (BX, 1)])
    assert m.sites == ((DOT, 2), (BX, 1))


def _lex_min_linearization(sites):
    key = lambda w: [(min((p, p + 1) if k in (BX, MX) else (0,) if k == NAIL else (p,)), k, p) for k, p in w]
    return min(linearizations(sites), key=key)


@given(monomials(max_sites=7))
def test_canonical_form_matches_exhaustive_oracle(m):
    assert m.sites == _lex_min_linearization(m.sites)


@given(monomials(max_sites=7), st.randoms(use_true_random=False))
def test_canonical_form_constant_on_isotopy_class(m, rnd):
    other = rnd.choice(sorted(linearizations(m.sites)))
    assert Monomial(m.mu, m.bottom, other) == m
    assert canonical_form(canonical_form(m)) == canonical_form(m)


@given(monomials(), st.integers(0, 2**32 - 1))
def test_degree_additive_under_compose(m, seed):
    upper = random_monomial(m.mu, m.kappa, 4, random.Random(seed))
    c = compose(upper, m)
    assert c is not None
    assert c.degree() == upper.degree() + m.degree()
    assert c.top == upper.top


@given(monomials())
def test_top_sequence_is_running_sequence(m):
    seq = m.bottom
    for kind, pos in m.sites:
        if kind in (BX, MX):
            seq = seq[:pos] + (seq[pos + 1], seq[pos]) + seq[pos + 2:]
    assert seq == m.top
    assert validate_monomial(m) is None


def test_flip_examples():
    mu = (B(0),)
    one = Monomial.identity(mu, (2,))
    assert flip(one) == one
    m = Monomial.build(mu, (1, BLACK, BLACK), [(DOT, 1), (BX, 1)])
    assert flip(m) == Monomial.build(mu, (1, BLACK, BLACK), [(BX, 1), (DOT, 1)])


@given(monomials())
def test_flip_is_involution(m):
    assert flip(flip(m)) == m
    assert validate_monomial(flip(m)) is None


@given(monomials(), st.integers(0, 2**32 - 1))
def test_flip_anti_multiplicative(m, seed):
    upper = random_monomial(m.mu, m.kappa, 3, random.Random(seed))
    assert flip(compose(upper, m)) == compose(flip(m), flip(upper))


def test_theta_examples():
    mu = (B(0),)
    t = theta(mu, 1, (1,))
    assert t.sites == ((NAIL, 0),)
    assert t.degree() == GradingVector(1, 0, 2)
    assert theta(mu, 2, (2,)).degree() == GradingVector(1, -4, 2)
    assert theta(mu, 1, (1,), p=1).degree() == GradingVector(1, 2, 2)
    with pytest.raises(DiagramError):
        theta(mu, 2, (1,))


@given(st.integers(1, 3), st.integers(0, 2), st.integers(-2, 2))
def test_theta_degree_formula(b1, b2, z):
    mu = (B(z), I(2))
    rho = (b1, b2)
    for k in range(1, b1 + b2 + 1):
        i = 1 if k <= b1 else 2
        q = 2 * sum(w.grading()[0] for w in mu[:i]) - 4 * (k - 1)
        lam = 2 * sum(w.grading()[1] for w in mu[:i])
        assert theta(mu, k, rho).degree() == GradingVector(1, q, lam)


def test_element_arithmetic_and_json():
    mu = (B(0),)
    a = Monomial.build(mu, (1, BLACK), [(DOT, 1)])
    b = Monomial.identity(mu, (1,))
    e = Element.of(a, DeltaPoly({1: 2})) + Element.of(b, -1)
    assert (e - e).is_zero()
    assert Element.from_json(e.to_json(mu), mu) == e
    assert (e * Element.of(b)) == e
    assert e.specialize_delta0() == Element.of(b, -1)


def test_monomial_json_crossing_alias():
    mu = (B(0), I(1))
    data = {"rho": [1, 1], "sites": [{"kind": "X", "pos": 1}, {"kind": "Crossing", "pos": 1}]}
    m = Monomial.from_json(mu, data)
    assert m.sites == ((MX, 1), (MX, 1))
    assert Monomial.from_json(mu, m.to_json()) == m


def test_sequence_of():
    assert sequence_of((0, 2, 1)) == (1, 2, BLACK, BLACK, 3, BLACK)
    with pytest.raises(DiagramError):
        sequence_of(())
