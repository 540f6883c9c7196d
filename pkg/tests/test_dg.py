import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgklrw.basis import enumerate_basis
from dgklrw.dg import (
    DgElement, build_standard_complex, d_squared_witnesses, decomposition_summands, differential,
    euler_characteristic, euler_vs_shapovalov, oracle_kclass, recursive_cone_kclass,
    standard_kclass, tdecomp_report,
)
from dgklrw.diagrams import BLACK, BX, DOT, MX, NAIL, Element, Monomial, Weight, compose, compositions
from dgklrw.rewriting import RewriteSystem
from dgklrw.sampling import random_monomial
from dgklrw.scalars import GradingVector, LaurentQL, QLSeries

B = Weight.beta
I = Weight.integral
RW = RewriteSystem()
q, lam = LaurentQL.q, LaurentQL.lam


def test_differential_of_nail_integral():
    mu = (I(1),)
    nail = Monomial.build(mu, (1, BLACK), [(NAIL, 0)])
    d = differential(nail)
    assert d.h == 0
    assert d.element == Element.of(Monomial.build(mu, (1, BLACK), [(DOT, 1)]))


def test_differential_of_nail_integral_two():
    mu = (I(2),)
    nail = Monomial.build(mu, (1, BLACK), [(NAIL, 0)])
    assert differential(nail).element == Element.of(Monomial.build(mu, (1, BLACK), [(DOT, 1)] * 2))


def test_differential_of_nail_generic():
    nail = Monomial.build((B(1),), (1, BLACK), [(NAIL, 0)])
    assert differential(nail).element.is_zero()


def test_differential_of_dot_and_crossing():
    mu = (I(1), I(1))
    for sites in ([(DOT, 1)], [(BX, 1)], [(MX, 2)]):
        m = Monomial.build(mu, (1, BLACK, BLACK, 2), sites)
        assert differential(m).element.is_zero()


def test_differential_lowers_h_and_keeps_qlambda():
    mu = (I(2), B(0))
    for e in enumerate_basis(mu, (1, 1), (2, 0), 8):
        d = differential(e.monomial)
        assert d.h == e.degree.h - 1
        for g in d.element.degrees():
            assert (g.q, g.l) == (e.degree.q, e.degree.l)


def test_dg_element_requires_homogeneity():
    mu = (I(1),)
    mixed = Element.of(Monomial.identity(mu, (1,))) + Element.of(Monomial.build(mu, (1, BLACK), [(NAIL, 0)]))
    with pytest.raises(ValueError):
        DgElement.of(mixed)


@pytest.mark.parametrize("mu", [(I(1),), (I(2),), (I(1), B(0)), (I(3), I(1))])
def test_d_squared_zero_on_basis(mu):
    for b in range(1, 5 - len(mu)):
        for rho in compositions(b, len(mu)):
            for kappa in compositions(b, len(mu)):
                for e in enumerate_basis(mu, kappa, rho, 6):
                    assert differential(differential(e.monomial)).element.is_zero()


@given(st.sampled_from([(I(1),), (I(2),), (I(1), B(0)), (I(2), I(1))]), st.integers(1, 3),
       st.integers(0, 2**32 - 1))
def test_leibniz(mu, b, seed):
    rng = random.Random(seed)
    rho = rng.choice(compositions(b, len(mu)))
    lower = random_monomial(mu, rho, rng.randint(0, 5), rng)
    upper = random_monomial(mu, lower.kappa, rng.randint(0, 5), rng)
    lhs = differential(compose(upper, lower)).element
    sign = (-1) ** upper.degree().h
    rhs = RW.normal_form(differential(upper).element * Element.of(lower)
                         + (Element.of(upper) * differential(lower).element).scale(sign))
    assert lhs == rhs


def test_euler_examples():
    assert euler_characteristic((B(0), I(1)), (0, 0), (0, 0), 6) == QLSeries(6, 1)
    assert euler_characteristic((I(1),), (1,), (1,), 12) == QLSeries(12, 1)
    expected = (1 - lam(2)) * (1 + q(2) + q(4))
    assert euler_characteristic((B(0),), (1,), (1,), 6) == QLSeries(6, expected)


def test_tdecomp_trivial():
    assert tdecomp_report((B(0), B(0)), (0, 0), 6).equal


def test_tdecomp_inventory_two_blacks_left():
    mu = (B(0), B(0))
    summands = decomposition_summands(mu, (2, 0), 8)
    # labels are "restrict" or "G<k>(block,strand,dots)"; drop the dot count
    families = {s.label if s.label == "restrict" else s.label.rsplit(",", 1)[0] + ")" for s in summands}
    assert families == {"restrict", "G1(1,0)", "G1(1,1)", "G2(1,0)", "G2(1,1)"}
    restrict = next(s for s in summands if s.label == "restrict")
    assert restrict.mu == (B(0),) and restrict.rho == (2,)
    for s in summands:
        if s.label != "restrict":
            assert s.rho == (1, 0)
            assert s.shift.h == (1 if s.label.startswith("G2") else 0)


@pytest.mark.parametrize("mu", [(B(0), B(0)), (B(1), B(-1)), (I(1), B(0)), (B(0), I(2))])
def test_tdecomp_two_blacks(mu):
    for rho in compositions(2, 2):
        rep = tdecomp_report(mu, rho, 8)
        assert rep.equal, (rho, rep.mismatch)


def test_standard_complex_trivial():
    mu = (B(0), B(0))
    cx = build_standard_complex(mu, (2, 0))
    assert list(cx.summands) == [()]
    assert not cx.maps
    assert standard_kclass(mu, (2, 0)) == {(2, 0): LaurentQL(1)}


def test_standard_complex_square():
    mu = (B(0), B(0))
    cx = build_standard_complex(mu, (0, 2))
    assert len(cx.summands) == 4
    assert len(cx.maps) == 4
    assert sorted(len(j) for j in cx.summands) == [0, 1, 1, 2]
    assert {rj for rj, _ in cx.summands.values()} == {(0, 2), (1, 1), (2, 0)}


def test_standard_complex_three_colors():
    mu = (B(0),) * 3
    cx = build_standard_complex(mu, (0, 1, 1))
    assert len(cx.summands) == 4
    assert {rj for rj, _ in cx.summands.values()} == {(0, 1, 1), (1, 0, 1), (0, 2, 0), (1, 1, 0)}


def test_standard_kclass_beta_beta():
    k = standard_kclass((B(0), B(0)), (0, 2))
    assert k == {
        (0, 2): LaurentQL(1),
        (1, 1): -LaurentQL.monomial(-2, 1) - lam(1),
        (2, 0): LaurentQL.monomial(-2, 2),
    }


@pytest.mark.parametrize("mu", [(B(0), B(0)), (I(1), B(0)), (B(0), I(1), B(2)), (I(2), I(1), I(1))])
def test_standard_kclass_matches_oracle_and_cone(mu):
    for b in range(4):
        for rho in compositions(b, len(mu)):
            cx = build_standard_complex(mu, rho)
            assert d_squared_witnesses(cx) == []
            assert cx.kclass() == oracle_kclass(mu, rho)
            assert cx.kclass() == recursive_cone_kclass(mu, rho)


def test_summand_shift_of_square():
    mu = (B(0), B(0))
    cx = build_standard_complex(mu, (0, 2))
    assert cx.summands[((2, 1),)][1] == GradingVector(0, 0, 1)
    assert cx.summands[((2, 2),)][1] == GradingVector(0, -2, 1)


def test_euler_vs_shapovalov_unit_one():
    rep = euler_vs_shapovalov((I(1),), 1, 10)
    assert rep.ok
    assert rep.units == {(1, 0, 0)}
    row, = rep.rows
    assert row.euler == QLSeries(10, 1)


@pytest.mark.parametrize("mu", [(B(0),), (I(2),), (I(1), B(0)), (B(0), B(0))])
def test_euler_vs_shapovalov_small(mu):
    for b in range(3):
        rep = euler_vs_shapovalov(mu, b, 8)
        assert rep.ok, [(r.kappa, r.rho) for r in rep.rows if not r.matches]
