import pytest
from hypothesis import given
from hypothesis import strategies as st

from dgklrw.diagrams import Weight, admissible, compositions
from dgklrw.oracle import (
    TILDE, V, WeightVector, apply_efk, check_expansion, check_hermitian, check_sl2_relations,
    expand_tilde_in_v, expand_v_in_tilde, invert_unitriangular, shapovalov_pair,
    single_factor_form,
)
from dgklrw.scalars import LaurentQL, RationalQL, quantum_integer

B = Weight.beta
I = Weight.integral
q, lam = LaurentQL.q, LaurentQL.lam


def v(mu, rho):
    return WeightVector.basis_vector(mu, rho, V)


def tilde(mu, rho):
    return expand_tilde_in_v(mu, rho)


def test_ef_on_single_verma():
    for z in (-1, 0, 2):
        mu = (B(z),)
        assert apply_efk("E", apply_efk("F", v(mu, (0,)))) == v(mu, (0,)).scale(quantum_integer(1, z))


def test_k_eigenvalue():
    mu = (B(1), I(2))
    for rho in compositions(2, 2):
        k = apply_efk("K", v(mu, rho))
        # |mu| - 2b = beta + 1 + 2 - 4
        assert k == v(mu, rho).scale(LaurentQL.monomial(-1, 1))
        assert apply_efk("Kinv", k) == v(mu, rho)


def test_f_increments_last_part():
    mu = (B(0), B(0), I(1))
    assert apply_efk("F", v(mu, (1, 0, 2))) == v(mu, (1, 0, 3))


def test_unknown_operator():
    with pytest.raises(ValueError):
        apply_efk("G", v((B(0),), (0,)))


def test_integral_truncation():
    mu = (I(2),)
    w = WeightVector.basis_vector(mu, (0,), TILDE)
    for _ in range(3):
        w = apply_efk("F", w)
    assert w.is_zero()
    assert v(mu, (3,)).to_tilde().is_zero()


def test_single_block_expansion_trivial():
    assert tilde((B(0),), (3,)) == v((B(0),), (3,))


def test_beta_beta_displayed_steps():
    mu = (B(0), B(0))
    F = lambda w: apply_efk("F", w)
    # v (x) F^2 v = F(v (x) F v) - lambda q^-2 F v (x) F v
    assert tilde(mu, (0, 2)) == F(tilde(mu, (0, 1))) - tilde(mu, (1, 1)).scale(LaurentQL.monomial(-2, 1))
    # F(v (x) F v) = F^2(v (x) v) - lambda F(F v (x) v)
    assert F(tilde(mu, (0, 1))) == F(F(tilde(mu, (0, 0)))) - F(tilde(mu, (1, 0))).scale(lam(1))
    # F v (x) F v = F(F v (x) v) - lambda F^2 v (x) v
    assert tilde(mu, (1, 1)) == F(tilde(mu, (1, 0))) - tilde(mu, (2, 0)).scale(lam(1))
    assert tilde(mu, (0, 2)).coeffs == {
        (0, 2): RationalQL(1),
        (1, 1): RationalQL(-LaurentQL.monomial(-2, 1) - lam(1)),
        (2, 0): RationalQL(LaurentQL.monomial(-2, 2)),
    }


def test_beta_beta_beta_displayed_expansion():
    mu = (B(0),) * 3
    L = lam(1)
    assert tilde(mu, (0, 1, 1)).coeffs == {
        (0, 1, 1): RationalQL(1),
        (0, 2, 0): RationalQL(-L),
        (1, 0, 1): RationalQL(-L),
        (1, 1, 0): RationalQL(L * L),
    }


def test_single_factor_values():
    assert single_factor_form(I(1), 1) == RationalQL(1)
    assert single_factor_form(I(1), 2) == RationalQL(0)
    # (F v, F v) = q * q^{beta - 2} * [beta] on M(beta)
    assert single_factor_form(B(0), 1) == RationalQL(1 - lam(2), 1 - q(2))
    assert single_factor_form(B(0), 0) == RationalQL(1)


def test_shapovalov_empty_and_mismatch():
    mu = (B(0), I(1))
    assert shapovalov_pair(v(mu, (0, 0)), v(mu, (0, 0))) == RationalQL(1)
    assert shapovalov_pair(v(mu, (1, 0)), v(mu, (0, 0))).is_zero()


@pytest.mark.parametrize("mu", [(B(0),), (I(1),), (I(3),), (B(-2),)])
def test_single_factor_recursion(mu):
    # (F^i v, F^i v) = (F^{i-1} v, q E K F^i v), computed on vectors
    m, = mu
    for i in range(1, 5):
        x = WeightVector.basis_vector(mu, (i - 1,), TILDE)
        y = apply_efk("F", x)
        rhs = shapovalov_pair(x, apply_efk("E", apply_efk("K", y)).scale(q(1)))
        assert single_factor_form(m, i) == rhs


@pytest.mark.parametrize("mu", [(B(0), B(0)), (I(1), B(0), I(2)), (B(1), I(1), B(-1))])
def test_sl2_relations(mu):
    assert check_sl2_relations(mu, 3).ok


@pytest.mark.parametrize("mu", [(B(0), B(0)), (I(1), B(0), I(2)), (B(1), I(1), B(-1))])
def test_hermitian(mu):
    assert check_hermitian(mu, 3).ok


@pytest.mark.parametrize("mu", [(B(0), B(0), B(0)), (I(1), B(0)), (I(2), I(1), B(0))])
def test_expansion_consistent(mu):
    for b in range(4):
        assert check_expansion(mu, b).ok


@given(st.integers(0, 3), st.lists(st.integers(-2, 2), min_size=1, max_size=3))
def test_basis_change_involution(b, zs):
    mu = tuple(B(z) for z in zs)
    inverse = invert_unitriangular(mu, b)
    for rho in compositions(b, len(mu)):
        back = WeightVector(mu, b, {}, TILDE)
        for key, c in tilde(mu, rho).coeffs.items():
            back = back + inverse[key].scale(c)
        assert back == WeightVector.basis_vector(mu, rho, TILDE)
        assert expand_v_in_tilde(mu, rho) == inverse[rho]


def test_invert_rejects_integral():
    with pytest.raises(ValueError):
        invert_unitriangular((I(1),), 1)


@given(st.lists(st.sampled_from([B(0), B(1), I(1), I(2)]), min_size=1, max_size=3), st.integers(0, 3))
def test_shapovalov_symmetric(mu, b):
    mu = tuple(mu)
    comps = [c for c in compositions(b, len(mu)) if admissible(c, mu)]
    for a in comps:
        for c in comps:
            assert shapovalov_pair(v(mu, a), v(mu, c)) == shapovalov_pair(v(mu, c), v(mu, a))


def test_weight_vector_json():
    data = tilde((B(0), B(0)), (0, 1)).to_json()
    assert data["basis"] == "v" and data["b"] == 1
    assert {tuple(t["rho"]) for t in data["terms"]} == {(0, 1), (1, 0)}
