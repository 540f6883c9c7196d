import pytest

from dgklrw.diagrams import BLACK, DOT, Element, Monomial, Weight, resolve
from dgklrw.identities import (
    FAMILIES, IdentityBounds, _nail_train, dot_slide_crossings_cases, dot_slide_nails_cases, identity_cases,
    run_identity_suite,
)
from dgklrw.rewriting import RewriteSystem

SMALL = IdentityBounds(max_gap=1, max_dots=2, max_slide_dots=2, max_crossings=2, max_black=3)


@pytest.mark.parametrize("family", list(FAMILIES))
def test_family_holds_small(family):
    report = run_identity_suite(SMALL, [family])
    assert report.checked > 0
    assert report.ok, [(f.case.params, f.left_nf, f.right_nf) for f in report.failures[:3]]


def test_cases_share_boundaries_and_degree():
    for case in identity_cases(SMALL):
        sides = [m for e in (case.left, case.right) for m in e.monomials()]
        assert len({(m.bottom, m.top) for m in sides}) <= 1, case.params
        assert len({m.degree() for m in sides}) <= 1, case.params


def test_suite_is_order_independent():
    names = list(FAMILIES)
    a = run_identity_suite(SMALL, names)
    b = run_identity_suite(SMALL, names[::-1])
    assert a.checked == b.checked
    assert a.by_family == b.by_family


def test_dot_slide_corrections_are_needed():
    # without its correction terms the slide fails whenever dots move
    rw = RewriteSystem()
    for case in dot_slide_nails_cases(SMALL):
        k, n = case.params["k"], case.params["N"]
        if n == 0:
            continue
        mu = (Weight.parse(case.params["mu"]),)
        bottom = (1,) + (BLACK,) * (k + 1)
        main = Element.of(Monomial.build(mu, bottom, resolve(bottom, _nail_train(k) + [(DOT, k + 1)] * n)))
        assert rw.normal_form(case.left) != rw.normal_form(main)


def test_dot_slide_crossings_nontrivial():
    rw = RewriteSystem()
    nontrivial = [c for c in dot_slide_crossings_cases(SMALL) if not rw.normal_form(c.left).is_zero()]
    assert nontrivial


def test_failure_is_reported():
    # a rewriter without the nail-loop rules cannot prove the nailed braid move
    report = run_identity_suite(SMALL, ["nailed-R3"], rewriter=RewriteSystem(loop_rules=False))
    assert not report.ok
    f = report.failures[0]
    assert f.left_nf != f.right_nf


def test_weights_palette_override():
    bounds = IdentityBounds(max_gap=0, max_dots=1, weights=(Weight.integral(5),))
    assert run_identity_suite(bounds, ["double-nail"]).ok
