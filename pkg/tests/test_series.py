from fractions import Fraction

import pytest

from nlpva.series import (REGIMES, LaurentSeries, SevenComponent, canonical_terms, expand_nonlocal,
                          expand_rational_monomial, iota_expand, poly_shift_apply,
                          substitute_neg_lambda_partial)
from nlpva.superpoly import DiffAlgebra, Generator

A = DiffAlgebra([Generator("u"), Generator("C", 0, True)])
p = A.parse

POINTS = [(Fraction(3, 7), Fraction(-5, 2)), (Fraction(11, 3), Fraction(2, 9)), (Fraction(-4), Fraction(13, 5))]


def component_value(k, e1, e2, lam, mu):
    nu = lam + mu
    if k in (1, 2, 3, 5):
        return lam ** e1 * mu ** e2
    if k in (4, 6):
        return lam ** e1 * nu ** e2
    return mu ** e1 * nu ** e2


def test_expand_nonlocal_inverse():
    s = expand_nonlocal(-1, p("u"), -4)
    assert s.dump() == "lambda^-1: u; lambda^-2: -d(u,1); lambda^-3: d(u,2); lambda^-4: -d(u,3)"


def test_expand_nonlocal_polynomial():
    s = expand_nonlocal(2, p("u"), -10)
    assert s.coeffs == {2: p("u"), 1: p("2*d(u,1)"), 0: p("d(u,2)")}


def test_inverse_times_shift_is_identity():
    # (lambda + d) applied to (lambda + d)^-1 u gives u exactly on the shifted window
    s = poly_shift_apply(expand_nonlocal(-1, p("u"), -6), 1)
    assert s.floor == -5
    assert s.coeffs == {0: p("u")}


def test_substitute_neg_lambda_partial():
    s = LaurentSeries(A, {1: p("u"), 0: p("C")}, -3)
    # u*(-lambda - d) + C = -lambda u - u' + C  (d acts on the coefficient)
    assert substitute_neg_lambda_partial(s).coeffs == {1: -p("u"), 0: p("C - d(u,1)")}


def test_substitution_is_an_involution():
    s = expand_nonlocal(-1, p("u^2"), -5) + LaurentSeries(A, {3: p("C*u")}, -5)
    twice = substitute_neg_lambda_partial(substitute_neg_lambda_partial(s))
    assert twice == s


def test_floor_is_enforced():
    s = LaurentSeries(A, {0: p("u")}, -2)
    with pytest.raises(ValueError):
        s.coeff(-3)
    with pytest.raises(ValueError):
        s.truncate(-3)


@pytest.mark.parametrize("a,b,c", [(-1, -1, -1), (2, -1, -2), (-2, 3, -1), (0, -2, -1),
                                   (1, 1, 2), (-3, 0, 2), (3, -2, -1), (-1, -2, 0)])
def test_canonical_terms_agree_with_rational_function(a, b, c):
    for lam, mu in POINTS:
        want = lam ** a * mu ** b * (lam + mu) ** c
        got = sum(v * component_value(k, e1, e2, lam, mu) for (k, e1, e2), v in canonical_terms(a, b, c))
        assert got == want


def test_reduced_removes_v7_and_keeps_value():
    sc = SevenComponent.canonicalize(A, 0, -2, -1)
    assert sc.comps[7]
    red = sc.reduced()
    assert not red.comps[7]
    for lam, mu in POINTS:
        def value(x):
            return sum(v.constant_term() * component_value(k, e1, e2, lam, mu)
                       for k in range(1, 8) for (e1, e2), v in x.comps[k].items())
        assert value(red) == value(sc)


@pytest.mark.parametrize("regime", REGIMES)
@pytest.mark.parametrize("a,b,c", [(-1, -1, -1), (0, -1, -1), (2, -1, -2), (-2, 1, -1), (1, 0, -2)])
def test_iota_of_components_matches_direct_expansion(regime, a, b, c):
    floors = (-6, -6)
    sc = SevenComponent.canonicalize(A, a, b, c, floor=a + b + c)
    assert iota_expand(sc, regime, floors) == expand_rational_monomial(A, a, b, c, regime, floors)


def test_mu_lambda_expansion_of_inverse_sum():
    # 1/(lambda+mu) = sum_j (-1)^j lambda^j mu^(-1-j)
    g = expand_rational_monomial(A, 0, 0, -1, "mu_lambda", (0, -4))
    assert {k: v.constant_term() for k, v in g.coeffs.items()} == {(0, -1): 1, (1, -2): -1, (2, -3): 1, (3, -4): -1}


def test_component_membership_is_checked():
    sc = SevenComponent(A, -10)
    with pytest.raises(ValueError):
        sc.add(1, -1, 0, p("u"))


def test_grids_from_different_regimes_do_not_compare():
    g1 = expand_rational_monomial(A, 0, 0, -1, "mu_lambda", (-3, -3))
    g2 = expand_rational_monomial(A, 0, 0, -1, "lambda_mu", (-3, -3))
    with pytest.raises(TypeError):
        g1 == g2
