import itertools
from fractions import Fraction

import pytest

from nlpva.algebras import specialize
from nlpva.bracket import BracketEntry, NonlocalPVA
from nlpva.jacobi import (TERMS, e12_sides, jacobi_check, jacobi_components, oracle_equivalence,
                          triple_projections, verify_e12)
from nlpva.superpoly import DiffAlgebra, Generator


def potential_gl11():
    """Potential affine gl(1|1): two odd generators, so Koszul signs are exercised everywhere."""
    alg = DiffAlgebra([Generator("E"), Generator("N"), Generator("a", 1), Generator("b", 1),
                       Generator("K", 0, True)])
    p = alg.parse
    br = {("N", "a"): "a", ("a", "N"): "-a", ("N", "b"): "-b", ("b", "N"): "b",
          ("a", "b"): "E", ("b", "a"): "E"}
    form = {("E", "N"): 1, ("N", "E"): 1, ("a", "b"): 1, ("b", "a"): -1}
    entries = {}
    for x in "ENab":
        for y in "ENab":
            pairs = []
            if (x, y) in br:
                pairs += [(p(br[x, y]), p("1")), (p("-1"), p(br[x, y]))]
            f = form.get((x, y), 0)
            if f:
                pairs += [(p("K").scale(Fraction(-f, 2)), p("1")), (alg.const(Fraction(-f, 2)), p("K"))]
            entries[(x, y)] = BracketEntry({}, pairs)
    return NonlocalPVA(alg, entries, "potential-gl11", validate=True)


def gens(A):
    return [A.parse(g) for g in A.generator_names]


def test_gl11_odd_triples_pass_with_oracle():
    # regression: the pi_5 sign in the left/middle projections on odd pairs
    A = potential_gl11()
    odd = [A.parse("a"), A.parse("b")]
    for x, y in itertools.product(odd, repeat=2):
        for z in gens(A):
            rep = jacobi_check(A, x, y, z, 4)
            assert rep.ok, rep.line()


def test_gl11_all_triples_component_form():
    A = potential_gl11()
    bad = [t for t in itertools.product(gens(A), repeat=3) if not jacobi_components(A, *t, 3).ok]
    assert bad == []


def test_gurarie_ludwig_free_K_counterexample(algebras):
    A = algebras["gurarie-ludwig"]
    p = A.parse
    rep = jacobi_check(A, p("xi"), p("ell"), p("ell"), 6)
    assert not rep.ok
    c = rep.counterexample
    assert (c.component, tuple(c.exponents), c.lhs, c.rhs) == ("V1", (0, 0), "0", "-1/6*d(xi,2)*K")


def test_gurarie_ludwig_counterexample_seen_by_coefficient_route(algebras):
    A = algebras["gurarie-ludwig"]
    p = A.parse
    lhs, rhs = e12_sides(A, 0, 0, p("xi"), p("ell"), p("ell"))
    assert (str(lhs), str(rhs)) == ("0", "-1/6*d(xi,2)*K")
    bad = [(m, k) for m in range(4) for k in range(4) if not verify_e12(A, m, k, p("xi"), p("ell"), p("ell")).ok]
    assert bad == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]


def test_gurarie_ludwig_K_zero_passes(algebras):
    A = specialize(algebras["gurarie-ludwig"], "K", 0)
    bad = [t for t in itertools.product(gens(A), repeat=3) if not jacobi_check(A, *t, 6).ok]
    assert bad == []


@pytest.mark.parametrize("name", ["potential-free-boson", "potential-virasoro-magri"])
def test_local_plus_nonlocal_triples(algebras, name):
    A = algebras[name]
    for t in itertools.product(gens(A), repeat=3):
        assert jacobi_check(A, *t, 5).ok


def test_composite_triple(algebras):
    A = algebras["potential-affine-sl2"]
    p = A.parse
    assert jacobi_check(A, p("e*f"), p("h"), p("d(e,1)"), 4).ok


def test_projection_terms_are_distinct_objects(algebras):
    A = algebras["potential-virasoro-magri"]
    u = A.parse("u")
    proj = triple_projections(A, u, u, u, 3)
    assert all(proj.term(t) is not None for t in TERMS)
    assert not proj.left.is_zero()


def test_oracle_catches_a_wrong_projection(algebras):
    A = algebras["potential-virasoro-magri"]
    u = A.parse("u")
    proj = triple_projections(A, u, u, u, 3)
    proj.left = proj.left.scale(2)
    assert not oracle_equivalence(A, u, u, u, 3, proj).ok
    assert not jacobi_components(A, u, u, u, 3, proj).ok


def test_e12_requires_nonnegative(algebras):
    A = algebras["potential-free-boson"]
    x = A.parse("x")
    with pytest.raises(ValueError):
        e12_sides(A, -1, 0, x, x, x)
