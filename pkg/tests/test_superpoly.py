from fractions import Fraction

import pytest

from nlpva.superpoly import DiffAlgebra, Generator, ParseError, apply_derivation

GL = DiffAlgebra([Generator("L"), Generator("xi", 1), Generator("ell", 0, False, 2),
                  Generator("xib", 1, False, 2), Generator("K", 0, True, 2)])
p = GL.parse


def test_parse_and_print_roundtrip():
    for text in ["0", "1", "-3/2*L^2", "xi*xib + 1/2*d(ell,1)", "L*d(L,2) - K"]:
        q = p(text)
        assert p(str(q)) == q


def test_odd_variables_anticommute():
    assert p("xi*xib") == -p("xib*xi")
    assert p("xi*xi") == 0
    assert p("d(xi,1)*d(xi,1)") == 0
    assert p("xi*d(xi,1)") == -p("d(xi,1)*xi")


def test_even_variables_commute():
    assert p("L*ell") == p("ell*L")
    assert p("(L + ell)^2") == p("L^2 + 2*L*ell + ell^2")


def test_partial_on_products():
    assert p("L^2").partial() == p("2*L*d(L,1)")
    assert p("xi*xib").partial() == p("d(xi,1)*xib + xi*d(xib,1)")
    assert p("K").partial() == 0
    assert p("d(L,1)").partial(3) == p("d(L,4)")


def test_central_generators_have_no_derivatives():
    assert GL.var("K", 2) == 0
    assert p("d(K,1)") == 0


def test_parity_and_grade():
    assert p("xi*L").parity() == 1
    assert p("xi*xib").parity() == 0
    assert p("xi + L").parity() is None
    assert p("xi*xib").grade() == 3
    assert p("ell*K").grade() == 4
    assert p("L + ell").grade() is None


def test_specialize_replaces_central():
    assert p("K*L + 3").specialize({"K": Fraction(2)}) == p("2*L + 3")


def test_odd_derivation_sign():
    # D(xi) = 1, D odd: D(xi*xi_b) = xib,  D(L*xi) = L
    rule = {"xi": GL.one()}
    assert apply_derivation(p("xi*xib"), rule, 1) == p("xib")
    assert apply_derivation(p("xib*xi"), rule, 1) == -p("xib")


@pytest.mark.parametrize("bad", ["L +", "d(K1,1)", "d(L,-1)", "L^-1", "foo", "L**x", "import os"])
def test_parse_errors(bad):
    with pytest.raises((ParseError, KeyError, ValueError)):
        p(bad)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        p("L + d(y,1)")
    assert exc.value.line == 1 and exc.value.col >= 5


def test_generator_validation():
    with pytest.raises(ValueError):
        Generator("d")
    with pytest.raises(ValueError):
        Generator("x", 2)
    with pytest.raises(ValueError):
        DiffAlgebra([])
    with pytest.raises(ValueError):
        DiffAlgebra([Generator("x"), Generator("x")])
