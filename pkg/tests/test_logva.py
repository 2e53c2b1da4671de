from fractions import Fraction

import pytest

from nlpva.algebras import builtin
from nlpva.logva import (DegreeCapExceeded, FockState, FreeBoson, OutOfScope, PBWState, VirasoroMagri,
                         borcherds_n0_check, borcherds_sides, fb_mode_apply, fb_zeta_coeff, fock_basis,
                         gr_bracket, gr_product_check, pbw_basis, vector_field_check, vm_commutator_check,
                         vm_confluence_check, vm_DL_check, vm_L_mode, vm_normal_form)
from nlpva.logva.vector_fields import L_apply, vector_field_D_check
from nlpva.logva.vm import parse_word

F = FockState.parse
P = PBWState.parse


# ------------------------------------------------------------------ free boson

@pytest.mark.parametrize("n,state,want", [
    (-1, "1", "x0"),
    (-2, "x0", "x0*x1"),
    (-1, "x0", "x0^2"),
    (0, "x0", "0"),
    (0, "x1", "-K"),
    (0, "x0*x1", "-K*x0"),
    (1, "K*x2", "-1/2*K^2"),
    (2, "x3^2", "-2/3*K*x3"),
])
def test_fb_modes(n, state, want):
    assert fb_mode_apply(n, F(state)) == F(want) if want != "0" else not fb_mode_apply(n, F(state))


def test_fb_modes_without_K():
    assert fb_mode_apply(0, F("x1"), with_K=False) == F("-1")
    assert fb_mode_apply(1, F("x2*x0"), with_K=False) == F("-1/2*x0")


def test_fb_zeta_coefficients():
    assert fb_zeta_coeff(1, -1, F("x0")) == F("K")
    assert fb_zeta_coeff(1, -1, F("x0^2")) == F("2*K*x0")
    assert not fb_zeta_coeff(1, 0, F("x0"))
    assert not fb_zeta_coeff(2, -1, F("x0^3"))
    assert fb_zeta_coeff(0, -1, F("x1")) == fb_mode_apply(-1, F("x1"))
    with pytest.raises(ValueError):
        fb_zeta_coeff(-1, 0, F("x0"))


def test_fb_translation():
    fb = FreeBoson()
    assert fb.translate(F("x0")) == F("x1")
    assert fb.translate(F("x1")) == F("2*x2")
    assert fb.translate(F("x0*x1")) == F("x1^2 + 2*x0*x2")
    assert not fb.translate(F("K"))


def test_fb_field_and_recursion_routes_agree():
    fb = FreeBoson()
    for key in fock_basis(3, 2):
        s = fb.basis(key)
        for r in range(4):
            for n in range(-3, 4):
                assert fb.mode_translate(r, n, s) == fb.mode_translate_recursive(r, n, s)


def test_fock_basis_sizes():
    assert len(fock_basis(4, 2)) == 70
    assert len(fock_basis(2, 2, with_K=False)) == 10
    assert (0, ()) in fock_basis(0, 0)


def test_fock_parse():
    assert str(F("x0*x1^2*K")) == "K*x0*x1^2"
    assert F("vac") == F("1")
    assert F("3/2*x0 - K^2") == F("x0").scale(Fraction(3, 2)) - F("K^2")
    with pytest.raises(ValueError):
        F("y3")


def test_fb_braid_is_symmetric_and_nilpotent():
    fb = FreeBoson()
    keys = fock_basis(2, 1)
    for a in keys:
        for b in keys:
            t = fb.braid_states(fb.basis(a), fb.basis(b))
            swapped = {(y, x): v for (x, y), v in fb.braid_states(fb.basis(b), fb.basis(a)).items()}
            assert t == swapped
            assert fb.braid_nilpotency(fb.basis(a), fb.basis(b)) <= 5


def test_fb_borcherds_sample():
    fb = FreeBoson()
    for key in fock_basis(2, 1):
        for m in range(-2, 3):
            for k in range(-2, 3):
                assert borcherds_n0_check(fb, m, k, fb.basis(key)).ok


def test_borcherds_detects_a_corrupted_braiding():
    class Wrong(FreeBoson):
        def braid(self, a, b):
            return [(2 * c, x, y) for c, x, y in super().braid(a, b)]

    fb = Wrong()
    bad = [(m, k) for m in range(-2, 2) for k in range(-2, 2)
           if not borcherds_n0_check(fb, m, k, F("x0*x1")).ok]
    assert bad


def test_borcherds_composite_first_slot():
    fb = FreeBoson()
    with pytest.raises(OutOfScope):
        borcherds_sides(fb, 0, 0, F("x0"), g=(0, (2,)))


# --------------------------------------------------------------- Virasoro-Magri

@pytest.mark.parametrize("word,want", [
    ("u(0)u(-2)vac", "-2*u(-2)vac"),
    ("Du(-1)vac", "vac"),
    ("u(0)vac", "0"),
    ("Tu(-1)vac", "u(-2)vac"),
    ("u(1)u(-1)u(-1)vac", "-1/6*C*u(-1)vac"),
    ("C u(3)u(-3)vac", "-1/4*C^2*vac"),
    ("D u(-2)u(-1)vac", "u(-2)vac"),
    # (f(-3) - f(-1)) [T, u_{-3}] = -1/2 * 3 u_{-4}
    ("u(-1)u(-3)vac", "u(-3)u(-1)vac - 3/2*u(-4)vac"),
])
def test_vm_normal_forms(word, want):
    for strategy in ("apply", "rewrite"):
        got = vm_normal_form(word, strategy=strategy)
        assert (str(got) == want) if want != "0" else not got


def test_vm_sign_of_the_T_term():
    # regression: [u_0, u_{-2}] vac must be -2 u_{-2} vac, which fixes the sign of the [T, u] term
    m = VirasoroMagri()
    assert m.apply_u(0, P("u(-2)vac")) == P("-2*u(-2)vac")
    assert vm_commutator_check(0, -2, P("vac"), which="u").ok


def test_vm_L_modes():
    m = VirasoroMagri()
    assert m.L(0, P("u(-2)vac")) == P("2*u(-2)vac")
    assert not m.L(-1, P("vac"))
    assert m.L(2, P("u(-1)u(-1)vac")) == P("5/4*C*vac")
    assert vm_L_mode(2, P("u(-1)u(-1)vac"), VirasoroMagri(0)) == PBWState()


def test_vm_L_from_translation_recursion():
    m = VirasoroMagri()
    for key in pbw_basis(4):
        s = m.basis(key)
        for n in range(-3, 4):
            assert m.mode(n + 1, (0, (2,)), s) == m.L(n, s)


def test_vm_relations_small():
    for c in (None, 0):
        model = VirasoroMagri(c)
        for key in pbw_basis(3):
            s = model.basis(key)
            for a in range(-2, 3):
                assert vm_DL_check(a, s, model).ok
                for b in range(-2, 3):
                    assert vm_commutator_check(a, b, s, which="L", model=model).ok
                    assert vm_commutator_check(a, b, s, which="u", model=model).ok


def test_vm_borcherds_sample():
    model = VirasoroMagri()
    for key in pbw_basis(3):
        for m in range(-2, 3):
            for k in range(-2, 3):
                assert borcherds_n0_check(model, m, k, model.basis(key)).ok


def test_pbw_basis_and_parse():
    assert len(pbw_basis(5)) == 19
    assert pbw_basis(2) == [(0, ()), (0, (1,)), (0, (2,)), (0, (1, 1))]
    assert P("C^2*u(-2)vac").grade() == 2
    with pytest.raises(ValueError):
        P("u(-1)u(-2)vac")
    with pytest.raises(ValueError):
        P("u(0)vac")


def test_parse_word_and_errors():
    assert parse_word("C D T u(-1) vac") == ([("D",), ("T",), ("u", -1)], 1)
    with pytest.raises(ValueError):
        parse_word("u(-1)vac u(-2)")
    with pytest.raises(ValueError):
        parse_word("x(1)vac")


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        vm_normal_form("u(-1)u(-1)u(-1)vac", degree_cap=2)


def test_confluence_words():
    for w in ["u(2)u(-1)u(-3)vac", "TDu(-2)vac", "u(1)Tu(-1)u(-1)vac", "DDu(-2)u(-1)vac"]:
        assert vm_confluence_check(w).ok


def test_vm_composite_first_slot():
    with pytest.raises(OutOfScope):
        VirasoroMagri().mode(0, (0, (1, 1)), P("vac"))


# ----------------------------------------------------------------- vector fields

def test_vector_field_action():
    # L_0 on t: -(t^3/(t-D)^2) d/dt t = -t - 2D - 3D^2/t - ...
    assert L_apply(0, {(1, 0): 1}, 3) == {(1, 0): -1, (0, 1): -2, (-1, 2): -3}
    assert L_apply(5, {(0, 0): 1}, 4) == {}


def test_vector_fields_reproduce_relation():
    for m in range(-3, 4):
        for k in range(-3, 4):
            assert vector_field_check(m, k, 4, (-6, 6)).ok
        assert vector_field_D_check(m, 4)


def test_vector_field_wrong_N():
    with pytest.raises(ValueError):
        vector_field_check(0, 0, 0)


# ------------------------------------------------------------- associated graded

def test_gr_free_boson():
    s = gr_bracket(FreeBoson(), -6)
    A = builtin("potential-free-boson")
    assert s.coeffs == {-1: A.parse("-K")}
    assert s == A.bracket(A.parse("x"), A.parse("x"), -6)


def test_gr_free_boson_without_K_is_trivial():
    assert gr_bracket(FreeBoson(False), -6).is_zero()


def test_gr_virasoro_magri():
    A = builtin("potential-virasoro-magri")
    u = A.parse("u")
    assert gr_bracket(VirasoroMagri(), -6) == A.bracket(u, u, -6)


@pytest.mark.parametrize("model", [FreeBoson(), FreeBoson(False), VirasoroMagri(), VirasoroMagri(0)],
                         ids=lambda m: m.name)
def test_gr_products(model):
    rep = gr_product_check(model)
    assert rep.ok, rep.line()
    assert rep.checked >= 50
