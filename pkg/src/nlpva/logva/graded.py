"""The associated graded of a filtered logVA model, at desk scale.

``gr_bracket`` evaluates

    {g_lambda h} = sum_{n>=0} lambda^n/n! mu_(n)(g (x) h)
                   + sum_{k>=0} (-1)^k lambda^(-1-k) mu_(-1)(S(T^k g (x) h))

in the model, keeps the part of filtration degree deg g + deg h - 1 and maps
it to differential polynomials.  ``gr_product_check`` samples the product
mu_(-1) on classes whose first slot has modes.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..report import Counterexample, VerificationReport
from ..series import LaurentSeries
from ..superpoly import apply_partial
from .core import LogVAModel, tensor_of


def _translates(model: LogVAModel, key, r: int):
    """T^r key as a state."""
    s = model.basis(key)
    for _ in range(r):
        s = model.translate(s)
    return s


def gr_bracket(model: LogVAModel, floor: int = -6, g=None, h=None) -> LaurentSeries:
    g = model.gen if g is None else g
    h = model.gen if h is None else h
    target = model.degree(g) + model.degree(h) - 1
    alg = model.pva().alg
    hs = model.basis(h)
    coeffs = {}
    top = model.weight(g) + model.weight(h) - 1
    for n in range(0, max(top, -1) + 1):
        v = model.mode(n, g, hs).degree_part(target)
        if v:
            coeffs[n] = model.to_diffpoly(v).scale(Fraction(1, factorial(n)))
    for k in range(0, -floor):
        tg = _translates(model, g, k)
        acc = model.state_cls()
        for (a, b), c in model.braid_tensor(tensor_of(tg, hs), 0, 1).items():
            acc = acc + model.mode(-1, a, model.basis(b)).scale(c)
        acc = acc.degree_part(target)
        if acc:
            e = -1 - k
            coeffs[e] = coeffs.get(e, alg.zero()) + model.to_diffpoly(acc).scale((-1) ** k)
    return LaurentSeries(alg, coeffs, floor)


def _first_slots(model: LogVAModel, max_translate: int):
    """Keys with modes: T^r g / r! for r <= max_translate, and the central generator."""
    out = []
    for r in range(max_translate + 1):
        s = _translates(model, model.gen, r)
        (key,) = s.terms
        out.append(key)
    central = model.central_key()
    if central is not None:
        out.append(central)
    return out


def gr_product_check(model: LogVAModel, samples=None, max_translate: int = 3) -> VerificationReport:
    """Unit, commutativity, associativity, T-Leibniz and mu_(-2) = (d a) b on gr classes.

    ``samples`` are basis keys used as the right-hand factor; first factors
    range over the keys returned by :func:`_first_slots`.  Associativity is
    checked as a.(b.c) = b.(a.c) = a b c in the polynomial algebra, which
    together with commutativity gives it for all products of these classes.
    """
    firsts = _first_slots(model, max_translate)
    samples = list(samples) if samples is not None else model.sample_keys()
    rep = VerificationReport("gr-product", model.name,
                             {"first": len(firsts), "samples": len(samples)})
    dp = model.to_diffpoly
    deg = model.degree

    def prod(a, s):
        return model.mode(-1, a, s)

    def fail(what, key, lhs, rhs):
        rep.ok = False
        if rep.counterexample is None:
            rep.counterexample = Counterexample(what, tuple(), f"{key}: {lhs}", str(rhs))

    def check(what, key, lhs, rhs):
        rep.checked += 1
        if lhs != rhs:
            fail(what, key, lhs, rhs)

    vac = model.basis(model.vac)
    for a in firsts:
        sa = model.basis(a)
        check("unit-left", a, prod(model.vac, sa), sa)
        check("unit-right", a, prod(a, vac), sa)
        for b in firsts:
            d = deg(a) + deg(b)
            check("commutativity", (a, b), dp(prod(a, model.basis(b)).degree_part(d)),
                  dp(prod(b, sa).degree_part(d)))
    for a in firsts:
        for c in samples:
            sc = model.basis(c)
            d = deg(a) + deg(c)
            ac = prod(a, sc)
            check("homomorphism", (a, c), dp(ac.degree_part(d)), dp(model.basis(a)) * dp(sc))
            check("leibniz", (a, c), dp(model.translate(ac).degree_part(d)),
                  apply_partial(dp(model.basis(a)) * dp(sc)))
            check("mu(-2)", (a, c), dp(model.mode(-2, a, sc).degree_part(d)),
                  apply_partial(dp(model.basis(a))) * dp(sc))
            for b in firsts:
                d3 = d + deg(b)
                left = dp(prod(a, prod(b, sc)).degree_part(d3))
                right = dp(prod(b, ac).degree_part(d3))
                check("associativity", (a, b, c), left, right)
                check("associativity", (a, b, c), left, dp(model.basis(a)) * dp(model.basis(b)) * dp(sc))
    return rep
