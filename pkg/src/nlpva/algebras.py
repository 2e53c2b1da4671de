"""Built-in bracket tables.

Names accepted by :func:`builtin`:

* ``potential-free-boson``   {x_lambda x} = -K/lambda
* ``potential-virasoro-magri``  {u_lambda u} = -(1/lambda)u' - (1/(lambda+d))u' - lambda C/12
* ``potential-affine-sl2``   {a_lambda b} = (1/(lambda+d) - 1/lambda)[a,b] - (1/lambda)(a|b)K
* ``gurarie-ludwig``          the b = -5/8 non-local PVA on L, xi, ell, xib, K
"""

from fractions import Fraction

from .bracket import BracketEntry, NonlocalPVA
from .superpoly import DiffAlgebra, Generator

F = Fraction


def free_boson() -> NonlocalPVA:
    alg = DiffAlgebra([Generator("x", 0, False, 1), Generator("K", 0, True, 1)])
    p = alg.parse
    entries = {("x", "x"): BracketEntry({}, [(p("-1/2*K"), p("1")), (p("-1/2"), p("K"))])}
    return NonlocalPVA(alg, entries, "potential-free-boson")


def virasoro_magri() -> NonlocalPVA:
    alg = DiffAlgebra([Generator("u", 0, False, 1), Generator("C", 0, True, 1)])
    p = alg.parse
    entries = {("u", "u"): BracketEntry({1: p("-1/12*C")},
                                        [(p("-1"), p("d(u,1)")), (p("-d(u,1)"), p("1"))])}
    return NonlocalPVA(alg, entries, "potential-virasoro-magri")


SL2_BRACKET = {
    ("h", "e"): "2*e", ("e", "h"): "-2*e",
    ("h", "f"): "-2*f", ("f", "h"): "2*f",
    ("e", "f"): "h", ("f", "e"): "-h",
}
SL2_FORM = {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2}


def affine_sl2() -> NonlocalPVA:
    alg = DiffAlgebra([Generator("e"), Generator("h"), Generator("f"), Generator("K", 0, True, 1)])
    p = alg.parse
    entries = {}
    for a in "ehf":
        for b in "ehf":
            pairs = []
            br = SL2_BRACKET.get((a, b))
            if br:
                pairs += [(p(br), p("1")), (p("-1"), p(br))]
            form = SL2_FORM.get((a, b), 0)
            if form:
                half = F(-form, 2)
                pairs += [(p("K").scale(half), p("1")), (alg.const(half), p("K"))]
            entries[(a, b)] = BracketEntry({}, pairs)
    return NonlocalPVA(alg, entries, "potential-affine-sl2")


def gurarie_ludwig() -> NonlocalPVA:
    alg = DiffAlgebra([
        Generator("L", 0, False, 1),
        Generator("xi", 1, False, 1),
        Generator("ell", 0, False, 2),
        Generator("xib", 1, False, 2),
        Generator("K", 0, True, 2),
    ])
    p = alg.parse
    entries = {
        ("L", "L"): BracketEntry({0: p("d(L,1)"), 1: p("2*L")}),
        ("L", "ell"): BracketEntry({0: p("d(ell,1)"), 1: p("2*ell"), 3: p("1/6*K")}),
        ("L", "xi"): BracketEntry({0: p("d(xi,1)"), 1: p("2*xi")}),
        ("L", "xib"): BracketEntry({0: p("d(xib,1)"), 1: p("2*xib")}),
        ("ell", "xi"): BracketEntry({}, [(p("xi"), p("L"))]),
        ("ell", "xib"): BracketEntry({}, [(p("xib"), p("L"))]),
        ("ell", "ell"): BracketEntry({}, [(p("2*xi"), p("xib")), (p("-2*xib"), p("xi"))]),
        ("xi", "xib"): BracketEntry({0: p("1/2*d(ell,1)"), 1: p("ell"), 3: p("1/12*K")},
                                    [(p("-1/2*L"), p("L"))]),
    }
    return NonlocalPVA(alg, entries, "gurarie-ludwig")


BUILTINS = {
    "potential-free-boson": free_boson,
    "potential-virasoro-magri": virasoro_magri,
    "potential-affine-sl2": affine_sl2,
    "gurarie-ludwig": gurarie_ludwig,
}


def builtin(name: str) -> NonlocalPVA:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None


def specialize(pva: NonlocalPVA, central: str, value) -> NonlocalPVA:
    """Quotient by central = value * 1.  The result is in general not graded."""
    return pva.specialize({central: Fraction(value)})
