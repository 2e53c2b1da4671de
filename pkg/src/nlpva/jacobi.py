"""Jacobi identity for non-local brackets, component by component.

For homogeneous a, b, c the three terms

    left   {a_lambda {b_mu c}}
    middle {b_mu {a_lambda c}}
    right  {{a_lambda b}_{lambda+mu} c}

are produced directly as :class:`SevenComponent` data from closed formulas
in terms of the local parts and the braiding S.  Independently,
:func:`triple_direct` expands each term by literally nesting one-variable
brackets, which yields the term's expansion in its natural regime.  The two
routes must agree after :func:`~nlpva.series.iota_expand`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Tuple

from .binom import binom
from .bracket import NonlocalPVA
from .report import Counterexample, VerificationReport
from .series import DoubleGrid, SevenComponent, iota_expand
from .superpoly import DiffPoly

TERMS = ("left", "middle", "right")
NATURAL_REGIME = {"left": "mu_lambda", "middle": "lambda_mu", "right": "nu_lambda"}


def _inv(p: DiffPoly, floor: int):
    """(1/(x + d)) p = sum_k (-1)^k x^(-1-k) d^k p as [(exponent, poly)] down to floor."""
    out = []
    k = 0
    d = p
    while -1 - k >= floor and d:
        out.append((-1 - k, d if k % 2 == 0 else -d))
        d = d.partial()
        k += 1
    return out


def _top(loc: Dict[int, DiffPoly]) -> int:
    return max(loc) if loc else 0


def _pp(pva, p: DiffPoly, x: DiffPoly) -> int:
    """Parity of the braiding component that sent x to p."""
    return (p.parity() + x.parity()) & 1


# ---------------------------------------------------- exact polynomial division

def _pmul(a, b):
    out = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
            out[k] = out.get(k, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def _ppow(lin, n):
    r = {(0, 0, 0): Fraction(1)}
    for _ in range(n):
        r = _pmul(r, lin)
    return r


def _padd(a, b, s=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
    return {k: v for k, v in out.items() if v}


def divide_linear(num, var: int, rest):
    """Exact quotient of num(lambda, mu, delta) by (x_var + rest); asserts zero remainder."""
    by_pow: Dict[int, Dict[Tuple[int, int, int], Fraction]] = {}
    for key, v in num.items():
        k = key[var]
        stripped = list(key)
        stripped[var] = 0
        by_pow.setdefault(k, {})[tuple(stripped)] = v
    if not by_pow:
        return {}
    top = max(by_pow)
    quot = {}
    q = {}
    for k in range(top, 0, -1):
        # Q_{k-1} = N_k - rest * Q_k
        q = _padd(by_pow.get(k, {}), _pmul(rest, q), -1)
        for key, v in q.items():
            kk = list(key)
            kk[var] = k - 1
            quot[tuple(kk)] = v
    rem = _padd(by_pow.get(0, {}), _pmul(rest, q), -1)
    if rem:
        raise ArithmeticError(f"difference quotient is not a polynomial (remainder {rem})")
    return quot


LAM = {(1, 0, 0): Fraction(1)}
MU = {(0, 1, 0): Fraction(1)}
DEL = {(0, 0, 1): Fraction(1)}


def _lin(*parts):
    out = {}
    for s, p in parts:
        out = _padd(out, p, s)
    return out


# ------------------------------------------------------------- projections

@dataclass
class Projections:
    left: SevenComponent
    middle: SevenComponent
    right: SevenComponent

    def term(self, name):
        return getattr(self, name)


def projections_left(pva: NonlocalPVA, a, b, c, tf: int) -> SevenComponent:
    alg = pva.alg
    pa, pb = a.parity(), b.parity()
    out = SevenComponent(alg, tf)
    inner = pva.local(b, c)
    for n, cn in inner.items():
        for i, y in pva.local(a, cn).items():
            out.add(1, i, n, y)
        for p, q in pva.braid(a, cn).pairs():
            for e, pk in _inv(p, tf - n):
                out.add(2, e, n, pk * q)
    sbc = pva.braid(b, c).pairs()
    for p, q in sbc:
        pi = _pp(pva, p, b)
        sign = -1 if (pa * pb + pi * pa) & 1 else 1
        loc = pva.local(a, q)
        for e, pk in _inv(p, tf - _top(loc)):
            for i, y in loc.items():
                out.add(3, i, e, (pk * y).scale(sign))
        for i, y in pva.local(a, p).items():
            for e, yk in _inv(y, tf - i):
                out.add(4, i, e, yk * q)
        for aa, bb in pva.braid(a, q).pairs():
            pj = _pp(pva, aa, a)
            sign = -1 if (pj * (pb + pi)) & 1 else 1
            for e1, ak in _inv(aa, tf + 1):
                for e2, pl in _inv(p, tf - e1):
                    out.add(5, e1, e2, (ak * pl * bb).scale(sign))
        for aa, bb in pva.braid(a, p).pairs():
            for e1, ak in _inv(aa, tf + 1):
                x = ak * bb
                for e2, xk in _inv(x, tf - e1):
                    out.add(6, e1, e2, xk * q)
    return out


def projections_middle(pva: NonlocalPVA, a, b, c, tf: int) -> SevenComponent:
    alg = pva.alg
    pa, pb = a.parity(), b.parity()
    out = SevenComponent(alg, tf)
    inner = pva.local(a, c)
    for n, cn in inner.items():
        for j, y in pva.local(b, cn).items():
            out.add(1, n, j, y)
        for p, q in pva.braid(b, cn).pairs():
            for e, pk in _inv(p, tf - n):
                out.add(3, n, e, pk * q)
    for p, q in pva.braid(a, c).pairs():
        pi = _pp(pva, p, a)
        sign2 = -1 if (pa * pb + pi * pb) & 1 else 1
        loc_pb = pva.local(p, b)
        # difference quotient ([P_{-mu-d} b] - [P_lambda b]) / (lambda + mu + d), d on the bracket
        for n, en in loc_pb.items():
            num = _padd(_ppow(_lin((-1, MU), (-1, DEL)), n), _ppow(LAM, n), -1)
            quot = divide_linear(num, 0, _lin((1, MU), (1, DEL)))
            for (i, j, r), v in quot.items():
                out.add(1, i, j, (en.partial(r) * q).scale(-sign2 * v))
        for i, y in loc_pb.items():
            for e, yk in _inv(y, tf - i):
                out.add(4, i, e, (yk * q).scale(-sign2))
        loc = pva.local(b, q)
        for e, pk in _inv(p, tf - _top(loc)):
            for j, y in loc.items():
                out.add(2, e, j, (pk * y).scale(sign2))
        for bb, dd in pva.braid(b, q).pairs():
            pj = _pp(pva, bb, b)
            sign = -1 if (pj * (pa + pi)) & 1 else 1
            for e1, bk in _inv(bb, tf + 1):
                for e2, pl in _inv(p, tf - e1):
                    out.add(5, e2, e1, (bk * pl * dd).scale(sign))
        for bb, ee in pva.braid(b, p).pairs():
            for e1, bk in _inv(bb, tf + 1):
                x = bk * ee
                for e2, xk in _inv(x, tf - e1):
                    out.add(7, e1, e2, xk * q)
    return out


def projections_right(pva: NonlocalPVA, a, b, c, tf: int) -> SevenComponent:
    alg = pva.alg
    pa, pb, pc = a.parity(), b.parity(), c.parity()
    out = SevenComponent(alg, tf)
    for n, en in pva.local(a, b).items():
        for m, f in pva.local(en, c).items():
            # nu^m = sum_r binom(m, r) lambda^r mu^(m-r)
            for r in range(m + 1):
                out.add(1, n + r, m - r, f.scale(comb(m, r)))
        for x, y in pva.braid(en, c).pairs():
            for e, xk in _inv(x, tf - n):
                out.add(4, n, e, xk * y)
    for p, q in pva.braid(a, b).pairs():
        pi = _pp(pva, p, a)
        pq = q.parity()
        # ([Q_{nu+d} c]_-> - [Q_mu c]) / (lambda + d) (phi a), d on phi a
        s2 = (pa * pb + pa * pc + pi * pb + pi * pc + pi + pi * pa) & 1
        loc_qc = pva.local(q, c)
        for n, en in loc_qc.items():
            num = _padd(_ppow(_lin((1, LAM), (1, MU), (1, DEL)), n), _ppow(MU, n), -1)
            quot = divide_linear(num, 0, DEL)
            for (i, j, r), v in quot.items():
                out.add(1, i, j, (en * p.partial(r)).scale(-v if s2 else v))
        # -([P_{nu+d} c]_-> - [P_lambda c]) / (mu + d) (psi b), d on psi b
        s3 = (pb * pc + pi * pc) & 1
        loc_pc = pva.local(p, c)
        for n, en in loc_pc.items():
            num = _padd(_ppow(_lin((1, LAM), (1, MU), (1, DEL)), n), _ppow(LAM, n), -1)
            quot = divide_linear(num, 1, DEL)
            for (i, j, r), v in quot.items():
                out.add(1, i, j, (en * q.partial(r)).scale(v if s3 else -v))
        for e, pk in _inv(p, tf - _top(loc_qc)):
            for j, y in loc_qc.items():
                out.add(2, e, j, pk * y)
        for e, qk in _inv(q, tf - _top(loc_pc)):
            for i, y in loc_pc.items():
                out.add(3, i, e, (y * qk).scale(1 if s3 else -1))
        for aa, bb in pva.braid(q, c).pairs():
            for e1, pk in _inv(p, tf + 1):
                x = pk * aa
                for e2, xk in _inv(x, tf - e1):
                    out.add(6, e1, e2, xk * bb)
        for aa, bb in pva.braid(p, c).pairs():
            pj = _pp(pva, aa, p)
            sign = 1 if (pj * pq) & 1 else -1
            for e1, qk in _inv(q, tf + 1):
                x = aa * qk
                for e2, xk in _inv(x, tf - e1):
                    out.add(7, e1, e2, (xk * bb).scale(sign))
    return out


def triple_projections(pva: NonlocalPVA, a, b, c, depth: int) -> Projections:
    """All seven projections of the three Jacobi terms, exact for total exponent >= -2*depth."""
    tf = -2 * depth
    return Projections(projections_left(pva, a, b, c, tf),
                       projections_middle(pva, a, b, c, tf),
                       projections_right(pva, a, b, c, tf))


# ------------------------------------------------------------- direct oracle

def triple_direct(pva: NonlocalPVA, a, b, c, depth: int, term: str) -> DoubleGrid:
    """Expansion of one Jacobi term by nesting one-variable brackets.

    Exact on the window where both exponents are >= -depth.
    """
    f = -depth
    alg = pva.alg
    out: Dict[Tuple[int, int], DiffPoly] = {}

    def put(k, v):
        out[k] = out[k] + v if k in out else v

    if term == "left":
        for n, cn in pva.bracket(b, c, f).coeffs.items():
            for i, v in pva.bracket(a, cn, f).coeffs.items():
                put((i, n), v)
    elif term == "middle":
        for n, cn in pva.bracket(a, c, f).coeffs.items():
            for j, v in pva.bracket(b, cn, f).coeffs.items():
                put((n, j), v)
    elif term == "right":
        for n, en in pva.bracket(a, b, f).coeffs.items():
            for m, v in pva.bracket(en, c, f).coeffs.items():
                put((n, m), v)
    else:
        raise ValueError(f"unknown term {term!r}")
    return DoubleGrid(alg, NATURAL_REGIME[term], out, (f, f))


# ------------------------------------------------------------------ reports

def _params(a, b, c, depth):
    return {"triple": [str(a), str(b), str(c)], "depth": depth}


def jacobi_components(pva: NonlocalPVA, a, b, c, depth: int, proj: Projections = None) -> VerificationReport:
    """left = right + (-1)^{p_a p_b} middle, compared on the reduced components V_1..V_6."""
    rep = VerificationReport("jacobi-components", pva.name, _params(a, b, c, depth))
    proj = proj or triple_projections(pva, a, b, c, depth)
    sign = -1 if (a.parity() and b.parity()) else 1
    rhs = (proj.right + proj.middle.scale(sign)).reduced()
    bad = proj.left.reduced().mismatches(rhs)
    if bad:
        k, key, x, y = bad[0]
        rep.ok = False
        rep.counterexample = Counterexample(f"V{k}", key, str(x), str(y))
    rep.checked = 6
    return rep


def oracle_equivalence(pva: NonlocalPVA, a, b, c, depth: int, proj: Projections = None) -> VerificationReport:
    """Each term's components, expanded in its natural regime, equal the nested expansion."""
    rep = VerificationReport("oracle-equivalence", pva.name, _params(a, b, c, depth))
    proj = proj or triple_projections(pva, a, b, c, depth)
    for term in TERMS:
        direct = triple_direct(pva, a, b, c, depth, term)
        grid = iota_expand(proj.term(term), NATURAL_REGIME[term], direct.floors)
        bad = grid.mismatches(direct)
        rep.checked += 1
        if bad:
            key, x, y = bad[0]
            rep.ok = False
            rep.counterexample = Counterexample(f"{term}:{NATURAL_REGIME[term]}", key, str(x), str(y))
            break
    return rep


def jacobi_check(pva: NonlocalPVA, a, b, c, depth: int, with_oracle: bool = True) -> VerificationReport:
    proj = triple_projections(pva, a, b, c, depth)
    r = jacobi_components(pva, a, b, c, depth, proj)
    r.check = "jacobi"
    if not with_oracle:
        return r
    o = oracle_equivalence(pva, a, b, c, depth, proj)
    if r.ok and not o.ok:
        r.ok = False
        r.counterexample = o.counterexample
    r.checked += o.checked
    return r


# --------------------------------------------------------- coefficient form

def e12_sides(pva: NonlocalPVA, m: int, k: int, a, b, c) -> Tuple[DiffPoly, DiffPoly]:
    """Both sides of the m, k coefficient identity applied to a (x) b (x) c (m, k >= 0)."""
    if m < 0 or k < 0:
        raise ValueError("the coefficient identity is stated for m, k >= 0")
    mu = pva.mu
    pa, pb = a.parity(), b.parity()
    sab = -1 if (pa and pb) else 1
    lhs = mu(m, a, mu(k, b, c))
    rhs = mu(k, b, mu(m, a, c)).scale(sab)
    for j in range(m + 1):
        rhs = rhs + mu(m + k - j, mu(j, a, b), c).scale(comb(m, j))
    for x, y in pva.braid(a, b).pairs():
        top = _top(pva.local(y, c))
        for j in range(m + 1, top - k + 1):
            rhs = rhs + mu(m - j, x, mu(k + j, y, c)).scale(Fraction(1, j))
    for y, x in pva.braid(b, a).pairs():
        top = _top(pva.local(x, c))
        for j in range(k + 1, top - m + 1):
            rhs = rhs - mu(k - j, y, mu(m + j, x, c)).scale(Fraction(sab, j))
    for x, z in pva.braid(a, c).pairs():
        pi = (x.parity() + pa) & 1
        s13 = -1 if (pi and pb) else 1
        top = _top(pva.local(x, b))
        for j in range(m + k + 1, top + 1):
            coef = Fraction((-1) ** (j + m + 1), j * comb(j - 1, m))
            rhs = rhs + mu(m + k - j, mu(j, x, b), z).scale(s13 * coef)
    return lhs, rhs


def verify_e12(pva: NonlocalPVA, m: int, k: int, a, b, c) -> VerificationReport:
    lhs, rhs = e12_sides(pva, m, k, a, b, c)
    rep = VerificationReport("e12", pva.name, {"m": m, "k": k, "triple": [str(a), str(b), str(c)]},
                             lhs == rhs, checked=1)
    if not rep.ok:
        rep.counterexample = Counterexample("e12", (m, k), str(lhs), str(rhs))
    return rep
