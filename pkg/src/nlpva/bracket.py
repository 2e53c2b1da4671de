"""Non-local lambda-brackets of the form

    {a_lambda b} = sum_n lambda^n c_n(a, b) + sum_i (1/(lambda + d) P_i) Q_i,

where the polynomial part ("local part") is read off a table and
sum_i P_i (x) Q_i = S(a (x) b) is the braiding, extended from generators to
all differential polynomials by d-equivariance and the super bi-derivation
rule.  Brackets of arbitrary polynomials are computed by the Leibniz rules
and sesquilinearity, with demand-driven floors so every returned coefficient
is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .series import (LaurentSeries, arrow_apply, expand_nonlocal, poly_shift_apply,
                     substitute_neg_lambda_partial)
from .report import Counterexample, VerificationReport
from .superpoly import DiffAlgebra, DiffPoly, Monomial


class Tensor:
    """Element of V (x) V as a dict (monomial, monomial) -> Fraction."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: DiffAlgebra, terms=None):
        self.alg = alg
        self.terms: Dict[Tuple[Monomial, Monomial], Fraction] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = Fraction(v)

    @classmethod
    def from_pairs(cls, alg, pairs: Iterable[Tuple[DiffPoly, DiffPoly]]):
        t = cls(alg)
        for p, q in pairs:
            t.add_product(p, q)
        return t

    def add_product(self, p: DiffPoly, q: DiffPoly, coeff=1):
        for m1, c1 in p.terms.items():
            for m2, c2 in q.terms.items():
                k = (m1, m2)
                v = self.terms.get(k, 0) + coeff * c1 * c2
                if v:
                    self.terms[k] = v
                else:
                    self.terms.pop(k, None)

    def add(self, other: "Tensor", coeff=1):
        for k, c in other.terms.items():
            v = self.terms.get(k, 0) + coeff * c
            if v:
                self.terms[k] = v
            else:
                self.terms.pop(k, None)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.terms == other.terms

    def pairs(self):
        """Deterministic list of (P, Q) with the coefficient folded into P."""
        alg = self.alg
        return [(alg.mono(m1, c), alg.mono(m2)) for (m1, m2), c in sorted(self.terms.items())]

    def transpose(self) -> "Tensor":
        """Koszul flip X (x) Y -> (-1)^{p_X p_Y} Y (x) X."""
        alg = self.alg
        out = Tensor(alg)
        for (m1, m2), c in self.terms.items():
            s = -1 if alg.mono_parity(m1) and alg.mono_parity(m2) else 1
            out.terms[(m2, m1)] = out.terms.get((m2, m1), 0) + s * c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({p})(x)({q})" for p, q in self.pairs())


@dataclass
class BracketEntry:
    """{g_lambda h}: local[n] is the coefficient of lambda^n; nonlocal is S(g (x) h)."""

    local: Dict[int, DiffPoly] = field(default_factory=dict)
    nonlocal_: List[Tuple[DiffPoly, DiffPoly]] = field(default_factory=list)


def _split_first(m: Monomial):
    g, d, e = m[0]
    rest = m[1:] if e == 1 else ((g, d, e - 1),) + m[1:]
    return ((g, d, 1),), rest


def _nfactors(m: Monomial) -> int:
    return sum(e for _, _, e in m)


class NonlocalPVA:
    """A table of generator brackets plus everything derived from it."""

    def __init__(self, alg: DiffAlgebra, entries: Mapping[Tuple[str, str], BracketEntry],
                 name: str = "custom", validate: bool = False):
        self.alg = alg
        self.name = name
        for (g, h) in entries:
            for x in (g, h):
                if x not in alg.index:
                    raise ValueError(f"bracket entry mentions unknown generator {x!r}")
        self.entries = dict(entries)
        self._entry_cache: Dict[Tuple[int, int], Tuple[Dict[int, DiffPoly], Tensor]] = {}
        self._braid_cache: Dict[Tuple[Monomial, Monomial], Tensor] = {}
        self._base_cache: Dict[Tuple[int, int, int], LaurentSeries] = {}
        self._br_cache: Dict[Tuple, LaurentSeries] = {}
        if validate:
            self.validate()

    @property
    def generator_names(self):
        return [g.name for g in self.alg.generators]

    def parse(self, text: str) -> DiffPoly:
        return self.alg.parse(text)

    # ------------------------------------------------------------ table

    def entry(self, g: str, h: str) -> BracketEntry:
        """Stored entry, or the one forced by skew-symmetry, or zero."""
        if (g, h) in self.entries:
            return self.entries[(g, h)]
        if (h, g) in self.entries:
            src = self.entries[(h, g)]
            pg = self.alg.generators[self.alg.index[g]].parity
            ph = self.alg.generators[self.alg.index[h]].parity
            sign = 1 if (pg and ph) else -1
            loc = LaurentSeries(self.alg, dict(src.local), 0)
            sub = substitute_neg_lambda_partial(loc)
            local = {n: c.scale(sign) for n, c in sub.coeffs.items()}
            t = Tensor.from_pairs(self.alg, src.nonlocal_).transpose()
            if pg and ph:
                t = Tensor(self.alg, {k: -v for k, v in t.terms.items()})
            return BracketEntry(local, t.pairs())
        return BracketEntry()

    def _entry_data(self, gi: int, hi: int):
        key = (gi, hi)
        if key not in self._entry_cache:
            e = self.entry(self.alg.generators[gi].name, self.alg.generators[hi].name)
            self._entry_cache[key] = (dict(e.local), Tensor.from_pairs(self.alg, e.nonlocal_))
        return self._entry_cache[key]

    # ------------------------------------------------------------ braiding

    def braid(self, x: DiffPoly, y: DiffPoly) -> Tensor:
        """S(x (x) y), bilinear in x and y."""
        out = Tensor(self.alg)
        for mx, cx in x.terms.items():
            for my, cy in y.terms.items():
                out.add(self._braid_mono(mx, my), cx * cy)
        return out

    def _braid_mono(self, mx: Monomial, my: Monomial) -> Tensor:
        key = (mx, my)
        hit = self._braid_cache.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        out = Tensor(alg)
        if mx and my:
            if _nfactors(mx) > 1:
                v, r = _split_first(mx)
                pr = alg.mono_parity(r)
                pv = alg.mono_parity(v)
                vp, rp = alg.mono(v), alg.mono(r)
                for (m1, m2), c in self._braid_mono(v, my).terms.items():
                    pp = (alg.mono_parity(m1) + pv) & 1
                    s = -1 if (pp and pr) else 1
                    out.add_product(alg.mono(m1) * rp, alg.mono(m2), s * c)
                for (m1, m2), c in self._braid_mono(r, my).terms.items():
                    out.add_product(vp * alg.mono(m1), alg.mono(m2), c)
            elif _nfactors(my) > 1:
                w, r = _split_first(my)
                pw = alg.mono_parity(w)
                px = alg.mono_parity(mx)
                wp, rp = alg.mono(w), alg.mono(r)
                for (m1, m2), c in self._braid_mono(mx, w).terms.items():
                    out.add_product(alg.mono(m1), alg.mono(m2) * rp, c)
                for (m1, m2), c in self._braid_mono(mx, r).terms.items():
                    pp = (alg.mono_parity(m1) + px) & 1
                    s = -1 if (pp and pw) else 1
                    out.add_product(alg.mono(m1), wp * alg.mono(m2), s * c)
            else:
                (g, d, _), = mx
                (h, k, _), = my
                _, base = self._entry_data(g, h)
                for (m1, m2), c in base.terms.items():
                    out.add_product(alg.mono(m1).partial(d), alg.mono(m2).partial(k), c)
        self._braid_cache[key] = out
        return out

    def braid_power_zero(self, x: DiffPoly, y: DiffPoly, bound: int = 16) -> Optional[int]:
        """Smallest r <= bound with S^r(x (x) y) = 0, or None."""
        t = Tensor.from_pairs(self.alg, [(x, y)])
        for r in range(bound + 1):
            if t.is_zero():
                return r
            nxt = Tensor(self.alg)
            for p, q in t.pairs():
                nxt.add(self.braid(p, q))
            t = nxt
        return None

    # ------------------------------------------------------------ brackets

    def _gen_base(self, gi: int, hi: int, floor: int) -> LaurentSeries:
        key = (gi, hi, floor)
        hit = self._base_cache.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        local, nonloc = self._entry_data(gi, hi)
        s = LaurentSeries(alg, {n: c for n, c in local.items() if n >= floor}, floor)
        for p, q in nonloc.pairs():
            s = s + expand_nonlocal(-1, p, floor).mul_right(q)
        self._base_cache[key] = s
        return s

    def bracket(self, p: DiffPoly, q: DiffPoly, floor: int, order: str = "left") -> LaurentSeries:
        """{p_lambda q} exact for lambda-exponents >= floor.

        ``order="left"`` peels composite first arguments before second ones,
        ``order="right"`` does the opposite; both must agree.
        """
        alg = self.alg
        out = LaurentSeries(alg, {}, floor)
        for mp, cp in p.terms.items():
            for mq, cq in q.terms.items():
                if order == "left":
                    s = self._bm_left(mp, mq, floor)
                else:
                    s = self._bm_right(mp, mq, floor)
                out = out + s.scale(cp * cq)
        return out

    def _peel_left(self, mp, mq, floor, rec):
        alg = self.alg
        v, r = _split_first(mp)
        pv, pr, pq = alg.mono_parity(v), alg.mono_parity(r), alg.mono_parity(mq)
        s1 = arrow_apply(rec(v, mq, floor), alg.mono(r))
        s2 = arrow_apply(rec(r, mq, floor), alg.mono(v))
        if pr and pq:
            s1 = -s1
        if (pv * pr + pv * pq) & 1:
            s2 = -s2
        return s1 + s2

    def _bm_left(self, mp: Monomial, mq: Monomial, floor: int) -> LaurentSeries:
        key = ("L", mp, mq, floor)
        hit = self._br_cache.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        if not mp or not mq:
            res = LaurentSeries(alg, {}, floor)
        elif _nfactors(mp) > 1:
            res = self._peel_left(mp, mq, floor, self._bm_left)
        else:
            (g, d, _), = mp
            s = self._bm_gen(g, mq, floor - d).shift(d)
            res = s.scale((-1) ** d) if d & 1 else s
        self._br_cache[key] = res
        return res

    def _bm_gen(self, g: int, mq: Monomial, floor: int) -> LaurentSeries:
        key = ("G", g, mq, floor)
        hit = self._br_cache.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        if _nfactors(mq) > 1:
            w, r = _split_first(mq)
            s1 = self._bm_gen(g, w, floor).mul_right(alg.mono(r))
            s2 = self._bm_gen(g, r, floor).mul_left(alg.mono(w))
            if alg.is_odd(g) and alg.mono_parity(w):
                s2 = -s2
            res = s1 + s2
        else:
            (h, k, _), = mq
            res = poly_shift_apply(self._gen_base(g, h, floor - k), k)
        self._br_cache[key] = res
        return res

    def _bm_right(self, mp: Monomial, mq: Monomial, floor: int) -> LaurentSeries:
        key = ("R", mp, mq, floor)
        hit = self._br_cache.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        if not mp or not mq:
            res = LaurentSeries(alg, {}, floor)
        elif _nfactors(mq) > 1:
            w, r = _split_first(mq)
            s1 = self._bm_right(mp, w, floor).mul_right(alg.mono(r))
            s2 = self._bm_right(mp, r, floor).mul_left(alg.mono(w))
            if alg.mono_parity(mp) and alg.mono_parity(w):
                s2 = -s2
            res = s1 + s2
        else:
            (h, k, _), = mq
            if k:
                res = poly_shift_apply(self._bm_right(mp, ((h, 0, 1),), floor - k), k)
            elif _nfactors(mp) > 1:
                res = self._peel_left(mp, mq, floor, self._bm_right)
            else:
                (g, d, _), = mp
                s = self._gen_base(g, h, floor - d).shift(d)
                res = s.scale((-1) ** d) if d & 1 else s
        self._br_cache[key] = res
        return res

    def local(self, p: DiffPoly, q: DiffPoly) -> Dict[int, DiffPoly]:
        """Polynomial part [p_lambda q] as {n: coefficient of lambda^n}."""
        return dict(self.bracket(p, q, 0).coeffs)

    def mu(self, n: int, x: DiffPoly, y: DiffPoly) -> DiffPoly:
        """The n-th product on the associated graded: n! [x_lambda y]_n for n >= 0,
        (d^(j) x) y for n = -j-1."""
        if n >= 0:
            c = self.local(x, y).get(n)
            return c.scale(factorial(n)) if c else self.alg.zero()
        j = -n - 1
        return x.partial(j).scale(Fraction(1, factorial(j))) * y

    # ------------------------------------------------------------ checks

    def skew_mismatch(self, g: DiffPoly, h: DiffPoly, floor: int):
        """Exponents where {h_lambda g} differs from -(-1)^{p_g p_h} {g_{-lambda-d} h}."""
        pg, ph = g.parity(), h.parity()
        lhs = self.bracket(h, g, floor)
        rhs = substitute_neg_lambda_partial(self.bracket(g, h, floor))
        if not (pg and ph):
            rhs = -rhs
        return [(n, lhs.coeff(n), rhs.coeff(n)) for n in lhs.mismatches(rhs)]

    def leibniz_mismatch(self, a: DiffPoly, b: DiffPoly, c: DiffPoly, floor: int):
        """Exponents where {a_lambda bc} differs from {a_lambda b}c + (-1)^{p_a p_b} b{a_lambda c}."""
        lhs = self.bracket(a, b * c, floor)
        t2 = self.bracket(a, c, floor).mul_left(b)
        if a.parity() and b.parity():
            t2 = -t2
        rhs = self.bracket(a, b, floor).mul_right(c) + t2
        return [(n, lhs.coeff(n), rhs.coeff(n)) for n in lhs.mismatches(rhs)]

    def braid_symmetry_ok(self, x: DiffPoly, y: DiffPoly) -> bool:
        """S(y (x) x) equals the Koszul transpose of S(x (x) y)."""
        t = self.braid(x, y).transpose()
        if x.parity() and y.parity():
            t = Tensor(self.alg, {k: -v for k, v in t.terms.items()})
        return t == self.braid(y, x)

    def validate(self, floor: int = -4, nil_bound: int = 16):
        """Raise ValueError if the table is inconsistent (skew, braiding symmetry, nilpotence)."""
        gens = self.generator_names
        alg = self.alg
        for (g, h), e in self.entries.items():
            for n in e.local:
                if n < 0:
                    raise ValueError(f"local part of {{{g}_lambda {h}}} has negative power {n}")
        for g in gens:
            for h in gens:
                x, y = alg.var(g), alg.var(h)
                bad = self.skew_mismatch(x, y, floor)
                if bad:
                    n, lhs, rhs = bad[0]
                    raise ValueError(
                        f"skew-symmetry fails for ({g}, {h}) at lambda^{n}: {lhs} != {rhs}")
                if not self.braid_symmetry_ok(x, y):
                    raise ValueError(f"braiding is not symmetric on ({g}, {h})")
                if self.braid_power_zero(x, y, nil_bound) is None:
                    raise ValueError(f"braiding not nilpotent on ({g}, {h}) within {nil_bound} steps")

    def specialize(self, values: Mapping[str, Fraction]) -> "NonlocalPVA":
        """Same table with central generators replaced by numbers (generators kept)."""
        for name in values:
            if name not in self.alg.index:
                raise ValueError(f"unknown generator {name!r}")
            if not self.alg.is_central(self.alg.index[name]):
                raise ValueError(f"{name!r} is not central")
        ent = {}
        for k, e in self.entries.items():
            ent[k] = BracketEntry({n: c.specialize(values) for n, c in e.local.items()},
                                  [(p.specialize(values), q.specialize(values)) for p, q in e.nonlocal_])
        tag = ",".join(f"{k}={v}" for k, v in values.items())
        return NonlocalPVA(self.alg, ent, f"{self.name}[{tag}]" if tag else self.name)


# ---------------------------------------------------------------- front end

def braiding_extend(pva: NonlocalPVA, x: DiffPoly, y: DiffPoly):
    """S(x (x) y) as a list of (P, Q, pair parity)."""
    return [(p, q, ((p.parity() or 0) + (x.parity() or 0)) & 1) for p, q in pva.braid(x, y).pairs()]


def bracket_eval(pva: NonlocalPVA, p: DiffPoly, q: DiffPoly, floor: int) -> LaurentSeries:
    if p.alg != pva.alg or q.alg != pva.alg:
        raise ValueError("arguments belong to a different algebra")
    return pva.bracket(p, q, floor)


def skew_check(pva: NonlocalPVA, g: DiffPoly, h: DiffPoly, floor: int) -> VerificationReport:
    bad = pva.skew_mismatch(g, h, floor)
    rep = VerificationReport("skew", pva.name, {"pair": [str(g), str(h)], "floor": floor},
                             not bad, checked=1)
    if bad:
        n, lhs, rhs = bad[0]
        rep.counterexample = Counterexample("lambda", (n,), str(lhs), str(rhs))
    return rep


def leibniz_check(pva: NonlocalPVA, a: DiffPoly, b: DiffPoly, c: DiffPoly, floor: int) -> VerificationReport:
    bad = pva.leibniz_mismatch(a, b, c, floor)
    rep = VerificationReport("leibniz", pva.name,
                             {"inputs": [str(a), str(b), str(c)], "floor": floor}, not bad, checked=1)
    if bad:
        n, lhs, rhs = bad[0]
        rep.counterexample = Counterexample("lambda", (n,), str(lhs), str(rhs))
    return rep


def peeling_order_check(pva: NonlocalPVA, p: DiffPoly, q: DiffPoly, floor: int) -> VerificationReport:
    """The two peeling orders of the evaluator agree on {p_lambda q}."""
    left = pva.bracket(p, q, floor, order="left")
    right = pva.bracket(p, q, floor, order="right")
    bad = left.mismatches(right)
    rep = VerificationReport("peeling-order", pva.name, {"pair": [str(p), str(q)], "floor": floor},
                             not bad, checked=1)
    if bad:
        n = bad[0]
        rep.counterexample = Counterexample("lambda", (n,), str(left.coeff(n)), str(right.coeff(n)))
    return rep
