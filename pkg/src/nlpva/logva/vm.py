"""The Virasoro-Magri mode algebra acting on its vacuum module.

Generators u_n (n in Z), D, T with

    [D, T] = 0,   [D, u_n] = delta_{n,-1},
    [T, u_n] = delta_{n>=0} T D^n - sum_j (n-j) u_{n-1-j} D^j,
    [u_m, u_k] = (f(k) - f(m)) [T, u_{m+k+1}] - delta_{m+k>=0} (m-k)(m+k+1) C/24 D^{m+k},

where f(n) = 1/(n+1) for n != -1 and f(-1) = 0.  The sign of the first
term is the one forced by the n = 0 Borcherds identity with S = -D(x)T - T(x)D
(with the opposite sign, [T, u_0] u_{-1} vac and [u_0, u_{-2}] vac already
disagree).  The module is spanned by
ordered words u_{-n1} ... u_{-nr} vac with n1 >= ... >= nr >= 1, killed by
u_{n>=0}, D and T.  A basis key is ``(p, (n1, ..., nr))`` standing for
C^p u_{-n1} ... u_{-nr} vac; its Z-grade is n1 + ... + nr and D^j kills it
for j larger than that.  C is either a formal central element or a number.

Two normal-form procedures are provided.  ``apply_*`` act on normal-form
states from the right (memoized).  ``normal_form_rewrite`` instead rewrites
whole operator words, moving annihilators to the right and sorting
creators, and only then hits the vacuum.
"""

from __future__ import annotations

import re
import sys
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from ..algebras import virasoro_magri
from ..report import Counterexample, VerificationReport
from ..superpoly import DiffPoly
from .core import LogVAModel, OutOfScope, State

VAC = (0, ())
U = (0, (1,))


class DegreeCapExceeded(ValueError):
    pass


class PBWState(State):
    __slots__ = ()

    @staticmethod
    def key_str(key):
        p, w = key
        body = "".join(f"u({-n})" for n in w) + "vac"
        if p:
            body = ("C" if p == 1 else f"C^{p}") + "*" + body
        return body

    @staticmethod
    def key_degree(key):
        return key[0] + len(key[1])

    @staticmethod
    def sort_key(key):
        return (sum(key[1]), key[0], key[1])

    def grade(self):
        gs = {sum(w) for (_, w) in self.terms}
        return gs.pop() if len(gs) == 1 else None

    @classmethod
    def parse(cls, text: str) -> "PBWState":
        """``u(-3)u(-1)vac``, ``C^2*u(-2)vac``, ``1/2*u(-1)vac - vac``.

        Words that are not ordered are rejected; use :func:`vm_normal_form`
        for arbitrary operator words.
        """
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty state")
        out = cls()
        for sign, term in re.findall(r"([+-]?)((?:[^+-]|(?<=\()-)+)", src):
            coeff = Fraction(-1 if sign == "-" else 1)
            p, word = 0, None
            for f in term.split("*"):
                m = re.fullmatch(r"C(?:\^(\d+))?", f)
                if m:
                    p += int(m.group(1) or 1)
                elif re.fullmatch(r"\d+(/\d+)?", f):
                    coeff *= Fraction(f)
                elif re.fullmatch(r"(u\(-\d+\))*vac", f):
                    word = tuple(int(x) for x in re.findall(r"u\(-(\d+)\)", f))
                else:
                    raise ValueError(f"cannot read {f!r} in {text!r}")
            word = () if word is None else word
            if any(n < 1 for n in word) or list(word) != sorted(word, reverse=True):
                raise ValueError(f"{term!r} is not an ordered basis word")
            out = out + cls.basis((p, word), coeff)
        return out


def _f(n: int) -> Fraction:
    return Fraction(0) if n == -1 else Fraction(1, n + 1)


def pbw_basis(max_grade: int, c_power: int = 0):
    """Ordered words of Z-grade <= max_grade (partitions), times C^c_power."""
    out = []

    def parts(n, cap):
        if n == 0:
            yield ()
            return
        for first in range(min(n, cap), 0, -1):
            for rest in parts(n - first, first):
                yield (first,) + rest

    for g in range(max_grade + 1):
        out += [(c_power, w) for w in parts(g, g)]
    return out


class VirasoroMagri(LogVAModel):
    """The module V_C with C formal (``c=None``) or specialized to a number."""

    state_cls = PBWState
    vac = VAC
    gen = U

    def __init__(self, c=None):
        self.c = None if c is None else Fraction(c)
        self.name = "virasoro-magri" if c is None else f"virasoro-magri(c={self.c})"
        self._u, self._d, self._t, self._tu, self._rw = {}, {}, {}, {}, {}

    def __getstate__(self):
        return {"c": self.c, "name": self.name}

    def __setstate__(self, st):
        self.__init__(st["c"])

    # ---- helpers
    def cmul(self, s: State, power: int = 1) -> PBWState:
        if power == 0:
            return s
        if self.c is None:
            return PBWState({(p + power, w): v for (p, w), v in s.items()})
        return s.scale(self.c ** power)

    def weight(self, key) -> int:
        return sum(key[1])

    def degree(self, key) -> int:
        return PBWState.key_degree(key)

    def central_key(self):
        return (1, ()) if self.c is None else None

    def sample_keys(self):
        return pbw_basis(3)

    # ---- strategy A: act on normal forms
    def apply_u(self, n: int, s: State) -> PBWState:
        return s.map(lambda key: self._u_key(n, key))

    def apply_D(self, s: State, times: int = 1) -> PBWState:
        for _ in range(times):
            if not s:
                break
            s = s.map(self._d_key)
        return s

    def apply_T(self, s: State) -> PBWState:
        return s.map(self._t_key)

    def _u_key(self, n, key):
        hit = self._u.get((n, key))
        if hit is not None:
            return hit
        p, w = key
        if not w:
            out = PBWState() if n >= 0 else PBWState.basis((p, (-n,)))
        elif n <= -1 and -n >= w[0]:
            out = PBWState.basis((p, (-n,) + w))
        else:
            a, rest = w[0], PBWState.basis((p, w[1:]))
            out = self.apply_u(-a, self._u_key(n, (p, w[1:]))) + self._comm_uu(n, -a, rest)
        self._u[(n, key)] = out
        return out

    def _comm_uu(self, m, k, s):
        """[u_m, u_k] s with [T, u_N] taken as the commutator T u_N - u_N T."""
        out = PBWState()
        coef = _f(k) - _f(m)
        if coef:
            n = m + k + 1
            out = (self.apply_T(self.apply_u(n, s)) - self.apply_u(n, self.apply_T(s))).scale(coef)
        if m + k >= 0:
            out = out - self.cmul(self.apply_D(s, m + k)).scale(Fraction((m - k) * (m + k + 1), 24))
        return out

    def _d_key(self, key):
        hit = self._d.get(key)
        if hit is not None:
            return hit
        p, w = key
        if not w:
            out = PBWState()
        else:
            rest = PBWState.basis((p, w[1:]))
            out = self.apply_u(-w[0], self.apply_D(rest))
            if w[0] == 1:
                out = out + rest
        self._d[key] = out
        return out

    def _t_key(self, key):
        hit = self._t.get(key)
        if hit is not None:
            return hit
        p, w = key
        if not w:
            out = PBWState()
        else:
            a, rest = w[0], PBWState.basis((p, w[1:]))
            out = self.apply_u(-a, self.apply_T(rest))
            # [T, u_{-a}] = sum_j (a+j) u_{-a-1-j} D^j
            dj = rest
            j = 0
            while dj:
                out = out + self.apply_u(-a - 1 - j, dj).scale(a + j)
                dj = self.apply_D(dj)
                j += 1
        self._t[key] = out
        return out

    # ---- strategy B: rewrite operator words
    def normal_form_rewrite(self, ops) -> PBWState:
        """Normal form of the word ``ops`` (leftmost acts last) applied to vac.

        ``ops`` is a sequence of ``("u", n)``, ``("D",)`` or ``("T",)``.
        """
        ops = tuple(tuple(o) for o in ops)
        old = sys.getrecursionlimit()
        if old < 20000:
            sys.setrecursionlimit(20000)
        try:
            return self._rw_word(ops)
        finally:
            sys.setrecursionlimit(old)

    def _rw_word(self, ops):
        hit = self._rw.get(ops)
        if hit is not None:
            return hit
        out = self._rw_compute(ops)
        self._rw[ops] = out
        return out

    @staticmethod
    def _creator(op):
        return op[0] == "u" and op[1] <= -1

    def _rw_compute(self, ops):
        if not ops:
            return PBWState.basis(VAC)
        if not self._creator(ops[-1]):
            return PBWState()
        i = len(ops) - 1
        while i > 0 and self._creator(ops[i - 1]) and ops[i - 1][1] <= ops[i][1]:
            i -= 1
        if i == 0:
            return PBWState.basis((0, tuple(-o[1] for o in ops)))
        x, y = ops[i - 1], ops[i]
        pre, post = ops[:i - 1], ops[i + 1:]
        out = self._rw_word(pre + (y, x) + post)
        g = -sum(o[1] for o in post)
        for coef, cp, word in self._comm_ops(x, y[1], g):
            out = out + self.cmul(self._rw_word(pre + word + post), cp).scale(coef)
        return out

    @staticmethod
    def _t_comm_ops(n, g):
        """[T, u_n] as operator words, D^j truncated at the grade g to its right."""
        out = []
        if 0 <= n <= g:
            out.append((Fraction(1), 0, (("T",),) + (("D",),) * n))
        for j in range(g + 1):
            if n - j:
                out.append((Fraction(-(n - j)), 0, (("u", n - 1 - j),) + (("D",),) * j))
        return out

    def _comm_ops(self, x, k, g):
        """[x, u_k] as (coefficient, C power, word) triples."""
        if x[0] == "D":
            return [(Fraction(1), 0, ())] if k == -1 else []
        if x[0] == "T":
            return self._t_comm_ops(k, g)
        m = x[1]
        coef = _f(k) - _f(m)
        out = [(coef * c, p, w) for c, p, w in self._t_comm_ops(m + k + 1, g)] if coef else []
        if 0 <= m + k <= g:
            out.append((Fraction(-(m - k) * (m + k + 1), 24), 1, (("D",),) * (m + k)))
        return out

    # ---- modes
    def mode_u(self, n: int, s: State) -> PBWState:
        return self.apply_u(n, s)

    def mode_translate(self, r: int, n: int, s: State) -> PBWState:
        """Mode n of T^r u by translation covariance with S = -D (x) T - T (x) D."""
        return s.map(lambda key: self._tu_key(r, n, key))

    def _tu_key(self, r, n, key):
        if r == 0:
            return self._u_key(n, key)
        hit = self._tu.get((r, n, key))
        if hit is not None:
            return hit
        s = PBWState.basis(key)
        out = self.mode_translate(r - 1, n - 1, s).scale(-n)
        if r == 1 and n == 0:
            out = out + self.apply_T(s)
        ds = self.apply_D(s)
        if ds:
            out = out + self.mode_translate(r, n - 1, ds)
        self._tu[(r, n, key)] = out
        return out

    def L(self, m: int, s: State) -> PBWState:
        """L_m = mode m+1 of u' in closed form: delta T D^(m+1) - sum_j (m+1-j) u_{m-j} D^j."""
        out = PBWState()
        if m + 1 >= 0:
            out = self.apply_T(self.apply_D(s, m + 1))
        dj, j = s, 0
        while dj:
            if m + 1 - j:
                out = out - self.apply_u(m - j, dj).scale(m + 1 - j)
            dj = self.apply_D(dj)
            j += 1
        return out

    def mode(self, n: int, a, s: State) -> PBWState:
        p, w = a
        if not w:
            return self.cmul(s, p) if n == -1 else PBWState()
        if len(w) == 1:
            r = w[0] - 1
            return self.cmul(self.mode_translate(r, n, s).scale(Fraction(1, factorial(r))), p)
        raise OutOfScope(f"no modes for the composite state {PBWState.key_str(a)}")

    def translate(self, s: State) -> PBWState:
        return self.apply_T(s)

    def braid(self, a, b):
        out = {}
        sa, sb = PBWState.basis(a), PBWState.basis(b)
        for x, y in ((self.apply_D(sa), self.apply_T(sb)), (self.apply_T(sa), self.apply_D(sb))):
            for ka, va in x.items():
                for kb, vb in y.items():
                    out[(ka, kb)] = out.get((ka, kb), 0) - va * vb
        return [(c, p, q) for (p, q), c in out.items() if c]

    # ---- the associated graded
    def to_diffpoly(self, s: State) -> DiffPoly:
        """u_{-n} -> d(u,n-1)/(n-1)!, C -> C."""
        alg = self.pva().alg
        out = alg.zero()
        for (p, w), v in s.items():
            term = alg.var("C") ** p if p else alg.one()
            for n in w:
                term = term * alg.var("u", n - 1).scale(Fraction(1, factorial(n - 1)))
            out = out + term.scale(v)
        return out

    def pva(self):
        return _vm_pva()


@lru_cache(maxsize=None)
def _vm_pva():
    return virasoro_magri()


# ---------------------------------------------------------------- words

_OP = re.compile(r"u\((-?\d+)\)|D|T|C|vac")


def parse_word(text: str):
    """``u(1)u(-2)vac`` or ``D T u(-1) vac`` -> list of ops (C is a central factor)."""
    src = text.replace(" ", "")
    pos, ops, cpow = 0, [], 0
    while pos < len(src):
        m = _OP.match(src, pos)
        if not m:
            raise ValueError(f"cannot read operator word at column {pos + 1}: {text!r}")
        tok = m.group(0)
        if tok == "vac":
            if m.end() != len(src):
                raise ValueError("vac must end the word")
        elif tok == "C":
            cpow += 1
        elif tok in ("D", "T"):
            ops.append((tok,))
        else:
            ops.append(("u", int(m.group(1))))
        pos = m.end()
    return ops, cpow


def vm_normal_form(word, degree_cap: int = 12, model: VirasoroMagri = None,
                   strategy: str = "apply") -> PBWState:
    """PBW normal form of an operator word applied to vac.

    ``strategy="apply"`` acts right to left on normal forms and enforces
    ``degree_cap`` on every intermediate state; ``"rewrite"`` rewrites the
    word first.
    """
    model = model or VirasoroMagri()
    cpow = 0
    if isinstance(word, str):
        word, cpow = parse_word(word)
    if strategy == "rewrite":
        return model.cmul(model.normal_form_rewrite(word), cpow)
    s = PBWState.basis(VAC)
    for op in reversed(list(word)):
        if op[0] == "u":
            s = model.apply_u(op[1], s)
        elif op[0] == "D":
            s = model.apply_D(s)
        else:
            s = model.apply_T(s)
        if s.max_degree() > degree_cap:
            raise DegreeCapExceeded(f"intermediate degree {s.max_degree()} exceeds cap {degree_cap}")
    return model.cmul(s, cpow)


def vm_L_mode(m: int, s: PBWState, model: VirasoroMagri = None) -> PBWState:
    return (model or VirasoroMagri()).L(m, s)


def L_relation_rhs(model: VirasoroMagri, m: int, k: int, s: State) -> PBWState:
    out = PBWState()
    dj, j = s, 0
    while dj:
        out = out + model.L(m + k - j, dj).scale((m - k) * (j + 1))
        dj = model.apply_D(dj)
        j += 1
    if m + k >= 0:
        coef = Fraction((m - k) * ((m - k) ** 2 - m - k - 4) * comb(m + k + 3, 3), 96)
        out = out + model.cmul(model.apply_D(s, m + k)).scale(coef)
    return out


def u_relation_rhs(model: VirasoroMagri, m: int, k: int, s: State) -> PBWState:
    """Right side of [u_m, u_k] with the u' mode given by the closed L formula."""
    out = model.L(m + k, s).scale(_f(k) - _f(m))
    if m + k >= 0:
        out = out - model.cmul(model.apply_D(s, m + k)).scale(Fraction((m - k) * (m + k + 1), 24))
    return out


def _report(check, model, params, lhs, rhs):
    rep = VerificationReport(check, model.name, params, lhs == rhs, checked=1)
    if not rep.ok:
        rep.counterexample = Counterexample("state", (params.get("m", 0), params.get("k", 0)),
                                            str(lhs), str(rhs))
    return rep


def vm_commutator_check(m: int, k: int, s: PBWState, c=None, which: str = "L",
                        model: VirasoroMagri = None) -> VerificationReport:
    """[L_m, L_k] s (``which="L"``) or [u_m, u_k] s (``which="u"``) against its closed form.

    ``c=None`` keeps the central element formal.
    """
    model = model or VirasoroMagri(c)
    params = {"m": m, "k": k, "state": str(s), "c": "C" if model.c is None else str(model.c)}
    if which == "L":
        lhs = model.L(m, model.L(k, s)) - model.L(k, model.L(m, s))
        return _report("vm-L-commutator", model, params, lhs, L_relation_rhs(model, m, k, s))
    if which == "u":
        lhs = model.apply_u(m, model.apply_u(k, s)) - model.apply_u(k, model.apply_u(m, s))
        return _report("vm-u-commutator", model, params, lhs, u_relation_rhs(model, m, k, s))
    raise ValueError(f"unknown relation {which!r}")


def vm_DL_check(n: int, s: PBWState, model: VirasoroMagri = None) -> VerificationReport:
    model = model or VirasoroMagri()
    lhs = model.apply_D(model.L(n, s)) - model.L(n, model.apply_D(s))
    return _report("vm-D-L", model, {"m": n, "state": str(s)}, lhs, PBWState())


def vm_confluence_check(word, model: VirasoroMagri = None) -> VerificationReport:
    model = model or VirasoroMagri()
    a = vm_normal_form(word, degree_cap=64, model=model)
    b = vm_normal_form(word, model=model, strategy="rewrite")
    text = word if isinstance(word, str) else word_str(word)
    return _report("vm-confluence", model, {"word": text}, a, b)


def word_str(ops) -> str:
    return "".join(f"u({o[1]})" if o[0] == "u" else o[0] for o in ops) + "vac"
