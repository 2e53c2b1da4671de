"""The free boson logVA on C[K, x0, x1, ...] and its K-less variant.

Basis keys are ``(k, xs)``: ``K^k x0^xs[0] x1^xs[1] ...`` with trailing zero
exponents dropped.  The generator is x0 and

* T x_n = (n+1) x_{n+1}, T K = 0,
* S = -1/2 K d/dx0 (x) d/dx0 - 1/2 d/dx0 (x) K d/dx0   (S = -d/dx0 (x) d/dx0 without K),
* x0 has modes x_{-n-1}* for n < 0 and -K/(n+1) d/dx_{n+1} for n >= 0,
  and the coefficient of zeta in its field is K d/dx0.

Since T^r x0 = r! x_r, the modes of x_r come from differentiating the field
of x0 r times in z.  Weights: x_n has weight n+1 and K weight 2, so every
mode mu_(n) lowers the total weight by n+1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial

from ..algebras import free_boson
from ..superpoly import DiffPoly
from .core import LogVAModel, OutOfScope, State, tensor_of


def _trim(xs):
    xs = list(xs)
    while xs and xs[-1] == 0:
        xs.pop()
    return tuple(xs)


class FockState(State):
    __slots__ = ()

    @staticmethod
    def key_str(key):
        k, xs = key
        parts = []
        if k:
            parts.append("K" if k == 1 else f"K^{k}")
        for i, e in enumerate(xs):
            if e:
                parts.append(f"x{i}" if e == 1 else f"x{i}^{e}")
        return "*".join(parts) or "1"

    @staticmethod
    def key_degree(key):
        return key[0] + sum(key[1])

    @staticmethod
    def sort_key(key):
        return (FockState.key_degree(key), key)

    @classmethod
    def parse(cls, text: str) -> "FockState":
        """``x0*x1^2*K``, ``3/2*x0 - K^2``, ``1`` or ``vac``."""
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty state")
        out = cls()
        for sign, term in re.findall(r"([+-]?)([^+-]+)", src):
            coeff = Fraction(-1 if sign == "-" else 1)
            k, xs = 0, {}
            for f in term.split("*"):
                m = re.fullmatch(r"(K|x(\d+))(?:\^(\d+))?", f)
                if m:
                    e = int(m.group(3) or 1)
                    if m.group(1) == "K":
                        k += e
                    else:
                        i = int(m.group(2))
                        xs[i] = xs.get(i, 0) + e
                elif f == "vac":
                    pass
                elif re.fullmatch(r"\d+(/\d+)?", f):
                    coeff *= Fraction(f)
                else:
                    raise ValueError(f"cannot read factor {f!r} in {text!r}")
            key = (k, _trim(xs.get(i, 0) for i in range(max(xs, default=-1) + 1)))
            out = out + cls.basis(key, coeff)
        return out


VAC = (0, ())
X0 = (0, (1,))


def _x_key(n):
    return (0, (0,) * n + (1,))


def _mul(key, other):
    k1, a = key
    k2, b = other
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return (k1 + k2, _trim(x + y for x, y in zip(a, b)))


def _falling(e: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= e - i
    return out


class FreeBoson(LogVAModel):
    state_cls = FockState
    vac = VAC
    gen = X0

    def __init__(self, with_K: bool = True):
        self.with_K = with_K
        self.name = "free-boson" if with_K else "free-boson-no-K"

    # ---- elementary operators
    def mul_key(self, key, s: State) -> FockState:
        return FockState({_mul(key, k): v for k, v in s.items()})

    def mul_x(self, n: int, s: State) -> FockState:
        return self.mul_key(_x_key(n), s)

    def mul_K(self, s: State, power: int = 1) -> FockState:
        if not self.with_K:
            return FockState(dict(s.terms))
        return self.mul_key((power, ()), s)

    def d_x(self, n: int, s: State) -> FockState:
        out = {}
        for (k, xs), v in s.items():
            if n < len(xs) and xs[n]:
                e = xs[n]
                ys = list(xs)
                ys[n] -= 1
                key = (k, _trim(ys))
                out[key] = out.get(key, 0) + v * e
        return FockState(out)

    def translate(self, s: State) -> FockState:
        out = FockState()
        for i in range(max((len(xs) for (_, xs), _ in s.items()), default=0)):
            out = out + self.mul_x(i + 1, self.d_x(i, s)).scale(i + 1)
        return out

    def weight(self, key) -> int:
        k, xs = key
        return 2 * k + sum((i + 1) * e for i, e in enumerate(xs))

    # ---- modes
    def mode_x0(self, n: int, s: State) -> FockState:
        if n <= -1:
            return self.mul_x(-n - 1, s)
        return self.mul_K(self.d_x(n + 1, s)).scale(Fraction(-1, n + 1))

    def mode_translate(self, r: int, n: int, s: State) -> FockState:
        """Mode n of T^r x0, read off from the r-th z-derivative of the field of x0."""
        if r == 0:
            return self.mode_x0(n, s)
        e = r - n - 2
        c = _falling(e, r - 1)
        if not c:
            return FockState()
        if e >= 0:
            return self.mul_x(e + 1, s).scale(c * (e + 1))
        return self.mul_K(self.d_x(-e - 1, s)).scale(c)

    def mode_translate_recursive(self, r: int, n: int, s: State) -> FockState:
        """The same modes from translation covariance alone."""
        if r == 0:
            return self.mode_x0(n, s)
        out = self.mode_translate_recursive(r - 1, n - 1, s).scale(-n)
        if r == 1 and n == 0:
            out = out + self.mul_K(self.d_x(0, s))
        return out

    def mode(self, n: int, a, s: State) -> FockState:
        k, xs = a
        if not any(xs):
            if n != -1:
                return FockState()
            return self.mul_K(s, k) if k else FockState(dict(s.terms))
        if sum(xs) == 1:
            r = xs.index(1)
            out = self.mode_translate(r, n, s).scale(Fraction(1, factorial(r)))
            return self.mul_K(out, k) if k else out
        raise OutOfScope(f"no modes for the composite state {FockState.key_str(a)}")

    def braid(self, a, b):
        da = self.d_x(0, FockState.basis(a))
        db = self.d_x(0, FockState.basis(b))
        if not da or not db:
            return []
        out = {}
        if self.with_K:
            pairs = [(self.mul_K(da), db), (da, self.mul_K(db))]
            half = Fraction(-1, 2)
        else:
            pairs = [(da, db)]
            half = Fraction(-1)
        for x, y in pairs:
            for key, c in tensor_of(x, y).items():
                out[key] = out.get(key, 0) + half * c
        return [(c, p, q) for (p, q), c in out.items() if c]

    # ---- the associated graded
    def to_diffpoly(self, s: State) -> DiffPoly:
        """x_n -> d(x,n)/n!, K -> K in the potential free boson algebra."""
        alg = self.pva().alg
        out = alg.zero()
        for (k, xs), v in s.items():
            term = alg.var("K") ** k if k else alg.one()
            for i, e in enumerate(xs):
                if e:
                    term = term * alg.var("x", i).scale(Fraction(1, factorial(i))) ** e
            out = out + term.scale(v)
        return out

    def pva(self):
        return _fb_pva()

    def degree(self, key) -> int:
        return FockState.key_degree(key)

    def central_key(self):
        return (1, ()) if self.with_K else None

    def sample_keys(self):
        return fock_basis(2, 2, self.with_K)


@lru_cache(maxsize=None)
def _fb_pva():
    return free_boson()


def fb_mode_apply(n: int, s: FockState, with_K: bool = True) -> FockState:
    return FreeBoson(with_K).mode_x0(n, s)


def fb_zeta_coeff(i: int, n: int, s: FockState, with_K: bool = True) -> FockState:
    """Coefficient of zeta^i z^(-n-1) in Y(x0, z) s, i.e. (-1)^i/i! mu_(n)(S^i(x0 (x) s))."""
    if i < 0:
        raise ValueError("i must be >= 0")
    model = FreeBoson(with_K)
    t = tensor_of(model.basis(X0), s)
    for _ in range(i):
        t = model.braid_tensor(t, 0, 1)
    out = FockState()
    for (a, b), c in t.items():
        out = out + model.mode(n, a, FockState.basis(b)).scale(c)
    return out.scale(Fraction((-1) ** i, factorial(i)))


def fock_basis(max_degree: int, max_index: int, with_K: bool = True):
    """All monomials in K, x0..x_max_index of total degree <= max_degree."""
    nvar = max_index + 1
    out = []

    def rec(i, left, xs):
        if i == nvar:
            ks = range(left + 1) if with_K else [0]
            for k in ks:
                out.append((k, _trim(xs)))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, xs + [e])

    rec(0, max_degree, [])
    return sorted(set(out), key=FockState.sort_key)
