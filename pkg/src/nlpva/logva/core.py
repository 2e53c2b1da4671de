"""Shared machinery for concrete logarithmic vertex algebra models.

A model is a vector space with a distinguished basis (hashable keys), the
modes of a generator and of its translates, the translation operator T and
a braiding map S.  States are finite linear combinations of keys.  Only
first slots that are translates of the generator, central powers or the
vacuum have modes; anything else raises :class:`OutOfScope`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from ..binom import binom_poly
from ..report import Counterexample, VerificationReport


class OutOfScope(ValueError):
    """A mode of a composite state was requested."""


class State:
    """Finite linear combination of basis keys."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def basis(cls, key, coeff=1):
        return cls({key: coeff})

    def _new(self, terms):
        return type(self)(terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, State) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return self._new(t)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._new({k: v * c for k, v in self.terms.items()}) if c else self._new({})

    def __rmul__(self, c):
        return self.scale(c)

    def items(self):
        return self.terms.items()

    def map(self, f) -> "State":
        """Linear extension of f: key -> State."""
        out = self._new({})
        for k, v in self.terms.items():
            out = out + f(k).scale(v)
        return out

    def degree(self):
        """Filtration degree, or None when the state mixes degrees."""
        ds = {self.key_degree(k) for k in self.terms}
        return ds.pop() if len(ds) == 1 else None

    def max_degree(self) -> int:
        return max((self.key_degree(k) for k in self.terms), default=0)

    def degree_part(self, d: int):
        return self._new({k: v for k, v in self.terms.items() if self.key_degree(k) == d})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=self.sort_key):
            v = self.terms[k]
            body = self.key_str(k)
            if v == 1:
                s = body
            elif v == -1:
                s = "-" + body
            else:
                s = f"{v}*{body}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    # per-basis hooks
    @staticmethod
    def key_str(key) -> str:
        return repr(key)

    @staticmethod
    def key_degree(key) -> int:
        return 0

    @staticmethod
    def sort_key(key):
        return key


Tensor = Dict[Tuple, Fraction]


def tensor_add(t: Tensor, key, c):
    v = t.get(key, 0) + c
    if v:
        t[key] = v
    else:
        t.pop(key, None)


class LogVAModel:
    """Interface implemented by the concrete models."""

    name = "model"
    state_cls = State
    vac = None
    gen = None

    # --- to be provided
    def mode(self, n: int, a, s: State) -> State:
        raise NotImplementedError

    def braid(self, a, b) -> List[Tuple[Fraction, object, object]]:
        raise NotImplementedError

    def translate(self, s: State) -> State:
        raise NotImplementedError

    def weight(self, key) -> int:
        raise NotImplementedError

    # --- derived
    def basis(self, key) -> State:
        return self.state_cls.basis(key)

    def mode_state(self, n: int, a: State, s: State) -> State:
        out = self.state_cls()
        for k, v in a.items():
            out = out + self.mode(n, k, s).scale(v)
        return out

    def braid_tensor(self, t: Tensor, i: int, j: int) -> Tensor:
        """S acting on tensor slots i and j."""
        out: Tensor = {}
        for key, c in t.items():
            for c2, a, b in self.braid(key[i], key[j]):
                new = list(key)
                new[i], new[j] = a, b
                tensor_add(out, tuple(new), c * c2)
        return out

    def braid_states(self, a: State, b: State) -> Tensor:
        return self.braid_tensor(tensor_of(a, b), 0, 1)

    def braid_powers(self, t: Tensor, i: int, k: int, bound: int = 64) -> List[Tensor]:
        """[t, S_ik t, S_ik^2 t, ...] up to the first zero."""
        out = []
        while t:
            if len(out) > bound:
                raise ValueError(f"braiding not nilpotent within {bound} steps")
            out.append(t)
            t = self.braid_tensor(t, i, k)
        return out

    def binom_braid(self, t: Tensor, m: int, j: int, i: int, k: int, powers=None) -> Tensor:
        """binom(m + S_ik, j) applied to t (``powers`` from :meth:`braid_powers` if at hand)."""
        powers = self.braid_powers(t, i, k) if powers is None else powers
        out: Tensor = {}
        for coeff, power in zip(binom_poly(m, j), powers):
            if coeff:
                for key, c in power.items():
                    tensor_add(out, key, c * coeff)
        return out

    def braid_nilpotency(self, a: State, b: State, bound: int = 32) -> int:
        """Smallest i with S^i(a (x) b) = 0."""
        t = tensor_of(a, b)
        for i in range(bound + 1):
            if not t:
                return i
            t = self.braid_tensor(t, 0, 1)
        raise ValueError(f"braiding not nilpotent within {bound} steps")

    def state_weight(self, s: State) -> int:
        return max((self.weight(k) for k, _ in s.items()), default=0)

    def covariance_rhs(self, n: int, a, s: State) -> State:
        """-n mu_(n-1)(a (x) s) - mu_(n-1)(S(a (x) s))."""
        out = self.mode(n - 1, a, s).scale(-n)
        for key, c in self.braid_tensor(tensor_of(self.basis(a), s), 0, 1).items():
            out = out - self.mode(n - 1, key[0], self.basis(key[1])).scale(c)
        return out


def tensor_of(*states: State) -> Tensor:
    out: Tensor = {(): Fraction(1)}
    for s in states:
        nxt: Tensor = {}
        for key, c in out.items():
            for k, v in s.items():
                tensor_add(nxt, key + (k,), c * v)
        out = nxt
    return out


def _j_bound(model, s: State, m: int, k: int) -> int:
    w = model.weight(model.gen)
    return 2 * w + model.state_weight(s) + abs(m) + abs(k) + 2


def borcherds_sides(model: LogVAModel, m: int, k: int, s: State, g=None):
    """Both sides of the n = 0 Borcherds identity on g (x) g (x) s."""
    g = model.gen if g is None else g
    base = tensor_of(model.basis(g), model.basis(g), s)
    swapped = {(b, a, c): v for (a, b, c), v in base.items()}
    jmax = _j_bound(model, s, m, k)
    lhs = model.state_cls()
    for sign, t, p, q in ((1, base, m, k), (-1, swapped, k, m)):
        powers = model.braid_powers(t, 0, 1)
        for j in range(jmax + 1):
            tj = model.binom_braid(t, 0, j, 0, 1, powers)
            for (a, b, c), v in tj.items():
                inner = model.mode(q + j, b, model.basis(c))
                if inner:
                    lhs = lhs + model.mode(p - j, a, inner).scale(sign * (-1) ** j * v)
    rhs = model.state_cls()
    powers = model.braid_powers(base, 0, 2)
    for j in range(jmax + 1):
        tj = model.binom_braid(base, m, j, 0, 2, powers)
        for (a, b, c), v in tj.items():
            first = model.mode(j, a, model.basis(b))
            if first:
                rhs = rhs + model.mode_state(m + k - j, first, model.basis(c)).scale(v)
    return lhs, rhs


def borcherds_n0_check(model: LogVAModel, m: int, k: int, s: State) -> VerificationReport:
    rep = VerificationReport("borcherds-n0", model.name, {"m": m, "k": k, "state": str(s)}, checked=1)
    try:
        lhs, rhs = borcherds_sides(model, m, k, s)
    except OutOfScope as exc:
        rep.ok = False
        rep.counterexample = Counterexample("out-of-scope", (m, k), str(exc), "")
        return rep
    if lhs != rhs:
        rep.ok = False
        rep.counterexample = Counterexample("state", (m, k), str(lhs), str(rhs))
    return rep
