"""Truncated Laurent series and the two-variable space V_{lambda,mu}.

One-variable series carry a ``floor``: every coefficient at an exponent
``>= floor`` is exact, nothing below it is stored.

Two-variable data lives in :class:`SevenComponent`, the direct sum
V_1 + ... + V_7 of the space of series in lambda, mu and nu = lambda + mu:

====  =================================  key
V_1   lambda^a mu^b,  a, b >= 0          (a, b)
V_2   lambda^a mu^b,  a < 0 <= b         (a, b)
V_3   lambda^a mu^b,  b < 0 <= a         (a, b)
V_4   lambda^a nu^c,  a >= 0 > c         (a, c)
V_5   lambda^a mu^b,  a, b < 0           (a, b)
V_6   lambda^a nu^c,  a, c < 0           (a, c)
V_7   mu^b nu^c,      b, c < 0           (b, c)
====  =================================  =====

Its truncation is by total exponent (sum of the two key entries), which every
rewriting rule and every expansion below preserves.  A :class:`DoubleGrid`
is the image under one of the three expansions

* ``mu_lambda``: (lambda+mu)^n expanded in powers mu^(n-k) lambda^k,
* ``lambda_mu``: (lambda+mu)^n expanded in powers lambda^(n-k) mu^k,
* ``nu_lambda``: mu^n = (nu - lambda)^n expanded in powers lambda^(n-k) nu^k,

keyed by ``(lambda exponent, mu exponent)`` for the first two and
``(lambda exponent, nu exponent)`` for the third.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple

from .binom import binom
from .superpoly import DiffAlgebra, DiffPoly


class LaurentSeries:
    """sum_n c_n var^n with DiffPoly coefficients, exact for n >= floor."""

    __slots__ = ("alg", "var", "coeffs", "floor")

    def __init__(self, alg: DiffAlgebra, coeffs: Dict[int, DiffPoly], floor: int, var: str = "lambda"):
        self.alg = alg
        self.var = var
        self.floor = floor
        self.coeffs = {n: c for n, c in coeffs.items() if n >= floor and c}

    @classmethod
    def zero(cls, alg, floor, var="lambda"):
        return cls(alg, {}, floor, var)

    def coeff(self, n: int) -> DiffPoly:
        if n < self.floor:
            raise ValueError(f"exponent {n} below trusted floor {self.floor}")
        return self.coeffs.get(n, self.alg.zero())

    def top(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.var != other.var:
            raise TypeError(f"series in {self.var} and {other.var} cannot be combined")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        f = max(self.floor, other.floor)
        t = dict(self.coeffs)
        for n, c in other.coeffs.items():
            t[n] = t[n] + c if n in t else c
        return LaurentSeries(self.alg, t, f, self.var)

    def __neg__(self):
        return LaurentSeries(self.alg, {n: -c for n, c in self.coeffs.items()}, self.floor, self.var)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.alg, {n: v.scale(c) for n, v in self.coeffs.items()}, self.floor, self.var)

    def mul_right(self, p: DiffPoly) -> "LaurentSeries":
        """Coefficientwise c_n * p."""
        return LaurentSeries(self.alg, {n: c * p for n, c in self.coeffs.items()}, self.floor, self.var)

    def mul_left(self, p: DiffPoly) -> "LaurentSeries":
        """Coefficientwise p * c_n."""
        return LaurentSeries(self.alg, {n: p * c for n, c in self.coeffs.items()}, self.floor, self.var)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by var^k."""
        return LaurentSeries(self.alg, {n + k: c for n, c in self.coeffs.items()}, self.floor + k, self.var)

    def partial(self) -> "LaurentSeries":
        return LaurentSeries(self.alg, {n: c.partial() for n, c in self.coeffs.items()}, self.floor, self.var)

    def truncate(self, floor: int) -> "LaurentSeries":
        if floor < self.floor:
            raise ValueError(f"cannot extend floor {self.floor} down to {floor}")
        return LaurentSeries(self.alg, self.coeffs, floor, self.var)

    def mismatches(self, other: "LaurentSeries", floor: Optional[int] = None):
        """Exponents (on the common trusted window) where the series differ."""
        self._check(other)
        f = max(self.floor, other.floor, floor if floor is not None else self.floor)
        keys = {n for n in set(self.coeffs) | set(other.coeffs) if n >= f}
        zero = self.alg.zero()
        return sorted(n for n in keys if self.coeffs.get(n, zero) != other.coeffs.get(n, zero))

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return not self.mismatches(other)

    def __repr__(self):
        return f"LaurentSeries({self.var}, {self.dump()!r}, floor={self.floor})"

    def dump(self) -> str:
        return "; ".join(f"{self.var}^{n}: {self.coeffs[n]}" for n in sorted(self.coeffs, reverse=True))

    def to_json(self):
        return {"var": self.var, "floor": self.floor,
                "coeffs": {str(n): str(self.coeffs[n]) for n in sorted(self.coeffs, reverse=True)}}


def expand_nonlocal(n: int, a: DiffPoly, floor: int, var: str = "lambda") -> LaurentSeries:
    """(var + d)^n a = sum_k binom(n, k) var^(n-k) d^k a, kept for exponents >= floor."""
    alg = a.alg
    coeffs = {}
    d = a
    k = 0
    while n - k >= floor and (n < 0 or k <= n):
        if not d:
            break
        c = binom(n, k)
        if c:
            coeffs[n - k] = d.scale(c)
        d = d.partial()
        k += 1
    return LaurentSeries(alg, coeffs, floor, var)


def poly_shift_apply(s: LaurentSeries, k: int) -> LaurentSeries:
    """(var + d)^k s for k >= 0, with d acting on the coefficients; floor rises by k."""
    if k < 0:
        raise ValueError("only nonnegative powers")
    alg = s.alg
    out: Dict[int, DiffPoly] = {}
    for n, c in s.coeffs.items():
        d = c
        for j in range(k + 1):
            if not d:
                break
            e = n + k - j
            v = d.scale(binom(k, j))
            out[e] = out[e] + v if e in out else v
            d = d.partial()
    return LaurentSeries(alg, out, s.floor + k, s.var)


def arrow_apply(s: LaurentSeries, y: DiffPoly, floor: Optional[int] = None) -> LaurentSeries:
    """sum_n c_n (var + d)^n y with d acting on y; exact down to s.floor."""
    f = s.floor if floor is None else max(floor, s.floor)
    alg = s.alg
    out: Dict[int, DiffPoly] = {}
    for n, c in s.coeffs.items():
        ser = expand_nonlocal(n, y, f, s.var)
        for e, v in ser.coeffs.items():
            w = c * v
            out[e] = out[e] + w if e in out else w
    return LaurentSeries(alg, out, f, s.var)


def substitute_neg_lambda_partial(s: LaurentSeries) -> LaurentSeries:
    """Replace var by -var - d (d acting on coefficients).

    The coefficient of var^m is sum_{k>=0} binom(m+k, k) (-1)^(m+k) d^k c_{m+k},
    a finite sum because the series is bounded above.
    """
    alg = s.alg
    top = s.top()
    if top is None:
        return LaurentSeries(alg, {}, s.floor, s.var)
    out = {}
    for m in range(s.floor, top + 1):
        acc = alg.zero()
        for n in range(m, top + 1):
            c = s.coeffs.get(n)
            if c:
                k = n - m
                acc = acc + c.partial(k).scale(binom(n, k) * (-1) ** n)
        if acc:
            out[m] = acc
    return LaurentSeries(alg, out, s.floor, s.var)


# ------------------------------------------------------------ two variables

REGIMES = ("mu_lambda", "lambda_mu", "nu_lambda")


@lru_cache(maxsize=None)
def _canon(a: int, b: int, c: int) -> Tuple[Tuple[Tuple[int, int, int], Fraction], ...]:
    out: Dict[Tuple[int, int, int], Fraction] = {}

    def add(items, scale=1):
        for key, v in items:
            out[key] = out.get(key, 0) + scale * v

    if c > 0:
        for i in range(c + 1):
            add(_canon(a + i, b + c - i, 0), binom(c, i))
    elif c == 0:
        if a >= 0 and b >= 0:
            k = 1
        elif a < 0 <= b:
            k = 2
        elif b < 0 <= a:
            k = 3
        else:
            k = 5
        out[(k, a, b)] = Fraction(1)
    elif b == 0:
        out[(4 if a >= 0 else 6, a, c)] = Fraction(1)
    elif a == 0 and b < 0:
        out[(7, b, c)] = Fraction(1)
    elif b > 0:
        # mu = nu - lambda
        for i in range(b + 1):
            add(_canon(a + b - i, 0, c + i), binom(b, i) * (-1) ** (b - i))
    elif a < 0:
        # 1/(lambda mu) = (1/lambda + 1/mu) / nu
        add(_canon(a + 1, b, c - 1))
        add(_canon(a, b + 1, c - 1))
    else:
        # a > 0 > b, c < 0: lambda = nu - mu
        for i in range(a + 1):
            add(_canon(0, b + a - i, c + i), binom(a, i) * (-1) ** (a - i))
    return tuple(sorted((k, v) for k, v in out.items() if v))


@lru_cache(maxsize=None)
def _fold7(a: int, b: int, c: int) -> Tuple[Tuple[Tuple[int, int, int], Fraction], ...]:
    # lambda^a mu^b nu^c with a <= 0, b, c < 0, via 1/(mu nu) = 1/(lambda mu) - 1/(lambda nu)
    if c == 0:
        return (((5, a, b), Fraction(1)),)
    if b == 0:
        return (((6, a, c), Fraction(1)),)
    out: Dict[Tuple[int, int, int], Fraction] = {}
    for (args, s) in (((a - 1, b, c + 1), 1), ((a - 1, b + 1, c), -1)):
        for key, v in _fold7(*args):
            out[key] = out.get(key, 0) + s * v
    return tuple(sorted((k, v) for k, v in out.items() if v))


def canonical_terms(a: int, b: int, c: int):
    """Components of lambda^a mu^b (lambda+mu)^c as ((component, e1, e2), coefficient)."""
    return _canon(a, b, c)


class SevenComponent:
    """Element of V_{lambda,mu} stored component by component (see module doc)."""

    def __init__(self, alg: DiffAlgebra, floor: int, comps=None):
        self.alg = alg
        self.floor = floor
        self.comps: Dict[int, Dict[Tuple[int, int], DiffPoly]] = {k: {} for k in range(1, 8)}
        if comps:
            for k, d in comps.items():
                for key, v in d.items():
                    self.add(k, key[0], key[1], v)

    @staticmethod
    def _valid(k, e1, e2) -> bool:
        return {
            1: e1 >= 0 and e2 >= 0,
            2: e1 < 0 <= e2,
            3: e2 < 0 <= e1,
            4: e1 >= 0 > e2,
            5: e1 < 0 and e2 < 0,
            6: e1 < 0 and e2 < 0,
            7: e1 < 0 and e2 < 0,
        }[k]

    def add(self, k: int, e1: int, e2: int, poly: DiffPoly):
        if not poly or e1 + e2 < self.floor:
            return
        if not self._valid(k, e1, e2):
            raise ValueError(f"exponents {(e1, e2)} do not belong to V_{k}")
        d = self.comps[k]
        key = (e1, e2)
        v = d[key] + poly if key in d else poly
        if v:
            d[key] = v
        else:
            d.pop(key, None)

    def add_monomial(self, a: int, b: int, c: int, poly: DiffPoly):
        """Add poly * lambda^a mu^b (lambda+mu)^c, rewritten into components."""
        if not poly or a + b + c < self.floor:
            return
        for (k, e1, e2), v in canonical_terms(a, b, c):
            self.add(k, e1, e2, poly.scale(v))

    @classmethod
    def canonicalize(cls, alg, a, b, c, poly=None, floor=None):
        if floor is None:
            floor = min(a + b + c, 0) - 1
        sc = cls(alg, floor)
        sc.add_monomial(a, b, c, alg.one() if poly is None else poly)
        return sc

    def reduced(self) -> "SevenComponent":
        """Copy with V_7 rewritten into V_5 + V_6.

        The seven subspaces overlap: 1/(mu nu) = 1/(lambda mu) - 1/(lambda nu).
        V_1, ..., V_6 on the other hand form a direct sum, so two elements are
        equal exactly when their reduced components agree.
        """
        out = SevenComponent(self.alg, self.floor)
        for k in range(1, 7):
            for (e1, e2), v in self.comps[k].items():
                out.add(k, e1, e2, v)
        for (b, c), v in self.comps[7].items():
            for (k, e1, e2), x in _fold7(0, b, c):
                out.add(k, e1, e2, v.scale(x))
        return out

    def project(self, k: int) -> Dict[Tuple[int, int], DiffPoly]:
        return dict(self.comps[k])

    def is_zero(self) -> bool:
        return not any(self.comps.values())

    def _binary(self, other, sign):
        f = max(self.floor, other.floor)
        out = SevenComponent(self.alg, f)
        for src, s in ((self, 1), (other, sign)):
            for k, d in src.comps.items():
                for (e1, e2), v in d.items():
                    out.add(k, e1, e2, v if s == 1 else -v)
        return out

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def scale(self, c):
        out = SevenComponent(self.alg, self.floor)
        for k, d in self.comps.items():
            for (e1, e2), v in d.items():
                out.add(k, e1, e2, v.scale(c))
        return out

    def mismatches(self, other: "SevenComponent"):
        """List of (component, key, lhs, rhs) where the two differ on the common window."""
        f = max(self.floor, other.floor)
        zero = self.alg.zero()
        bad = []
        for k in range(1, 8):
            a, b = self.comps[k], other.comps[k]
            for key in sorted(set(a) | set(b)):
                if key[0] + key[1] < f:
                    continue
                x, y = a.get(key, zero), b.get(key, zero)
                if x != y:
                    bad.append((k, key, x, y))
        return bad

    def __eq__(self, other):
        if not isinstance(other, SevenComponent):
            return NotImplemented
        return not self.mismatches(other)

    def dump(self) -> str:
        lines = []
        for k in range(1, 8):
            for key in sorted(self.comps[k]):
                lines.append(f"V{k} {key[0]} {key[1]} {self.comps[k][key]}")
        return "\n".join(lines)

    def iota_expand(self, regime: str, floors: Tuple[int, int]) -> "DoubleGrid":
        return iota_expand(self, regime, floors)


class DoubleGrid:
    """Coefficients of a two-variable expansion, tagged by its regime.

    Trusted on the window e1 >= floors[0], e2 >= floors[1], e1 + e2 >= total_floor.
    """

    def __init__(self, alg, regime: str, coeffs: Dict[Tuple[int, int], DiffPoly],
                 floors: Tuple[int, int], total_floor: Optional[int] = None):
        if regime not in REGIMES:
            raise ValueError(f"unknown regime {regime!r}")
        self.alg = alg
        self.regime = regime
        self.floors = tuple(floors)
        self.total_floor = total_floor
        self.coeffs = {k: v for k, v in coeffs.items() if v and self.in_window(k)}

    def in_window(self, key, floors=None, total_floor=None) -> bool:
        f1, f2 = floors or self.floors
        t = self.total_floor if total_floor is None else total_floor
        return key[0] >= f1 and key[1] >= f2 and (t is None or key[0] + key[1] >= t)

    def _check(self, other):
        if not isinstance(other, DoubleGrid):
            raise TypeError("can only compare DoubleGrid with DoubleGrid")
        if other.regime != self.regime:
            raise TypeError(f"cannot compare {self.regime} grid with {other.regime} grid")

    def mismatches(self, other: "DoubleGrid"):
        self._check(other)
        floors = (max(self.floors[0], other.floors[0]), max(self.floors[1], other.floors[1]))
        ts = [t for t in (self.total_floor, other.total_floor) if t is not None]
        t = max(ts) if ts else None
        zero = self.alg.zero()
        bad = []
        for key in sorted(set(self.coeffs) | set(other.coeffs)):
            if not self.in_window(key, floors, t):
                continue
            x, y = self.coeffs.get(key, zero), other.coeffs.get(key, zero)
            if x != y:
                bad.append((key, x, y))
        return bad

    def __eq__(self, other):
        self._check(other)
        return not self.mismatches(other)

    def __add__(self, other):
        self._check(other)
        floors = (max(self.floors[0], other.floors[0]), max(self.floors[1], other.floors[1]))
        ts = [t for t in (self.total_floor, other.total_floor) if t is not None]
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return DoubleGrid(self.alg, self.regime, out, floors, max(ts) if ts else None)

    def scale(self, c):
        return DoubleGrid(self.alg, self.regime, {k: v.scale(c) for k, v in self.coeffs.items()},
                          self.floors, self.total_floor)

    def dump(self) -> str:
        return "\n".join(f"{k[0]} {k[1]} {self.coeffs[k]}" for k in sorted(self.coeffs))


def iota_expand(sc: SevenComponent, regime: str, floors: Tuple[int, int]) -> DoubleGrid:
    """Expand every component into the given regime, on the window ``floors``."""
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    f1, f2 = floors
    out: Dict[Tuple[int, int], DiffPoly] = {}

    def put(e1, e2, v):
        if e1 < f1 or e2 < f2 or e1 + e2 < sc.floor or not v:
            return
        key = (e1, e2)
        out[key] = out[key] + v if key in out else v

    for k in (1, 2, 3, 5):
        for (a, b), v in sc.comps[k].items():
            if regime != "nu_lambda":
                put(a, b, v)
            elif b >= 0:
                for j in range(b + 1):
                    put(a + b - j, j, v.scale(binom(b, j) * (-1) ** (b - j)))
            else:
                for j in range(max(0, a + b - f1 + 1)):
                    put(a + b - j, j, v.scale(binom(b, j) * (-1) ** (b - j)))
    for k in (4, 6):
        for (a, c), v in sc.comps[k].items():
            if regime == "nu_lambda":
                put(a, c, v)
            elif regime == "mu_lambda":
                for j in range(max(0, c - f2 + 1)):
                    put(a + j, c - j, v.scale(binom(c, j)))
            else:
                for j in range(max(0, a + c - f1 + 1)):
                    put(a + c - j, j, v.scale(binom(c, j)))
    for (b, c), v in sc.comps[7].items():
        if regime == "mu_lambda":
            for j in range(max(0, b + c - f2 + 1)):
                put(j, b + c - j, v.scale(binom(c, j)))
        elif regime == "lambda_mu":
            for j in range(max(0, c - f1 + 1)):
                put(c - j, b + j, v.scale(binom(c, j)))
        else:
            for j in range(max(0, b - f1 + 1)):
                put(b - j, c + j, v.scale(binom(b, j) * (-1) ** (b - j)))
    return DoubleGrid(sc.alg, regime, out, floors, sc.floor)


def expand_rational_monomial(alg, a, b, c, regime, floors, poly=None) -> DoubleGrid:
    """Direct iterated expansion of lambda^a mu^b (lambda+mu)^c, no component split.

    Serves as the independent route against ``iota_expand(canonicalize(...))``.
    """
    poly = alg.one() if poly is None else poly
    f1, f2 = floors
    out: Dict[Tuple[int, int], DiffPoly] = {}

    def put(e1, e2, coef):
        if e1 < f1 or e2 < f2 or not coef:
            return
        key = (e1, e2)
        v = poly.scale(coef)
        out[key] = out[key] + v if key in out else v

    if regime == "mu_lambda":
        # (lambda+mu)^c = sum_j binom(c,j) mu^(c-j) lambda^j
        top = c if c >= 0 else b + c - f2
        for j in range(max(0, top + 1)):
            put(a + j, b + c - j, binom(c, j))
    elif regime == "lambda_mu":
        top = c if c >= 0 else a + c - f1
        for j in range(max(0, top + 1)):
            put(a + c - j, b + j, binom(c, j))
    else:
        # mu^b = sum_j binom(b,j) (-lambda)^(b-j) nu^j, nu^c kept as is
        top = b if b >= 0 else a + b - f1
        for j in range(max(0, top + 1)):
            put(a + b - j, c + j, binom(b, j) * (-1) ** (b - j))
    return DoubleGrid(alg, regime, out, floors, a + b + c)
