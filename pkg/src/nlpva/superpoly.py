"""Differential superpolynomials with exact rational coefficients.

A :class:`DiffAlgebra` holds the generator declarations; a :class:`DiffPoly`
is an immutable element of the free differential supercommutative algebra
they generate.  A variable ``(g, d)`` stands for ``d^d g`` (not divided).
Monomials are tuples ``((g, d, e), ...)`` sorted by generator declaration
index, then derivative order; odd variables only ever carry ``e == 1``.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple

Monomial = Tuple[Tuple[int, int, int], ...]

ONE_MONO: Monomial = ()


class ParseError(ValueError):
    """Syntax error in an expression, with 1-based line and column."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int = 0
    central: bool = False
    degree: int = 1

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise ValueError(f"parity of {self.name!r} must be 0 or 1")
        if not self.name.isidentifier() or self.name == "d":
            raise ValueError(f"bad generator name {self.name!r}")


class DiffAlgebra:
    """The free differential superalgebra on a list of generators."""

    def __init__(self, generators: Iterable[Generator]):
        self.generators = tuple(generators)
        if not self.generators:
            raise ValueError("no generators")
        self.index = {}
        for i, g in enumerate(self.generators):
            if g.name in self.index:
                raise ValueError(f"duplicate generator {g.name!r}")
            self.index[g.name] = i
        self._parity = tuple(g.parity for g in self.generators)
        self._central = tuple(g.central for g in self.generators)
        self._degree = tuple(g.degree for g in self.generators)
        self._dcache: Dict["DiffPoly", "DiffPoly"] = {}

    def __eq__(self, other):
        return isinstance(other, DiffAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return f"DiffAlgebra({[g.name for g in self.generators]})"

    # constructors

    def zero(self) -> "DiffPoly":
        return DiffPoly(self, {})

    def one(self) -> "DiffPoly":
        return DiffPoly(self, {ONE_MONO: Fraction(1)})

    def const(self, c) -> "DiffPoly":
        c = Fraction(c)
        return DiffPoly(self, {ONE_MONO: c} if c else {})

    def var(self, name: str, order: int = 0) -> "DiffPoly":
        if name not in self.index:
            raise KeyError(f"unknown generator {name!r}")
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        i = self.index[name]
        if order > 0 and self._central[i]:
            return self.zero()
        return DiffPoly(self, {((i, order, 1),): Fraction(1)})

    def mono(self, m: Monomial, coeff=1) -> "DiffPoly":
        coeff = Fraction(coeff)
        return DiffPoly(self, {m: coeff} if coeff else {})

    def parse(self, text: str) -> "DiffPoly":
        return parse_expr(self, text)

    # monomial helpers

    def mono_parity(self, m: Monomial) -> int:
        return sum(e for g, d, e in m if self._parity[g]) & 1

    def mono_grade(self, m: Monomial) -> int:
        return sum(self._degree[g] * e for g, d, e in m)

    def is_odd(self, g: int) -> bool:
        return bool(self._parity[g])

    def is_central(self, g: int) -> bool:
        return self._central[g]

    def mono_mul(self, m1: Monomial, m2: Monomial):
        """Product of two monomials as ``(sign, monomial)``; sign 0 if it vanishes."""
        if not m1:
            return 1, m2
        if not m2:
            return 1, m1
        par = self._parity
        o1 = [(g, d) for g, d, e in m1 if par[g]]
        o2 = [(g, d) for g, d, e in m2 if par[g]]
        sign = 1
        if o1 and o2:
            # number of pairs (x in m1, y in m2) with x > y decides the Koszul sign
            inv = 0
            j = 0
            for y in o2:
                # count x in o1 greater than y
                while j < len(o1) and o1[j] <= y:
                    if o1[j] == y:
                        return 0, None
                    j += 1
                inv += len(o1) - j
            # reset pointer per y is not needed: o2 sorted ascending
            if inv & 1:
                sign = -1
        merged: Dict[Tuple[int, int], int] = {}
        for g, d, e in m1:
            merged[(g, d)] = e
        for g, d, e in m2:
            merged[(g, d)] = merged.get((g, d), 0) + e
        return sign, tuple((g, d, e) for (g, d), e in sorted(merged.items()))

    def mono_str(self, m: Monomial) -> str:
        parts = []
        for g, d, e in m:
            name = self.generators[g].name
            s = name if d == 0 else f"d({name},{d})"
            if e != 1:
                s += f"^{e}"
            parts.append(s)
        return "*".join(parts)


def _mono_sort_key(m: Monomial):
    return (len(m), sum(e for _, _, e in m), m)


class DiffPoly:
    """Immutable differential superpolynomial with Fraction coefficients."""

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg: DiffAlgebra, terms: Mapping[Monomial, Fraction]):
        self.alg = alg
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # basic protocol

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, DiffPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE_MONO: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"DiffPoly({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            neg = c < 0
            a = -c if neg else c
            ms = self.alg.mono_str(m)
            if not ms:
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a}*{ms}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    # arithmetic

    def _coerce(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            if other.alg is not self.alg and other.alg != self.alg:
                raise ValueError("polynomials over different algebras")
            return other
        if isinstance(other, (int, Fraction)):
            return self.alg.const(other)
        raise TypeError(f"cannot combine DiffPoly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return DiffPoly(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "DiffPoly":
        c = Fraction(c)
        if not c:
            return self.alg.zero()
        return DiffPoly(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        alg = self.alg
        t: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = alg.mono_mul(m1, m2)
                if s:
                    t[m] = t.get(m, 0) + s * c1 * c2
        return DiffPoly(alg, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        r = self.alg.one()
        for _ in range(n):
            r = r * self
        return r

    # structure

    def parity(self) -> Optional[int]:
        """Parity of a homogeneous element (0 for zero), None if mixed."""
        ps = {self.alg.mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def grade(self) -> Optional[int]:
        """Filtration degree if homogeneous, None if mixed or zero."""
        gs = {self.alg.mono_grade(m) for m in self.terms}
        if len(gs) != 1:
            return None
        return gs.pop()

    def homogeneous_parts(self) -> Dict[int, "DiffPoly"]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.alg.mono_parity(m), {})[m] = c
        return {p: DiffPoly(self.alg, t) for p, t in parts.items()}

    def grade_part(self, deg: int) -> "DiffPoly":
        alg = self.alg
        return DiffPoly(alg, {m: c for m, c in self.terms.items() if alg.mono_grade(m) == deg})

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def monomials(self):
        """Iterate over ``(monomial, coefficient)`` in a fixed order."""
        for m in sorted(self.terms, key=_mono_sort_key):
            yield m, self.terms[m]

    # derivations

    def partial(self, times: int = 1) -> "DiffPoly":
        p = self
        for _ in range(times):
            p = apply_partial(p)
        return p

    def specialize(self, values: Mapping[str, Fraction]) -> "DiffPoly":
        """Substitute rational values for (central) generators."""
        alg = self.alg
        idx = {alg.index[k]: Fraction(v) for k, v in values.items()}
        t: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            keep = []
            for g, d, e in m:
                if g in idx:
                    if d:
                        c = Fraction(0)
                        break
                    c *= idx[g] ** e
                else:
                    keep.append((g, d, e))
            if c:
                k = tuple(keep)
                t[k] = t.get(k, 0) + c
        return DiffPoly(alg, t)


def _derive(p: DiffPoly, image: Callable[[int, int], DiffPoly], p_d: int) -> DiffPoly:
    """Apply the (super)derivation of parity ``p_d`` given on variables by ``image``."""
    alg = p.alg
    out: Dict[Monomial, Fraction] = {}
    for m, c in p.terms.items():
        pre_par = 0
        for i, (g, d, e) in enumerate(m):
            img = image(g, d)
            if img:
                sign = -1 if (p_d and pre_par) else 1
                if alg.is_odd(g):
                    factor = img
                else:
                    rest = ((g, d, e - 1),) if e > 1 else ()
                    factor = alg.mono(rest, e) * img
                term = alg.mono(m[:i]) * factor * alg.mono(m[i + 1:])
                k = sign * c
                for mm, cc in term.terms.items():
                    out[mm] = out.get(mm, 0) + k * cc
            if alg.is_odd(g):
                pre_par ^= e & 1
    return DiffPoly(alg, out)


def apply_partial(p: DiffPoly) -> DiffPoly:
    """The even derivation d with d(g, k) = (g, k+1); central generators go to 0."""
    alg = p.alg
    hit = alg._dcache.get(p)
    if hit is not None:
        return hit

    def image(g, d):
        if alg.is_central(g):
            return alg.zero()
        return alg.mono(((g, d + 1, 1),))

    r = _derive(p, image, 0)
    if len(alg._dcache) < 200000:
        alg._dcache[p] = r
    return r


class Derivation:
    """A derivation commuting with d, fixed by its values on generators."""

    def __init__(self, alg: DiffAlgebra, rule: Mapping[str, DiffPoly], parity: int):
        self.alg = alg
        self.parity = parity
        self.rule = {}
        for name, img in rule.items():
            i = alg.index[name]
            if img:
                pi = img.parity()
                if pi is None or pi != (alg.generators[i].parity + parity) % 2:
                    raise ValueError(
                        f"rule for {name!r} is not of parity {parity} (image {img})")
                if alg.is_central(i) and apply_partial(img):
                    raise ValueError(f"rule sends central {name!r} to a non-constant")
            self.rule[i] = img
        self._cache: Dict[Tuple[int, int], DiffPoly] = {}

    def _image(self, g, d):
        key = (g, d)
        if key not in self._cache:
            base = self.rule.get(g)
            self._cache[key] = self.alg.zero() if base is None else base.partial(d)
        return self._cache[key]

    def __call__(self, p: DiffPoly) -> DiffPoly:
        return _derive(p, self._image, self.parity)


def apply_derivation(p: DiffPoly, rule: Mapping[str, DiffPoly], parity: int) -> DiffPoly:
    return Derivation(p.alg, rule, parity)(p)


# ---------------------------------------------------------------- parsing

def parse_expr(alg: DiffAlgebra, text: str) -> DiffPoly:
    """Parse ints, ``p/q``, generator names, ``d(g,k)``, ``*``, ``^``, ``+``, ``-``."""
    src = text.replace("^", "**")
    if not src.strip():
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error: {exc.msg}", exc.lineno or 1, exc.offset or 1) from None
    return _eval(alg, tree.body)


def _fail(node, msg):
    raise ParseError(msg, getattr(node, "lineno", 1), getattr(node, "col_offset", 0) + 1)


def _eval(alg: DiffAlgebra, node) -> DiffPoly:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            _fail(node, f"unsupported literal {node.value!r}")
        return alg.const(node.value)
    if isinstance(node, ast.Name):
        if node.id not in alg.index:
            _fail(node, f"unknown generator {node.id!r}")
        return alg.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(alg, node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval(alg, node.left)
            e = node.right
            if not (isinstance(e, ast.Constant) and isinstance(e.value, int) and e.value >= 0):
                _fail(e, "exponent must be a nonnegative integer")
            return base ** e.value
        left = _eval(alg, node.left)
        right = _eval(alg, node.right)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if set(right.terms) - {ONE_MONO} or not right.terms:
                _fail(node.right, "can only divide by a nonzero number")
            return left.scale(1 / right.constant_term())
        _fail(node, "unsupported operator")
    if isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id == "d"):
            _fail(node, "only d(g,k) calls are allowed")
        if len(node.args) != 2 or node.keywords:
            _fail(node, "d takes exactly two arguments d(g,k)")
        g, k = node.args
        if not isinstance(g, ast.Name) or g.id not in alg.index:
            _fail(g, "first argument of d must be a generator")
        if not (isinstance(k, ast.Constant) and isinstance(k.value, int) and k.value >= 0):
            _fail(k, "derivative order must be a nonnegative integer")
        return alg.var(g.id, k.value)
    _fail(node, "unsupported syntax")
