"""Binomial coefficients with a symbolic shift, and the summation identity.

``binom(n, k)`` is the usual generalized coefficient for any integer ``n``.
``binom_poly(m, j)`` returns the polynomial ``x -> binom(m + x, j)`` as a
list of Fractions (index = power of ``x``), which is how ``binom(m + S, j)``
is evaluated for a nilpotent operator ``S``.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


def binom(n, k: int):
    """Generalized binomial coefficient n(n-1)...(n-k+1)/k! for integer k."""
    if k < 0:
        return 0
    if isinstance(n, int):
        if n >= 0:
            return comb(n, k)
        return (-1) ** k * comb(k - n - 1, k)
    num = Fraction(1)
    for i in range(k):
        num *= n - i
    return num / factorial(k)


def poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def binom_poly(m: int, j: int):
    """Coefficients of binom(m + x, j) as a polynomial in x (lowest power first)."""
    return list(_binom_poly(m, j))


@lru_cache(maxsize=4096)
def _binom_poly(m, j):
    if j < 0:
        return (Fraction(0),)
    p = [Fraction(1)]
    for i in range(j):
        p = poly_mul(p, [Fraction(m - i), Fraction(1)])
    f = factorial(j)
    return tuple(c / f for c in p)


def binom_lemma_check(kind: int, m: int, n: int = 0, j: int = 0) -> bool:
    """Check one instance of the four binomial facts used for the coefficient identity.

    kind 1: binom(x, j) = (-1)^(j-1) x / j + O(x^2) for j > 0
    kind 2: binom(m + x, j) = binom(m, j) + O(x) for 0 <= j <= m
    kind 3: binom(m + x, j) = (-1)^(j+m+1) x / (j binom(j-1, m)) + O(x^2) for 0 <= m < j
    kind 4: sum_l (-1)^l binom(m, l) / (l + n + 1) = 1 / ((n + m + 1) binom(n + m, m))
    """
    if kind == 1:
        if j <= 0:
            raise ValueError("kind 1 needs j > 0")
        p = binom_poly(0, j)
        return p[0] == 0 and p[1] == Fraction((-1) ** (j - 1), j)
    if kind == 2:
        if not 0 <= j <= m:
            raise ValueError("kind 2 needs 0 <= j <= m")
        return binom_poly(m, j)[0] == comb(m, j)
    if kind == 3:
        if not 0 <= m < j:
            raise ValueError("kind 3 needs 0 <= m < j")
        p = binom_poly(m, j)
        return p[0] == 0 and p[1] == Fraction((-1) ** (j + m + 1), j * comb(j - 1, m))
    if kind == 4:
        if m < 0 or n < 0:
            raise ValueError("kind 4 needs m, n >= 0")
        return binom_sum(m, n) == Fraction(1, (n + m + 1) * comb(n + m, m))
    raise ValueError(f"unknown kind {kind}")


def binom_sum(m: int, n: int) -> Fraction:
    """sum_{l=0}^m (-1)^l binom(m, l) / (l + n + 1)."""
    return sum((Fraction((-1) ** l * comb(m, l), l + n + 1) for l in range(m + 1)), Fraction(0))
