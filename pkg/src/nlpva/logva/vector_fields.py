"""Vector fields on the circle with a central nilpotent D.

L_n = -t^(3+n) / (t - D)^2 d/dt with 1/(t-D)^2 = sum_j (j+1) t^(-2-j) D^j and
D^N = 0, acting on t^a D^i.  A model of the c = 0 relations that shares no
code with the mode algebra.
"""

from __future__ import annotations

from typing import Dict, Tuple

from ..report import Counterexample, VerificationReport

Vec = Dict[Tuple[int, int], int]


def _add(out: Vec, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def L_apply(n: int, v: Vec, N: int) -> Vec:
    out: Vec = {}
    for (a, i), c in v.items():
        if not a:
            continue
        for j in range(N - i):
            _add(out, (a + n - j, i + j), -a * (j + 1) * c)
    return out


def D_apply(v: Vec, N: int, times: int = 1) -> Vec:
    return {(a, i + times): c for (a, i), c in v.items() if i + times < N}


def commutator_sides(m: int, k: int, v: Vec, N: int):
    lhs: Vec = {}
    for key, c in L_apply(m, L_apply(k, v, N), N).items():
        _add(lhs, key, c)
    for key, c in L_apply(k, L_apply(m, v, N), N).items():
        _add(lhs, key, -c)
    rhs: Vec = {}
    for j in range(N):
        for key, c in L_apply(m + k - j, D_apply(v, N, j), N).items():
            _add(rhs, key, (m - k) * (j + 1) * c)
    return lhs, rhs


def _fmt(v: Vec) -> str:
    if not v:
        return "0"
    return " + ".join(f"{c}*t^{a}*D^{i}" for (a, i), c in sorted(v.items()))


def vector_field_check(m: int, k: int, N: int, t_window=(-6, 6)) -> VerificationReport:
    """[L_m, L_k] = (m-k) sum_j (j+1) L_{m+k-j} D^j on t^a D^i, a in the window, i < N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    lo, hi = t_window
    rep = VerificationReport("vector-field", f"vector-fields(N={N})",
                             {"m": m, "k": k, "N": N, "window": [lo, hi]})
    for a in range(lo, hi + 1):
        for i in range(N):
            lhs, rhs = commutator_sides(m, k, {(a, i): 1}, N)
            rep.checked += 1
            if lhs != rhs:
                rep.ok = False
                rep.counterexample = Counterexample("t-monomial", (a, i), _fmt(lhs), _fmt(rhs))
                return rep
    return rep


def vector_field_D_check(n: int, N: int, t_window=(-6, 6)) -> bool:
    """[D, L_n] = 0 on the window."""
    lo, hi = t_window
    for a in range(lo, hi + 1):
        for i in range(N):
            v = {(a, i): 1}
            if D_apply(L_apply(n, v, N), N) != L_apply(n, D_apply(v, N), N):
                return False
    return True
