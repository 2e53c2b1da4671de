"""Acceptance criteria, one test each.

Every test prints a single ``CRITERION n PASS|FAIL ...`` line; the lines are
repeated in the terminal summary (see conftest).  Equality is exact
throughout.  Run standalone with ``python tests/test_acceptance.py``.
"""

import itertools
import os
import subprocess
import sys
import time
from fractions import Fraction

from nlpva.algebras import BUILTINS, builtin, specialize
from nlpva.binom import binom_lemma_check, binom_sum
from nlpva.bracket import skew_check
from nlpva.jacobi import jacobi_check, oracle_equivalence, verify_e12
from nlpva.logva import (FreeBoson, VirasoroMagri, borcherds_n0_check, fock_basis, gr_bracket,
                         gr_product_check, pbw_basis, vector_field_check, vm_commutator_check, vm_DL_check)
from nlpva.logva.vector_fields import vector_field_D_check

DEPTH = 6


def verdict(n, ok, detail):
    print(f"CRITERION {n} {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def gens(A):
    return [A.parse(g) for g in A.generator_names]


def test_criterion_1_bracket_reproduction():
    t0 = time.perf_counter()
    fb, vm, sl2 = builtin("potential-free-boson"), builtin("potential-virasoro-magri"), builtin("potential-affine-sl2")
    got = {
        "x,x": fb.bracket(fb.parse("x"), fb.parse("x"), -DEPTH).coeffs,
        "x',x'": fb.bracket(fb.parse("d(x,1)"), fb.parse("d(x,1)"), -DEPTH).coeffs,
        "u',u'": vm.bracket(vm.parse("d(u,1)"), vm.parse("d(u,1)"), -DEPTH).coeffs,
    }
    want = {
        "x,x": {-1: fb.parse("-K")},
        "x',x'": {1: fb.parse("K")},
        "u',u'": {1: vm.parse("2*d(u,1)"), 0: vm.parse("d(u,2)"), 3: vm.parse("1/12*C")},
    }
    # {a'_lambda b'} = [a,b]' + lambda (a|b) K
    bracket = {("h", "e"): "2*e", ("e", "h"): "-2*e", ("h", "f"): "-2*f", ("f", "h"): "2*f",
               ("e", "f"): "h", ("f", "e"): "-h"}
    form = {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2}
    for a, b in itertools.product("ehf", repeat=2):
        key = f"{a}',{b}'"
        got[key] = sl2.bracket(sl2.parse(f"d({a},1)"), sl2.parse(f"d({b},1)"), -DEPTH).coeffs
        w = {}
        if (a, b) in bracket:
            w[0] = sl2.parse(bracket[a, b]).partial()
        if (a, b) in form:
            w[1] = sl2.parse("K").scale(form[a, b])
        want[key] = w
    elapsed = time.perf_counter() - t0
    bad = [k for k in want if got[k] != want[k]]
    verdict(1, not bad and elapsed < 1.0, f"{len(want)} brackets, mismatches={bad}, {elapsed:.3f}s")


def test_criterion_2_axiom_suite():
    t0 = time.perf_counter()
    fails, n = [], 0
    for name in BUILTINS:
        A = builtin(name)
        g = gens(A)
        for x, y in itertools.product(g, repeat=2):
            n += 1
            if not skew_check(A, x, y, -DEPTH).ok:
                fails.append((name, "skew", str(x), str(y)))
        for t in itertools.product(g, repeat=3):
            n += 1
            if not jacobi_check(A, *t, DEPTH).ok:
                fails.append((name, "jacobi") + tuple(map(str, t)))
    elapsed = time.perf_counter() - t0
    detail = f"{n - len(fails)}/{n} checks pass at T={DEPTH} in {elapsed:.1f}s"
    if fails:
        detail += f"; {len(fails)} failures, first {fails[0]}"
    verdict(2, not fails, detail)


def test_criterion_3_oracle_equivalence():
    n, bad = 0, []
    for name in BUILTINS:
        A = builtin(name)
        for t in itertools.product(gens(A), repeat=3):
            rep = oracle_equivalence(A, *t, DEPTH)
            n += rep.checked
            if not rep.ok:
                bad.append((name,) + tuple(map(str, t)))
    verdict(3, not bad and n > 0, f"{n} term comparisons, mismatches={bad[:3]}")


def test_criterion_4_coefficient_identity():
    n, bad = 0, []
    for name in ("potential-free-boson", "potential-virasoro-magri"):
        A = builtin(name)
        for t in itertools.product(gens(A), repeat=3):
            for m in range(4):
                for k in range(4):
                    n += 1
                    if not verify_e12(A, m, k, *t).ok:
                        bad.append((name, m, k) + tuple(map(str, t)))
    verdict(4, not bad, f"{n} instances, mismatches={bad[:3]}")


def test_criterion_5_binomial_lemma():
    n, bad = 0, []
    cases = [(1, 0, 0, j) for j in range(1, 13)]
    cases += [(2, m, 0, j) for m in range(13) for j in range(m + 1)]
    cases += [(3, m, 0, j) for m in range(13) for j in range(m + 1, 13)]
    cases += [(4, m, k, 0) for m in range(13) for k in range(13)]
    for c in cases:
        n += 1
        if not binom_lemma_check(*c):
            bad.append(c)
    spot = binom_sum(2, 1)
    verdict(5, not bad and spot == Fraction(1, 12),
            f"{n} instances, mismatches={bad[:3]}, spot(2,1)={spot}")


def test_criterion_6_mode_algebra():
    t0 = time.perf_counter()
    states = pbw_basis(5)
    n, bad = 0, []
    for c in (None, 0):
        model = VirasoroMagri(c)
        for key in states:
            s = model.basis(key)
            for m in range(-4, 5):
                n += 1
                if not vm_DL_check(m, s, model).ok:
                    bad.append(("D", c, m, key))
                for k in range(-4, 5):
                    n += 1
                    if not vm_commutator_check(m, k, s, which="L", model=model).ok:
                        bad.append(("L", c, m, k, key))
    fb = FreeBoson()
    fock = fock_basis(4, 2)
    for key in fock:
        for m in range(-3, 4):
            for k in range(-3, 4):
                n += 1
                if not borcherds_n0_check(fb, m, k, fb.basis(key)).ok:
                    bad.append(("borcherds", m, k, key))
    elapsed = time.perf_counter() - t0
    verdict(6, not bad and len(states) == 19 and len(fock) == 70,
            f"{n} checks on {len(states)} PBW and {len(fock)} Fock states in {elapsed:.1f}s, mismatches={bad[:3]}")


def test_criterion_7_vector_fields():
    n, bad = 0, []
    for m in range(-3, 4):
        for k in range(-3, 4):
            rep = vector_field_check(m, k, 4, (-6, 6))
            n += rep.checked
            if not rep.ok:
                bad.append((m, k))
        if not vector_field_D_check(m, 4, (-6, 6)):
            bad.append(("D", m))
    verdict(7, not bad, f"{n} t-monomial checks with N=4, mismatches={bad[:3]}")


def test_criterion_8_associated_graded():
    fbt, vmt = builtin("potential-free-boson"), builtin("potential-virasoro-magri")
    x, u = fbt.parse("x"), vmt.parse("u")
    ok_fb = gr_bracket(FreeBoson(), -DEPTH) == fbt.bracket(x, x, -DEPTH)
    ok_triv = gr_bracket(FreeBoson(False), -DEPTH).is_zero()
    ok_vm = gr_bracket(VirasoroMagri(), -DEPTH) == vmt.bracket(u, u, -DEPTH)
    ok_vm0 = gr_bracket(VirasoroMagri(0), -DEPTH) == specialize(vmt, "C", 0).bracket(u, u, -DEPTH)
    reps = [gr_product_check(m) for m in (FreeBoson(), FreeBoson(False), VirasoroMagri(), VirasoroMagri(0))]
    ok = ok_fb and ok_triv and ok_vm and ok_vm0 and all(r.ok and r.checked >= 50 for r in reps)
    verdict(8, ok, f"free boson {ok_fb}, trivial {ok_triv}, virasoro-magri {ok_vm}/{ok_vm0}, "
                   f"product cases {[r.checked for r in reps]}")


def test_criterion_9_property_suites():
    here = os.path.dirname(os.path.abspath(__file__))
    r = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                        os.path.join(here, "test_properties.py")], capture_output=True, text=True, cwd=here)
    tail = r.stdout.strip().splitlines()[-1] if r.stdout.strip() else r.stderr.strip()[-200:]
    verdict(9, r.returncode == 0 and "passed" in tail and "failed" not in tail, f"property suite: {tail}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
