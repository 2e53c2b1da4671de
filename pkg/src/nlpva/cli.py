"""Command line front end.

    nlpva check skew|leibniz|jacobi|e12|peeling --algebra builtin:NAME|FILE [--depth T]
    nlpva bracket --algebra SRC --left EXPR --right EXPR [--depth T]
    nlpva gr --logva free-boson|free-boson-no-K|virasoro-magri
    nlpva modes --logva virasoro-magri --check L|u|D|borcherds|confluence [--m-range -4..4] [--deg 5] [--c 0]
    nlpva modes --logva free-boson --check borcherds|covariance|zeta
    nlpva vectorfield [--m-range -3..3] [--N 4] [--window -6..6]
    nlpva binom [--max 12]

Reports go to stdout (``--format text|tsv|json``), diagnostics to stderr.
The exit status is 0 exactly when every report passes.  ``--jobs`` (default
from ``NLPVA_JOBS``, else 1) fans cases out to worker processes; results are
always reported in input order.  ``--plot-dir`` additionally writes figures.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache

from .algebra_file import AlgebraFileError, load
from .algebras import BUILTINS, builtin
from .binom import binom_lemma_check, binom_sum
from .bracket import leibniz_check, peeling_order_check, skew_check
from .jacobi import jacobi_check, verify_e12
from .report import Counterexample, VerificationReport
from .superpoly import ParseError

LOGVAS = ("free-boson", "free-boson-no-K", "virasoro-magri")


# ---------------------------------------------------------------- loading

def load_algebra(source: str, specialize=()):
    """``builtin:NAME`` or a path to an algebra file, optionally with centrals fixed."""
    if source.startswith("builtin:"):
        pva = builtin(source[len("builtin:"):])
    elif source in BUILTINS:
        pva = builtin(source)
    else:
        if not os.path.exists(source):
            raise FileNotFoundError(f"no such algebra file: {source}")
        pva = load(source)
    values = {}
    for item in specialize:
        name, _, val = item.partition("=")
        values[name.strip()] = Fraction(val.strip())
    return pva.specialize(values) if values else pva


@lru_cache(maxsize=8)
def _cached_algebra(source, specialize):
    return load_algebra(source, specialize)


def _int_range(text: str):
    lo, sep, hi = text.partition("..")
    if not sep:
        v = int(text)
        return v, v
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


# ---------------------------------------------------------------- workers

def _run_case(case):
    kind = case[0]
    if kind in ("skew", "leibniz", "jacobi", "e12", "peeling"):
        _, source, spec, args = case
        pva = _cached_algebra(source, spec)
        p = pva.alg.parse
        if kind == "skew":
            g, h, floor = args
            return skew_check(pva, p(g), p(h), floor)
        if kind == "peeling":
            g, h, floor = args
            return peeling_order_check(pva, p(g), p(h), floor)
        if kind == "leibniz":
            a, b, c, floor = args
            return leibniz_check(pva, p(a), p(b), p(c), floor)
        if kind == "jacobi":
            a, b, c, depth = args
            return jacobi_check(pva, p(a), p(b), p(c), depth)
        m, k, a, b, c = args
        return verify_e12(pva, m, k, p(a), p(b), p(c))
    if kind == "modes":
        return _modes_case(*case[1:])
    if kind == "vectorfield":
        from .logva.vector_fields import vector_field_check
        m, k, n, window = case[1:]
        return vector_field_check(m, k, n, window)
    raise ValueError(f"unknown case {kind}")


@lru_cache(maxsize=8)
def _model(name, c):
    from .logva import FreeBoson, VirasoroMagri
    if name == "free-boson":
        return FreeBoson(True)
    if name == "free-boson-no-K":
        return FreeBoson(False)
    return VirasoroMagri(None if c is None else Fraction(c))


def _modes_case(logva, check, m, k, key, c):
    from .logva import borcherds_n0_check, vm_commutator_check, vm_confluence_check, vm_DL_check
    model = _model(logva, c)
    s = model.basis(key)
    if check == "borcherds":
        return borcherds_n0_check(model, m, k, s)
    if check in ("L", "u"):
        return vm_commutator_check(m, k, s, which=check, model=model)
    if check == "D":
        return vm_DL_check(m, s, model)
    if check == "confluence":
        return vm_confluence_check(key, model)
    if check == "covariance":
        lhs = model.mode(m, _translated_key(model, key[0]), model.basis(key[1])).scale(key[2])
        rhs = model.covariance_rhs(m, key[0], model.basis(key[1]))
        rep = VerificationReport("covariance", model.name, {"m": m, "first": str(model.basis(key[0])),
                                                             "state": str(model.basis(key[1]))},
                                 lhs == rhs, checked=1)
        if not rep.ok:
            rep.counterexample = Counterexample("state", (m,), str(lhs), str(rhs))
        return rep
    if check == "zeta":
        from .logva import fb_zeta_coeff
        i, n, state_key = key
        got = fb_zeta_coeff(i, n, model.basis(state_key), model.with_K)
        # the only zeta term in the field of x0 is K d/dx0 at z^0
        s = model.basis(state_key)
        if i == 0:
            want = model.mode_x0(n, s)
        elif (i, n) == (1, -1):
            want = model.mul_K(model.d_x(0, s)) if model.with_K else model.d_x(0, s)
        else:
            want = model.state_cls()
        rep = VerificationReport("zeta-coefficient", model.name,
                                 {"i": i, "n": n, "state": str(model.basis(state_key))}, got == want, checked=1)
        if not rep.ok:
            rep.counterexample = Counterexample("state", (i, n), str(got), str(want))
        return rep
    raise ValueError(f"unknown modes check {check!r}")


def _translated_key(model, key):
    (k,) = model.translate(model.basis(key)).terms
    return k


def _run_all(cases, jobs):
    if jobs <= 1 or len(cases) < 2:
        return [_run_case(c) for c in cases]
    chunk = max(1, len(cases) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_run_case, cases, chunksize=chunk))


# ---------------------------------------------------------------- output

def _tsv(rep: VerificationReport) -> str:
    params = json.dumps(rep.params, sort_keys=True)
    c = rep.counterexample
    detail = "" if c is None else f"{c.component}{tuple(c.exponents)}\t{c.lhs}\t{c.rhs}"
    return "\t".join([rep.verdict.upper(), rep.check, rep.algebra, params, detail]).rstrip("\t")


def emit(reports, fmt, out=None, extra=None):
    out = out or sys.stdout
    ok = all(r.ok for r in reports)
    if fmt == "json":
        doc = {"verdict": "pass" if ok else "fail", "reports": [r.to_json() for r in reports]}
        if extra:
            doc.update(extra)
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        if extra and fmt == "text":
            for k, v in extra.items():
                out.write(f"{k}: {v}\n")
        for r in reports:
            out.write((_tsv(r) if fmt == "tsv" else r.line()) + "\n")
        fails = sum(not r.ok for r in reports)
        summary = f"{len(reports) - fails}/{len(reports)} passed"
        out.write(("#\t" if fmt == "tsv" else "") + summary + "\n")
    return 0 if ok else 1


def pretty_series(s) -> str:
    """``1/12*C*lambda^3 + 2*d(u,1)*lambda + d(u,2)``, with O(...) if truncated."""
    terms = []
    for n in sorted(s.coeffs, reverse=True):
        c = str(s.coeffs[n])
        lam = "" if n == 0 else ("lambda" if n == 1 else f"lambda^{n}")
        if len(s.coeffs[n].terms) > 1:
            c = f"({c})"
        if not lam:
            terms.append(c)
        elif c in ("1", "-1"):
            terms.append(c[:-1] + lam)
        else:
            terms.append(f"{c}*{lam}")
    text = " + ".join(terms).replace("+ -", "- ") or "0"
    if any(n < 0 for n in s.coeffs):
        text += f" + O(lambda^{s.floor - 1})"
    return text


# ---------------------------------------------------------------- commands

def _gen_names(pva):
    return [g.name for g in pva.alg.generators]


def cmd_check(args):
    spec = tuple(args.specialize or ())
    pva = load_algebra(args.algebra, spec)
    gens = _gen_names(pva)
    floor = -args.depth
    src = args.algebra
    if args.suite == "skew":
        keys = list(itertools.product(gens, repeat=2))
        cases = [("skew", src, spec, (g, h, floor)) for g, h in keys]
    elif args.suite == "peeling":
        polys = gens + [f"d({g},1)" for g in gens if not pva.alg.is_central(pva.alg.index[g])]
        keys = [(g, f"{x}*{y}") for g in gens for x, y in itertools.combinations_with_replacement(polys, 2)]
        cases = [("peeling", src, spec, (g, h, floor)) for g, h in keys]
    elif args.suite == "leibniz":
        polys = gens + [f"d({g},1)" for g in gens if not pva.alg.is_central(pva.alg.index[g])]
        keys = [(a, b, c) for a in gens for b, c in itertools.combinations_with_replacement(polys, 2)]
        cases = [("leibniz", src, spec, (a, b, c, floor)) for a, b, c in keys]
    elif args.suite == "jacobi":
        keys = list(itertools.product(gens, repeat=3))
        cases = [("jacobi", src, spec, (a, b, c, args.depth)) for a, b, c in keys]
    else:
        lo, hi = args.m_range
        keys = [(m, k, a, b, c) for a, b, c in itertools.product(gens, repeat=3)
                for m in range(max(lo, 0), hi + 1) for k in range(max(lo, 0), hi + 1)]
        cases = [("e12", src, spec, key) for key in keys]
    reports = _run_all(cases, args.jobs)
    if args.plot_dir:
        _plot_check(args, pva, gens, keys, reports)
    return emit(reports, args.format)


def _plot_check(args, pva, gens, keys, reports):
    from . import plotting
    name = pva.name.replace("/", "_")
    path = os.path.join(args.plot_dir, f"{args.suite}-{name}.png")
    if args.suite in ("skew", "jacobi"):
        rows = gens if args.suite == "skew" else [f"{a},{b}" for a in gens for b in gens]
        cols = gens
        grid = {key: r.ok for key, r in zip(keys, reports)}
        if args.suite == "skew":
            ok = [[grid[(g, h)] for h in cols] for g in rows]
        else:
            ok = [[grid[tuple(r.split(",")) + (c,)] for c in cols] for r in rows]
        plotting.verdict_grid(path, f"{args.suite} on {pva.name}", rows, cols, ok,
                              xlabel="third" if args.suite == "jacobi" else "second", ylabel="first")
    else:
        labels = [",".join(str(x) for x in key) for key in keys]
        plotting.verdict_grid(path, f"{args.suite} on {pva.name}", ["verdict"], labels,
                              [[r.ok for r in reports]])
    print(f"wrote {path}", file=sys.stderr)


def cmd_bracket(args):
    pva = load_algebra(args.algebra, tuple(args.specialize or ()))
    try:
        left, right = pva.alg.parse(args.left), pva.alg.parse(args.right)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    s = pva.bracket(left, right, -args.depth)
    rep = VerificationReport("bracket", pva.name, {"left": args.left, "right": args.right,
                                                   "depth": args.depth}, checked=1)
    if args.plot_dir:
        from . import plotting
        path = os.path.join(args.plot_dir, "bracket.png")
        plotting.series_support(path, f"{{{args.left} _lambda {args.right}}}", s)
        print(f"wrote {path}", file=sys.stderr)
    if args.format == "json":
        out = rep.to_json()
        out["series"] = s.to_json()
        sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
        return 0
    print(f"{{{args.left} _lambda {args.right}}} = {pretty_series(s)}")
    if args.format == "tsv":
        for n in sorted(s.coeffs, reverse=True):
            print(f"{n}\t{s.coeffs[n]}")
    return 0


def cmd_gr(args):
    from .logva import gr_bracket, gr_product_check
    from .series import LaurentSeries
    model = _model(args.logva, args.c)
    s = gr_bracket(model, -args.depth)
    reports = []
    pva = model.pva()
    g = pva.alg.generators[0].name
    want = pva.bracket(pva.alg.parse(g), pva.alg.parse(g), -args.depth)
    if args.logva == "free-boson-no-K":
        want = LaurentSeries.zero(pva.alg, -args.depth)
    elif getattr(model, "c", None) is not None:
        want = pva.specialize({"C": model.c}).bracket(pva.alg.parse(g), pva.alg.parse(g), -args.depth)
    rep = VerificationReport("gr-bracket", model.name, {"depth": args.depth, "table": pva.name},
                             s == want, checked=1)
    if not rep.ok:
        rep.counterexample = Counterexample("lambda", (), s.dump(), want.dump())
    reports.append(rep)
    reports.append(gr_product_check(model))
    if args.plot_dir:
        from . import plotting
        path = os.path.join(args.plot_dir, f"gr-{args.logva}.png")
        plotting.series_support(path, f"gr bracket of {model.name}", s)
        print(f"wrote {path}", file=sys.stderr)
    return emit(reports, args.format, extra={"bracket": pretty_series(s)})


def cmd_modes(args):
    from .logva import fock_basis, pbw_basis
    lo, hi = args.m_range
    mk = [(m, k) for m in range(lo, hi + 1) for k in range(lo, hi + 1)]
    c = None if args.c is None else str(Fraction(args.c))
    model = _model(args.logva, c)
    if args.logva == "virasoro-magri":
        states = pbw_basis(args.deg)
        if args.check in ("L", "u", "borcherds"):
            cases = [("modes", args.logva, args.check, m, k, key, c) for key in states for m, k in mk]
        elif args.check == "D":
            cases = [("modes", args.logva, "D", m, 0, key, c) for key in states for m in range(lo, hi + 1)]
        elif args.check == "confluence":
            ops = [("u", n) for n in range(lo, hi + 1)] + [("D",), ("T",)]
            words = []
            for length in range(1, args.length + 1):
                for w in itertools.product(ops, repeat=length):
                    grade = sum(-o[1] if o[0] == "u" else (1 if o[0] == "T" else -1) for o in w)
                    if grade <= args.deg:
                        words.append(w)
            cases = [("modes", args.logva, "confluence", 0, 0, w, c) for w in words]
        else:
            raise SystemExit(f"check {args.check!r} is not available for {args.logva}")
    else:
        states = fock_basis(args.deg, args.max_index, model.with_K)
        if args.check == "borcherds":
            cases = [("modes", args.logva, "borcherds", m, k, key, c) for key in states for m, k in mk]
        elif args.check == "covariance":
            firsts = [(0, (0,) * r + (1,)) for r in range(args.max_index + 1)]
            cases = []
            for a in firsts:
                ta = model.translate(model.basis(a))
                coef = next(iter(ta.terms.values()))
                for key in states:
                    for m in range(lo, hi + 1):
                        cases.append(("modes", args.logva, "covariance", m, 0, (a, key, coef), c))
        elif args.check == "zeta":
            cases = [("modes", args.logva, "zeta", 0, 0, (i, n, key), c)
                     for key in states for i in range(3) for n in range(lo, hi + 1)]
        else:
            raise SystemExit(f"check {args.check!r} is not available for {args.logva}")
    reports = _run_all(cases, args.jobs)
    if args.plot_dir and args.check in ("L", "u", "borcherds"):
        from . import plotting
        ks = list(range(lo, hi + 1))
        grid = {}
        for case, r in zip(cases, reports):
            grid[(case[3], case[4])] = grid.get((case[3], case[4]), True) and r.ok
        path = os.path.join(args.plot_dir, f"modes-{args.logva}-{args.check}.png")
        plotting.verdict_grid(path, f"{args.check} relation on {model.name}", ks, ks,
                              [[grid[(m, k)] for k in ks] for m in ks], xlabel="k", ylabel="m")
        print(f"wrote {path}", file=sys.stderr)
    return emit(reports, args.format)


def cmd_vectorfield(args):
    lo, hi = args.m_range
    cases = [("vectorfield", m, k, args.N, args.window) for m in range(lo, hi + 1) for k in range(lo, hi + 1)]
    reports = _run_all(cases, args.jobs)
    if args.plot_dir:
        from . import plotting
        ks = list(range(lo, hi + 1))
        it = iter(reports)
        ok = [[next(it).ok for _ in ks] for _ in ks]
        path = os.path.join(args.plot_dir, "vectorfield.png")
        plotting.verdict_grid(path, f"vector fields, N={args.N}", ks, ks, ok, xlabel="k", ylabel="m")
        print(f"wrote {path}", file=sys.stderr)
    return emit(reports, args.format)


def cmd_binom(args):
    top = args.max
    reports = []
    ranges = {
        1: [(0, 0, j) for j in range(1, top + 1)],
        2: [(m, 0, j) for m in range(top + 1) for j in range(m + 1)],
        3: [(m, 0, j) for j in range(top + 1) for m in range(j)],
        4: [(m, n, 0) for m in range(top + 1) for n in range(top + 1)],
    }
    for kind, cases in ranges.items():
        bad = next(((m, n, j) for m, n, j in cases if not binom_lemma_check(kind, m, n, j)), None)
        rep = VerificationReport("binomial-lemma", "binom", {"item": kind, "max": top}, bad is None,
                                 checked=len(cases))
        if bad is not None:
            rep.counterexample = Counterexample("mnj", bad, "", "")
        reports.append(rep)
    spot = binom_sum(2, 1)
    reports.append(VerificationReport("binomial-spot", "binom", {"m": 2, "n": 1, "value": str(spot)},
                                      spot == Fraction(1, 12), checked=1))
    if args.plot_dir:
        from . import plotting
        ms = list(range(top + 1))
        named = {f"n={n}": [float(binom_sum(m, n)) for m in ms] for n in (0, 1, 2, 4, 8)}
        path = os.path.join(args.plot_dir, "binom-sum.png")
        plotting.curves(path, "sum_l (-1)^l binom(m,l)/(l+n+1)", ms, named, xlabel="m", logy=True)
        print(f"wrote {path}", file=sys.stderr)
    return emit(reports, args.format)


# ---------------------------------------------------------------- parser

def build_parser():
    jobs_default = int(os.environ.get("NLPVA_JOBS", "1") or 1)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    common.add_argument("--jobs", type=int, default=jobs_default,
                        help="worker processes (default: $NLPVA_JOBS or 1)")
    common.add_argument("--plot-dir", help="write figures into this directory")
    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--algebra", required=True, help="builtin:NAME or path to an algebra file")
    alg.add_argument("--specialize", action="append", metavar="NAME=VALUE",
                     help="replace a central generator by a number (repeatable)")
    alg.add_argument("--depth", type=int, default=6, help="trust depth T (lambda exponents >= -T)")

    p = argparse.ArgumentParser(prog="nlpva", description="Exact checks for non-local PVAs and logVA models.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common, alg], help="axiom suites over generators")
    c.add_argument("suite", choices=("skew", "leibniz", "jacobi", "e12", "peeling"))
    c.add_argument("--m-range", type=_int_range, default=(0, 3), help="e12 range for m and k")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("bracket", parents=[common, alg], help="evaluate one lambda-bracket")
    b.add_argument("--left", required=True)
    b.add_argument("--right", required=True)
    b.set_defaults(func=cmd_bracket)

    g = sub.add_parser("gr", parents=[common], help="associated graded of a logVA model")
    g.add_argument("--logva", choices=LOGVAS, required=True)
    g.add_argument("--c", default=None, help="central charge (default: formal C)")
    g.add_argument("--depth", type=int, default=6)
    g.set_defaults(func=cmd_gr)

    m = sub.add_parser("modes", parents=[common], help="mode relations of a logVA model")
    m.add_argument("--logva", choices=LOGVAS, required=True)
    m.add_argument("--check", required=True,
                   choices=("L", "u", "D", "borcherds", "confluence", "covariance", "zeta"))
    m.add_argument("--m-range", type=_int_range, default=(-4, 4))
    m.add_argument("--deg", type=int, default=5, help="Z-grade bound (virasoro-magri) or degree bound (free boson)")
    m.add_argument("--c", default=None, help="central charge (default: formal C)")
    m.add_argument("--max-index", type=int, default=2, help="free boson: largest x_n index in sample states")
    m.add_argument("--length", type=int, default=4, help="confluence: longest operator word")
    m.set_defaults(func=cmd_modes)

    v = sub.add_parser("vectorfield", parents=[common], help="vector-field model of the L relations")
    v.add_argument("--m-range", type=_int_range, default=(-3, 3))
    v.add_argument("--N", type=int, default=4)
    v.add_argument("--window", type=_int_range, default=(-6, 6))
    v.set_defaults(func=cmd_vectorfield)

    n = sub.add_parser("binom", parents=[common], help="binomial lemma over a range")
    n.add_argument("--max", type=int, default=12)
    n.set_defaults(func=cmd_binom)
    return p


def _glue_ranges(argv):
    # argparse reads "-2..2" as an option; glue it onto its flag
    out, it = [], iter(argv)
    for a in it:
        if a in ("--m-range", "--window"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(_glue_ranges(sys.argv[1:] if argv is None else list(argv)))
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    if getattr(args, "depth", 1) < 1:
        parser.error("--depth must be >= 1")
    try:
        return args.func(args)
    except (AlgebraFileError, FileNotFoundError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
