"""Reading and writing bracket tables as TOML-shaped text files.

::

    name = "potential-virasoro-magri"

    [generators]
    u = {parity = "even", degree = 1}
    C = {parity = "even", degree = 1, central = true}

    [bracket.u.u]
    local = [{n = 1, coeff = "-1/12*C"}]
    nonlocal = [{left = "-1", right = "d(u,1)"}, {left = "-d(u,1)", right = "1"}]

``local`` lists the coefficient of lambda^n; ``nonlocal`` lists the pairs
P (x) Q of the braiding, giving the terms (1/(lambda+d) P) Q.
"""

import re
import sys

from .bracket import BracketEntry, NonlocalPVA
from .superpoly import DiffAlgebra, Generator, ParseError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class AlgebraFileError(ValueError):
    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col


def _locate(text, needle):
    for i, line in enumerate(text.splitlines(), 1):
        j = line.find(needle)
        if j >= 0:
            return i, j + 1
    return None, None


def _parse_poly(alg, text, src, ctx):
    try:
        return alg.parse(text)
    except ParseError as exc:
        line, col = _locate(src, f'"{text}"')
        if line is not None:
            col += exc.col
        raise AlgebraFileError(f"{ctx}: {exc.message} in {text!r}", line, col) from None


def loads(text: str, name: str = None) -> NonlocalPVA:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise AlgebraFileError(f"syntax error: {str(exc).split(' (at')[0]}", line, col) from None
    gens = data.get("generators") or {}
    if not gens:
        raise AlgebraFileError("no generators")
    decls = []
    for gname, spec in gens.items():
        if not isinstance(spec, dict):
            raise AlgebraFileError(f"generator {gname!r} must be an inline table", *_locate(text, gname))
        parity = spec.get("parity", "even")
        if parity not in ("even", "odd", 0, 1):
            raise AlgebraFileError(f"generator {gname!r}: parity must be even or odd", *_locate(text, gname))
        try:
            decls.append(Generator(gname, 1 if parity in ("odd", 1) else 0,
                                   bool(spec.get("central", False)), int(spec.get("degree", 1))))
        except ValueError as exc:
            raise AlgebraFileError(str(exc), *_locate(text, gname)) from None
    alg = DiffAlgebra(decls)
    entries = {}
    for g, row in (data.get("bracket") or {}).items():
        for h, ent in row.items():
            ctx = f"bracket.{g}.{h}"
            if g not in alg.index or h not in alg.index:
                raise AlgebraFileError(f"{ctx}: unknown generator", *_locate(text, f"[{ctx}]"))
            local = {}
            for item in ent.get("local", []):
                n = int(item["n"])
                if n < 0:
                    raise AlgebraFileError(f"{ctx}: local power must be >= 0", *_locate(text, f"[{ctx}]"))
                local[n] = local.get(n, alg.zero()) + _parse_poly(alg, str(item["coeff"]), text, ctx)
            pairs = [(_parse_poly(alg, str(item["left"]), text, ctx),
                      _parse_poly(alg, str(item["right"]), text, ctx))
                     for item in ent.get("nonlocal", [])]
            entries[(g, h)] = BracketEntry(local, pairs)
    pva = NonlocalPVA(alg, entries, name or data.get("name", "custom"))
    try:
        pva.validate()
    except ValueError as exc:
        raise AlgebraFileError(f"validation error: {exc}") from None
    return pva


def load(path) -> NonlocalPVA:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(pva: NonlocalPVA) -> str:
    out = [f'name = "{pva.name}"', "", "[generators]"]
    for g in pva.alg.generators:
        extra = ", central = true" if g.central else ""
        out.append(f'{g.name} = {{parity = "{"odd" if g.parity else "even"}", degree = {g.degree}{extra}}}')
    for (g, h) in sorted(pva.entries, key=lambda k: (pva.alg.index[k[0]], pva.alg.index[k[1]])):
        e = pva.entries[(g, h)]
        out += ["", f"[bracket.{g}.{h}]"]
        loc = ", ".join(f'{{n = {n}, coeff = "{e.local[n]}"}}' for n in sorted(e.local))
        non = ", ".join(f'{{left = "{p}", right = "{q}"}}' for p, q in e.nonlocal_)
        out.append(f"local = [{loc}]")
        out.append(f"nonlocal = [{non}]")
    return "\n".join(out) + "\n"
