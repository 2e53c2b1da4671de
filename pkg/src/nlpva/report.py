"""Structured verdicts shared by every checker and the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass
class Counterexample:
    component: str
    exponents: Tuple[int, ...]
    lhs: str
    rhs: str

    def to_json(self) -> Dict[str, Any]:
        return {"component": self.component, "exponents": list(self.exponents),
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class VerificationReport:
    check: str
    algebra: str
    params: Dict[str, Any] = field(default_factory=dict)
    ok: bool = True
    counterexample: Optional[Counterexample] = None
    checked: int = 0

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"

    def __bool__(self):
        return self.ok

    def to_json(self) -> Dict[str, Any]:
        out = {"check": self.check, "algebra": self.algebra, "params": self.params,
               "verdict": self.verdict}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def line(self) -> str:
        p = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        s = f"{self.verdict.upper()} {self.check} {self.algebra} {p}".rstrip()
        if self.counterexample is not None:
            c = self.counterexample
            s += f" at {c.component} {tuple(c.exponents)}: lhs={c.lhs} rhs={c.rhs}"
        return s


def combine(check: str, algebra: str, params: Dict[str, Any],
            reports: List[VerificationReport]) -> VerificationReport:
    """Conjunction of a batch; the first failure (in input order) is kept."""
    first = next((r for r in reports if not r.ok), None)
    out = VerificationReport(check, algebra, dict(params), first is None,
                             checked=sum(max(r.checked, 1) for r in reports))
    if first is not None:
        out.counterexample = first.counterexample
        out.params = dict(params, failing=first.params)
    return out
