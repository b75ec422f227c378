"""Verification reports: deterministic JSON plus a human-readable rendering.

Every budgeted verifier records its seed and budget; reports are
machine-checkable (witnesses reference raw object/point ids only).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Report:
    check: str
    space: str
    params: dict = field(default_factory=dict)
    seed: int | None = None
    budget: int | None = None
    examined: int = 0
    passed: bool = True
    inconclusive: bool = False
    witnesses: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def fail(self, witness):
        self.passed = False
        if len(self.witnesses) < 100:
            self.witnesses.append(witness)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "space": self.space,
            "params": self.params,
            "seed": self.seed,
            "budget": self.budget,
            "examined": self.examined,
            "passed": self.passed,
            "inconclusive": self.inconclusive,
            "witnesses": _plain(self.witnesses),
            "extras": _plain(self.extras),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def render_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.inconclusive:
            status = "INCONCLUSIVE"
        lines = [
            f"[{status}] {self.check} on {self.space}",
            f"  params: {json.dumps(self.params, sort_keys=True)}",
            f"  seed={self.seed} budget={self.budget} examined={self.examined}",
        ]
        for k in sorted(self.extras):
            lines.append(f"  {k}: {json.dumps(_plain(self.extras[k]), sort_keys=True)}")
        for w in self.witnesses[:10]:
            lines.append(f"  witness: {json.dumps(_plain(w), sort_keys=True)}")
        if len(self.witnesses) > 10:
            lines.append(f"  ... {len(self.witnesses) - 10} more witnesses")
        return "\n".join(lines)


def _plain(x):
    """JSON-serializable copy: frozensets become sorted lists, tuples lists."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(e) for e in x)
    if isinstance(x, (list, tuple)):
        return [_plain(e) for e in x]
    return x
