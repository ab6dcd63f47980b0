"""Validation reports shared by the Maurer-Cartan checkers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import GradedMap
from .homotopy import INCONCLUSIVE, INVERTIBLE


@dataclass
class Residual:
    simplex: str
    key: tuple
    degree: int
    value: GradedMap

    def entries(self, limit: int = 6) -> list:
        out = []
        for d, m in sorted(self.value.blocks.items()):
            for i, j, x in m.nonzero_entries():
                out.append({"source_degree": d, "row": i, "col": j, "value": m.ring.fmt(x)})
                if len(out) >= limit:
                    return out
        return out


@dataclass
class MCReport:
    """Outcome of a Maurer-Cartan validation.

    ``residuals`` lists the nonzero residual components in enumeration order;
    ``side`` lists violated structural conditions (units, degenerate
    vanishing, closedness); ``nondegeneracy`` lists homotopy-invertibility
    verdicts for the maps that must be invertible.
    """

    kind: str
    residuals: list = field(default_factory=list)
    side: list = field(default_factory=list)
    nondegeneracy: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def mc_ok(self) -> bool:
        return not self.residuals and not self.side

    @property
    def nondegenerate_ok(self) -> bool:
        return all(v.status == INVERTIBLE for _, v in self.nondegeneracy)

    @property
    def inconclusive(self) -> bool:
        return any(v.status == INCONCLUSIVE for _, v in self.nondegeneracy)

    @property
    def ok(self) -> bool:
        return self.mc_ok and self.nondegenerate_ok

    @property
    def first_failure(self):
        if self.residuals:
            return self.residuals[0]
        return None

    def status(self) -> str:
        if not self.mc_ok:
            return "fail"
        if self.nondegenerate_ok:
            return "pass"
        if any(v.definite_failure for _, v in self.nondegeneracy):
            return "fail"
        return "inconclusive"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "status": self.status(),
            "residuals": [
                {"simplex": r.simplex, "degree": r.degree, "entries": r.entries()} for r in self.residuals[:10]
            ],
            "residual_count": len(self.residuals),
            "side_conditions": list(self.side),
            "nondegeneracy": [
                {"map": name, "status": v.status, "method": v.method, "detail": v.detail}
                for name, v in self.nondegeneracy
            ],
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"{self.kind}: {self.status().upper()}"]
        if self.residuals:
            r = self.residuals[0]
            lines.append(f"  {len(self.residuals)} nonzero residual component(s); first at {r.simplex} (degree {r.degree})")
            for e in r.entries():
                lines.append(f"    block {e['source_degree']} [{e['row']},{e['col']}] = {e['value']}")
        for s in self.side:
            lines.append(f"  side condition: {s}")
        for name, v in self.nondegeneracy:
            if v.status != INVERTIBLE:
                lines.append(f"  {name}: {v.status} ({v.method}) {v.detail}".rstrip())
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
