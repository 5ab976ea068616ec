from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .extnum import ExtReal, to_str


@dataclass
class Verdict:
    """Outcome of a finite check.

    On failure ``witness`` names the offending points and ``lhs``/``rhs``
    are the exact sides of the violated inequality, so the failure can be
    re-checked independently.
    """

    holds: bool
    property: str
    witness: dict[str, Any] | None = None
    lhs: ExtReal | None = None
    rhs: ExtReal | None = None
    constants: dict[str, Any] = field(default_factory=dict)
    notes: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    @property
    def vacuous(self) -> bool:
        return bool(self.notes.get("vacuous", False))

    def to_dict(self) -> dict[str, Any]:
        from .serialize import encode

        return {
            "property": self.property,
            "holds": self.holds,
            "witness": encode(self.witness),
            "lhs": None if self.lhs is None else to_str(self.lhs),
            "rhs": None if self.rhs is None else to_str(self.rhs),
            "constants": encode(self.constants),
            "notes": encode(self.notes),
        }


def passed(prop: str, **kw) -> Verdict:
    return Verdict(True, prop, **kw)


def failed(prop: str, witness: dict, lhs=None, rhs=None, **kw) -> Verdict:
    return Verdict(False, prop, witness=witness, lhs=lhs, rhs=rhs, **kw)
