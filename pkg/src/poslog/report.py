from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a check: a verdict, an optional witness and free-form details.

    Truthiness follows the verdict, so ``if check(...)`` reads naturally.
    """

    name: str
    ok: bool
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def lines(self) -> list[str]:
        out = [f"{self.name}: {'PASS' if self.ok else 'FAIL'}"]
        for k, v in self.details.items():
            out.append(f"  {k}: {v}")
        if self.witness:
            for k, v in self.witness.items():
                out.append(f"WITNESS: {k} = {v}")
        return out

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "ok": self.ok,
            "details": {k: _plain(v) for k, v in self.details.items()},
            "witness": None if self.witness is None else {k: _plain(v) for k, v in self.witness.items()},
        }


def _plain(v: Any) -> Any:
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)
