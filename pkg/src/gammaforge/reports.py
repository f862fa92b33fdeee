"""Verification report records and their JSON/CSV encodings."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from decimal import Decimal
from typing import Dict, List, Sequence

from . import __version__
from .numkernel import BigReal

RESIDUAL_DIGITS = 12


def _strip_zeros(s: str) -> str:
    mant, _, exp = s.partition("e")
    if "." in mant:
        mant = mant.rstrip("0").rstrip(".")
    return mant + ("e" + exp if exp else "")


def _dec_str(v) -> str:
    """Decimal string with at most 12 significant digits, trailing zeros dropped."""
    if isinstance(v, BigReal):
        return _strip_zeros(v.sig(RESIDUAL_DIGITS)) if not v.is_zero() else "0"
    if isinstance(v, float):
        return _strip_zeros(f"{v:.{RESIDUAL_DIGITS}g}")
    return str(v)


@dataclass(frozen=True)
class VerificationReport:
    claim_id: str
    inputs: Dict[str, str]
    computed_residual: str
    tolerance: str
    passed: bool
    wall_time_ms: int = 0
    notes: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        ok = abs(Decimal(self.computed_residual)) <= Decimal(self.tolerance)
        if ok != self.passed:
            raise ValueError("passed must equal |residual| <= tolerance")

    @classmethod
    def build(cls, claim_id, inputs, residual, tolerance, started=None, notes=None):
        """Format residual/tolerance as decimal strings and derive ``passed``."""
        res = _dec_str(residual)
        tol = _dec_str(tolerance)
        ms = int(round((time.perf_counter() - started) * 1000)) if started is not None else 0
        return cls(
            claim_id=claim_id,
            inputs={k: str(v) for k, v in inputs.items()},
            computed_residual=res,
            tolerance=tol,
            passed=abs(Decimal(res)) <= Decimal(tol),
            wall_time_ms=ms,
            notes={k: str(v) for k, v in (notes or {}).items()},
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(
            claim_id=d["claim_id"],
            inputs=dict(d["inputs"]),
            computed_residual=d["computed_residual"],
            tolerance=d["tolerance"],
            passed=bool(d["passed"]),
            wall_time_ms=int(d["wall_time_ms"]),
            notes=dict(d.get("notes", {})),
        )


def reports_to_json(command: str, reports: Sequence[VerificationReport]) -> str:
    doc = {
        "tool_version": __version__,
        "command": command,
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=2, sort_keys=False)


def reports_from_json(text: str) -> List[VerificationReport]:
    doc = json.loads(text)
    return [VerificationReport.from_dict(d) for d in doc["reports"]]


def reports_to_csv(reports: Sequence[VerificationReport]) -> str:
    keys = sorted({k for r in reports for k in r.inputs})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["claim_id", *keys, "residual", "tolerance", "passed", "wall_time_ms"])
    for r in reports:
        w.writerow(
            [
                r.claim_id,
                *(r.inputs.get(k, "") for k in keys),
                r.computed_residual,
                r.tolerance,
                "true" if r.passed else "false",
                r.wall_time_ms,
            ]
        )
    return buf.getvalue()


def reports_to_text(reports: Sequence[VerificationReport]) -> str:
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        args = ", ".join(f"{k}={v}" for k, v in r.inputs.items())
        lines.append(
            f"{status}  {r.claim_id}  residual={r.computed_residual}  tol={r.tolerance}"
            f"  ({args})  {r.wall_time_ms} ms"
        )
    return "\n".join(lines)
