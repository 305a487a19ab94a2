"""Flat check rows and their JSON/CSV encodings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class CheckReport:
    id: str
    d: int
    inputs: dict
    lhs: float
    rhs: float
    gap: float
    tol: float
    runtime_ms: int = 0
    debug: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.gap <= self.tol)

    def as_dict(self):
        out = {"id": self.id, "d": int(self.d), "inputs": encode(self.inputs),
               "lhs": encode(self.lhs), "rhs": encode(self.rhs), "gap": encode(self.gap),
               "tol": encode(self.tol), "pass": self.passed, "runtime_ms": int(self.runtime_ms)}
        if not self.passed and self.debug:
            out["debug"] = encode(self.debug)
        return out


def encode(v):
    """JSON-safe copy: complex -> [re, im], arrays -> nested lists, non-finite -> strings."""
    if isinstance(v, dict):
        return {str(k): encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, np.ndarray):
        return encode(v.tolist())
    if isinstance(v, (complex, np.complexfloating)):
        return [encode(float(v.real)), encode(float(v.imag))]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    return v


def reports_json(rows) -> str:
    return json.dumps([r.as_dict() for r in rows], indent=1, ensure_ascii=False) + "\n"


def rows_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r.get(k, "")) for k in columns})
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def write_text(path, text):
    if path is None or path == "-":
        import sys
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
