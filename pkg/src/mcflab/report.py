"""Versioned JSON/CSV reports for the command line tool."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Any

from . import __version__

SCHEMA = "mcf-lab/1"

CSV_FIELDS = ["claim", "system", "n", "digits", "value", "stderr", "samples", "seed", "method", "verdict"]


@dataclass
class Record:
    claim: str
    inputs: dict
    estimates: list[dict] = field(default_factory=list)
    verdict: str | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "inputs": self.inputs,
            "estimates": self.estimates,
            "verdict": self.verdict,
            "notes": self.notes,
        }


@dataclass
class ReportDocument:
    command: list[str]
    seed: int
    records: list[Record] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def timed(self, label: str):
        report = self

        class _Timer:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                report.timings[label] = round(time.perf_counter() - self.t0, 6)

        return _Timer()

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    def to_dict(self, strip_timings: bool = False) -> dict[str, Any]:
        doc = {
            "schema": SCHEMA,
            "tool_version": __version__,
            "command": self.command,
            "seed": self.seed,
            "records": [r.to_dict() for r in self.records],
        }
        if not strip_timings:
            doc["timings"] = self.timings
        return doc

    def to_json(self, strip_timings: bool = False) -> str:
        return json.dumps(self.to_dict(strip_timings), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\r\n")
        w.writeheader()
        for r in self.records:
            for est in r.estimates or [{}]:
                w.writerow(
                    {
                        "claim": r.claim,
                        "system": r.inputs.get("system", ""),
                        "n": r.inputs.get("n", ""),
                        "digits": " ".join(est.get("digits", r.inputs.get("digits", []))),
                        "value": est.get("value", ""),
                        "stderr": est.get("stderr", ""),
                        "samples": est.get("samples", ""),
                        "seed": est.get("seed", ""),
                        "method": est.get("method", ""),
                        "verdict": r.verdict or "",
                    }
                )
        return buf.getvalue()
