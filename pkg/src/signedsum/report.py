"""Result records and report serialization.

The JSONL and CSV field names below are the frozen compatibility surface.
File output carries no timestamps: reports are byte-identical across reruns
with the same flags, cache state, and tool version, for any worker count.
Wall-clock metadata goes to the console summary only.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import IO, Iterable

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "group",
    "m",
    "h",
    "rho_formula",
    "u_pm",
    "conjecture_value",
    "conjectural",
    "rho_oracle",
    "rho_pm_oracle",
    "agrees",
    "witness",
    "witness_family",
    "thm6",
    "thm7",
    "thm9",
]

TABLE_COLUMNS = [
    ("group", 10),
    ("m", 4),
    ("h", 3),
    ("rho_formula", 12),
    ("u_pm", 6),
    ("conjecture_value", 16),
    ("rho_oracle", 16),
    ("rho_pm_oracle", 16),
    ("agrees", 7),
    ("witness_family", 14),
]


@dataclass
class ParamResult:
    """One (group, m, h) cell: formula values, optional oracle values, and
    classification verdicts."""

    group: str
    m: int
    h: int
    rho_formula: int
    u_pm: int
    conjecture_value: int
    conjectural: bool
    rho_oracle: int | None = None
    rho_oracle_skipped: str | None = None
    rho_pm_oracle: int | None = None
    rho_pm_oracle_skipped: str | None = None
    witness: tuple[int, ...] | None = None
    witness_family: str | None = None
    classification: dict = field(default_factory=dict)
    agrees: bool | None = None

    @staticmethod
    def _oracle_field(value: int | None, skipped: str | None):
        if value is not None:
            return value
        if skipped is not None:
            return f"skipped({skipped})"
        return None

    def to_json_dict(self) -> dict:
        return {
            "type": "result",
            "group": self.group,
            "m": self.m,
            "h": self.h,
            "rho_formula": self.rho_formula,
            "u_pm": self.u_pm,
            "conjecture_value": self.conjecture_value,
            "conjectural": self.conjectural,
            "rho_oracle": self._oracle_field(self.rho_oracle, self.rho_oracle_skipped),
            "rho_pm_oracle": self._oracle_field(
                self.rho_pm_oracle, self.rho_pm_oracle_skipped
            ),
            "witness": list(self.witness) if self.witness is not None else None,
            "witness_family": self.witness_family,
            "classification": self.classification,
            "agrees": self.agrees,
        }

    def to_csv_row(self) -> list:
        d = self.to_json_dict()
        row = []
        for col in CSV_COLUMNS:
            if col in ("thm6", "thm7", "thm9"):
                value = self.classification.get(col)
            elif col == "witness":
                value = (
                    " ".join(str(i) for i in self.witness)
                    if self.witness is not None
                    else ""
                )
            else:
                value = d[col]
            row.append("" if value is None else value)
        return row


def dumps_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Reporter:
    """Streams results to the sink in a fixed order and format."""

    def __init__(self, stream: IO[str], fmt: str, config: dict):
        if fmt not in ("table", "jsonl", "csv"):
            raise ValueError(f"unknown format {fmt!r}")
        self.stream = stream
        self.fmt = fmt
        self.config = config
        self._csv = csv.writer(stream) if fmt == "csv" else None
        self._started = False

    def start(self) -> None:
        if self._started:
            return
        self._started = True
        if self.fmt == "jsonl":
            meta = {
                "type": "meta",
                "schema_version": SCHEMA_VERSION,
                "tool": "signedsum",
                "tool_version": _tool_version(),
                "config": self.config,
            }
            self.stream.write(dumps_line(meta) + "\n")
        elif self.fmt == "csv":
            self._csv.writerow(CSV_COLUMNS)
        else:
            header = "  ".join(name.ljust(w) for name, w in TABLE_COLUMNS)
            self.stream.write(header + "\n")
            self.stream.write("-" * len(header) + "\n")

    def result(self, pr: ParamResult) -> None:
        self.start()
        if self.fmt == "jsonl":
            self.stream.write(dumps_line(pr.to_json_dict()) + "\n")
        elif self.fmt == "csv":
            self._csv.writerow(pr.to_csv_row())
        else:
            d = pr.to_json_dict()
            cells = []
            for name, w in TABLE_COLUMNS:
                v = d[name]
                cells.append(("" if v is None else str(v)).ljust(w))
            self.stream.write("  ".join(cells).rstrip() + "\n")

    def verdict(self, v: dict) -> None:
        self.start()
        if self.fmt == "jsonl":
            self.stream.write(dumps_line({"type": "verdict", **v}) + "\n")
        elif self.fmt == "csv":
            pass  # verdicts are not part of the CSV surface
        else:
            detail = v.get("detail")
            line = f"[{v.get('check', '?')}] {v.get('status', '?')}"
            if v.get("cell"):
                line += f" {v['cell']}"
            if detail:
                line += f": {detail}"
            self.stream.write(line + "\n")

    def finish(self) -> None:
        self.start()
        self.stream.flush()


def _tool_version() -> str:
    from . import __version__

    return __version__


def read_jsonl(lines: Iterable[str]) -> list[dict]:
    return [json.loads(line) for line in lines if line.strip()]
