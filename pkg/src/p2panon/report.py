"""Experiment reports and their CSV / JSON renderings."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Optional

from .exceptions import AnonymityError
from .metrics import QUANTILE_METHOD, intercept_fraction, summarize

CSV_HEADER = ("run", "observation", "entropy_bits", "min_entropy_bits", "support")


def artifact_version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True, order=True)
class Record:
    run: int
    observation: str
    entropy_bits: float
    min_entropy_bits: float
    support: int


@dataclass
class RunResult:
    """What one run hands back to the harness."""

    run: int
    records: list
    transactions: int
    intercepted: int
    extra: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    config: dict
    records: list
    transactions: int
    intercepted: int
    extra: dict = field(default_factory=dict)
    wall_clock_seconds: Optional[float] = None
    version: str = field(default_factory=artifact_version)

    def __post_init__(self):
        self.records = sorted(self.records, key=lambda r: (r.run, r.observation))

    @classmethod
    def from_runs(cls, config, results, extra=None):
        results = sorted(results, key=lambda r: r.run)
        records = [rec for r in results for rec in r.records]
        merged = dict(extra or {})
        per_run = [r.extra for r in results if r.extra]
        if per_run:
            merged["runs"] = per_run
        return cls(config, records, sum(r.transactions for r in results),
                   sum(r.intercepted for r in results), merged)

    @property
    def intercept_fraction(self):
        return intercept_fraction(self.intercepted, self.transactions) if self.transactions else 0.0

    @property
    def entropies(self):
        return [r.entropy_bits for r in self.records]

    @property
    def summary(self):
        return summarize(self.entropies) if self.records else None

    def metadata(self):
        s = self.summary
        doc = {
            "artifact": {"name": "p2panon", "version": self.version},
            "config": self.config,
            "transactions": self.transactions,
            "intercepted": self.intercepted,
            "intercept_fraction": self.intercept_fraction,
            "record_count": len(self.records),
            "summary": None if s is None else s.as_dict(),
            "min_entropy_summary": None if s is None else summarize(
                [r.min_entropy_bits for r in self.records]).as_dict(),
            "quantile_method": QUANTILE_METHOD,
        }
        if self.extra:
            doc["extra"] = self.extra
        if self.wall_clock_seconds is not None:
            doc["wall_clock_seconds"] = self.wall_clock_seconds
        return doc


def _dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def records_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow((r.run, r.observation, repr(float(r.entropy_bits)),
                    repr(float(r.min_entropy_bits)), r.support))
    return buf.getvalue()


def read_records_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise AnonymityError(f"records CSV must start with header {','.join(CSV_HEADER)}")
    out = []
    for i, row in enumerate(rows[1:], start=2):
        try:
            out.append(Record(int(row[0]), row[1], float(row[2]), float(row[3]), int(row[4])))
        except (IndexError, ValueError):
            raise AnonymityError(f"line {i}: malformed record {row!r}") from None
    return out


def metadata_path(path):
    path = Path(path)
    return path.with_name(path.stem + ".meta.json")


def emit_report(report: ExperimentReport, fmt="csv", path=None):
    """Render ``report``; returns ``{"records": csv, "metadata": json}`` or ``{"report": json}``.

    With ``path`` the documents are also written: CSV to ``path`` and the
    metadata beside it as ``<stem>.meta.json``; structured output to ``path``.
    """
    if fmt == "csv":
        docs = {"records": records_csv(report.records), "metadata": _dumps(report.metadata())}
    elif fmt == "structured":
        doc = report.metadata()
        doc["records"] = [{"run": r.run, "observation": r.observation,
                           "entropy_bits": r.entropy_bits,
                           "min_entropy_bits": r.min_entropy_bits, "support": r.support}
                          for r in report.records]
        docs = {"report": _dumps(doc)}
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        path = Path(path)
        try:
            if fmt == "csv":
                path.write_text(docs["records"])
                metadata_path(path).write_text(docs["metadata"])
            else:
                path.write_text(docs["report"])
        except OSError as exc:
            raise AnonymityError(f"cannot write {path}: {exc.strerror}") from None
    return docs
