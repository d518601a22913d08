"""Serialization of verification reports.

JSON output is the whole report with sorted keys and a fixed float format, so
two identical campaigns give identical bytes.  CSV output has one row per
(trial, bound id).
"""
from __future__ import annotations

import csv
import io
import json

from ..errors import IOFailure
from .campaign import VerificationReport

CSV_FIELDS = ("ensemble", "trial", "t", "r", "id", "kind", "target", "value", "upper",
              "ref_lower", "ref_upper", "slack", "violated")


def to_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=1, allow_nan=False) + "\n"


def csv_rows(report: VerificationReport):
    for rec in report.records:
        flagged = {v[1] for v in rec["violations"] if v[0] == "soundness"}
        for row in rec.get("bounds", ()):
            ref = rec["references"][row["target"]]
            violated = row["id"] in flagged or row["id"] + ":upper" in flagged
            yield {"ensemble": rec["ensemble"], "trial": rec["trial"], "t": rec["params"]["t"],
                   "r": rec["params"]["r"], "id": row["id"], "kind": row["kind"],
                   "target": row["target"], "value": repr(row["value"]),
                   "upper": "" if row.get("upper") is None else repr(row["upper"]),
                   "ref_lower": repr(ref[0]), "ref_upper": repr(ref[1]),
                   "slack": repr(row["slack"]), "violated": int(violated)}


def to_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in csv_rows(report):
        w.writerow(row)
    return buf.getvalue()


def render(report: VerificationReport, format: str = "json") -> str:
    if format == "json":
        return to_json(report)
    if format == "csv":
        return to_csv(report)
    raise ValueError(f"format must be json or csv, got {format!r}")


def emit_report(report: VerificationReport, format: str = "json", path=None) -> str:
    """Render ``report`` and write it to ``path`` (if given).  Returns the text."""
    text = render(report, format)
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise IOFailure(f"cannot write report to {path}: {exc}") from exc
    return text


def load_report(path) -> dict:
    """Parse a JSON report back into a plain dictionary."""
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IOFailure(f"cannot read report {path}: {exc}") from exc


def load_csv(path) -> list[dict]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return list(csv.DictReader(fh))
    except OSError as exc:
        raise IOFailure(f"cannot read report {path}: {exc}") from exc
