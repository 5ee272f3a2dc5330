"""Serialization of run reports.

JSON output is canonical: UTF-8, sorted keys, two-space indent, one trailing
newline, floats as shortest round-trip decimals, exact rationals as decimal
strings under num/den.  Identical inputs therefore serialize to identical
bytes; nothing volatile (wall time, thread count, backend) is included.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from . import __version__


def rational(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def density_report(command: str, parameters: dict, results: dict, seed=None) -> dict:
    provenance = {"version": __version__}
    if seed is not None:
        provenance["seed"] = seed
    return {
        "command": command,
        "parameters": parameters,
        "results": results,
        "provenance": provenance,
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
