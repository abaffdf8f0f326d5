"""Serialization of reports: JSON for single runs, CSV for sweeps.

Complex numbers become ``{"re": ..., "im": ...}`` in JSON and two columns
in CSV.  Non-finite floats are written as the strings "inf", "-inf" and
"nan" so the JSON stays strict.  Keys are sorted and floats use Python's
shortest round-trip repr, which makes the output a pure function of the
values: parse and re-emit gives the same bytes.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1


def _float(x: float):
    if math.isfinite(x):
        return float(x)
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def jsonable(obj):
    """Recursively convert reports to plain JSON types."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return {"im": _float(z.imag), "re": _float(z.real)}
    if isinstance(obj, str) or obj is None:
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    body = dict(report)
    body.setdefault("schema_version", SCHEMA_VERSION)
    return json.dumps(jsonable(body), sort_keys=True, indent=2, ensure_ascii=False,
                      allow_nan=False) + "\n"


def complex_from(d) -> complex:
    """Inverse of the JSON encoding for a single complex value."""
    def f(x):
        return float(x) if not isinstance(x, str) else float(x.replace("inf", "Infinity"))
    return complex(f(d["re"]), f(d["im"]))


# ---------------------------------------------------------------------------
# CSV

CSV_COLUMNS = (
    "schema_version", "level", "q", "g", "N",
    "alpha_re", "alpha_im", "beta_re", "beta_im", "tail_variant",
    "empirical_re", "empirical_im",
    "type0_re", "type0_im", "type1_re", "type1_im", "type2_re", "type2_im",
    "prediction_re", "prediction_im",
    "residual_re", "residual_im", "abs_residual",
    "error_budget", "within_budget", "type2_caveat",
)

TRUNCATION_MARKER = "# truncated"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(_float(v))
    return str(v)


def csv_row(report: dict) -> list[str]:
    """Flatten a single-run report into the fixed CSV schema."""
    cfg = report["config"]
    pred = report["prediction"]
    alpha, beta = complex(cfg["alpha"]), complex(cfg.get("beta", 0j))
    vals = {
        "schema_version": SCHEMA_VERSION, "level": report["kind"],
        "q": cfg["q"], "g": cfg["g"], "N": cfg["N"],
        "alpha_re": alpha.real, "alpha_im": alpha.imag,
        "beta_re": beta.real, "beta_im": beta.imag,
        "tail_variant": pred.tail_variant or "",
        "abs_residual": abs(report["residual"]),
        "error_budget": float(report["error_budget"]),
        "within_budget": bool(report["within_budget"]),
        "type2_caveat": bool(report.get("type2_caveat", False)),
    }
    for name, z in (("empirical", report["empirical"]), ("type0", pred.type0),
                    ("type1", pred.type1), ("type2", pred.type2),
                    ("prediction", pred.total), ("residual", report["residual"])):
        z = complex(z)
        vals[name + "_re"], vals[name + "_im"] = z.real, z.imag
    return [_cell(vals[c]) for c in CSV_COLUMNS]


class CsvSink:
    """Writes the header at once and flushes after every row."""

    def __init__(self, stream):
        self.stream = stream
        self.writer = csv.writer(stream, lineterminator="\r\n")
        self.writer.writerow(CSV_COLUMNS)
        self.rows = 0
        stream.flush()

    def add(self, report: dict) -> None:
        self.writer.writerow(csv_row(report))
        self.rows += 1
        self.stream.flush()

    def truncate(self, reason: str) -> None:
        self.stream.write(f"{TRUNCATION_MARKER} after {self.rows} rows: {reason}\r\n")
        self.stream.flush()


def read_csv(text: str) -> list[dict]:
    """Parse a sweep table, stopping at a truncation marker."""
    lines = [ln for ln in text.splitlines() if not ln.startswith(TRUNCATION_MARKER)]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))
