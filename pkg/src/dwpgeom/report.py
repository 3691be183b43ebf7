"""Report documents: deterministic JSON with 17-significant-digit floats, and CSV."""

from __future__ import annotations

import csv
import io
import json
import math

from .config import Tolerances
from .contact import DETA_CONVENTION
from .inequalities import F52_SIGN_NOTE, TRACE_SQUARE_NOTE

REPORT_VERSION = 1

CONVENTIONS = {
    "curvature_sign": "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; K(X^Y) = <R(X,Y)Y,X> / |X^Y|^2",
    "laplacian_sign": "Delta psi = -trace Hess psi (nonnegative spectrum)",
    "deta_factor": DETA_CONVENTION,
    "factor_laplacian": "Delta_i acts on the leaf through the point: Delta_1 = Delta_g1 / rho2^2, Delta_2 = Delta_g2 / rho1^2",
    "f52_sign": F52_SIGN_NOTE,
    "trace_square": TRACE_SQUARE_NOTE,
    "slack": "rhs - lhs (nonnegative when the inequality holds)",
}


def build_document(scenario, result, tolerances: Tolerances, seed, samples) -> dict:
    from . import __version__

    return {
        "report_version": REPORT_VERSION,
        "metadata": {
            "tool": "dwpgeom",
            "version": __version__,
            "scenario": scenario.name,
            "source": scenario.source,
            "kind": scenario.kind,
            "seed": scenario.sample.seed if seed is None else seed,
            "samples": samples,
            "overrides": dict(sorted(scenario.overrides.items())),
            "tolerances": tolerances.to_dict(),
            "conventions": dict(CONVENTIONS),
        },
        "records": result.records,
        "summary": result.summary,
    }


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    text = "%.17g" % (x + 0.0)
    return text if any(c in text for c in ".en") else text + ".0"


def _encode(obj, indent: int, level: int, out: list) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _encode(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in obj):
            out.append("[")
            for i, v in enumerate(obj):
                _encode(v, indent, level, out)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _encode(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif hasattr(obj, "item"):  # numpy scalars
        _encode(obj.item(), indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(doc, indent: int = 2) -> str:
    out: list[str] = []
    _encode(doc, indent, 0, out)
    return "".join(out) + "\n"


def to_csv(records: list) -> str:
    """Flat per-record table; nested values are dropped, points become semicolon-joined text."""
    columns: list[str] = []
    rows = []
    for rec in records:
        row = {}
        for k, v in rec.items():
            if k == "point" or k == "a":
                v = ";".join(_fmt_float(float(c)) for c in v)
            elif k == "violations":
                v = ";".join(v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = _fmt_float(v)
            elif isinstance(v, (dict, list)):
                continue
            row[k] = v
            if k not in columns:
                columns.append(k)
        rows.append(row)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
