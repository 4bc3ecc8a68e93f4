"""Deterministic CSV/JSON emission: 17 significant digits, LF endings,
sorted JSON keys, non-finite floats written as inf/-inf/nan in CSV and
null in JSON.  Identical inputs produce byte-identical files."""

import json
import math


def fmt(v):
    """Render one CSV field."""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def csv_text(header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _sanitize(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def json_text(obj):
    return json.dumps(_sanitize(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    with open(path, "w", newline="") as fh:
        fh.write(json_text(obj))


def verdict_dict(verdict):
    out = {"tag": verdict.tag, "slope": verdict.slope,
           "residual": verdict.residual}
    if verdict.value is not None:
        out["value"] = verdict.value
    return out
