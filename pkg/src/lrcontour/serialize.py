"""Byte-stable report serialization.

Identical invocations must produce identical bytes, so floats are
rendered through one fixed 17-significant-digit format and dictionaries
keep their construction order instead of relying on dump-time options.
"""

from __future__ import annotations

import json
import math

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} has no stable rendering")
    return format(x, ".17g")


def dumps(obj) -> str:
    if obj is None or isinstance(obj, (str, bool)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report(command: str, config: dict, result) -> str:
    """Standard report envelope with the resolved run configuration."""
    return dumps({"schema_version": SCHEMA_VERSION, "command": command,
                  "config": config, "result": result}) + "\n"


def census_csv(rows) -> str:
    lines = ["R,count_exact,bound,ratio"]
    for row in rows:
        lines.append(f"{row.R},{row.count_exact},"
                     f"{format_float(row.bound)},{format_float(row.ratio)}")
    return "\n".join(lines) + "\n"
