"""Report rendering: structured text, aligned table and flat CSV."""
from __future__ import annotations

import math
from fractions import Fraction

from .analysis import BigProbability

SIG_DIGITS = 8


def fmt(value, sig: int = SIG_DIGITS) -> str:
    """Numbers with an explicit significant-digit count; tiny values in scientific form."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, BigProbability):
        return value.sci(sig)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return str(value)
        if value == 0:
            return "0"
        if abs(value) < 1e-6:
            return f"{value:.{sig - 1}e}"
        return f"{value:.{sig}g}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(fmt(v, sig) for v in value) + "]"
    return str(value)


def render_text(data: dict, indent: int = 0) -> str:
    pad = "  " * indent
    out = []
    for key, value in data.items():
        if isinstance(value, dict):
            out.append(f"{pad}{key}:")
            out.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            out.append(f"{pad}{key}:")
            for i, item in enumerate(value):
                out.append(f"{pad}  - item: {i}")
                out.append(render_text(item, indent + 2))
        else:
            out.append(f"{pad}{key}: {fmt(value)}")
    return "\n".join(line for line in out if line)


def flatten(data: dict, prefix: str = "") -> list[tuple[str, object]]:
    rows = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows += flatten(value, name + ".")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                rows += flatten(item, f"{name}.{i}.")
        else:
            rows.append((name, value))
    return rows


def render_table(data: dict) -> str:
    rows = flatten(data)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {fmt(v)}" for k, v in rows)


def _csv_value(v) -> str:
    if isinstance(v, float) and not isinstance(v, bool):
        return f"{v:.15g}"
    text = fmt(v)
    return f'"{text}"' if "," in text else text


def render_csv(data: dict) -> str:
    return "key,value\n" + "\n".join(f"{k},{_csv_value(v)}" for k, v in flatten(data))


RENDERERS = {"text": render_text, "table": render_table, "csv": render_csv}
