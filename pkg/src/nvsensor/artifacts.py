"""Artifact serialization: bit-stable CSV/JSON tables and atomic writes.

Floats always print with 17 significant digits so equal doubles give equal
bytes; files land via temp-file rename so failed runs never leave partial
artifacts behind.
"""

import hashlib
import json
import os


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def table_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        # json.dumps handles quote/newline escaping deterministically
        return json.dumps(value)
    return format(float(value), ".17g")


def table_json(columns, rows) -> str:
    lines = ["["]
    for i, row in enumerate(rows):
        body = ", ".join(f'"{c}": {_json_scalar(v)}'
                         for c, v in zip(columns, row))
        comma = "," if i + 1 < len(rows) else ""
        lines.append("  {" + body + "}" + comma)
    lines.append("]")
    return "\n".join(lines) + "\n"


def mapping_json(mapping: dict, indent: int = 0) -> str:
    """Deterministic JSON for a string-keyed mapping, insertion order."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    lines = [pad + "{"]
    items = list(mapping.items())
    for i, (key, value) in enumerate(items):
        if isinstance(value, dict):
            nested = mapping_json(value, indent + 1).lstrip()
            text = nested
        else:
            text = _json_scalar(value)
        comma = "," if i + 1 < len(items) else ""
        lines.append(f'{inner}"{key}": {text}{comma}')
    lines.append(pad + "}")
    return "\n".join(lines)


def write_atomic(path: str, content: str):
    tmp = f"{path}.tmp-{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def sha256_text(content: str) -> str:
    return hashlib.sha256(content.encode("utf-8")).hexdigest()
