"""Deterministic JSON output with floats at 17 significant digits."""

import json
import math


def complex_json(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def json_complex(obj):
    return complex(float(obj["re"]), float(obj["im"]))


def _is_scalar(x):
    return isinstance(x, (int, float, str)) and not isinstance(x, bool)


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} in report")
        text = format(obj, ".17g")
        if not any(ch in text for ch in ".e"):
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if len(obj) <= 3 and all(_is_scalar(v) for v in obj.values()):
            return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v, indent, level)}" for k, v in obj.items()) + "}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(_is_scalar(x) for x in obj):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in obj) + "]"
        items = [pad + _encode(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2) -> str:
    return _encode(obj, indent, 0) + "\n"
