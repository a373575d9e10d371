"""Deterministic serialization of reports and images.

Every emitter here is a pure function of its input: floats are printed with
17 significant digits (enough to round-trip a double exactly), JSON keys are
sorted, and image writers add no metadata.  Repeated runs with identical
inputs therefore produce byte-identical files.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

import numpy as np

__all__ = [
    "format_float",
    "to_jsonable",
    "dumps_json",
    "write_pgm",
    "write_png",
    "write_points_csv",
    "read_points_csv",
]


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def to_jsonable(obj):
    """Recursively convert records, arrays, and numpy scalars to plain JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _render(obj, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {_render(obj[k], indent + 1)}' for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [f"{inner}{_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    raise TypeError(f"cannot render {type(obj)!r}")


def dumps_json(obj) -> str:
    """Serialize to JSON text with sorted keys and 17-significant-digit floats.

    Hand-rolled because the stdlib encoder offers no control over float
    formatting, and round-trip-exact reports are a determinism contract.
    """
    return _render(to_jsonable(obj), 0) + "\n"


def write_pgm(grid: np.ndarray, path: str | Path) -> None:
    """Plain PGM (P2): occupied pixels black on white, row 0 at the top."""
    g = np.asarray(grid, dtype=bool)
    if g.ndim != 2:
        raise ValueError("image grid must be two-dimensional")
    height, width = g.shape
    rows = [" ".join("0" if v else "255" for v in row) for row in g]
    text = f"P2\n{width} {height}\n255\n" + "\n".join(rows) + "\n"
    Path(path).write_text(text)


def write_png(grid: np.ndarray, path: str | Path) -> None:
    """8-bit grayscale PNG of the occupancy grid (occupied black on white)."""
    from PIL import Image

    g = np.asarray(grid, dtype=bool)
    img = Image.fromarray(np.where(g, 0, 255).astype(np.uint8), mode="L")
    img.save(Path(path), format="PNG")


def write_points_csv(points: np.ndarray, path: str | Path) -> None:
    """Point samples as CSV, one x,y pair per line, 17 significant digits."""
    pts = np.asarray(points, dtype=float)
    lines = ["x,y"]
    lines += [f"{format_float(x)},{format_float(y)}" for x, y in pts]
    Path(path).write_text("\n".join(lines) + "\n")


def read_points_csv(path: str | Path) -> np.ndarray:
    text = Path(path).read_text().strip().splitlines()
    if text and text[0].lstrip().startswith("x"):
        text = text[1:]
    pts = [tuple(map(float, line.split(","))) for line in text if line.strip()]
    if not pts:
        raise ValueError(f"no points found in {path}")
    return np.array(pts)
