"""Output writers. Every artifact carries the hash of the run configuration."""

from __future__ import annotations

import csv
import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def config_hash(config: dict) -> str:
    """SHA-256 (first 16 hex digits) of the canonical JSON form of ``config``."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def fmt(v) -> str:
    """Exact rationals as ``p/q``, floats via ``repr`` (round-trips), complex as ``a+bj``."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        if v.imag == 0:
            return repr(v.real)
        return repr(v)[1:-1] if repr(v).startswith("(") else repr(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if v is None:
        return ""
    return str(v)


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return c.real if c.imag == 0 else {"re": c.real, "im": c.imag}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence], chash: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# config-hash: {chash}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    return path


def write_json(path, payload: dict, chash: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config_hash": chash, **jsonable(payload)}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def write_svg_scatter(path, points, chash: str, size: int = 600, radius: float = 0.8) -> Path:
    """Plain SVG scatter plot of 2-D points, y axis pointing up."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pad = 20
    if len(pts):
        lo, hi = pts.min(axis=0), pts.max(axis=0)
    else:
        lo, hi = np.zeros(2), np.ones(2)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    sx = pad + (pts[:, 0] - lo[0]) / span[0] * (size - 2 * pad)
    sy = size - pad - (pts[:, 1] - lo[1]) / span[1] * (size - 2 * pad)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- config-hash: {chash} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        '<g fill="black">',
    ]
    lines += [f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}"/>' for x, y in zip(sx, sy)]
    lines += ["</g>", "</svg>", ""]
    path.write_text("\n".join(lines))
    return path
