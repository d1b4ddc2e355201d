"""Deterministic writers for OBJ meshes, CSV tables and JSON reports.

Every file carries the tool version and a hash of the effective
configuration in its header, and floats print with 17 significant
digits so doubles round-trip losslessly.  Identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

__all__ = ["fmt", "config_hash", "write_obj", "write_csv", "write_json_report"]

TOOL = "h1geom"


def _version() -> str:
    from . import __version__

    return __version__


def fmt(x) -> str:
    """17-significant-digit decimal rendering of one CSV cell."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int,)):
        return str(x)
    if x is None:
        return "nan"
    value = float(x)
    if math.isnan(value):
        return "nan"
    return f"{value:.17g}"


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _stamp(config: dict) -> str:
    return f"{TOOL} {_version()} config-sha256:{config_hash(config)}"


def write_obj(path, mesh, config: dict) -> None:
    """OBJ with v vertices, f triangles, and l polylines for embedded curves."""
    lines = [f"# {_stamp(config)}"]
    for vert in mesh.vertices:
        lines.append(f"v {fmt(vert[0])} {fmt(vert[1])} {fmt(vert[2])}")
    offset = len(mesh.vertices)
    polyline_indices = []
    for curve in mesh.polylines:
        idx = list(range(offset + 1, offset + 1 + len(curve)))
        for vert in curve:
            lines.append(f"v {fmt(vert[0])} {fmt(vert[1])} {fmt(vert[2])}")
        polyline_indices.append(idx)
        offset += len(curve)
    for face in mesh.faces:
        lines.append(f"f {face[0] + 1} {face[1] + 1} {face[2] + 1}")
    for idx in polyline_indices:
        lines.append("l " + " ".join(str(i) for i in idx))
    Path(path).write_text("\n".join(lines) + "\n")


def write_csv(path, columns, rows, config: dict, footer_comments=()) -> None:
    lines = [f"# {_stamp(config)}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(cell) for cell in row))
    for comment in footer_comments:
        lines.append(f"# {comment}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_json_report(path, payload: dict, config: dict) -> None:
    body = {"tool": TOOL, "version": _version(), "config_sha256": config_hash(config)}
    body.update(payload)
    Path(path).write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
