"""Snapshot serialization: CSV with the nodal fields plus a .meta sidecar.

The CSV schema is exactly four columns, `x,u1,u2,sum`, one row per node, with
floats rendered at shortest round-trip precision so reading the file back
reproduces the nodal values bit for bit. The sidecar carries the scalar
diagnostics as `key=value` lines (absent optionals render as `none`).
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .diagnostics import Snapshot

CSV_HEADER = "x,u1,u2,sum"


def _meta_value(v: float | None) -> str:
    return "none" if v is None else repr(float(v))


def meta_path_for(path: str | Path) -> Path:
    return Path(path).with_suffix(".meta")


def write_snapshot_csv(snap: Snapshot, path: str | Path) -> None:
    """Write the nodal fields to `path` and the diagnostics to the .meta sidecar."""
    p = Path(path)
    x = snap.u1.mesh.nodes
    v1 = snap.u1.values
    v2 = snap.u2.values
    rows = [CSV_HEADER]
    for i in range(x.size):
        a = float(v1[i])
        b = float(v2[i])
        rows.append(f"{float(x[i])!r},{a!r},{b!r},{a + b!r}")
    p.write_text("\n".join(rows) + "\n")
    meta = [
        f"t={_meta_value(snap.t)}",
        f"mass1={_meta_value(snap.mass1)}",
        f"mass2={_meta_value(snap.mass2)}",
        f"segregation_defect={_meta_value(snap.segregation_defect)}",
        f"contact_point={_meta_value(snap.contact_point)}",
        f"gradient_jump={_meta_value(snap.gradient_jump)}",
    ]
    meta_path_for(p).write_text("\n".join(meta) + "\n")


def read_snapshot_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a snapshot CSV back as (x, u1, u2) arrays; validates the header."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError(
            f"{path}: expected header '{CSV_HEADER}', got "
            f"{lines[0].strip() if lines else '<empty file>'!r}"
        )
    x, u1, u2 = [], [], []
    for i, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"{path}: line {i}: expected 4 columns, got {len(parts)}")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"{path}: line {i}: non-numeric value") from None
        x.append(vals[0])
        u1.append(vals[1])
        u2.append(vals[2])
    if len(x) < 2:
        raise ValueError(f"{path}: needs at least two data rows")
    return np.asarray(x), np.asarray(u1), np.asarray(u2)


def read_meta(path: str | Path) -> dict[str, float | None]:
    """Parse a .meta sidecar back into a dict (values `none` map to None)."""
    out: dict[str, float | None] = {}
    for i, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {i}: expected 'key=value'")
        key, value = line.split("=", 1)
        out[key.strip()] = None if value.strip() == "none" else float(value)
    return out
