"""CSV and JSON readers/writers used by the command line.

All numbers are written with ``%.17g`` so that a write/read cycle is exact
and repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import DataError, TooFewPoints

CURVE_HEADER = ("x", "y")
TMS_HEADER = ("t", "xi1", "xi2")
PHASE_HEADER = ("t", "phi1", "phi2")
FLOAT_FMT = "%.17g"


def write_table(path, header, columns) -> None:
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in data:
            fh.write(",".join(FLOAT_FMT % x for x in row) + "\n")


def read_table(path, header) -> np.ndarray:
    """Read a numeric CSV whose first line must equal ``header``.

    Raises
    ------
    DataError
        On a wrong header, a malformed row or a non-finite value.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows or tuple(c.strip() for c in rows[0]) != tuple(header):
        raise DataError(f"{path}: expected header {','.join(header)}")
    out = np.empty((len(rows) - 1, len(header)))
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise DataError(f"{path}:{i + 2}: expected {len(header)} fields, got {len(row)}")
        try:
            out[i] = [float(cell) for cell in row]
        except ValueError:
            raise DataError(f"{path}:{i + 2}: not a number in {row!r}") from None
    if not np.all(np.isfinite(out)):
        raise DataError(f"{path}: non-finite value")
    return out


def write_curve(path, points) -> None:
    pts = np.asarray(points, dtype=float)
    write_table(path, CURVE_HEADER, [pts[:, 0], pts[:, 1]])


def read_curve(path) -> np.ndarray:
    pts = read_table(path, CURVE_HEADER)
    if len(pts) < 4:
        raise TooFewPoints(f"{path}: need at least 4 points, got {len(pts)}")
    return pts


def write_tms(path, t, points) -> None:
    pts = np.asarray(points, dtype=float)
    write_table(path, TMS_HEADER, [t, pts[:, 0], pts[:, 1]])


def read_tms(path) -> tuple[np.ndarray, np.ndarray]:
    data = read_table(path, TMS_HEADER)
    return data[:, 0], data[:, 1:]


def write_phase(path, t, states) -> None:
    st = np.asarray(states, dtype=float)
    write_table(path, PHASE_HEADER, [t, st[:, 0], st[:, 1]])


def read_phase(path) -> tuple[np.ndarray, np.ndarray]:
    data = read_table(path, PHASE_HEADER)
    return data[:, 0], data[:, 1:]


def read_any(path) -> np.ndarray:
    """Points (N, 2) from any of the three CSV layouts, chosen by header."""
    try:
        with open(path, encoding="utf-8") as fh:
            first = fh.readline().strip()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    header = tuple(c.strip() for c in first.split(","))
    if header == CURVE_HEADER:
        return read_table(path, CURVE_HEADER)
    if header in (TMS_HEADER, PHASE_HEADER):
        return read_table(path, header)[:, 1:]
    raise DataError(f"{path}: unrecognised header {first!r}")


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
