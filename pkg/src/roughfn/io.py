"""Flat-file helpers: CSV with round-trip float formatting."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import InputError


def fmt(v) -> str:
    """Shortest decimal that parses back to the same value."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def read_csv(path, header) -> list[list[str]]:
    """Rows of a CSV whose first line must equal ``header``."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if not rows or [c.strip() for c in rows[0]] != list(header):
        raise InputError(f"{path}: expected header {','.join(header)}")
    body = rows[1:]
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise InputError(f"{path}:{i}: expected {len(header)} fields, got {len(r)}")
    return body


def read_xy_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Columns of a CSV with header ``x,y``."""
    body = read_csv(path, ["x", "y"])
    try:
        xy = np.array([[float(a), float(b)] for a, b in body], dtype=float).reshape(-1, 2)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric value ({exc})") from exc
    if not np.all(np.isfinite(xy)):
        raise InputError(f"{path}: values must be finite")
    return xy[:, 0], xy[:, 1]


def write_coeffs(path, cv) -> Path:
    return write_csv(path, ["basis", "kind", "k", "value"], cv.rows())


def read_coeffs(path):
    from .wfourier import CoeffVector

    body = read_csv(path, ["basis", "kind", "k", "value"])
    try:
        rows = [(b.strip(), kd.strip(), int(k), float(v)) for b, kd, k, v in body]
    except ValueError as exc:
        raise InputError(f"{path}: bad coefficient row ({exc})") from exc
    return CoeffVector.from_rows(rows)
