"""Deterministic CSV output for regions and delay sweeps.

Numbers are written with a fixed count of significant digits, rows in a
fixed order and LF line endings.  Files are written to a temporary name in
the target directory and renamed into place.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile

import numpy as np

from .region import RateRegion, hull_boundary

__all__ = ["REGION_HEADER", "SWEEP_HEADER", "fmt", "atomic_write", "region_rows",
           "write_region_csv", "write_sweep_csv", "read_region_csv"]

REGION_HEADER = ("curve", "R1_bits", "R2_bits", "weight_theta", "alloc_id")
SWEEP_HEADER = ("tau", "sum_rate_bits", "is_argmax")


def fmt(value: float, precision: int = 12) -> str:
    """Fixed significant-digit text; ``-0`` is written as ``0``."""
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    text = f"{float(value):.{precision}g}"
    return "0" if text == "-0" else text


def atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _render(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def region_rows(label: str, region: RateRegion, precision: int = 12):
    for (r1, r2), th, aid in zip(region.points, region.point_thetas, region.alloc_ids):
        yield (label, fmt(r1, precision), fmt(r2, precision), fmt(th, precision), int(aid))


def write_region_csv(path: str, curves: dict, precision: int = 12):
    """Write one or more labelled regions (``{label: RateRegion}``) to ``path``."""
    rows = [row for label, region in curves.items() for row in region_rows(label, region, precision)]
    atomic_write(path, _render(REGION_HEADER, rows))


def write_sweep_csv(path: str, rows, argmax: int, precision: int = 12):
    body = [(fmt(t, precision), fmt(v, precision), int(i == argmax)) for i, (t, v) in enumerate(rows)]
    atomic_write(path, _render(SWEEP_HEADER, body))


def read_region_csv(path: str) -> dict:
    """Read a region CSV back into ``{label: (points, thetas, alloc_ids)}``, re-hulled."""
    grouped = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != REGION_HEADER:
            raise ValueError(f"unexpected header {header}")
        for label, r1, r2, th, aid in reader:
            grouped.setdefault(label, []).append((float(r1), float(r2), float(th), int(aid)))
    out = {}
    for label, items in grouped.items():
        arr = np.array([it[:3] for it in items])
        ids = np.array([it[3] for it in items])
        out[label] = hull_boundary(arr[:, :2], arr[:, 2], ids)
    return out
