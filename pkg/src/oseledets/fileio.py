"""
Binary cocycle files and CSV outputs.

Cocycle file layout::

    OSLC1\\n
    d=<d> n0=<n0> count=<L>\\n
    <L*d*d little-endian float64, matrices in time order, each row-major>
"""

from __future__ import annotations

import csv
import io
import re

import numpy as np

from .core import CocycleWindow

MAGIC = b"OSLC1\n"
_HEADER = re.compile(rb"d=(\d+) n0=(-?\d+) count=(\d+)\n")


class CocycleFormatError(ValueError):
    pass


def dump_cocycle(window: CocycleWindow) -> bytes:
    d, L = window.dim, window.length
    header = f"d={d} n0={window.start} count={L}\n".encode("ascii")
    return MAGIC + header + window.matrices.astype("<f8").tobytes(order="C")


def load_cocycle(data: bytes) -> CocycleWindow:
    if not data.startswith(MAGIC):
        raise CocycleFormatError("not a cocycle file (bad magic)")
    end = data.find(b"\n", len(MAGIC))
    m = _HEADER.fullmatch(data[len(MAGIC) : end + 1])
    if m is None:
        raise CocycleFormatError("malformed header line")
    d, n0, L = int(m[1]), int(m[2]), int(m[3])
    payload = data[end + 1 :]
    if len(payload) != 8 * L * d * d:
        raise CocycleFormatError(f"payload is {len(payload)} bytes, expected {8 * L * d * d}")
    mats = np.frombuffer(payload, dtype="<f8").reshape(L, d, d)
    return CocycleWindow(mats.astype(float), n0)


def write_cocycle(path, window: CocycleWindow):
    with open(path, "wb") as fh:
        fh.write(dump_cocycle(window))


def read_cocycle(path) -> CocycleWindow:
    with open(path, "rb") as fh:
        return load_cocycle(fh.read())


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return "%.17g" % float(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def truth_rows(truth, times=None):
    """``(time, j, v_1, ..., v_d)`` rows of unit, sign-fixed exact vectors."""
    from .exact_model import exact_vector

    d = truth.bases.shape[1]
    times = range(truth.first, truth.last + 1) if times is None else times
    for n in times:
        for j in range(1, d + 1):
            yield (n, j, *exact_vector(truth, n, j))


def truth_header(d):
    return ["time", "j"] + [f"v{i}" for i in range(1, d + 1)]


def read_vectors(path) -> dict:
    """Map ``(time, j) -> vector`` from a truth or vector CSV."""
    out = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        vcols = [c for c in reader.fieldnames if re.fullmatch(r"v\d+", c)]
        vcols.sort(key=lambda c: int(c[1:]))
        for row in reader:
            out[(int(row["time"]), int(row["j"]))] = np.array([float(row[c]) for c in vcols])
    return out
