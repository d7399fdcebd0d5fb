"""JSON instance files.

    {"n": 4, "m": 5, "c": 0.0,
     "h": [{"r": 1, "matrix": [[1.0, 0.0, 0.0, 0.0], ...]}]}

``r`` is the 1-based normal index (non-J normals first, then Je_1..Je_m);
omitted indices are zero matrices. Floats are written with ``repr`` so a
parse/serialize round trip is exact.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .curvature import SubmanifoldInstance
from .errors import DeltaRicError


class InstanceFormatError(DeltaRicError):
    """Malformed instance document."""


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceFormatError(f"{where}: expected a number, got {json.dumps(value)}")
    value = float(value)
    if not math.isfinite(value):
        raise InstanceFormatError(f"{where}: expected a finite number")
    return value


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"{where}: expected an integer, got {json.dumps(value)}")
    return value


def instance_from_dict(doc) -> SubmanifoldInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level: expected an object with fields n, m, c, h")
    for key in ("n", "m", "c"):
        if key not in doc:
            raise InstanceFormatError(f"field '{key}' is missing")
    unknown = set(doc) - {"n", "m", "c", "h"}
    if unknown:
        raise InstanceFormatError(f"unknown field(s): {', '.join(sorted(unknown))}")
    n = _integer(doc["n"], "field 'n'")
    m = _integer(doc["m"], "field 'm'")
    c = _number(doc["c"], "field 'c'")
    if n < 2:
        raise InstanceFormatError(f"field 'n': must be >= 2, got {n}")
    if m < n:
        raise InstanceFormatError(f"field 'm': must be >= n = {n}, got {m}")
    nnorm = 2 * m - n
    h = np.zeros((nnorm, n, n))
    records = doc.get("h", [])
    if not isinstance(records, list):
        raise InstanceFormatError("field 'h': expected a list of {r, matrix} records")
    seen = set()
    for idx, rec in enumerate(records):
        where = f"h[{idx}]"
        if not isinstance(rec, dict) or set(rec) != {"r", "matrix"}:
            raise InstanceFormatError(f"{where}: expected an object with exactly the keys 'r' and 'matrix'")
        r = _integer(rec["r"], f"{where}.r")
        if not 1 <= r <= nnorm:
            raise InstanceFormatError(f"{where}.r: normal index {r} outside 1..{nnorm}")
        if r in seen:
            raise InstanceFormatError(f"{where}.r: normal index {r} given twice")
        seen.add(r)
        mat = rec["matrix"]
        if not isinstance(mat, list) or len(mat) != n:
            raise InstanceFormatError(f"{where}.matrix: expected {n} rows")
        for i, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != n:
                raise InstanceFormatError(f"{where}.matrix[{i}]: expected {n} entries")
            for j, v in enumerate(row):
                h[r - 1, i, j] = _number(v, f"{where}.matrix[{i}][{j}]")
    return SubmanifoldInstance(n, m, c, h)


def parse_instance(text: str) -> SubmanifoldInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(doc)


def load_instance(path) -> SubmanifoldInstance:
    return parse_instance(Path(path).read_text())


def serialize_instance(inst: SubmanifoldInstance) -> str:
    lines = ["{", f'  "n": {inst.n},', f'  "m": {inst.m},', f'  "c": {float(inst.c)!r},']
    recs = []
    for r in range(inst.n_normals):
        if not np.any(inst.h[r]):
            continue
        rows = ",\n".join(
            "        [" + ", ".join(repr(float(v)) for v in row) + "]" for row in inst.h[r]
        )
        recs.append(f'    {{"r": {r + 1}, "matrix": [\n{rows}\n    ]}}')
    if recs:
        lines.append('  "h": [\n' + ",\n".join(recs) + "\n  ]")
    else:
        lines.append('  "h": []')
    return "\n".join(lines) + "\n}\n"


def save_instance(inst: SubmanifoldInstance, path) -> None:
    Path(path).write_text(serialize_instance(inst))
