"""CSV/JSON serialization for command outputs and matrix files."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import StructureError, ValidationError


def fmt(x) -> str:
    """17 significant digits: round-trips any double."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def jsonable(x):
    """Recursively convert numpy values; non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(doc) -> str:
    return json.dumps(jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def matrix_grids(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"real": m.real.tolist(), "imag": m.imag.tolist(), "abs": np.abs(m).tolist()}


def matrix_rows(m):
    m = np.asarray(m, dtype=complex)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            z = m[i, j]
            yield i, j, z.real, z.imag, abs(z)


def read_matrix_file(path) -> np.ndarray:
    """Load ``{"real": [[...]], "imag": [[...]]}``; ``imag`` may be omitted."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"matrix file {path} is not valid JSON: {exc.msg}") from None
    if not isinstance(doc, dict) or "real" not in doc:
        raise ValidationError(f"matrix file {path} must be an object with 'real' (and 'imag') grids")
    try:
        re = np.array(doc["real"], dtype=float)
        im = np.array(doc.get("imag", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"matrix file {path} has non-numeric entries") from None
    if re.ndim != 2 or re.shape != im.shape:
        raise StructureError(f"matrix file {path}: real/imag grids must be 2-d and of equal shape")
    return re + 1j * im
