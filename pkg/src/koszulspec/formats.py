"""JSON/CSV readers and writers for matrices, tuples, clouds and reports.

Matrix:  ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` (row-major)
Tuple:   ``{"n": n, "dim": d, "matrices": [matrix, ...]}``
Cloud:   ``{"n": n, "threshold": t, "points": [{"z": [[re, im], ...], "residual": r, "per_k": [...]}]}``
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import SpecError
from .operator_tuple import OperatorTuple
from .taylor_spectrum import Polydisc, SpectrumPoint, SpectrumPointCloud


def _pairs(values) -> list:
    return [[float(c.real), float(c.imag)] for c in values]


def _complexes(pairs) -> list:
    try:
        return [complex(float(re), float(im)) for re, im in pairs]
    except (TypeError, ValueError):
        raise SpecError("complex entries must be [re, im] pairs") from None


def matrix_to_json(M) -> dict:
    A = np.asarray(M, dtype=complex)
    return {"rows": A.shape[0], "cols": A.shape[1], "data": _pairs(A.ravel())}


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError):
        raise SpecError("matrix JSON needs 'rows', 'cols' and 'data'") from None
    if rows < 1 or cols < 1:
        raise SpecError("matrix dimensions must be positive")
    if len(data) != rows * cols:
        raise SpecError(f"matrix has {len(data)} entries, expected {rows * cols}")
    return np.array(_complexes(data), dtype=complex).reshape(rows, cols)


def tuple_to_json(T: OperatorTuple) -> dict:
    return {"n": T.n, "dim": T.dim, "matrices": [matrix_to_json(A) for A in T]}


def tuple_from_json(obj, checked: bool = False) -> OperatorTuple:
    """Read a tuple file; a bare matrix object is read as a 1-tuple."""
    if isinstance(obj, dict) and "matrices" in obj:
        mats = [matrix_from_json(m) for m in obj["matrices"]]
        if "n" in obj and int(obj["n"]) != len(mats):
            raise SpecError(f"tuple declares n={obj['n']} but lists {len(mats)} matrices")
        if "dim" in obj and any(A.shape != (int(obj["dim"]),) * 2 for A in mats):
            raise SpecError(f"tuple declares dim={obj['dim']} but a matrix disagrees")
    elif isinstance(obj, dict) and "data" in obj:
        mats = [matrix_from_json(obj)]
    else:
        raise SpecError("expected a tuple or matrix JSON object")
    return OperatorTuple(tuple(mats), checked=checked)


def cloud_to_json(cloud: SpectrumPointCloud) -> dict:
    out = {
        "n": cloud.n,
        "threshold": cloud.threshold,
        "points": [
            {"z": _pairs(p.coords), "residual": p.residual, "per_k": list(p.per_k)}
            for p in cloud
        ],
    }
    if cloud.region is not None:
        out["region"] = cloud.region.to_dict(cloud.resolution)
    return out


def cloud_from_json(obj) -> SpectrumPointCloud:
    try:
        n = int(obj["n"])
        points = [
            SpectrumPoint(
                tuple(_complexes(p["z"])),
                None if p.get("residual") is None else float(p["residual"]),
                tuple(float(v) for v in p.get("per_k", ())),
            )
            for p in obj["points"]
        ]
    except (KeyError, TypeError):
        raise SpecError("cloud JSON needs 'n' and 'points'") from None
    if any(p.n != n for p in points):
        raise SpecError("cloud points disagree with the declared n")
    region = resolution = None
    if obj.get("region"):
        reg = obj["region"]
        region = Polydisc(tuple(_complexes(reg["center"])), float(reg["radius"]))
        resolution = reg.get("resolution")
    return SpectrumPointCloud(n, points, obj.get("threshold"), region, resolution)


def cloud_to_csv(cloud: SpectrumPointCloud) -> str:
    """Flat table ``z1_re, z1_im, ..., residual``; per-degree residuals are dropped."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = [f"z{j}_{part}" for j in range(1, cloud.n + 1) for part in ("re", "im")]
    writer.writerow(header + ["residual"])
    for p in cloud:
        row = [v for c in p.coords for v in (repr(c.real), repr(c.imag))]
        writer.writerow(row + ["" if p.residual is None else repr(p.residual)])
    return buf.getvalue()


def read_json(path) -> dict:
    path = Path(path)
    try:
        with path.open() as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None


def write_text(path, text: str, overwrite: bool = False) -> None:
    path = Path(path)
    if path.exists() and not overwrite:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")
    path.write_text(text)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2)
