"""JSON encodings for matrices and positive maps.

Matrix: ``{"n": int, "entries": [[[re, im], ...], ...]}`` row-major.
Map: ``{"tag": ..., <payload>}`` with tags ``measurement`` (``povm``),
``kraus`` (``ops``), ``transpose``, ``pinching`` (``projectors``),
``partial_trace`` (``dims``, ``side``) and ``compose`` (``maps``).
Kraus operators may be rectangular and then carry ``rows``/``cols`` instead
of ``n``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import Compose, Kraus, Measurement, PartialTrace, Pinching, Transpose
from .errors import MalformedSpec, ValidationError


def _num(x: float) -> float:
    # repr() of a double already round-trips exactly; %.17g makes the digit count explicit
    return float(f"{x:.17g}")


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    entries = [[[_num(z.real), _num(z.imag)] for z in row] for row in a]
    if a.shape[0] == a.shape[1]:
        return {"n": int(a.shape[0]), "entries": entries}
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "entries": entries}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        raw = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix JSON: {exc}") from exc
    if raw.ndim != 3 or raw.shape[2] != 2:
        raise ValidationError("matrix entries must be a 2-d array of [re, im] pairs")
    a = raw[..., 0] + 1j * raw[..., 1]
    shape = (obj["n"], obj["n"]) if "n" in obj else (obj.get("rows"), obj.get("cols"))
    if a.shape != tuple(shape):
        raise ValidationError(f"declared shape {shape} does not match entries {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, a) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)))


def map_to_json(m) -> dict:
    if isinstance(m, Measurement):
        return {"tag": "measurement", "povm": [matrix_to_json(e) for e in m.povm]}
    if isinstance(m, Kraus):
        return {"tag": "kraus", "ops": [matrix_to_json(k) for k in m.ops]}
    if isinstance(m, Transpose):
        return {"tag": "transpose"}
    if isinstance(m, Pinching):
        return {"tag": "pinching", "projectors": [matrix_to_json(p) for p in m.projectors]}
    if isinstance(m, PartialTrace):
        return {"tag": "partial_trace", "dims": list(m.dims), "side": m.side}
    if isinstance(m, Compose):
        return {"tag": "compose", "maps": [map_to_json(x) for x in m.maps]}
    raise MalformedSpec(f"cannot serialize {m!r}")


def map_from_json(obj: dict):
    tag = obj.get("tag") if isinstance(obj, dict) else None
    try:
        if tag == "measurement":
            return Measurement(tuple(matrix_from_json(e) for e in obj["povm"]))
        if tag == "kraus":
            return Kraus(tuple(matrix_from_json(k) for k in obj["ops"]))
        if tag == "transpose":
            return Transpose()
        if tag == "pinching":
            return Pinching(tuple(matrix_from_json(p) for p in obj["projectors"]))
        if tag == "partial_trace":
            return PartialTrace(tuple(obj["dims"]), obj.get("side", "B"))
        if tag == "compose":
            return Compose(tuple(map_from_json(x) for x in obj["maps"]))
    except KeyError as exc:
        raise MalformedSpec(f"map {tag!r} is missing field {exc}") from exc
    raise MalformedSpec(f"unknown map tag {tag!r}")
