"""On-disk JSON documents for frames, fusion systems, operators and signals.

A document is a UTF-8 JSON object::

    {
      "ambient_dim": 2,
      "field_tag": "real",
      "kind": "fusion_system",
      "payload": [
        [[1], [0]],
        [[0], [1]]
      ],
      "schema_version": 1,
      "weights": [1, 1]
    }

``payload`` depends on ``kind``:

* ``vector_frame``: ``n x m`` matrix whose columns are the frame vectors.
* ``fusion_system``: list of ``n x k_i`` matrices whose columns span the
  members (``k_i = 0`` is written as ``n`` empty rows).
* ``operator``: ``n x n`` matrix.
* ``signal``: length-``n`` vector.

Complex entries are ``[re, im]`` pairs. :func:`dumps` is canonical (sorted
keys, one matrix row per line, floats with 17 significant digits), so
``dumps(loads(text)) == text`` for any text it produced.
"""

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import FramekitError, ParseError
from .frames import VectorFrame
from .fusion import FusionSystem
from .numkit import DEFAULT_TOL, as_matrix
from .subspace import Subspace

SCHEMA_VERSION = 1
FIELDS = ("real", "complex")
KINDS = ("vector_frame", "fusion_system", "operator", "signal")
_KEYS = {"schema_version", "field_tag", "ambient_dim", "kind", "payload", "weights"}


@dataclass(frozen=True, eq=False)
class SystemDocument:
    """Parsed document. ``payload`` is an array, or a list of arrays for fusion systems."""

    field_tag: str
    ambient_dim: int
    kind: str
    payload: object
    weights: Optional[np.ndarray] = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        _validate(self)


def _validate(doc):
    if doc.schema_version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {doc.schema_version!r}")
    if doc.field_tag not in FIELDS:
        raise ParseError(f"field_tag must be one of {FIELDS}, got {doc.field_tag!r}")
    if doc.kind not in KINDS:
        raise ParseError(f"kind must be one of {KINDS}, got {doc.kind!r}")
    n = doc.ambient_dim
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ParseError(f"ambient_dim must be a positive integer, got {n!r}")
    arrays = doc.payload if doc.kind == "fusion_system" else [doc.payload]
    for A in arrays:
        if not isinstance(A, np.ndarray):
            raise ParseError("payload entries must be arrays")
        if np.iscomplexobj(A) and doc.field_tag == "real":
            raise ParseError("complex payload in a real document")
        if not np.all(np.isfinite(A)):
            raise ParseError("payload contains non-finite numbers")
    if doc.kind == "signal":
        if doc.payload.shape != (n,):
            raise ParseError(f"signal must have length {n}")
    elif doc.kind == "operator":
        if doc.payload.shape != (n, n):
            raise ParseError(f"operator must be {n}x{n}, got {doc.payload.shape}")
    elif doc.kind == "vector_frame":
        if doc.payload.ndim != 2 or doc.payload.shape[0] != n or doc.payload.shape[1] < 1:
            raise ParseError(f"vector_frame payload must be {n}xm with m >= 1")
    else:
        if not isinstance(doc.payload, list) or not doc.payload:
            raise ParseError("fusion_system payload must be a non-empty list of matrices")
        for A in doc.payload:
            if A.ndim != 2 or A.shape[0] != n:
                raise ParseError(f"every member must be given by a matrix with {n} rows")
    if (doc.weights is not None) != (doc.kind == "fusion_system"):
        raise ParseError("weights are required for fusion_system documents and only there")
    if doc.weights is not None:
        w = doc.weights
        if w.shape != (len(doc.payload),):
            raise ParseError("one weight per member is required")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ParseError("weights must be finite and positive")


# -- parsing ------------------------------------------------------------------


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _entry(x, cplx, where):
    if not cplx:
        return _number(x, where)
    if not (isinstance(x, list) and len(x) == 2):
        raise ParseError(f"{where}: complex entries must be [re, im] pairs")
    return complex(_number(x[0], where), _number(x[1], where))


def _vector(obj, cplx, where):
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list")
    values = [_entry(x, cplx, f"{where}[{j}]") for j, x in enumerate(obj)]
    return np.array(values, dtype=np.complex128 if cplx else np.float64)


def _matrix(obj, cplx, where):
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{where}: expected a non-empty list of rows")
    rows = [_vector(r, cplx, f"{where}[{i}]") for i, r in enumerate(obj)]
    if len({r.size for r in rows}) != 1:
        raise ParseError(f"{where}: rows have different lengths")
    return np.vstack(rows) if rows[0].size else np.zeros((len(rows), 0), rows[0].dtype)


def from_json(obj):
    """Build a :class:`SystemDocument` from decoded JSON."""
    if not isinstance(obj, dict):
        raise ParseError("document must be a JSON object")
    missing = {"schema_version", "field_tag", "ambient_dim", "kind", "payload"} - obj.keys()
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    extra = obj.keys() - _KEYS
    if extra:
        raise ParseError(f"unknown keys: {sorted(extra)}")
    cplx = obj["field_tag"] == "complex"
    kind = obj["kind"]
    raw = obj["payload"]
    if kind == "signal":
        payload = _vector(raw, cplx, "payload")
    elif kind == "fusion_system":
        if not isinstance(raw, list):
            raise ParseError("payload must be a list of matrices")
        payload = [_matrix(M, cplx, f"payload[{i}]") for i, M in enumerate(raw)]
    elif kind in KINDS:
        payload = _matrix(raw, cplx, "payload")
    else:
        raise ParseError(f"kind must be one of {KINDS}, got {kind!r}")
    weights = obj.get("weights")
    if weights is not None:
        weights = _vector(weights, False, "weights")
    return SystemDocument(
        field_tag=obj["field_tag"],
        ambient_dim=obj["ambient_dim"],
        kind=kind,
        payload=payload,
        weights=weights,
        schema_version=obj["schema_version"],
    )


def loads(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_json(obj)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- canonical writer ---------------------------------------------------------


def _fmt(x):
    # Adding 0.0 folds -0.0 into 0.0.
    return format(float(x) + 0.0, ".17g")


def _fmt_entry(x, cplx):
    if cplx:
        return f"[{_fmt(x.real)}, {_fmt(x.imag)}]"
    return _fmt(x)


def _fmt_vector(v, cplx):
    return "[" + ", ".join(_fmt_entry(x, cplx) for x in v) + "]"


def _fmt_matrix(M, cplx, indent):
    pad = " " * (indent + 2)
    rows = ",\n".join(pad + _fmt_vector(r, cplx) for r in M)
    return "[\n" + rows + "\n" + " " * indent + "]"


def dumps(doc):
    """Canonical text for ``doc`` (ends with a newline)."""
    cplx = doc.field_tag == "complex"
    if doc.kind == "signal":
        payload = _fmt_vector(doc.payload, cplx)
    elif doc.kind == "fusion_system":
        items = ",\n".join("    " + _fmt_matrix(M, cplx, 4) for M in doc.payload)
        payload = "[\n" + items + "\n  ]"
    else:
        payload = _fmt_matrix(doc.payload, cplx, 2)
    fields = {
        "ambient_dim": str(int(doc.ambient_dim)),
        "field_tag": json.dumps(doc.field_tag),
        "kind": json.dumps(doc.kind),
        "payload": payload,
        "schema_version": str(int(doc.schema_version)),
    }
    if doc.weights is not None:
        fields["weights"] = _fmt_vector(doc.weights, False)
    body = ",\n".join(f'  "{k}": {fields[k]}' for k in sorted(fields))
    return "{\n" + body + "\n}\n"


def dump(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


# -- conversions --------------------------------------------------------------


def _field(*arrays, field=None):
    if field == "complex" or any(np.iscomplexobj(a) for a in arrays):
        return "complex"
    return "real"


def _cast(A, field):
    return A.astype(np.complex128 if field == "complex" else np.float64)


def frame_document(F, field=None):
    tag = _field(F.vectors, field=field)
    return SystemDocument(tag, F.ambient_dim, "vector_frame", _cast(F.vectors, tag))


def fusion_document(W, field=None):
    bases = [V.basis for V in W.subspaces]
    tag = _field(*bases, field=field)
    return SystemDocument(
        tag,
        W.ambient_dim,
        "fusion_system",
        [_cast(B, tag) for B in bases],
        weights=np.asarray(W.weights, dtype=np.float64),
    )


def operator_document(K, field=None):
    K = as_matrix(K, "operator")
    tag = _field(K, field=field)
    return SystemDocument(tag, K.shape[0], "operator", _cast(K, tag))


def signal_document(f, field=None):
    f = np.asarray(f)
    tag = _field(f, field=field)
    return SystemDocument(tag, f.shape[0], "signal", _cast(f, tag))


def to_object(doc, tol=DEFAULT_TOL):
    """The library object a document describes.

    Returns a :class:`VectorFrame`, a :class:`FusionSystem`, or an array
    for operators and signals.
    """
    try:
        if doc.kind == "vector_frame":
            return VectorFrame(doc.payload)
        if doc.kind == "fusion_system":
            members = tuple(Subspace.span(M, tol, ambient_dim=doc.ambient_dim) for M in doc.payload)
            return FusionSystem(members, doc.weights)
    except FramekitError as exc:
        raise ParseError(f"invalid {doc.kind}: {exc}") from exc
    return doc.payload
