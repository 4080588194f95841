"""On-disk formats: binary embeddings, label CSV, and the result document.

Embedding files are a fixed 24-byte little-endian header - the magic
``CSETEMB1``, a u64 row count, a u32 dimension, and a u32 dtype tag
(0 = float32) - followed by the row-major float32 payload. The format is
deliberately trivial to emit from any array library. Labels travel as
human-readable CSV. Results are JSON with a fixed key order and 64-bit
reals printed at 17 significant digits, so identical runs produce
byte-identical files; wall-clock timings are therefore never serialized
(the ``timings`` key is present but null).
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .types import CoresetResult, InputError

MAGIC = b"CSETEMB1"
_HEADER = struct.Struct("<8sQII")
_DTYPE_F32 = 0



def _open(path, mode):
    try:
        return open(path, mode, encoding=None if "b" in mode else "utf-8",
                    newline="\n" if mode == "w" else None)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None

def write_embeddings(path, vectors) -> None:
    """Write a matrix as a float32 embedding file (values are cast)."""
    arr = np.ascontiguousarray(vectors, dtype=np.float32)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError("vectors must be a non-empty 2-d matrix")
    with _open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, arr.shape[0], arr.shape[1], _DTYPE_F32))
        fh.write(arr.tobytes(order="C"))


def read_embeddings(path) -> np.ndarray:
    """Read an embedding file into a float64 matrix (bit-exact from f32)."""
    with _open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise InputError(f"{path}: truncated header")
        magic, n, d, dtype_tag = _HEADER.unpack(header)
        if magic != MAGIC:
            raise InputError(f"{path}: unrecognized format (bad magic)")
        if dtype_tag != _DTYPE_F32:
            raise InputError(f"{path}: unsupported dtype tag {dtype_tag}")
        if n < 1 or d < 1:
            raise InputError(f"{path}: empty embedding set ({n} x {d})")
        payload = fh.read()
    expected = n * d * 4
    if len(payload) < expected:
        raise InputError(f"{path}: truncated payload ({len(payload)} of {expected} bytes)")
    if len(payload) > expected:
        raise InputError(f"{path}: {len(payload) - expected} trailing bytes after payload")
    vectors = np.frombuffer(payload, dtype="<f4").reshape(n, d).astype(np.float64)
    if not np.isfinite(vectors).all():
        bad = int(np.flatnonzero(~np.isfinite(vectors).all(axis=1))[0])
        raise InputError(f"{path}: non-finite value at row {bad}")
    return vectors


def write_labels(path, labels) -> None:
    """Write labels as ``index,label`` CSV with a header line."""
    labels = np.asarray(labels)
    with _open(path, "w") as fh:
        fh.write("index,label\n")
        for i, label in enumerate(labels):
            fh.write(f"{i},{int(label)}\n")


def read_labels(path) -> np.ndarray:
    """Read an ``index,label`` CSV; every index 0..n-1 exactly once."""
    with _open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "index,label":
        raise InputError(f"{path}: missing 'index,label' header line")
    seen: dict[int, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise InputError(f"{path}: malformed record at line {lineno}")
        try:
            index = int(parts[0])
            label = int(parts[1])
        except ValueError:
            raise InputError(f"{path}: non-integer index or label at line {lineno}") from None
        if label < 0:
            raise InputError(f"{path}: negative label at line {lineno}")
        if index in seen:
            raise InputError(f"{path}: duplicate index {index} at line {lineno}")
        seen[index] = label
    if not seen:
        raise InputError(f"{path}: no label records")
    n = max(seen) + 1
    for i in range(n):
        if i not in seen:
            raise InputError(f"{path}: missing index {i}")
    return np.asarray([seen[i] for i in range(n)], dtype=np.int64)


def _dump_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if value is True or value is False:
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if x != x or x in (float("inf"), float("-inf")):
            raise InputError("non-finite value in result document")
        return format(x, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_dump_json(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        flat = all(isinstance(v, (int, np.integer)) for v in value)
        if flat:
            return "[" + ", ".join(str(int(v)) for v in value) + "]"
        items = ",\n".join(f"{pad}  {_dump_json(v, indent + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    raise InputError(f"unserializable value of type {type(value).__name__}")


def result_document(result: CoresetResult) -> dict:
    """The result as a plain dict with the documented fixed key order.

    The config echo carries only fields that determine the selection;
    thread count and timings vary run to run and would break the
    byte-identity contract.
    """
    cfg = result.config
    config = {
        "alpha": float(cfg.alpha),
        "gamma": float(cfg.gamma),
        "method": cfg.method,
        "similarity": cfg.similarity,
        "rbf_bandwidth": float(cfg.rbf_bandwidth),
        "seed": int(cfg.seed),
    }
    per_class = []
    for cls in result.classes:
        per_class.append({
            "class": cls.label,
            "k": cls.k,
            "budget": cls.budget,
            "selected_ids": list(cls.selected_ids),
            "objective": cls.objective,
            "mu": cls.mu,
            "sigma": cls.sigma,
            "empirical_coverage": cls.empirical_coverage,
        })
    totals = {
        "samples": result.total_samples,
        "classes": len(result.classes),
        "selected": result.total_selected,
        "requested_fraction": result.requested_fraction,
        "budget_deviation": result.budget_deviation,
    }
    return {"config": config, "per_class": per_class, "totals": totals, "timings": None}


def render_result(result: CoresetResult) -> str:
    return _dump_json(result_document(result)) + "\n"


def write_result(result: CoresetResult, path) -> None:
    """Serialize a result; identical runs yield byte-identical files."""
    text = render_result(result)
    with _open(path, "w") as fh:
        fh.write(text)


def read_result(path) -> dict:
    """Parse a stored result document."""
    with _open(path, "r") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid result document ({exc})") from None
