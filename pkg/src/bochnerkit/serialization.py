"""Canonical JSON and the on-disk tensor document format.

The writer is byte-stable: object keys are sorted, floats are rendered with 17
significant digits (which round-trips IEEE doubles exactly), and there is no
insignificant whitespace.  Two runs that produce equal values therefore
produce equal bytes.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Any, IO

import numpy as np

from .curvature import HermitianPoint, validate_point
from .multilinear import TOL_ALG, CurvTensor, require_curvature_class

__all__ = [
    "SCHEMA_VERSION",
    "TensorDocument",
    "DocumentFormatError",
    "canonical_json",
    "dump_tensor",
    "load_tensor",
]

SCHEMA_VERSION = 1


class DocumentFormatError(ValueError):
    """Malformed JSON or structurally invalid document."""


def _canon(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if not math.isfinite(f):
            raise DocumentFormatError("canonical JSON forbids NaN and infinity")
        if f == 0.0:
            f = 0.0  # normalize -0.0
        return format(f, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, dict):
        items = []
        for key in sorted(value):
            if not isinstance(key, str):
                raise DocumentFormatError(f"object keys must be strings, got {type(key).__name__}")
            items.append(f"{json.dumps(key, ensure_ascii=True)}:{_canon(value[key])}")
        return "{" + ",".join(items) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = value.tolist() if isinstance(value, np.ndarray) else value
        return "[" + ",".join(_canon(v) for v in seq) + "]"
    raise DocumentFormatError(f"cannot serialize {type(value).__name__}")


def canonical_json(value: Any) -> str:
    """Serialize to the byte-stable canonical JSON form (no trailing newline)."""
    return _canon(value)


@dataclass(frozen=True)
class TensorDocument:
    """Flat on-disk form of one point plus one curvature tensor.

    Arrays are row-major flat lists; ``g`` and ``J`` have dim^2 entries, ``R``
    has dim^4.  A loaded document is only returned after full geometric
    validation (valid Hermitian point, curvature-class tensor).
    """

    dim: int
    g: tuple[float, ...]
    J: tuple[float, ...]
    R: tuple[float, ...]
    label: str | None = None
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_point_tensor(
        cls, point: HermitianPoint, R: CurvTensor, label: str | None = None
    ) -> "TensorDocument":
        return cls(
            dim=point.dim,
            g=tuple(point.g_mat.reshape(-1).tolist()),
            J=tuple(np.asarray(point.J).reshape(-1).tolist()),
            R=tuple(R.components.reshape(-1).tolist()),
            label=label,
        )

    def to_point_tensor(self, tol: float = TOL_ALG) -> tuple[HermitianPoint, CurvTensor]:
        """Rebuild and validate the geometric objects; raises with defect values."""
        n = self.dim
        g = np.array(self.g, dtype=float).reshape(n, n)
        J = np.array(self.J, dtype=float).reshape(n, n)
        point = validate_point(g, J, tol)
        R = CurvTensor(n, np.array(self.R, dtype=float).reshape((n,) * 4))
        require_curvature_class(R, tol, "document tensor")
        return point, R

    def to_dict(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "dim": self.dim,
            "g": list(self.g),
            "J": list(self.J),
            "R": list(self.R),
        }
        if self.label is not None:
            out["label"] = self.label
        return out


def _structural_document(raw: Any) -> TensorDocument:
    if not isinstance(raw, dict):
        raise DocumentFormatError("document root must be a JSON object")
    missing = {"dim", "g", "J", "R"} - raw.keys()
    if missing:
        raise DocumentFormatError(f"document is missing keys: {sorted(missing)}")
    dim = raw["dim"]
    if not isinstance(dim, int) or dim <= 0:
        raise DocumentFormatError(f"dim must be a positive integer, got {dim!r}")
    arrays = {}
    for key, expected in (("g", dim * dim), ("J", dim * dim), ("R", dim**4)):
        values = raw[key]
        if not isinstance(values, list) or len(values) != expected:
            raise DocumentFormatError(
                f"{key} must be a flat list of {expected} numbers for dim {dim}"
            )
        arr = np.array(values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DocumentFormatError(f"{key} contains non-finite entries")
        arrays[key] = tuple(float(v) for v in values)
    label = raw.get("label")
    if label is not None and not isinstance(label, str):
        raise DocumentFormatError("label must be a string when present")
    version = raw.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise DocumentFormatError(f"unsupported schema_version {version!r}")
    return TensorDocument(
        dim=dim, g=arrays["g"], J=arrays["J"], R=arrays["R"],
        label=label, schema_version=version,
    )


def dump_tensor(doc: TensorDocument, destination: str | os.PathLike | IO[str]) -> None:
    """Write the canonical JSON form of ``doc``."""
    text = canonical_json(doc.to_dict()) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="ascii") as fh:
            fh.write(text)


def load_tensor(source: str | os.PathLike | IO[str], tol: float = TOL_ALG) -> TensorDocument:
    """Read, parse, and fully validate a tensor document.

    Structural problems raise :class:`DocumentFormatError`; geometric ones
    propagate the validation errors (with defect values) from
    :func:`~bochnerkit.curvature.validate_point` and the symmetry check.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentFormatError(f"malformed JSON: {exc}") from exc
    doc = _structural_document(raw)
    doc.to_point_tensor(tol)  # geometric validation; errors carry defects
    return doc
