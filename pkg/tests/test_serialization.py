"""Canonical JSON and tensor document round trips."""

import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bochnerkit.curvature import (
    PointValidationError,
    flat_point,
    space_form_tensor,
    standard_J,
)
from bochnerkit.multilinear import SymmetryError
from bochnerkit.serialization import (
    DocumentFormatError,
    TensorDocument,
    canonical_json,
    dump_tensor,
    load_tensor,
)


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def test_canonical_json_sorts_keys_and_strips_space():
    assert canonical_json({"b": 1, "a": [True, None]}) == '{"a":[true,null],"b":1}'


def test_canonical_json_negative_zero_normalized():
    assert canonical_json(-0.0) == "0"


def test_canonical_json_rejects_nan():
    with pytest.raises(DocumentFormatError):
        canonical_json(float("nan"))


@given(x=st.floats(allow_nan=False, allow_infinity=False))
@settings(max_examples=200, deadline=None)
def test_canonical_float_round_trips(x):
    assert float(json.loads(canonical_json(x))) == (0.0 if x == 0.0 else x)


def test_canonical_json_is_valid_json():
    doc = {"values": [1.0, 1e-300, -2.5e17, 3], "name": 'q"uote'}
    assert json.loads(canonical_json(doc)) == doc


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _sphere_doc():
    point = flat_point(6)
    return TensorDocument.from_point_tensor(
        point, space_form_tensor(point, 1.0), label="S6(1)"
    )


def test_round_trip_is_bitwise(tmp_path):
    doc = _sphere_doc()
    path = tmp_path / "s6.json"
    dump_tensor(doc, path)
    loaded = load_tensor(path)
    assert loaded == doc
    # dumping again produces identical bytes
    buf = io.StringIO()
    dump_tensor(loaded, buf)
    assert buf.getvalue() == path.read_text()


def test_round_trip_through_stream():
    doc = _sphere_doc()
    buf = io.StringIO()
    dump_tensor(doc, buf)
    buf.seek(0)
    assert load_tensor(buf) == doc


def test_document_rebuilds_point_and_tensor():
    doc = _sphere_doc()
    point, R = doc.to_point_tensor()
    assert point.dim == 6
    assert R.components[0, 1, 1, 0] == 1.0


def test_load_rejects_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(DocumentFormatError):
        load_tensor(path)


def test_load_rejects_missing_keys(tmp_path):
    path = tmp_path / "missing.json"
    path.write_text('{"dim": 4, "g": []}')
    with pytest.raises(DocumentFormatError):
        load_tensor(path)


def test_load_rejects_wrong_lengths(tmp_path):
    doc = _sphere_doc()
    raw = doc.to_dict()
    raw["R"] = raw["R"][:-1]
    path = tmp_path / "short.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(DocumentFormatError):
        load_tensor(path)


def test_load_rejects_odd_dimension(tmp_path):
    raw = {
        "dim": 5,
        "g": list(np.eye(5).reshape(-1)),
        "J": [0.0] * 25,
        "R": [0.0] * 625,
    }
    path = tmp_path / "odd.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(PointValidationError) as err:
        load_tensor(path)
    assert any("even dimension" in v.invariant for v in err.value.violations)


def test_load_rejects_bad_J(tmp_path):
    doc = _sphere_doc()
    raw = doc.to_dict()
    raw["J"] = list(np.eye(6).reshape(-1))  # J^2 = +I
    path = tmp_path / "badj.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(PointValidationError) as err:
        load_tensor(path)
    assert any("J squares" in v.invariant for v in err.value.violations)


def test_load_rejects_non_curvature_tensor(tmp_path):
    point = flat_point(4)
    bad = np.zeros((4,) * 4)
    bad[0, 1, 0, 1] = 1.0
    raw = {
        "dim": 4,
        "g": list(point.g_mat.reshape(-1)),
        "J": list(standard_J(4).reshape(-1)),
        "R": list(bad.reshape(-1)),
    }
    path = tmp_path / "asym.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(SymmetryError):
        load_tensor(path)


def test_load_rejects_unknown_schema(tmp_path):
    raw = _sphere_doc().to_dict()
    raw["schema_version"] = 99
    path = tmp_path / "version.json"
    path.write_text(json.dumps(raw))
    with pytest.raises(DocumentFormatError):
        load_tensor(path)
