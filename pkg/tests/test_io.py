import json

import numpy as np
import pytest
from conftest import DIAG, E1, system
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from framekit import io
from framekit.exceptions import ParseError
from framekit.frames import VectorFrame
from framekit.fusion import FusionSystem, fusion_frame_operator
from framekit.instances import fusion_system, gaussian
from framekit.subspace import Subspace

floats = st.floats(-1e300, 1e300, allow_nan=False, allow_infinity=False)


def base(**over):
    doc = {
        "schema_version": 1,
        "field_tag": "real",
        "ambient_dim": 2,
        "kind": "operator",
        "payload": [[1, 0], [0, 1]],
    }
    doc.update(over)
    return json.dumps(doc)


def test_round_trip_is_byte_identical(rng, field):
    docs = [
        io.fusion_document(fusion_system(rng, 4, field=field)),
        io.frame_document(VectorFrame(gaussian(rng, (3, 5), field))),
        io.operator_document(gaussian(rng, (3, 3), field)),
        io.signal_document(gaussian(rng, 3, field)),
    ]
    for doc in docs:
        text = io.dumps(doc)
        assert io.dumps(io.loads(text)) == text


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, (2, 3), elements=floats))
def test_round_trip_preserves_every_bit(M):
    doc = io.frame_document(VectorFrame(M))
    back = io.loads(io.dumps(doc))
    assert np.array_equal(back.payload, M + 0.0)


def test_canonical_layout():
    text = io.dumps(io.fusion_document(system([E1], [2.0])))
    assert text.endswith("}\n")
    obj = json.loads(text)
    assert list(obj) == sorted(obj)
    assert obj["weights"] == [2]


def test_zero_subspace_and_complex_encoding():
    W = FusionSystem((Subspace.zero(2, complex=True), Subspace.full(2, complex=True)), np.ones(2))
    obj = json.loads(io.dumps(io.fusion_document(W)))
    assert obj["field_tag"] == "complex"
    assert obj["payload"][0] == [[], []]
    assert obj["payload"][1][0] == [[1, 0], [0, 0]]
    back = io.to_object(io.loads(io.dumps(io.fusion_document(W))))
    assert back.dims == (0, 2)


def test_to_object_rebuilds_system():
    W = system([E1, DIAG], [1.0, 3.0])
    back = io.to_object(io.loads(io.dumps(io.fusion_document(W))))
    np.testing.assert_allclose(fusion_frame_operator(back), fusion_frame_operator(W), atol=1e-15)


def test_field_promotion():
    doc = io.operator_document(np.eye(2), field="complex")
    assert doc.field_tag == "complex" and np.iscomplexobj(doc.payload)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        base(schema_version=2),
        base(field_tag="quaternion"),
        base(kind="tensor"),
        base(ambient_dim=0),
        base(ambient_dim=True),
        base(payload=[[1, 0]]),
        base(payload=[[1, 0], [0]]),
        base(payload=[[1, "x"], [0, 1]]),
        base(payload=[[1, True], [0, 1]]),
        base(field_tag="complex"),
        base(weights=[1.0]),
        base(extra=1),
        base(kind="fusion_system", payload=[[[1], [0]]]),
        base(kind="fusion_system", payload=[[[1], [0]]], weights=[-1]),
        base(kind="fusion_system", payload=[[[1], [0]]], weights=[1, 1]),
        base(kind="fusion_system", payload=[[[1], [0], [0]]], weights=[1]),
        base(kind="fusion_system", payload=[], weights=[]),
        base(kind="signal", payload=[1, 2, 3]),
        base(kind="vector_frame", payload=[[], []]),
        json.dumps({"schema_version": 1}),
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        io.loads(text)


def test_nonfinite_rejected():
    with pytest.raises(ParseError):
        io.loads(base(payload=[[1e400, 0], [0, 1]]))


def test_load_and_dump(tmp_path):
    doc = io.signal_document(np.array([1.0, 2.0]))
    path = tmp_path / "f.json"
    io.dump(doc, path)
    assert path.read_text(encoding="utf-8") == io.dumps(doc)
    np.testing.assert_array_equal(io.load(path).payload, [1.0, 2.0])
