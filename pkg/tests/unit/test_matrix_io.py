"""Unit tests for matrix validation and the matrix JSON format."""

import numpy as np
import pytest

from succmin.core.errors import InvalidMatrix, NonSquare, ParseError
from succmin.core.matrix import (
    as_integer_matrix,
    as_matrix,
    as_upper_factor,
    dump_matrix,
    dumps_json,
    load_matrix,
    loads_json,
    parse_matrix,
)


def test_matrix_file_round_trip(tmp_path):
    """Test a dumped matrix loads back bit-exactly."""
    a = np.array([[1.0, 0.1], [1e-300, -2.5]])
    path = tmp_path / "m.json"
    dump_matrix(a, path)
    np.testing.assert_array_equal(load_matrix(path), a)


def test_dump_is_deterministic(tmp_path):
    """Test dumping twice writes identical bytes."""
    a = np.eye(3) * 0.3
    dump_matrix(a, tmp_path / "a.json")
    dump_matrix(a, tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


@pytest.mark.parametrize("token", ["NaN", "Infinity", "-Infinity"])
def test_non_finite_tokens_rejected(token):
    """Test NaN/Infinity literals fail at parse time."""
    with pytest.raises(ParseError):
        loads_json(f'{{"rows": 1, "cols": 1, "data": [{token}]}}')


def test_malformed_json():
    """Test invalid JSON raises ParseError."""
    with pytest.raises(ParseError):
        loads_json("{rows: 1")


def test_data_length_mismatch():
    """Test rows x cols must match the data length."""
    with pytest.raises(ParseError):
        parse_matrix({"rows": 2, "cols": 2, "data": [1.0, 2.0, 3.0]})


def test_as_matrix_rejects_empty_and_non_finite():
    """Test DenseMatrix invariants."""
    with pytest.raises(InvalidMatrix):
        as_matrix(np.zeros((0, 2)))
    with pytest.raises(InvalidMatrix):
        as_matrix([[1.0, float("nan")]])


def test_as_upper_factor():
    """Test UpperTriangularFactor invariants."""
    assert as_upper_factor([[1.0, 2.0], [0.0, 3.0]]).shape == (2, 2)
    with pytest.raises(InvalidMatrix, match="below the diagonal"):
        as_upper_factor([[1.0, 0.0], [1e-300, 1.0]])
    with pytest.raises(InvalidMatrix, match="strictly positive"):
        as_upper_factor([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(NonSquare):
        as_upper_factor([[1.0, 2.0]])


def test_as_integer_matrix():
    """Test integral floats are accepted and fractions refused."""
    z = as_integer_matrix([[1.0, 2.0], [0.0, 1.0]])
    assert z.dtype == np.int64
    with pytest.raises(InvalidMatrix):
        as_integer_matrix([[1.5, 0.0], [0.0, 1.0]])


def test_dumps_json_sorted():
    """Test keys are sorted and output ends with a newline."""
    text = dumps_json({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
