"""
Tests for the core utilities: file I/O, random sub-streams and errors.
"""

import hashlib
import json

import numpy as np
import pytest

from src.core.errors import (
    BesovLabError,
    NumericalError,
    ResourceError,
    TheoremPreconditionError,
    UnsupportedError,
    ValidationError,
)
from src.core.file_io import FileIO, format_float
from src.core.rng import normalize_seed, substream, substreams


class TestFileIO:
    """Test cases for FileIO."""

    def test_json_round_trip(self, tmp_path):
        """Test writing and reading a JSON document."""
        path = tmp_path / "nested" / "record.json"
        FileIO.write_json(str(path), {"b": 1, "a": [0.5, None]})

        assert FileIO.read_json(str(path)) == {"a": [0.5, None], "b": 1}
        assert path.read_text(encoding="utf-8").index('"a"') < path.read_text(encoding="utf-8").index('"b"')

    def test_read_missing_json(self, tmp_path):
        """Test reading a missing JSON file."""
        with pytest.raises(FileNotFoundError):
            FileIO.read_json(str(tmp_path / "absent.json"))

    def test_read_invalid_json(self, tmp_path):
        """Test that malformed JSON raises JSONDecodeError."""
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(json.JSONDecodeError):
            FileIO.read_json(str(path))

    def test_csv_keeps_float_precision(self, tmp_path):
        """Test that floats survive the CSV round trip exactly."""
        value = 1.0 / 3.0
        path = tmp_path / "table.csv"
        FileIO.write_csv(str(path), ["j", "value", "label"], [[0, value, "x"]])

        header, rows = FileIO.read_csv(str(path))

        assert header == ["j", "value", "label"]
        assert rows == [["0", format_float(value), "x"]]
        assert float(rows[0][1]) == value

    def test_checksum(self, tmp_path):
        """Test the SHA-256 digest of a file."""
        path = tmp_path / "data.bin"
        path.write_bytes(b"besov")

        assert FileIO.checksum(str(path)) == hashlib.sha256(b"besov").hexdigest()

    def test_manifest_entry(self, tmp_path):
        """Test the manifest record of a file."""
        path = tmp_path / "sub" / "data.txt"
        path.parent.mkdir()
        path.write_bytes(b"abc")

        entry = FileIO.manifest_entry(str(path), str(tmp_path))

        assert entry["file"] == "sub/data.txt"
        assert entry["bytes"] == 3
        assert entry["sha256"] == hashlib.sha256(b"abc").hexdigest()

    def test_ensure_directory(self, tmp_path):
        """Test creating nested directories."""
        target = tmp_path / "a" / "b"
        FileIO.ensure_directory(str(target))

        assert target.is_dir()


class TestRng:
    """Test cases for random sub-streams."""

    def test_normalize_seed(self):
        """Test the reduction to an unsigned 64-bit seed."""
        assert normalize_seed(42) == 42
        assert normalize_seed(-1) == 2 ** 64 - 1

    def test_rejects_non_integer_seed(self):
        """Test that floats and booleans are not seeds."""
        with pytest.raises(ValueError):
            normalize_seed(1.5)
        with pytest.raises(ValueError):
            normalize_seed(True)

    def test_substream_is_deterministic(self):
        """Test that a stream depends only on its key."""
        first = substream(7, 2, 0).standard_normal(5)
        substream(7, 0, 0).standard_normal(100)
        second = substream(7, 2, 0).standard_normal(5)

        np.testing.assert_array_equal(first, second)

    def test_keys_give_distinct_streams(self):
        """Test that different keys and seeds give different draws."""
        a = substream(7, 0).standard_normal(4)
        b = substream(7, 1).standard_normal(4)
        c = substream(8, 0).standard_normal(4)

        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_substreams(self):
        """Test creating several streams at once."""
        streams = substreams(3, [(0, 0), (0, 1)])

        assert len(streams) == 2
        np.testing.assert_array_equal(
            streams[1].standard_normal(3), substream(3, 0, 1).standard_normal(3)
        )


class TestErrors:
    """Test cases for the exception hierarchy."""

    def test_hierarchy(self):
        """Test the base classes of every error."""
        assert issubclass(ValidationError, ValueError)
        assert issubclass(ValidationError, BesovLabError)
        for cls in (TheoremPreconditionError, UnsupportedError, ResourceError):
            assert issubclass(cls, ValidationError)
        assert issubclass(NumericalError, ArithmeticError)
        assert not issubclass(NumericalError, ValueError)

    def test_message_without_replicate(self):
        """Test the plain message."""
        assert str(ValidationError("bad H")) == "bad H"

    def test_message_with_replicate(self):
        """Test that an attached replicate prefixes the message."""
        error = NumericalError("not positive definite")
        error.replicate = 4

        assert str(error) == "replicate 4: not positive definite"
