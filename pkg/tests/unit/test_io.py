"""
Unit tests for file output, boundary CSV parsing and SVG figures.
"""
import math

import pytest

from app.core.exceptions import CsvFormatError
from app.models.numrange import SupportSample
from app.utils.io import (
    CSV_COLUMNS,
    emit,
    read_boundary_csv,
    samples_to_csv,
    to_json,
    write_atomic,
)
from app.utils.plotting import boundary_svg

SAMPLES = [
    SupportSample(alpha=0.0, lam=1.0, point=complex(1.0, 0.0)),
    SupportSample(alpha=2.0 * math.pi / 3, lam=1.0, point=complex(-0.5, math.sqrt(3) / 2)),
    SupportSample(alpha=4.0 * math.pi / 3, lam=1.0, point=complex(-0.5, -math.sqrt(3) / 2)),
]


@pytest.mark.unit
class TestWriting:
    """Atomic writes and standard output."""

    def test_write_atomic(self, tmp_path):
        """The file appears with its content and no temporary file is left behind."""
        target = tmp_path / "nested" / "out.txt"
        write_atomic(target, "hello\n")

        assert target.read_text() == "hello\n"
        assert [p.name for p in target.parent.iterdir()] == ["out.txt"]

        print("✓ Atomic write")

    def test_overwrite(self, tmp_path):
        """A second write replaces the first."""
        target = tmp_path / "out.bin"
        write_atomic(target, b"one")
        write_atomic(target, b"two")

        assert target.read_bytes() == b"two"

        print("✓ Atomic overwrite")

    def test_emit_stdout(self, capsys):
        """Without a path, text goes to standard output."""
        emit("a,b\n")

        assert capsys.readouterr().out == "a,b\n"

        print("✓ emit writes to stdout")


@pytest.mark.unit
class TestBoundaryCsv:
    """Boundary CSV layout and parsing."""

    def test_layout(self):
        """Header alpha,lambda,x,y and LF line endings."""
        text = samples_to_csv(SAMPLES)
        lines = text.split("\n")

        assert lines[0] == ",".join(CSV_COLUMNS)
        assert "\r" not in text
        assert len(lines) == len(SAMPLES) + 2 and lines[-1] == ""
        assert lines[1] == "0,1,1,0"

        print("✓ CSV layout")

    def test_reads_back_exactly(self, tmp_path):
        """17 significant digits reproduce every float."""
        path = tmp_path / "boundary.csv"
        write_atomic(path, samples_to_csv(SAMPLES))

        assert read_boundary_csv(path) == SAMPLES

        print("✓ CSV values read back bit-for-bit")

    @pytest.mark.parametrize(
        "content",
        [
            "",
            "alpha,lambda,x,y\n",
            "alpha,lambda,x\n0,1,1\n",
            "alpha,lambda,x,y\n0,1,abc,0\n",
            "alpha,lambda,x,y\n0,nan,1,0\n",
        ],
    )
    def test_malformed(self, tmp_path, content):
        """Empty files, wrong headers and non-finite or non-numeric values are rejected."""
        path = tmp_path / "bad.csv"
        path.write_text(content)

        with pytest.raises(CsvFormatError):
            read_boundary_csv(path)

        print(f"✓ Rejected {content!r}")

    def test_missing(self, tmp_path):
        """A missing file is a CSV format error."""
        with pytest.raises(CsvFormatError):
            read_boundary_csv(tmp_path / "absent.csv")

        print("✓ Missing file rejected")


@pytest.mark.unit
class TestJson:
    """Stable JSON text."""

    def test_sorted_keys(self):
        """Keys are sorted and the text ends with a newline."""
        text = to_json({"b": 1, "a": [1.5, 2]})

        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("}\n")

        print("✓ Sorted JSON")

    def test_nan_rejected(self):
        """NaN has no JSON spelling."""
        with pytest.raises(ValueError):
            to_json({"x": float("nan")})

        print("✓ NaN rejected")


@pytest.mark.unit
class TestSvg:
    """Static boundary figures."""

    def test_deterministic(self):
        """Identical inputs give identical bytes."""
        first = boundary_svg(SAMPLES, overlay=SAMPLES, foci=[1.0, -1.0], title="triangle")
        second = boundary_svg(SAMPLES, overlay=SAMPLES, foci=[1.0, -1.0], title="triangle")

        assert first == second
        assert first.lstrip().startswith(b"<?xml")
        assert b"triangle" in first

        print(f"✓ SVG is byte-stable ({len(first)} bytes)")

    def test_without_overlay(self):
        """The closed-form overlay is optional."""
        svg = boundary_svg(SAMPLES)

        assert b"closed form" not in svg
        assert b"numeric" in svg

        print("✓ SVG without overlay")
