"""
Tests for report emission and the profile charts.
"""

import math

import numpy as np
import pytest

from src.core.errors import ValidationError
from src.core.file_io import FileIO
from src.harness.bundle import ReportBundle
from src.harness.config import config_from_dict
from src.harness.report import PROFILE_HEADER, emit_report
from src.harness.runner import run_experiment
from src.harness.svg import line_chart, log2_series, mean_series, profile_chart
from src.harness.visualization import create_profile_chart


@pytest.fixture(scope="module")
def bundle():
    config = config_from_dict({
        "kind": "Fbm",
        "H": 0.4,
        "n_points": 257,
        "seed": 5,
        "n_replicates": 2,
    })
    return run_experiment(config, max_workers=2)


class TestEmitReport:
    """Test cases for emit_report function."""

    def test_manifest_lists_files(self, bundle, tmp_path):
        """Test that the manifest lists every report file except itself."""
        manifest = emit_report(bundle, str(tmp_path))

        names = [entry["file"] for entry in manifest]
        assert names == ["profiles.csv", "verdicts.json", "aggregate.json", "profile_path_p4.svg"]
        assert (tmp_path / "manifest.json").exists()

    def test_checksums_match_files(self, bundle, tmp_path):
        """Test that manifest sizes and checksums describe the written files."""
        manifest = emit_report(bundle, str(tmp_path))

        for entry in manifest:
            path = tmp_path / entry["file"]
            assert entry["bytes"] == path.stat().st_size
            assert entry["sha256"] == FileIO.checksum(str(path))

    def test_manifest_document(self, bundle, tmp_path):
        """Test the provenance stored with the manifest."""
        emit_report(bundle, str(tmp_path))

        document = FileIO.read_json(str(tmp_path / "manifest.json"))
        assert document["provenance"]["seed"] == 5
        assert len(document["files"]) == 4

    def test_interactive_adds_html(self, bundle, tmp_path):
        """Test that interactive mode adds a plotly chart per statistic."""
        manifest = emit_report(bundle, str(tmp_path), interactive=True)

        names = [entry["file"] for entry in manifest]
        assert len(names) == 5
        assert "profile_path_p4.html" in names

    def test_profiles_csv(self, bundle, tmp_path):
        """Test the profile table header and row count."""
        emit_report(bundle, str(tmp_path))

        header, rows = FileIO.read_csv(str(tmp_path / "profiles.csv"))
        assert header == PROFILE_HEADER
        assert len(rows) == 2 * 7
        assert rows[0][:3] == ["0", "path_p4", "0"]

    def test_emission_is_reproducible(self, bundle, tmp_path):
        """Test that emitting one bundle twice gives identical checksums."""
        first = emit_report(bundle, str(tmp_path / "a"))
        second = emit_report(bundle, str(tmp_path / "b"))

        assert first == second

    def test_empty_bundle(self, tmp_path):
        """Test that an empty bundle is rejected."""
        with pytest.raises(ValidationError, match="empty bundle"):
            emit_report(ReportBundle(), str(tmp_path))


class TestSvgCharts:
    """Test cases for the SVG charts."""

    def test_log2_series(self):
        """Test that non-positive values have no logarithm."""
        values = log2_series([4.0, 0.0, -1.0, 0.5])

        assert values[0] == pytest.approx(2.0)
        assert math.isnan(values[1])
        assert math.isnan(values[2])
        assert values[3] == pytest.approx(-1.0)

    def test_mean_series_skips_nan(self):
        """Test the level-wise mean over finite entries."""
        mean = mean_series([np.array([1.0, np.nan]), np.array([3.0, np.nan])])

        assert mean[0] == pytest.approx(2.0)
        assert math.isnan(mean[1])

    def test_gap_breaks_polyline(self):
        """Test that a NaN splits a series into two polylines."""
        svg = line_chart({"series": [1.0, 2.0, float("nan"), 3.0, 4.0]}, title="gap")

        assert svg.startswith("<svg")
        assert svg.count("<polyline") == 2

    def test_title_is_escaped(self):
        """Test that markup in titles is escaped."""
        svg = line_chart({"a": [1.0, 2.0]}, title="a<b")

        assert "a&lt;b" in svg

    def test_profile_chart(self):
        """Test one polyline per replicate plus the mean."""
        svg = profile_chart("path_p4", {0: [1.0, 2.0, 4.0], 1: [2.0, 4.0, 8.0]})

        assert svg.count("<polyline") == 3
        assert "<title>mean</title>" in svg


class TestPlotlyChart:
    """Test cases for the interactive chart."""

    def test_create_profile_chart(self):
        """Test that the chart is plotly HTML."""
        html = create_profile_chart("path_p4", {0: [1.0, 2.0, 4.0], 1: [2.0, 0.0, 8.0]})

        assert isinstance(html, str)
        assert "plotly" in html.lower()
        assert "profile-path_p4" in html
