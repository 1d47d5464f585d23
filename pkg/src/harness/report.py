"""
Report emission.

emit_report writes the tables, JSON records and charts of a bundle into
one directory and closes with manifest.json, which lists every other file
with its size and SHA-256 checksum.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List

from ..core.errors import ValidationError
from ..core.file_io import FileIO
from .bundle import ReportBundle
from .svg import profile_chart
from .visualization import create_profile_chart


logger = logging.getLogger(__name__)


PROFILE_HEADER = ["replicate", "statistic", "j", "A_j", "S_j"]


def _chart_values(bundle: ReportBundle, statistic: str) -> Dict[int, List[float]]:
    values = {}
    for replicate, profile in bundle.profile_series(statistic):
        data = profile.S if profile.S is not None else profile.A
        values[replicate] = [float(v) for v in data]
    return values


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except Exception as e:
        raise IOError(f"Failed to write {path.name}: {e}")


def emit_report(bundle: ReportBundle, out_dir: str, interactive: bool = False) -> List[Dict[str, Any]]:
    """
    Write the report files of a bundle.

    Files: profiles.csv, verdicts.json, aggregate.json, profile_<statistic>.svg
    per statistic (plus profile_<statistic>.html when interactive), and
    manifest.json listing all of them.

    Args:
        bundle: Experiment results
        out_dir: Output directory (created if missing)
        interactive: Also write plotly HTML charts

    Returns:
        Manifest entries (file, bytes, sha256)

    Raises:
        ValidationError: If the bundle has no replicate records
        IOError: If the directory or a file cannot be written
    """
    if len(bundle) == 0:
        raise ValidationError("cannot emit a report for an empty bundle")

    root = Path(out_dir)
    FileIO.ensure_directory(str(root))
    written: List[Path] = []

    profiles_path = root / "profiles.csv"
    FileIO.write_csv(str(profiles_path), PROFILE_HEADER, bundle.profile_rows())
    written.append(profiles_path)

    verdicts_path = root / "verdicts.json"
    FileIO.write_json(str(verdicts_path), bundle.verdicts_record())
    written.append(verdicts_path)

    aggregate_path = root / "aggregate.json"
    FileIO.write_json(str(aggregate_path), bundle.aggregate_record())
    written.append(aggregate_path)

    for statistic in bundle.statistics():
        values = _chart_values(bundle, statistic)
        svg_path = root / f"profile_{statistic}.svg"
        _write_text(svg_path, profile_chart(statistic, values))
        written.append(svg_path)
        if interactive:
            html_path = root / f"profile_{statistic}.html"
            _write_text(html_path, create_profile_chart(statistic, values))
            written.append(html_path)

    manifest = [FileIO.manifest_entry(str(path), str(root)) for path in written]
    FileIO.write_json(str(root / "manifest.json"), {
        "provenance": bundle.provenance,
        "files": manifest,
    })
    logger.info(f"Report written to {root} ({len(manifest)} files + manifest.json)")
    return manifest
