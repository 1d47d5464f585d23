"""
Plain SVG line charts of dyadic profiles.

The charts are written directly as SVG markup so report emission needs no
rendering backend: log2 of the statistic against the level j, one thin
polyline per replicate and a thick polyline for the replicate mean.
Non-positive values have no logarithm; they break the polyline.
"""

import math
from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np


WIDTH = 640
HEIGHT = 400
MARGIN = 56
REPLICATE_COLOR = "#6c757d"
MEAN_COLOR = "#dc3545"


def log2_series(values: Sequence[float]) -> np.ndarray:
    """log2 of the values, NaN where a value is not positive."""
    data = np.asarray(values, dtype=float)
    out = np.full(data.shape, np.nan)
    positive = data > 0
    out[positive] = np.log2(data[positive])
    return out


def mean_series(series: List[np.ndarray]) -> np.ndarray:
    """Level-wise mean over the finite entries of equally long series."""
    stacked = np.vstack(series)
    finite = np.isfinite(stacked)
    counts = finite.sum(axis=0)
    sums = np.where(finite, stacked, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def _segments(x: np.ndarray, y: np.ndarray) -> List[List[Tuple[float, float]]]:
    segments: List[List[Tuple[float, float]]] = [[]]
    for xi, yi in zip(x, y):
        if np.isfinite(yi):
            segments[-1].append((float(xi), float(yi)))
        elif segments[-1]:
            segments.append([])
    return [s for s in segments if s]


def _ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + k * step for k in range(count)]


def line_chart(series: Dict[str, Sequence[float]], title: str,
               x_label: str = "j", y_label: str = "log2 statistic",
               mean_label: Optional[str] = "mean") -> str:
    """Render y-series against their index 0..J as an SVG document.

    Args:
        series: Label to y values (already on the plotted scale).
        title: Chart title.
        mean_label: Label of the series drawn thick; None draws all alike.

    Returns:
        SVG markup.
    """
    arrays = {label: np.asarray(values, dtype=float) for label, values in series.items()}
    finite = np.concatenate([a[np.isfinite(a)] for a in arrays.values()] or [np.zeros(0)])
    n_levels = max((len(a) for a in arrays.values()), default=1)
    y_lo, y_hi = (float(finite.min()), float(finite.max())) if len(finite) else (0.0, 1.0)
    if math.isclose(y_lo, y_hi):
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_hi = max(n_levels - 1, 1)

    def sx(x: float) -> float:
        return MARGIN + (WIDTH - 2 * MARGIN) * x / x_hi

    def sy(y: float) -> float:
        return HEIGHT - MARGIN - (HEIGHT - 2 * MARGIN) * (y - y_lo) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{MARGIN / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(x_label)}</text>',
        f'<text x="14" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 14 {HEIGHT / 2:.1f})">{escape(y_label)}</text>',
    ]
    for j in range(n_levels):
        parts.append(
            f'<text x="{sx(j):.1f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{j}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        parts.append(
            f'<text x="{MARGIN - 6}" y="{sy(tick) + 3:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{tick:.2f}</text>'
        )

    for label, values in arrays.items():
        is_mean = label == mean_label
        color = MEAN_COLOR if is_mean else REPLICATE_COLOR
        width = 2.5 if is_mean else 1.0
        opacity = 1.0 if is_mean else 0.6
        x = np.arange(len(values))
        for segment in _segments(x, values):
            points = " ".join(f"{sx(px):.2f},{sy(py):.2f}" for px, py in segment)
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
                f'stroke-opacity="{opacity}" points="{points}">'
                f'<title>{escape(label)}</title></polyline>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def profile_chart(statistic: str, replicate_values: Dict[int, Sequence[float]]) -> str:
    """Chart of log2 statistic per replicate plus the mean."""
    series = {
        f"replicate {r}": log2_series(values)
        for r, values in sorted(replicate_values.items())
    }
    series["mean"] = mean_series(list(series.values()))
    return line_chart(series, title=statistic, y_label=f"log2 {statistic}")
