"""
Aggregation of per-replicate results.

This module reduces the replicate records of an experiment to summary
statistics (count, mean, standard error, min, max) per statistic and the
verdict counts used for replicate-majority reporting. Every reduction
sorts its inputs by replicate index first, so the result does not depend
on the order in which replicates finished.
"""

import math
from typing import Any, Dict, Iterable, List

import numpy as np


def calculate_summary(values: Iterable[float]) -> Dict[str, float]:
    """
    Summarize a sample of replicate values.

    Args:
        values: One value per replicate

    Returns:
        Dictionary with count, mean, stderr (0 for a single value), min and max
    """
    data = np.asarray(list(values), dtype=float)
    count = int(len(data))
    if count == 0:
        return {"count": 0, "mean": math.nan, "stderr": math.nan, "min": math.nan, "max": math.nan}
    stderr = float(np.std(data, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
    return {
        "count": count,
        "mean": float(np.mean(data)),
        "stderr": stderr,
        "min": float(np.min(data)),
        "max": float(np.max(data)),
    }


def verdict_key(verdict: Dict[str, Any]) -> str:
    """Aggregate key of a verdict record, e.g. ``path_p4@nu=0.5``."""
    return f"{verdict['statistic']}@nu={verdict['nu']:g}"


def calculate_verdict_counts(verdicts: List[Dict[str, Any]]) -> Dict[str, int]:
    """
    Count bounded / blow-up / little-Besov outcomes.

    Args:
        verdicts: Verdict records of one key across replicates

    Returns:
        Dictionary of outcome counts
    """
    return {
        "bounded": sum(1 for v in verdicts if v["bounded"]),
        "blows_up": sum(1 for v in verdicts if v["blows_up"]),
        "little_besov": sum(1 for v in verdicts if v["little_besov"]),
    }


def calculate_all_aggregates(records: List[Any]) -> Dict[str, Any]:
    """
    Aggregate every statistic of an experiment.

    Args:
        records: ReplicateRecord objects (any order)

    Returns:
        Dictionary with ``estimates`` (nu_hat per profile), ``verdicts``
        (slope and nu_hat summaries plus outcome counts per statistic and nu)
        and ``residuals`` (occupation residual per test function)
    """
    ordered = sorted(records, key=lambda r: r.replicate)

    estimates: Dict[str, List[float]] = {}
    verdicts: Dict[str, List[Dict[str, Any]]] = {}
    residuals: Dict[str, List[float]] = {}
    for record in ordered:
        for name, value in record.estimates.items():
            estimates.setdefault(name, []).append(value)
        for verdict in record.verdicts:
            verdicts.setdefault(verdict_key(verdict), []).append(verdict)
        for name, value in record.residuals.items():
            residuals.setdefault(name, []).append(value)

    return {
        "n_replicates": len(ordered),
        "estimates": {
            name: calculate_summary(values) for name, values in sorted(estimates.items())
        },
        "verdicts": {
            key: {
                "statistic": items[0]["statistic"],
                "nu": items[0]["nu"],
                "slope": calculate_summary(v["slope"] for v in items),
                "nu_hat": calculate_summary(v["nu_hat"] for v in items),
                **calculate_verdict_counts(items),
            }
            for key, items in sorted(verdicts.items())
        },
        "residuals": {
            name: calculate_summary(values) for name, values in sorted(residuals.items())
        },
    }
