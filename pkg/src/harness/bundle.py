"""Replicate records and the report bundle of an experiment."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..besov.profile import DyadicProfile
from ..core.errors import ValidationError


SOFTWARE_VERSION = "0.1.0"


@dataclass
class ReplicateRecord:
    """Everything one replicate produced.

    Attributes:
        replicate: Replicate index.
        profiles: Dyadic profiles keyed by statistic name.
        verdicts: One record per (statistic, nu) classification.
        estimates: Critical exponent estimate per path profile.
        residuals: Occupation-formula residual per test function.
        metadata: Sampler and local-time provenance.
    """

    replicate: int
    profiles: Dict[str, DyadicProfile] = field(default_factory=dict)
    verdicts: List[Dict[str, Any]] = field(default_factory=list)
    estimates: Dict[str, float] = field(default_factory=dict)
    residuals: Dict[str, float] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "replicate": self.replicate,
            "verdicts": self.verdicts,
            "estimates": self.estimates,
            "residuals": self.residuals,
            "metadata": self.metadata,
        }


@dataclass
class ReportBundle:
    """Per-replicate results, their aggregates and the run provenance.

    Attributes:
        records: Replicate records sorted by replicate index.
        aggregates: Output of calculate_all_aggregates.
        provenance: Config hash, seed and software version.
        config: Canonical config the bundle was produced from.
        lnd: alpha-LND report, if the config asked for one.
        created_at: Wall-clock timestamp (not part of the comparable content).
    """

    records: List[ReplicateRecord] = field(default_factory=list)
    aggregates: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)
    lnd: Optional[Dict[str, Any]] = None
    created_at: Optional[str] = None

    def __post_init__(self):
        self.records = sorted(self.records, key=lambda r: r.replicate)
        if self.aggregates and self.aggregates.get("n_replicates") != len(self.records):
            raise ValidationError(
                f"aggregates cover {self.aggregates.get('n_replicates')} replicates, "
                f"bundle has {len(self.records)}"
            )

    def __len__(self) -> int:
        return len(self.records)

    @property
    def n_replicates(self) -> int:
        return len(self.records)

    def statistics(self) -> List[str]:
        """Profile statistic names in first-seen order."""
        names: List[str] = []
        for record in self.records:
            for name in record.profiles:
                if name not in names:
                    names.append(name)
        return names

    def profile_series(self, statistic: str) -> List[Tuple[int, DyadicProfile]]:
        """(replicate, profile) pairs of one statistic."""
        return [
            (record.replicate, record.profiles[statistic])
            for record in self.records
            if statistic in record.profiles
        ]

    def profile_rows(self) -> List[List[Any]]:
        """Rows ``replicate, statistic, j, A_j, S_j`` (S_j empty when absent)."""
        rows = []
        for record in self.records:
            for name, profile in record.profiles.items():
                for row in profile.rows():
                    s_value = row[2] if len(row) > 2 else ""
                    rows.append([record.replicate, name, row[0], row[1], s_value])
        return rows

    def verdicts_record(self) -> Dict[str, Any]:
        return {
            "provenance": self.provenance,
            "replicates": [record.to_dict() for record in self.records],
            "lnd": self.lnd,
        }

    def aggregate_record(self) -> Dict[str, Any]:
        return {"provenance": self.provenance, **self.aggregates}

    def to_dict(self, include_timestamp: bool = True) -> Dict[str, Any]:
        """Full content; without the timestamp two runs of one config compare equal."""
        data = {
            "config": self.config,
            "provenance": self.provenance,
            "replicates": [record.to_dict() for record in self.records],
            "profiles": {
                str(record.replicate): {
                    name: profile.to_dict() for name, profile in record.profiles.items()
                }
                for record in self.records
            },
            "aggregates": self.aggregates,
            "lnd": self.lnd,
        }
        if include_timestamp:
            data["created_at"] = self.created_at
        return data
