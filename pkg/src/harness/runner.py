"""
Experiment runner.

Each replicate is simulated and analysed independently (its random draws
come from the (seed, replicate) sub-stream), so replicates run
concurrently on a thread pool and the bundle does not depend on the
order in which they are scheduled or finish.
"""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import List, Optional, Sequence

from ..besov.localtime_stat import uniform_localtime_statistic
from ..besov.profile import besov_pq_norm, dyadic_profile
from ..besov.regularity import MIN_LEVELS, classify_regularity, estimate_exponent
from ..core.config import Config
from ..core.errors import BesovLabError, ValidationError
from ..lndcheck.alpha_lnd import SampleSpec, alphalnd_constant
from ..loctime.field import default_bin_width, local_time_field
from ..loctime.occupation import occupation_residual
from ..procsim.samplers import sample_path
from .aggregate import calculate_all_aggregates
from .bundle import SOFTWARE_VERSION, ReplicateRecord, ReportBundle
from .config import ExperimentConfig, config_hash


logger = logging.getLogger(__name__)


def path_statistic(p: float) -> str:
    return f"path_p{p:g}"


def localtime_statistic(q: float, nu: float) -> str:
    return f"localtime_q{q:g}_nu{nu:g}"


def _verdict(statistic: str, profile, nu: float, tau: float, **extra) -> dict:
    verdict = classify_regularity(profile, nu, tau)
    return {"statistic": statistic, **extra, **verdict.to_dict()}


def run_replicate(config: ExperimentConfig, replicate: int) -> ReplicateRecord:
    """
    Simulate one replicate and compute its profiles and verdicts.

    Args:
        config: Validated experiment
        replicate: Replicate index

    Returns:
        ReplicateRecord of the replicate
    """
    path = sample_path(config.descriptor, config.grid, config.seed, replicate, config.sampler)
    record = ReplicateRecord(replicate=replicate, metadata={"path": dict(path.metadata)})
    classify = config.J_max + 1 >= MIN_LEVELS
    if not classify:
        logger.warning(
            f"J_max={config.J_max} gives fewer than {MIN_LEVELS} levels; "
            f"profiles are recorded without verdicts"
        )

    for p in sorted({query.p for query in config.besov}):
        name = path_statistic(p)
        profile = dyadic_profile(path.values, p, config.J_max)
        record.profiles[name] = profile
        if classify:
            record.estimates[name] = estimate_exponent(profile)

    if classify:
        for query in config.besov:
            name = path_statistic(query.p)
            extra = {"p": query.p}
            if query.q is not None:
                norm = besov_pq_norm(record.profiles[name], query.nu, query.q)
                extra.update(q=query.q, besov_norm=norm.value,
                             truncation_level=norm.truncation_level)
            record.verdicts.append(
                _verdict(name, record.profiles[name], query.nu, config.tau, **extra)
            )

    settings = config.localtime
    if settings is not None:
        bin_width = settings.bin_width
        if bin_width is None:
            bin_width = default_bin_width(path.values)
            if bin_width > 2.0 ** (-settings.J_max / 2.0):
                logger.warning(
                    f"replicate {replicate}: default bin width {bin_width:.3g} exceeds "
                    f"2^(-J_max/2) = {2.0 ** (-settings.J_max / 2.0):.3g}; set localtime.bin_width "
                    f"to resolve the finest windows"
                )
        field = local_time_field(path, bin_width)
        record.metadata["localtime"] = field.metadata_record()
        for test in settings.residual_tests:
            record.residuals[test] = occupation_residual(path, field, test, path.t_max)
        for nu in settings.nu:
            name = localtime_statistic(settings.q, nu)
            profile = uniform_localtime_statistic(field, settings.q, nu, settings.J_max)
            record.profiles[name] = profile
            if len(profile) >= MIN_LEVELS:
                record.verdicts.append(
                    _verdict(name, profile, nu, config.tau, q=settings.q)
                )

    return record


def _lnd_report(config: ExperimentConfig) -> Optional[dict]:
    if config.lnd is None:
        return None
    spec = SampleSpec(
        mode=config.lnd.mode,
        points_per_decade=config.lnd.points_per_decade,
        n_samples=config.lnd.n_samples,
        seed=config.seed,
    )
    report = alphalnd_constant(config.descriptor, config.lnd.m, list(config.lnd.k),
                               config.lnd.alpha, spec)
    return report.to_dict()


async def run_replicates(
    config: ExperimentConfig,
    replicate_order: Optional[Sequence[int]] = None,
    max_workers: Optional[int] = None,
) -> List[ReplicateRecord]:
    """
    Run replicates concurrently on a thread pool.

    Args:
        config: Validated experiment
        replicate_order: Scheduling order (a permutation of 0..n-1); defaults to ascending
        max_workers: Thread cap; defaults to BESOVLAB_THREADS

    Returns:
        Records sorted by replicate index

    Raises:
        BesovLabError: The first failing replicate's error, with its index attached
    """
    order = list(range(config.n_replicates)) if replicate_order is None else list(replicate_order)
    if sorted(order) != list(range(config.n_replicates)):
        raise ValidationError(
            f"replicate_order must be a permutation of 0..{config.n_replicates - 1}"
        )
    workers = max_workers or Config.load_from_env()["threads"]
    semaphore = asyncio.Semaphore(workers)
    loop = asyncio.get_running_loop()

    with ThreadPoolExecutor(max_workers=workers) as executor:

        async def run_with_semaphore(replicate: int, idx: int) -> ReplicateRecord:
            async with semaphore:
                logger.info(f"Replicate {idx + 1}/{len(order)} (index {replicate})")
                return await loop.run_in_executor(executor, run_replicate, config, replicate)

        tasks = [run_with_semaphore(replicate, idx) for idx, replicate in enumerate(order)]
        results = await asyncio.gather(*tasks, return_exceptions=True)

    failures = sorted(
        (replicate, result) for replicate, result in zip(order, results)
        if isinstance(result, Exception)
    )
    for replicate, error in failures:
        logger.error(f"Replicate {replicate} failed with exception: {error}")
    if failures:
        replicate, error = failures[0]
        if isinstance(error, BesovLabError):
            error.replicate = replicate
        raise error

    return sorted(results, key=lambda r: r.replicate)


def build_bundle(config: ExperimentConfig, records: List[ReplicateRecord]) -> ReportBundle:
    """Aggregate records into a bundle with provenance."""
    return ReportBundle(
        records=records,
        aggregates=calculate_all_aggregates(records),
        provenance={
            "config_hash": config_hash(config),
            "seed": int(config.seed),
            "software_version": SOFTWARE_VERSION,
            "descriptor": config.descriptor.label(),
        },
        config=config.to_dict(),
        lnd=_lnd_report(config),
        created_at=datetime.now().isoformat(),
    )


async def run_experiment_async(
    config: ExperimentConfig,
    replicate_order: Optional[Sequence[int]] = None,
    max_workers: Optional[int] = None,
) -> ReportBundle:
    """Async form of run_experiment."""
    records = await run_replicates(config, replicate_order, max_workers)
    return build_bundle(config, records)


def run_experiment(
    config: ExperimentConfig,
    replicate_order: Optional[Sequence[int]] = None,
    max_workers: Optional[int] = None,
) -> ReportBundle:
    """
    Run every replicate of an experiment and aggregate the results.

    Args:
        config: Validated experiment
        replicate_order: Scheduling order; the bundle is identical for every order
        max_workers: Thread cap; defaults to BESOVLAB_THREADS

    Returns:
        ReportBundle with one record per replicate
    """
    logger.info(f"Running {config.n_replicates} replicate(s) of {config.descriptor.label()}")
    bundle = asyncio.run(run_experiment_async(config, replicate_order, max_workers))
    logger.info(f"Experiment complete: {len(bundle)} replicate record(s)")
    return bundle
