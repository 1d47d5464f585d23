#!/usr/bin/env python3
"""
besovlab command-line interface.

Subcommands simulate paths, estimate local times, compute dyadic Besov
profiles and verdicts, search alpha-LND constants, sweep the GRR
inequality and run full experiments from a JSON config. Every subcommand
accepts --config; flags override the corresponding config keys.

Exit codes: 0 success, 2 validation error, 3 numerical error, 1 I/O or
unexpected error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .besov.grr import grr_sweep
from .core.config import Config
from .core.errors import NumericalError
from .core.file_io import FileIO
from .harness.config import ExperimentConfig, config_from_dict, describe, load_config
from .harness.report import emit_report
from .harness.runner import run_experiment
from .lndcheck.alpha_lnd import SampleSpec, alphalnd_constant
from .lndcheck.berman import berman_lnd_sweep, variance_bounds_refinement
from .loctime.field import local_time_field
from .loctime.fourier import localtime_cross_check
from .loctime.occupation import occupation_residual
from .procsim.samplers import sample_paths


# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None,
                        help='Experiment config (JSON); flags override its keys')
    common.add_argument('--seed', type=int, default=None, help='Experiment seed (u64)')
    common.add_argument('--out', type=str, default=None, help='Output directory')
    common.add_argument('--replicates', type=int, default=None, help='Number of replicates')
    common.add_argument('--env', type=str, default=None,
                        help='Path to .env file (default: .env in current directory)')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--quiet', action='store_true', help='Only log warnings and errors')
    verbosity.add_argument('--verbose', action='store_true', help='Enable debug logging')

    process = common.add_argument_group('process (used when no --config is given)')
    process.add_argument('--kind', type=str, default='Bm', choices=['Bm', 'Fbm', 'BifBm', 'She'],
                         help='Process kind (default: Bm)')
    process.add_argument('--H', type=float, default=None, help='Hurst parameter')
    process.add_argument('--K', type=float, default=None, help='Bifractional parameter')
    process.add_argument('--d', type=int, default=1, help='State dimension (default: 1)')
    process.add_argument('--n-points', type=int, default=4097,
                         help='Grid points, 2^J + 1 (default: 4097)')
    process.add_argument('--t-max', type=float, default=1.0, help='Time horizon (default: 1)')
    process.add_argument('--sampler', type=str, default='auto',
                         choices=['auto', 'cholesky', 'circulant', 'she'],
                         help='Path sampler (default: auto)')
    return common


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='besovlab',
        description='Besov regularity of sample paths and local times.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Simulate 4 fractional Brownian paths
  besovlab simulate --kind Fbm --H 0.3 --n-points 4097 --replicates 4 --out out/paths

  # Run an experiment and write its report
  besovlab experiment --config configs/fbm_path_besov.json --out out/fbm
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('simulate', parents=[common], help='Simulate sample paths')

    lt = sub.add_parser('localtime', parents=[common], help='Estimate local-time fields')
    lt.add_argument('--bin-width', type=float, default=None,
                    help='Bin side (default: range * n^(-1/3))')
    lt.add_argument('--tests', nargs='+', default=['one', 'coordinate'],
                    help='Occupation-formula test functions (default: one coordinate)')
    lt.add_argument('--fourier-n', type=float, default=None,
                    help='Cross-check against the Fourier estimator with this cutoff (d=1)')

    besov = sub.add_parser('besov', parents=[common], help='Path Besov profiles and verdicts')
    besov.add_argument('--nu', type=float, nargs='+', default=None, help='Smoothness values')
    besov.add_argument('--p', type=float, default=4.0, help='Integrability exponent (default: 4)')
    besov.add_argument('--q', type=float, default=None, help='Summability exponent of the norm')
    besov.add_argument('--tau', type=float, default=0.1, help='Slope threshold (default: 0.1)')
    besov.add_argument('--j-max', type=int, default=None, help='Deepest dyadic level')
    besov.add_argument('--interactive', action='store_true', help='Also write plotly HTML charts')

    lnd = sub.add_parser('lnd-check', parents=[common], help='Local nondeterminism checks')
    lnd.add_argument('--m', type=int, default=2, help='Number of times (default: 2)')
    lnd.add_argument('--k', type=int, nargs='+', default=None,
                     help='Exponents k_j (default: 2 for every j)')
    lnd.add_argument('--alpha', type=float, default=None,
                     help='LND index (default: the process index)')
    lnd.add_argument('--mode', type=str, default='grid', choices=['grid', 'random'],
                     help='Sample mode (default: grid)')
    lnd.add_argument('--points-per-decade', type=int, default=4,
                     help='Frequency magnitudes per decade (default: 4)')
    lnd.add_argument('--n-samples', type=int, default=10000,
                     help='Random samples in random mode (default: 10000)')
    lnd.add_argument('--berman-queries', type=int, default=0,
                     help='Also sweep the Berman ratio over this many random queries')
    lnd.add_argument('--variance-bounds', action='store_true',
                     help='Also run the variance-bound refinement')

    grr = sub.add_parser('grr-check', parents=[common], help='GRR inequality sweep')
    grr.add_argument('--cases', type=int, default=200, help='Random functions (default: 200)')
    grr.add_argument('--grid', type=int, default=129, help='Samples per function (default: 129)')

    experiment = sub.add_parser('experiment', parents=[common], help='Run a config experiment')
    experiment.add_argument('--interactive', action='store_true',
                            help='Also write plotly HTML charts')

    return parser.parse_args(argv)


def validate_args(args: argparse.Namespace) -> None:
    """Validate command-line arguments.

    Raises:
        ValueError: If arguments are invalid.
        FileNotFoundError: If the config file does not exist.
    """
    if args.config and not Path(args.config).exists():
        raise FileNotFoundError(f"Config file not found: {args.config}")

    if args.command == 'experiment' and not args.config:
        raise ValueError("experiment requires --config")

    if args.replicates is not None and args.replicates < 1:
        raise ValueError("replicates must be positive")

    if args.out:
        out_path = Path(args.out)
        if out_path.exists() and not out_path.is_dir():
            raise ValueError(f"Output path exists but is not a directory: {args.out}")


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Experiment config from --config or the process flags, with overrides applied."""
    if args.config:
        config = load_config(args.config)
    else:
        data: Dict[str, Any] = {
            "kind": args.kind,
            "d": args.d,
            "n_points": args.n_points,
            "t_max": args.t_max,
            "sampler": args.sampler,
        }
        if args.H is not None:
            data["H"] = args.H
        if args.K is not None:
            data["K"] = args.K
        config = config_from_dict(data)
    return config.with_overrides(seed=args.seed, n_replicates=args.replicates, out_dir=args.out)


def run_simulate(config: ExperimentConfig) -> int:
    paths = sample_paths(config.descriptor, config.grid, config.seed,
                         config.n_replicates, config.sampler)
    for path in paths:
        target = Path(config.out_dir) / f"path_r{path.replicate:04d}.csv"
        path.to_csv(str(target))
    logger.info(f"Wrote {len(paths)} path(s) to {config.out_dir}")
    return EXIT_OK


def run_localtime(config: ExperimentConfig, args: argparse.Namespace) -> int:
    config.descriptor.require_local_time_regime()
    paths = sample_paths(config.descriptor, config.grid, config.seed,
                         config.n_replicates, config.sampler)
    residuals: Dict[str, Any] = {}
    for path in paths:
        suffix = "" if len(paths) == 1 else f"_r{path.replicate:04d}"
        field = local_time_field(path, args.bin_width)
        field.to_csv(str(Path(config.out_dir) / f"localtime{suffix}.csv"))
        record = {
            test: occupation_residual(path, field, test, path.t_max) for test in args.tests
        }
        if args.fourier_n is not None:
            check = localtime_cross_check(path, field.bin_width, args.fourier_n)
            record["fourier_cross_check"] = check.to_dict()
        residuals[str(path.replicate)] = record
        summary = ", ".join(f"{test}={record[test]:.3e}" for test in args.tests)
        logger.info(f"Replicate {path.replicate}: residuals {summary}")
    FileIO.write_json(str(Path(config.out_dir) / "residuals.json"), residuals)
    return EXIT_OK


def run_besov(config: ExperimentConfig, args: argparse.Namespace) -> int:
    data = config.to_dict()
    nus = args.nu or [config.descriptor.alpha]
    data["besov"] = [
        {"nu": nu, "p": args.p, **({"q": args.q} if args.q is not None else {})} for nu in nus
    ]
    data["tau"] = args.tau
    data["J_max"] = args.j_max if args.j_max is not None else config.grid.max_besov_level
    data["localtime"] = None
    data["lnd"] = None
    besov_config = config_from_dict(data)
    bundle = run_experiment(besov_config, max_workers=Config.load_from_env(args.env)["threads"])
    emit_report(bundle, besov_config.out_dir, interactive=args.interactive)
    _log_verdicts(bundle.aggregates)
    return EXIT_OK


def run_lnd(config: ExperimentConfig, args: argparse.Namespace) -> int:
    descriptor = config.descriptor
    k = args.k if args.k is not None else [2] * args.m
    alpha = args.alpha if args.alpha is not None else descriptor.alpha
    spec = SampleSpec(mode=args.mode, points_per_decade=args.points_per_decade,
                      n_samples=args.n_samples, seed=config.seed)
    report = alphalnd_constant(descriptor, args.m, k, alpha, spec).to_dict()
    report["sample_spec"] = spec.to_dict()
    if args.berman_queries > 0 and descriptor.d == 1:
        report["berman"] = berman_lnd_sweep(
            descriptor, args.m, args.berman_queries, config.seed
        ).to_dict()
    if args.variance_bounds:
        report["variance_bounds"] = variance_bounds_refinement(descriptor, alpha).to_dict()
    FileIO.write_json(str(Path(config.out_dir) / "lnd_report.json"), report)
    logger.info(f"Empirical alpha-LND constant: {report['c_empirical']:.6g} "
                f"over {report['n_samples']} samples")
    return EXIT_OK


def run_grr(config: ExperimentConfig, args: argparse.Namespace) -> int:
    cases = grr_sweep(args.cases, config.seed, n_points=args.grid)
    violations = sum(case.violations for case in cases)
    FileIO.write_json(str(Path(config.out_dir) / "grr_cases.json"), {
        "seed": config.seed,
        "n_cases": len(cases),
        "violations": violations,
        "cases": [case.to_dict() for case in cases],
    })
    logger.info(f"GRR: {violations} violation(s) over {len(cases)} case(s)")
    return EXIT_OK


def run_config_experiment(config: ExperimentConfig, args: argparse.Namespace) -> int:
    bundle = run_experiment(config, max_workers=Config.load_from_env(args.env)["threads"])
    manifest = emit_report(bundle, config.out_dir, interactive=args.interactive)
    _log_verdicts(bundle.aggregates)
    logger.info(f"Manifest lists {len(manifest)} file(s)")
    return EXIT_OK


def _log_verdicts(aggregates: Dict[str, Any]) -> None:
    logger.info("=" * 60)
    logger.info("VERDICT SUMMARY")
    logger.info("=" * 60)
    n = aggregates.get("n_replicates", 0)
    for key, summary in aggregates.get("verdicts", {}).items():
        logger.info(
            f"{key}: nu_hat {summary['nu_hat']['mean']:.4f} "
            f"(se {summary['nu_hat']['stderr']:.4f}), "
            f"bounded {summary['bounded']}/{n}, blow-up {summary['blows_up']}/{n}"
        )
    logger.info("=" * 60)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = parse_args(argv)

    try:
        runtime = Config.load_from_env(args.env)
        Config.validate_config(runtime)
        level = Config.log_level(runtime)
    except ValueError as e:
        logger.error(f"Validation error: {e}")
        return EXIT_VALIDATION

    if args.quiet:
        level = logging.WARNING
    elif args.verbose:
        level = logging.DEBUG
    logging.getLogger().setLevel(level)

    try:
        validate_args(args)
        config = build_config(args)

        logger.info("=" * 60)
        logger.info(f"besovlab {args.command}")
        for line in describe(config):
            logger.info(f"  {line}")
        logger.info(f"  Output: {config.out_dir}")
        logger.info("=" * 60)

        if args.command == 'simulate':
            return run_simulate(config)
        if args.command == 'localtime':
            return run_localtime(config, args)
        if args.command == 'besov':
            return run_besov(config, args)
        if args.command == 'lnd-check':
            return run_lnd(config, args)
        if args.command == 'grr-check':
            return run_grr(config, args)
        return run_config_experiment(config, args)

    except NumericalError as e:
        logger.error(f"Numerical error: {e}")
        return EXIT_NUMERICAL

    except ValueError as e:
        logger.error(f"Validation error: {e}")
        return EXIT_VALIDATION

    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_FAILURE

    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return EXIT_FAILURE


def cli_main():
    """CLI entry point wrapper for console script."""
    sys.exit(main())


if __name__ == '__main__':
    cli_main()
