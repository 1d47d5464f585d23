"""Experiment config validator for validating JSON experiment files."""

from numbers import Integral, Real
from typing import Any, Dict, Tuple


def _is_int(value: Any) -> bool:
    return isinstance(value, Integral) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


class ConfigValidator:
    """Validates the structure and value ranges of an experiment config."""

    VALID_KINDS = {"Bm", "Fbm", "BifBm", "She"}
    VALID_SAMPLERS = {"auto", "cholesky", "circulant", "she"}
    REQUIRED_FIELDS = {"kind", "n_points"}
    KNOWN_FIELDS = {
        "kind", "H", "K", "d", "n_points", "t_max", "seed", "n_replicates",
        "sampler", "she", "besov", "tau", "J_max", "localtime", "lnd", "out_dir",
    }

    @staticmethod
    def validate_structure(config: Dict) -> Tuple[bool, str]:
        """Validate the top-level shape of a config.

        Args:
            config: Parsed JSON object.

        Returns:
            Tuple of (is_valid, error_message). If valid, error_message is empty.
        """
        if not isinstance(config, dict):
            return False, "Config must be a JSON object"

        missing_fields = ConfigValidator.REQUIRED_FIELDS - set(config.keys())
        if missing_fields:
            return False, f"Missing required fields: {', '.join(sorted(missing_fields))}"

        unknown_fields = set(config.keys()) - ConfigValidator.KNOWN_FIELDS
        if unknown_fields:
            return False, f"Unknown fields: {', '.join(sorted(unknown_fields))}"

        if config["kind"] not in ConfigValidator.VALID_KINDS:
            valid = ", ".join(sorted(ConfigValidator.VALID_KINDS))
            return False, f"Invalid field 'kind': {config['kind']!r}. Must be one of: {valid}"

        return True, ""

    @staticmethod
    def validate_process(config: Dict) -> Tuple[bool, str]:
        """Validate the process and grid fields."""
        for name in ("H", "K"):
            if name in config and config[name] is not None and not _is_number(config[name]):
                return False, f"Field '{name}' must be a number"

        if config["kind"] in ("Fbm", "BifBm") and config.get("H") is None:
            return False, f"Field 'H' is required for kind {config['kind']}"

        if config["kind"] == "BifBm" and config.get("K") is None:
            return False, "Field 'K' is required for kind BifBm"

        d = config.get("d", 1)
        if not _is_int(d) or not 1 <= d <= 3:
            return False, "Field 'd' must be an integer between 1 and 3"

        if not _is_int(config["n_points"]):
            return False, "Field 'n_points' must be an integer"

        t_max = config.get("t_max", 1.0)
        if not _is_number(t_max) or t_max <= 0:
            return False, "Field 't_max' must be a positive number"

        she = config.get("she")
        if she is not None and not isinstance(she, dict):
            return False, "Field 'she' must be an object"

        return True, ""

    @staticmethod
    def validate_run(config: Dict) -> Tuple[bool, str]:
        """Validate seed, replicate count, sampler and classification settings."""
        if "seed" in config and not _is_int(config["seed"]):
            return False, "Field 'seed' must be an integer"

        n_replicates = config.get("n_replicates", 1)
        if not _is_int(n_replicates) or n_replicates < 1:
            return False, "Field 'n_replicates' must be an integer >= 1"

        sampler = config.get("sampler", "auto")
        if sampler not in ConfigValidator.VALID_SAMPLERS:
            valid = ", ".join(sorted(ConfigValidator.VALID_SAMPLERS))
            return False, f"Invalid field 'sampler': {sampler!r}. Must be one of: {valid}"

        tau = config.get("tau", 0.1)
        if not _is_number(tau) or tau <= 0:
            return False, "Field 'tau' must be a positive number"

        J_max = config.get("J_max")
        if J_max is not None and (not _is_int(J_max) or J_max < 0):
            return False, "Field 'J_max' must be a non-negative integer"

        if "out_dir" in config and not isinstance(config["out_dir"], str):
            return False, "Field 'out_dir' must be a string"

        return True, ""

    @staticmethod
    def validate_besov(config: Dict) -> Tuple[bool, str]:
        """Validate the list of (nu, p, q) path queries."""
        queries = config.get("besov", [])
        if not isinstance(queries, list):
            return False, "Field 'besov' must be a list"

        for i, query in enumerate(queries):
            if not isinstance(query, dict):
                return False, f"Field 'besov[{i}]' must be an object"
            if not _is_number(query.get("nu")) or query["nu"] < 0:
                return False, f"Field 'besov[{i}].nu' must be a non-negative number"
            if not _is_number(query.get("p")) or query["p"] < 1:
                return False, f"Field 'besov[{i}].p' must be a number >= 1"
            q = query.get("q")
            if q is not None and (not _is_number(q) or q < 1):
                return False, f"Field 'besov[{i}].q' must be a number >= 1"

        return True, ""

    @staticmethod
    def validate_localtime(config: Dict) -> Tuple[bool, str]:
        """Validate the optional local-time block."""
        settings = config.get("localtime")
        if settings is None:
            return True, ""
        if not isinstance(settings, dict):
            return False, "Field 'localtime' must be an object or null"

        bin_width = settings.get("bin_width")
        if bin_width is not None and (not _is_number(bin_width) or bin_width <= 0):
            return False, "Field 'localtime.bin_width' must be a positive number"

        q = settings.get("q", 1.0)
        if not _is_number(q) or q < 1:
            return False, "Field 'localtime.q' must be a number >= 1"

        nu = settings.get("nu", [])
        if not isinstance(nu, list) or not all(_is_number(v) and v >= 0 for v in nu):
            return False, "Field 'localtime.nu' must be a list of non-negative numbers"

        J_max = settings.get("J_max")
        if J_max is not None and (not _is_int(J_max) or J_max < 0):
            return False, "Field 'localtime.J_max' must be a non-negative integer"

        tests = settings.get("residual_tests", [])
        if not isinstance(tests, list) or not all(isinstance(t, str) for t in tests):
            return False, "Field 'localtime.residual_tests' must be a list of names"

        return True, ""

    @staticmethod
    def validate_lnd(config: Dict) -> Tuple[bool, str]:
        """Validate the optional alpha-LND block."""
        settings = config.get("lnd")
        if settings is None:
            return True, ""
        if not isinstance(settings, dict):
            return False, "Field 'lnd' must be an object or null"

        m = settings.get("m", 2)
        if not _is_int(m) or m < 2:
            return False, "Field 'lnd.m' must be an integer >= 2"

        alpha = settings.get("alpha")
        if not _is_number(alpha) or not 0 < alpha < 1:
            return False, "Field 'lnd.alpha' must be a number in (0, 1)"

        k = settings.get("k")
        if not isinstance(k, list) or len(k) != m:
            return False, f"Field 'lnd.k' must be a list of length m={m}"

        if settings.get("mode", "grid") not in ("grid", "random"):
            return False, "Field 'lnd.mode' must be 'grid' or 'random'"

        for name in ("points_per_decade", "n_samples"):
            value = settings.get(name, 1)
            if not _is_int(value) or value < 1:
                return False, f"Field 'lnd.{name}' must be a positive integer"

        return True, ""

    @staticmethod
    def validate(config: Dict) -> Tuple[bool, str]:
        """Perform complete validation of a config.

        This method runs all validation checks in sequence.

        Args:
            config: Parsed JSON object.

        Returns:
            Tuple of (is_valid, error_message). If valid, error_message is empty.
        """
        checks = (
            ConfigValidator.validate_structure,
            ConfigValidator.validate_process,
            ConfigValidator.validate_run,
            ConfigValidator.validate_besov,
            ConfigValidator.validate_localtime,
            ConfigValidator.validate_lnd,
        )
        for check in checks:
            is_valid, error = check(config)
            if not is_valid:
                return False, error

        return True, ""
