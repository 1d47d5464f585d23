"""Tests for characteristic functions, alpha-LND constants, Berman ratios and variance bounds."""

import math

import numpy as np
import pytest

from src.core.errors import ResourceError, UnsupportedError, ValidationError
from src.lndcheck.alpha_lnd import (
    MAX_GRID_SAMPLES,
    SampleSpec,
    alphalnd_constant,
    grid_sample_count,
    grid_times,
    lnd_query,
    magnitude_grid,
)
from src.lndcheck.berman import (
    berman_lnd_ratio,
    berman_lnd_sweep,
    variance_bounds_check,
    variance_bounds_refinement,
)
from src.lndcheck.charfn import CharFnQuery, gaussian_charfn, montecarlo_charfn
from src.procsim.descriptors import ProcessDescriptor, SheSpec
from src.procsim.grid import GridSpec


BROWNIAN_CONSTANT = (2.0 / math.e) ** 2


class TestCharFn:
    """Tests for the Gaussian characteristic function."""

    def test_brownian_value(self):
        """Test |phi| = exp(-1/2) for v = (1, 1) at times (1/2, 1)."""
        query = CharFnQuery(times=[0.5, 1.0], v=[1.0, 1.0])

        assert gaussian_charfn(query, ProcessDescriptor.bm()) == pytest.approx(math.exp(-0.5))

    def test_zero_frequency(self):
        """Test that v = 0 gives 1."""
        query = CharFnQuery(times=[0.3, 0.6, 0.9], v=[0.0, 0.0, 0.0])

        assert gaussian_charfn(query, ProcessDescriptor.fbm(0.3)) == 1.0

    def test_independent_coordinates(self):
        """Test that coordinates contribute independent variances."""
        query = CharFnQuery(times=[0.5, 1.0], v=[[1.0, 1.0], [1.0, 1.0]])

        assert gaussian_charfn(query, ProcessDescriptor.bm(d=2)) == pytest.approx(math.exp(-1.0))

    def test_montecarlo_agrees(self):
        """Test the Monte Carlo estimate against the closed form."""
        query = CharFnQuery(times=[0.25, 0.5, 1.0], v=[1.0, -0.5, 2.0])
        descriptor = ProcessDescriptor.bifbm(0.6, 0.7)

        estimate, stderr = montecarlo_charfn(query, descriptor, n_draws=20000, seed=1)

        assert abs(estimate - gaussian_charfn(query, descriptor)) < 4 * stderr + 1e-3

    def test_montecarlo_agrees_on_random_queries(self):
        """Test 20 random queries at 10^5 draws against the closed form within 3 standard errors."""
        rng = np.random.default_rng(2024)
        descriptors = [ProcessDescriptor.fbm(0.3), ProcessDescriptor.bifbm(0.6, 0.5)]
        for i in range(20):
            times = np.sort(rng.uniform(0.05, 1.0, 3))
            query = CharFnQuery(times=times, v=rng.normal(0.0, 0.7, 3))
            descriptor = descriptors[i % 2]

            estimate, stderr = montecarlo_charfn(query, descriptor, n_draws=100000, seed=i)

            assert abs(estimate - gaussian_charfn(query, descriptor)) <= 3 * stderr + 1e-3

    def test_she_not_supported(self):
        """Test that She has no closed-form characteristic function."""
        query = CharFnQuery(times=[0.5, 1.0], v=[1.0, 1.0])
        with pytest.raises(UnsupportedError):
            gaussian_charfn(query, ProcessDescriptor.she_probe(SheSpec()))

    def test_rejects_unordered_times(self):
        """Test that query times must increase strictly."""
        with pytest.raises(ValidationError, match="strictly increasing"):
            CharFnQuery(times=[0.6, 0.3], v=[1.0, 1.0])

    def test_rejects_negative_exponents(self):
        """Test that exponents must be non-negative."""
        with pytest.raises(ValidationError, match="non-negative"):
            CharFnQuery(times=[0.3, 0.6], v=[1.0, 1.0], k=[1, -1])


class TestSampleSpec:
    """Tests for the sampling specification."""

    def test_magnitude_grid_is_nested(self):
        """Test that doubling points per decade gives a superset."""
        coarse = magnitude_grid(SampleSpec(points_per_decade=4))
        fine = magnitude_grid(SampleSpec(points_per_decade=8))

        assert all(np.any(np.isclose(fine, value, rtol=1e-12)) for value in coarse)

    def test_grid_times_respect_window(self):
        """Test that grid times fit inside the window."""
        spec = SampleSpec(time_divisions=8, window=0.5)
        for combo in grid_times(3, spec):
            assert combo[-1] - combo[0] < 0.5
            assert list(combo) == sorted(combo)

    def test_invalid_mode(self):
        """Test that an unknown mode is rejected."""
        with pytest.raises(ValidationError, match="Unknown sample mode"):
            SampleSpec(mode="sobol")

    def test_invalid_magnitude_range(self):
        """Test that the magnitude range must be increasing and positive."""
        with pytest.raises(ValidationError, match="magnitude_range"):
            SampleSpec(magnitude_range=(10.0, 1.0))


class TestAlphaLndConstant:
    """Tests for alphalnd_constant."""

    def test_brownian_constant(self):
        """Test that the grid search approaches (2/e)^2 for Brownian motion."""
        report = alphalnd_constant(ProcessDescriptor.bm(), 2, [2, 2], 0.5,
                                   SampleSpec(points_per_decade=32))

        assert report.c_empirical <= BROWNIAN_CONSTANT + 1e-12
        assert report.c_empirical == pytest.approx(BROWNIAN_CONSTANT, abs=1e-3)

    def test_refinement_is_monotone(self):
        """Test that finer grids never lower the constant."""
        values = [
            alphalnd_constant(ProcessDescriptor.bm(), 2, [2, 2], 0.5,
                              SampleSpec(points_per_decade=ppd)).c_empirical
            for ppd in (8, 16, 32)
        ]

        assert values[1] >= values[0] - 1e-12
        assert values[2] >= values[1] - 1e-12

    def test_constant_stable_in_magnitude_range(self):
        """Test that extending the magnitude range does not change the bifractional constant."""
        descriptor = ProcessDescriptor.bifbm(0.5, 0.5)
        small = alphalnd_constant(descriptor, 2, [1, 1], 0.25,
                                  SampleSpec(magnitude_range=(1e-2, 1e2)))
        large = alphalnd_constant(descriptor, 2, [1, 1], 0.25,
                                  SampleSpec(magnitude_range=(1e-2, 1e3)))

        assert large.c_empirical == pytest.approx(small.c_empirical)

    def test_zero_exponents(self):
        """Test that k = 0 gives the constant 1 (attained at v = 0)."""
        report = alphalnd_constant(ProcessDescriptor.fbm(0.3), 2, [0, 0], 0.3)

        assert report.c_empirical == pytest.approx(1.0)

    def test_random_mode_reproducible(self):
        """Test that random sampling depends only on the seed."""
        spec = SampleSpec(mode="random", n_samples=500, seed=7, block_size=128)
        first = alphalnd_constant(ProcessDescriptor.bm(), 2, [1, 1], 0.5, spec)
        second = alphalnd_constant(ProcessDescriptor.bm(), 2, [1, 1], 0.5, spec)

        assert first.c_empirical == second.c_empirical
        assert first.n_samples == 501
        assert first.c_empirical <= math.exp(-1.0) + 1e-12

    def test_argmax_query(self):
        """Test that the reported maximizer reproduces the constant."""
        report = alphalnd_constant(ProcessDescriptor.bm(), 2, [2, 2], 0.5)
        query = lnd_query(report)

        value = gaussian_charfn(query, ProcessDescriptor.bm())
        weight = np.prod(np.abs(query.v) ** query.k) * np.prod(query.gaps[:, None] ** (0.5 * query.k))

        assert value * weight == pytest.approx(report.c_empirical)

    def test_grid_sample_count(self):
        """Test that the reported sample count matches the grid size plus the zero frequency."""
        spec = SampleSpec()
        report = alphalnd_constant(ProcessDescriptor.bm(), 2, [1, 1], 0.5, spec)

        assert grid_sample_count(2, 1, spec) == len(grid_times(2, spec)) * 42 ** 2
        assert report.n_samples == grid_sample_count(2, 1, spec) + 1

    def test_rejects_oversized_grid(self):
        """Test that a grid search beyond the sample limit raises ResourceError."""
        spec = SampleSpec()
        descriptor = ProcessDescriptor.bm(d=2)

        assert grid_sample_count(3, 2, spec) > MAX_GRID_SAMPLES
        with pytest.raises(ResourceError, match="grid samples"):
            alphalnd_constant(descriptor, 3, [[1, 1], [1, 1], [1, 1]], 0.5, spec)

    def test_random_mode_has_no_grid_limit(self):
        """Test that random mode runs where the grid would be too large."""
        spec = SampleSpec(mode="random", n_samples=256, seed=3, block_size=128)
        report = alphalnd_constant(ProcessDescriptor.bm(d=2), 3, [[1, 1], [1, 1], [1, 1]], 0.5, spec)

        assert report.n_samples == 257
        assert 0.0 < report.c_empirical <= 1.0

    def test_rejects_wrong_shape(self):
        """Test that k must have m rows."""
        with pytest.raises(ValidationError, match="k must have shape"):
            alphalnd_constant(ProcessDescriptor.bm(), 3, [1, 1], 0.5)

    def test_rejects_negative_exponent(self):
        """Test that negative exponents are rejected."""
        with pytest.raises(ValidationError, match="non-negative"):
            alphalnd_constant(ProcessDescriptor.bm(), 2, [1, -1], 0.5)

    def test_rejects_non_gaussian(self):
        """Test that She descriptors are rejected."""
        with pytest.raises(UnsupportedError):
            alphalnd_constant(ProcessDescriptor.she_probe(SheSpec()), 2, [1, 1], 0.25)


class TestBerman:
    """Tests for the Berman ratio."""

    def test_brownian_ratio_is_one(self):
        """Test that independent increments give ratio 1."""
        ratio = berman_lnd_ratio(ProcessDescriptor.bm(), 3, [0.2, 0.5, 0.9], [1.0, -2.0, 0.5])

        assert ratio == pytest.approx(1.0)

    def test_brownian_sweep(self):
        """Test that the sweep finds ratio 1 everywhere for Brownian motion."""
        sweep = berman_lnd_sweep(ProcessDescriptor.bm(), 3, 200, seed=1)

        assert sweep.min_ratio == pytest.approx(1.0)
        assert sweep.max_ratio == pytest.approx(1.0)
        assert sweep.n_queries == 200

    def test_fbm_sweep_positive(self):
        """Test that fractional Brownian motion has a positive Berman constant."""
        sweep = berman_lnd_sweep(ProcessDescriptor.fbm(0.3), 2, 500, seed=2)

        assert 0.0 < sweep.min_ratio <= 1.0

    def test_brownian_ratio_is_one_over_many_queries(self):
        """Test ratio 1 within 1e-12 over 10^4 Brownian queries."""
        sweep = berman_lnd_sweep(ProcessDescriptor.bm(), 3, 10000, seed=5)

        assert sweep.n_queries == 10000
        assert sweep.min_ratio == pytest.approx(1.0, abs=1e-12)
        assert sweep.max_ratio == pytest.approx(1.0, abs=1e-12)

    def test_fbm_positive_over_many_queries(self):
        """Test a positive Berman constant for Fbm(0.7) with m = 3 over 10^4 queries."""
        sweep = berman_lnd_sweep(ProcessDescriptor.fbm(0.7), 3, 10000, seed=6)

        assert sweep.n_queries == 10000
        assert sweep.min_ratio > 0.0

    def test_zero_coefficients(self):
        """Test that v = 0 has no ratio."""
        with pytest.raises(ValidationError, match="denominator vanishes"):
            berman_lnd_ratio(ProcessDescriptor.bm(), 2, [0.5, 1.0], [0.0, 0.0])

    def test_length_mismatch(self):
        """Test that times and v must have m entries."""
        with pytest.raises(ValidationError, match="length m=3"):
            berman_lnd_ratio(ProcessDescriptor.bm(), 3, [0.5, 1.0], [1.0, 1.0])


class TestVarianceBounds:
    """Tests for the two-sided variance bounds."""

    def test_brownian_bounds(self):
        """Test that Brownian motion has c = C = 1 at alpha = 1/2."""
        bounds = variance_bounds_check(ProcessDescriptor.bm(), 0.5, GridSpec(n_points=33))

        assert bounds.c_hat == pytest.approx(1.0)
        assert bounds.C_hat == pytest.approx(1.0)

    def test_bifractional_bounds(self):
        """Test the constants 2^-K and 2^(1-K) bracket the bifractional ratios."""
        K = 0.5
        bounds = variance_bounds_check(ProcessDescriptor.bifbm(0.5, K), 0.25, GridSpec(n_points=65))

        assert bounds.c_hat >= 2.0 ** -K - 1e-12
        assert bounds.C_hat <= 2.0 ** (1 - K) + 1e-12

    def test_explicit_times(self):
        """Test bounds over an explicit list of times."""
        bounds = variance_bounds_check(ProcessDescriptor.fbm(0.3), 0.3, [0.0, 0.1, 0.7])

        assert bounds.c_hat == pytest.approx(1.0)

    def test_empty_pair_grid(self):
        """Test that a single time has no pairs."""
        with pytest.raises(ValidationError, match="pair grid is empty"):
            variance_bounds_check(ProcessDescriptor.bm(), 0.5, [0.5])

    def test_refinement_stable_at_true_exponent(self):
        """Test that the constants settle when alpha is the true exponent."""
        refinement = variance_bounds_refinement(ProcessDescriptor.fbm(0.3), 0.3)

        assert refinement.stable
        assert refinement.c_hats[-1] == pytest.approx(1.0)

    def test_refinement_flags_wrong_exponent(self):
        """Test that C_hat keeps growing when alpha exceeds the true exponent."""
        refinement = variance_bounds_refinement(ProcessDescriptor.fbm(0.3), 0.5)

        assert refinement.mismatch
        assert refinement.C_hats == sorted(refinement.C_hats)
        assert refinement.to_dict()["mismatch"] is True

    def test_refinement_needs_three_levels(self):
        """Test the minimum number of refinement levels."""
        with pytest.raises(ValidationError, match="three refinement levels"):
            variance_bounds_refinement(ProcessDescriptor.bm(), 0.5, levels=(4, 6))
