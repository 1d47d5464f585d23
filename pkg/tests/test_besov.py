"""Tests for moduli, dyadic profiles, local-time statistics and regularity verdicts."""

import numpy as np
import pytest

from src.besov.localtime_stat import (
    CELL_CHUNK,
    adler_statistic,
    pointwise_localtime_profile,
    sandwich_ratios,
    shift_sup_statistic,
    sup_shifts,
    uniform_localtime_statistic,
    window_sup,
)
from src.besov.profile import (
    DyadicProfile,
    besov_pq_norm,
    dyadic_profile,
    modulus_lp,
    seminorm_from_profile,
)
from src.besov.regularity import (
    adler_besov_check,
    classify_regularity,
    estimate_exponent,
    regression_window,
)
from src.core.errors import ValidationError
from src.loctime.field import local_time_field
from src.procsim.descriptors import ProcessDescriptor
from src.procsim.grid import GridSpec
from src.procsim.samplers import sample_path, sample_paths


def linear_samples(n_points: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n_points)


def dense_counts(field) -> np.ndarray:
    """Cumulative occupation counts of every bin, shape (n_cells, n_times)."""
    counts = np.zeros((field.n_cells, field.n_times), dtype=np.int64)
    counts[field.cells, np.arange(1, field.n_times)] = 1
    return np.cumsum(counts, axis=1)


class TestModulus:
    """Tests for modulus_lp."""

    def test_linear_function(self):
        """Test omega_p(f, t) for f(x) = x, where every shift h gives h (1 - h)^(1/p)."""
        f = linear_samples(1025)
        t = 0.25

        expected = max(h * (1 - h) ** 0.5 for h in np.arange(1, 257) / 1024)

        assert modulus_lp(f, 2.0, t) == pytest.approx(expected)

    def test_zero_shift(self):
        """Test that omega_p(f, 0) = 0."""
        assert modulus_lp(linear_samples(33), 2.0, 0.0) == 0.0

    def test_monotone_in_t(self):
        """Test that the modulus does not decrease with t."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=257), seed=1)
        values = [modulus_lp(path.values, 3.0, t) for t in (0.01, 0.1, 0.3, 0.6)]

        assert values == sorted(values)

    def test_rejects_small_p(self):
        """Test that p must be at least 1."""
        with pytest.raises(ValidationError, match="p must be"):
            modulus_lp(linear_samples(9), 0.5, 0.1)

    def test_rejects_negative_t(self):
        """Test that t must be non-negative."""
        with pytest.raises(ValidationError, match="non-negative"):
            modulus_lp(linear_samples(9), 2.0, -0.1)


class TestDyadicProfile:
    """Tests for dyadic_profile and the norms built on it."""

    def test_linear_profile(self):
        """Test A_j = 2^-j (1 - 2^-j)^(1/p) for f(x) = x."""
        profile = dyadic_profile(linear_samples(1025), 2.0, 8)
        levels = np.arange(9)

        np.testing.assert_allclose(profile.A, 2.0 ** -levels * (1 - 2.0 ** -levels) ** 0.5)
        assert profile.A[0] == 0.0

    def test_rows_and_dict(self):
        """Test the CSV rows and the JSON form."""
        profile = dyadic_profile(linear_samples(65), 1.0, 3)

        assert profile.rows()[1] == [1, pytest.approx(0.25)]
        assert profile.to_dict()["variant"] == "path"
        assert profile.J_max == 3
        assert len(profile) == 4

    def test_scaling_multiplies_profile(self):
        """Test that scaling f by c scales A_j by |c| and leaves the exponent unchanged."""
        path = sample_path(ProcessDescriptor.fbm(0.4), GridSpec(n_points=1025), seed=14)
        profile = dyadic_profile(path.values, 3.0, 8)
        scaled = dyadic_profile(-3.5 * path.values, 3.0, 8)

        np.testing.assert_allclose(scaled.A, 3.5 * profile.A, rtol=1e-12)
        assert estimate_exponent(scaled) == pytest.approx(estimate_exponent(profile), abs=1e-12)

    def test_seminorm_non_decreasing_in_nu(self):
        """Test that sup_j 2^(j nu) A_j grows with nu."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=1025), seed=15)
        profile = dyadic_profile(path.values, 2.0, 8)

        values = [seminorm_from_profile(profile, nu) for nu in np.linspace(0.0, 1.0, 11)]

        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_rejects_misaligned_level(self):
        """Test that 2^J_max must divide n - 1."""
        with pytest.raises(ValidationError, match="not aligned"):
            dyadic_profile(linear_samples(65), 2.0, 7)

    def test_rejects_negative_values(self):
        """Test that profile values are non-negative."""
        with pytest.raises(ValidationError, match="non-negative"):
            DyadicProfile.from_values([1.0, -0.5])

    def test_seminorm(self):
        """Test sup_j 2^(j nu) A_j on a synthetic profile."""
        profile = DyadicProfile.from_values([1.0, 0.5, 0.25, 0.125])

        assert seminorm_from_profile(profile, 1.0) == pytest.approx(1.0)
        assert seminorm_from_profile(profile, 2.0) == pytest.approx(8.0 * 0.125)

    def test_besov_pq_norm(self):
        """Test the truncated (nu, p, q) norm and its truncation level."""
        profile = DyadicProfile.from_values([1.0, 0.5, 0.25])
        norm = besov_pq_norm(profile, 1.0, 2.0)

        assert norm.value == pytest.approx(np.sqrt(3.0))
        assert norm.truncation_level == 2

    def test_besov_norm_rejects_small_q(self):
        """Test that q must be at least 1."""
        with pytest.raises(ValidationError, match="q must be"):
            besov_pq_norm(DyadicProfile.from_values([1.0]), 0.5, 0.5)


class TestClassifyRegularity:
    """Tests for classify_regularity and estimate_exponent."""

    def test_synthetic_bounded(self):
        """Test A_j = 2^(-j nu) at its own nu: bounded, not little Besov."""
        profile = DyadicProfile.from_values(2.0 ** (-0.4 * np.arange(11)))
        verdict = classify_regularity(profile, 0.4)

        assert verdict.slope == pytest.approx(0.0, abs=1e-12)
        assert verdict.bounded
        assert not verdict.blows_up
        assert not verdict.little_besov
        assert verdict.nu_hat == pytest.approx(0.4)
        assert verdict.window == (5, 10)

    def test_synthetic_blow_up_and_little_besov(self):
        """Test verdicts above and below the critical exponent."""
        profile = DyadicProfile.from_values(2.0 ** (-0.4 * np.arange(11)))

        assert classify_regularity(profile, 0.6).blows_up
        assert classify_regularity(profile, 0.2).little_besov

    def test_exactly_one_of_bounded_or_blow_up(self):
        """Test that bounded and blows_up are exclusive."""
        profile = DyadicProfile.from_values(2.0 ** (-0.3 * np.arange(8)))
        for nu in (0.0, 0.3, 0.4, 0.45, 1.0):
            verdict = classify_regularity(profile, nu)
            assert verdict.bounded != verdict.blows_up

    def test_estimate_exponent(self):
        """Test nu_hat on a synthetic power law."""
        profile = DyadicProfile.from_values(3.0 * 2.0 ** (-0.7 * np.arange(9)))

        assert estimate_exponent(profile) == pytest.approx(0.7)

    def test_too_few_levels(self):
        """Test that fewer than six levels are rejected."""
        with pytest.raises(ValidationError, match="at least 6 levels"):
            regression_window(DyadicProfile.from_values([1.0, 0.5, 0.25, 0.125, 0.06]))

    def test_zero_in_window(self):
        """Test that a vanishing A_j in the window is rejected."""
        with pytest.raises(ValidationError, match="vanishes"):
            classify_regularity(DyadicProfile.from_values([1, 1, 1, 1, 1, 0.0]), 0.5)

    def test_rejects_non_positive_tau(self):
        """Test that tau must be positive."""
        profile = DyadicProfile.from_values(2.0 ** (-0.4 * np.arange(8)))
        with pytest.raises(ValidationError, match="tau"):
            classify_regularity(profile, 0.4, tau=0.0)

    @pytest.mark.parametrize("H", [0.3, 0.5, 0.7])
    def test_fbm_path_verdicts(self, H):
        """Test path verdicts around H for fractional Brownian motion over 16 replicates."""
        grid = GridSpec(n_points=16385)
        paths = sample_paths(ProcessDescriptor.fbm(H), grid, seed=12, n_reps=16)
        profiles = [dyadic_profile(path.values, 4.0, grid.max_besov_level) for path in paths]

        estimates = [estimate_exponent(profile) for profile in profiles]
        below = [classify_regularity(profile, H - 0.1, tau=0.05) for profile in profiles]
        above = [classify_regularity(profile, H + 0.1, tau=0.05) for profile in profiles]

        assert float(np.mean(estimates)) == pytest.approx(H, abs=0.05)
        assert sum(v.bounded for v in below) >= 14
        assert sum(v.blows_up for v in above) >= 14

    def test_bifractional_critical_exponent(self):
        """Test that BifBm(0.6, 0.5) paths have exponent close to HK = 0.3."""
        descriptor = ProcessDescriptor.bifbm(0.6, 0.5)
        grid = GridSpec(n_points=4097)
        paths = sample_paths(descriptor, grid, seed=13, n_reps=8)
        profiles = [dyadic_profile(path.values, 4.0, grid.max_besov_level) for path in paths]

        estimates = [estimate_exponent(profile) for profile in profiles]
        above = [classify_regularity(profile, descriptor.alpha + 0.1, tau=0.05) for profile in profiles]

        assert descriptor.alpha == pytest.approx(0.3)
        assert 0.25 <= float(np.mean(estimates)) <= 0.35
        assert sum(v.blows_up for v in above) >= 6


class TestUniformLocalTimeStatistic:
    """Tests for the uniform local-time statistic."""

    def test_level_zero_is_zero(self):
        """Test that level 0 has no dyadic cells."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=257), seed=2)
        profile = uniform_localtime_statistic(local_time_field(path, 0.05), 1.0, 0.5, 6)

        assert profile.S[0] == 0.0
        assert profile.variant == "localtime_uniform"

    def test_direct_form_within_boundary_term(self):
        """Test that the trapezoid direct form differs from S_j by at most half a boundary term."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=1025), seed=3)
        field = local_time_field(path, 0.05)
        profile = uniform_localtime_statistic(field, 2.0, 0.5, 8)

        for j in range(1, 9):
            sups = window_sup(field, 1024 // 2 ** j)
            bound = 0.5 * 2.0 ** (j * 2.0 * 0.5) / 1024 * float(np.max(sups ** 2))
            assert abs(profile.direct[j] - profile.S[j]) <= bound + 1e-12

    def test_direct_form_matches_dense_counts(self):
        """Test the direct form against a trapezoid sum over a dense count table."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=257), seed=16)
        field = local_time_field(path, 0.02)
        profile = uniform_localtime_statistic(field, 1.0, 0.3, 6)
        counts = dense_counts(field)

        for j in range(1, 7):
            M = 256 // 2 ** j
            sups = np.max(counts[:, M:257] - counts[:, : 257 - M], axis=0) * field.density_unit
            trapezoid = sups.sum() - 0.5 * (sups[0] + sups[-1])
            expected = 2.0 ** (j * 0.3) * trapezoid / 256

            assert profile.direct[j] == pytest.approx(expected, rel=1e-12)

    def test_window_sup_matches_dense_counts(self):
        """Test the blockwise window supremum against a dense count table."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=513), seed=17)
        field = local_time_field(path, 0.005)
        counts = dense_counts(field)

        assert len(field.occupied[0]) > CELL_CHUNK
        for m in (1, 3, 64, 512):
            expected = np.max(counts[:, m:513] - counts[:, : 513 - m], axis=0) * field.density_unit
            np.testing.assert_allclose(window_sup(field, m), expected, rtol=1e-12)
        assert len(window_sup(field, 513)) == 0

    def test_brownian_critical_regularity(self):
        """Test that Brownian local time is bounded at nu = 1/2 and blows up at nu = 0.65."""
        grid = GridSpec(n_points=65537)
        paths = sample_paths(ProcessDescriptor.bm(), grid, seed=3, n_reps=16)

        bounded = blow_ups = 0
        for path in paths:
            field = local_time_field(path, 1.0 / 512)
            critical = uniform_localtime_statistic(field, 1.0, 0.5, 10)
            above = uniform_localtime_statistic(field, 1.0, 0.65, 10)
            bounded += classify_regularity(critical, 0.5).slope <= 0.1
            blow_ups += classify_regularity(above, 0.65).slope > 0.1

        assert bounded >= 12
        assert blow_ups >= 12

    def test_identity_path_statistic(self):
        """Test S_j for X(t) = t, where one bin collects the whole window when 2^-j <= dx."""
        times = np.linspace(0.0, 1.0, 1025)
        field = local_time_field((times, times.copy()), 1.0 / 8)
        profile = uniform_localtime_statistic(field, 1.0, 0.0, 8)

        # windows shorter than a bin move at most 2^-j / dx of density
        for j in range(3, 9):
            assert profile.S[j] <= 2.0 ** -j * 8 * 1.0 + 1e-12

    def test_amplitude_matches_statistic(self):
        """Test A_j = S_j^(1/q) 2^(-j nu)."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=257), seed=4)
        profile = uniform_localtime_statistic(local_time_field(path, 0.05), 2.0, 0.5, 6)
        levels = np.arange(7)

        np.testing.assert_allclose(profile.A, profile.S ** 0.5 * 2.0 ** (-0.5 * levels))

    def test_rejects_level_beyond_resolution(self):
        """Test that J_max must fit the field."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=65), seed=5)
        with pytest.raises(ValidationError, match="beyond the resolution"):
            uniform_localtime_statistic(local_time_field(path, 0.1), 1.0, 0.5, 7)

    def test_rejects_small_q(self):
        """Test that q must be at least 1."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=65), seed=5)
        with pytest.raises(ValidationError, match="q must be"):
            uniform_localtime_statistic(local_time_field(path, 0.1), 0.5, 0.5, 3)


class TestShiftSupStatistic:
    """Tests for the shift-sup statistic and the sandwich ratios."""

    def test_sup_shifts_include_window(self):
        """Test that the scanned shifts always include M."""
        assert sup_shifts(8) == list(range(1, 9))
        shifts = sup_shifts(1000)
        assert shifts[-1] == 1000
        assert len(shifts) <= 32

    def test_shift_sup_dominates_dyadic(self):
        """Test that the shift-sup statistic is never below the dyadic one."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=513), seed=6)
        field = local_time_field(path, 0.05)

        ratios = sandwich_ratios(field, 1.0, 0.5, 6)

        assert np.all(ratios >= 1.0 - 1e-12)

    def test_sandwich_ratios_bounded(self):
        """Test that the shift-sup statistic stays within a factor 8 of S_j."""
        for seed in range(3):
            path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=1025), seed=seed)
            ratios = sandwich_ratios(local_time_field(path, 0.02), 1.0, 0.5, 8)

            assert np.all(ratios >= 1.0 - 1e-12)
            assert np.all(ratios <= 8.0)

    def test_shift_sup_values_shape(self):
        """Test one value per level."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=129), seed=7)
        values = shift_sup_statistic(local_time_field(path, 0.1), 1.0, 0.5, 5)

        assert values.shape == (6,)


class TestPointwiseAndAdler:
    """Tests for the pointwise profile and the Adler check."""

    def test_pointwise_outside_lattice(self):
        """Test that L(x, .) = 0 away from the path."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=129), seed=8)
        profile = pointwise_localtime_profile(local_time_field(path, 0.1), [100.0], 2.0, 5)

        assert np.all(profile.A == 0.0)
        assert profile.variant == "localtime_pointwise"

    def test_adler_requires_large_p(self):
        """Test the integrability condition p > d / (1 - mu)."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=129), seed=9)
        field = local_time_field(path, 0.1)
        with pytest.raises(ValidationError, match="must exceed"):
            adler_statistic(field, 0.5, 2.0, 5)

    def test_adler_check_is_consistent_for_brownian_motion(self):
        """Test that a regular local time comes with an irregular path."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=4097), seed=10)
        field = local_time_field(path, 0.02)

        verdict = adler_besov_check(path, field, mu=0.4, p=4.0, J_max=10)

        assert verdict.consistent
        assert verdict.to_dict()["mu"] == 0.4

    def test_adler_check_grid_mismatch(self):
        """Test that path and field must share a grid."""
        path = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=129), seed=11)
        other = sample_path(ProcessDescriptor.bm(), GridSpec(n_points=65), seed=11)
        with pytest.raises(ValidationError, match="share the time grid"):
            adler_besov_check(path, local_time_field(other, 0.1), mu=0.4, p=4.0, J_max=5)
