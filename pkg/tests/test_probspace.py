import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_values, factor_td, is_prime_td
from probnt.additive import NAMED_SPECS, ValueHistogram, histogram, omega
from probnt.errors import UsageError
from probnt.probspace import (
    density,
    density_candidates,
    empirical_cdf,
    moments_from_histogram,
    multiples_density,
)


def test_density_examples():
    assert density(lambda m: m % 3 == 0, 10) == pytest.approx(0.3, abs=1e-15)
    assert density(lambda m: True, 57) == 1.0
    assert density(is_prime_td, 100) == 0.25
    with pytest.raises(UsageError):
        density(lambda m: True, 0)


def test_finite_additivity_on_residue_classes():
    for n in (1, 7, 100, 1001):
        for k in range(1, 21):
            parts = [density(lambda m, r=r: m % k == r, n) for r in range(k)]
            assert math.fsum(parts) == pytest.approx(1.0, abs=1e-12)
            # disjoint union of two classes
            if k >= 2:
                union = density(lambda m: m % k in (0, 1), n)
                assert union == pytest.approx(parts[0] + parts[1], abs=1e-12)


def test_multiples_density_exact_and_close_to_reciprocal():
    for p in (2, 3, 5, 7, 97, 1009):
        for n in list(range(1, 300)) + [10**4, 10**6 + 3]:
            d = multiples_density(p, n)
            assert d == Fraction(sum(1 for m in range(1, n + 1) if m % p == 0) if n < 300 else n // p, n)
            assert abs(d - Fraction(1, p)) <= Fraction(1, n)


def test_density_candidates_reports_finite_values():
    cands = density_candidates(lambda m: m % 2 == 0, [10, 11, 1000])
    assert cands == [(10, 0.5), (11, 5 / 11), (1000, 0.5)]


def test_moments_example():
    stats = moments_from_histogram(ValueHistogram.from_counts({0: 1, 1: 7, 2: 2}), K=2)
    assert stats.mean == pytest.approx(1.1, abs=1e-15)
    assert stats.variance == pytest.approx(0.29, abs=1e-15)
    with pytest.raises(UsageError):
        moments_from_histogram(ValueHistogram.from_counts({0: 1}), K=1)


def test_single_bin_is_degenerate():
    stats = moments_from_histogram(ValueHistogram.from_counts({3: 17}), K=6)
    assert stats.mean == 3 and stats.variance == 0
    assert all(v == 0 for v in stats.central_moments.values())


@pytest.mark.parametrize("a", [1, 2, 7])
def test_symmetric_odd_moments_vanish(a):
    stats = moments_from_histogram(ValueHistogram.from_counts({-a: 50, a: 50}), K=7)
    assert stats.mean == 0
    assert [stats.central_moments[k] for k in (3, 5, 7)] == [0, 0, 0]
    assert stats.central_moments[4] == a**4
    real = moments_from_histogram(ValueHistogram.from_counts({-0.5: 3, 0.5: 3}), K=5)
    assert real.central_moments[3] == 0 and real.central_moments[5] == 0


def _direct_moments(values, K):
    n = len(values)
    mean = math.fsum(values) / n
    return mean, {k: math.fsum((v - mean) ** k for v in values) / n for k in range(2, K + 1)}


@pytest.mark.parametrize("name", ["omega", "Omega", "omega_diff", "phi_log", "f5"])
@pytest.mark.parametrize("n", [1, 2, 10, 99, 1000, 4321, 10**4])
def test_moments_match_per_element(name, n):
    spec = NAMED_SPECS[name]
    values = [0.0] * n
    for m in range(1, n + 1):
        f = factor_td(m)
        if name == "Omega":
            values[m - 1] = float(sum(f.values()))
        else:
            values[m - 1] = math.fsum(spec.value_at_prime(p) for p in f)
    mean, direct = _direct_moments(values, 6)
    stats = moments_from_histogram(histogram(spec, n, block_size=997), K=6)
    scale = max(direct[2], 1e-300)
    assert stats.mean == pytest.approx(mean, rel=1e-12, abs=1e-15)
    for k in range(2, 7):
        assert abs(stats.central_moments[k] - direct[k]) <= 1e-12 * max(abs(direct[k]), scale ** (k / 2)), k


def test_cdf_example():
    cdf = empirical_cdf(ValueHistogram.from_counts({0: 5, 1: 5}))
    assert cdf(0) == 0.5 and cdf(1) == 1.0
    assert cdf(-0.1) == 0.0 and cdf(0.5) == 0.5
    assert cdf.left_limits().tolist() == [0.0, 0.5]
    with pytest.raises(UsageError):
        empirical_cdf(ValueHistogram.from_counts({0: 5, 1: 5}), (0.0, 0.0))


@pytest.mark.parametrize("n", [10, 100, 10**4])
def test_cdf_standardization(n):
    hist = histogram(omega(), n)
    stats = moments_from_histogram(hist, K=2)
    cdf = empirical_cdf(hist, (stats.mean, stats.std))
    assert cdf.mean() == pytest.approx(0.0, abs=1e-12)
    assert cdf.variance() == pytest.approx(1.0, abs=1e-12)


def test_omega_100_normalized_cdf_at_zero():
    values = brute_values(len, 100)
    mean = sum(values) / 100
    std = math.sqrt(sum((v - mean) ** 2 for v in values) / 100)
    cdf = empirical_cdf(histogram(omega(), 100), (mean, std))
    expect = sum(1 for v in values if v <= mean) / 100
    assert 0 < cdf(0.0) < 1
    assert cdf(0.0) == pytest.approx(expect, abs=1e-15)


@given(st.dictionaries(st.integers(-50, 50), st.integers(1, 1000), min_size=1, max_size=30))
def test_cdf_monotone_final_one(bins):
    cdf = empirical_cdf(ValueHistogram.from_counts(bins))
    assert np.all(np.diff(cdf.cumulative) >= 0)
    assert cdf.cumulative[-1] == 1.0
    assert np.all(np.diff(cdf.points) > 0)
