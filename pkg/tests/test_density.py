import math
from fractions import Fraction

import mpmath
import pytest

from probnt.density import (
    EULER_GAMMA,
    TWO_EXP_NEG_GAMMA,
    density_report,
    density_scan,
    mertens_product,
)
from probnt.errors import DomainError, UsageError
from probnt.golden import load_golden

mpmath.mp.dps = 40
TWO_EXP_NEG_GAMMA_HP = float(2 * mpmath.exp(-mpmath.euler))


def test_gamma_constant_matches_high_precision():
    assert abs(EULER_GAMMA - float(mpmath.euler)) < 1e-12
    assert TWO_EXP_NEG_GAMMA == pytest.approx(TWO_EXP_NEG_GAMMA_HP, rel=1e-14)
    assert TWO_EXP_NEG_GAMMA == pytest.approx(1.1229189671, abs=1e-10)


def test_mertens_product_examples():
    assert mertens_product(1) == 1.0
    assert mertens_product(2) == pytest.approx(0.5, rel=1e-15)
    assert mertens_product(10) == pytest.approx(float(Fraction(8, 35)), rel=1e-14)
    assert mertens_product(10.9) == mertens_product(10)


def test_mertens_product_matches_rational_oracle():
    prod = Fraction(1)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        prod *= Fraction(p - 1, p)
    assert mertens_product(50) == pytest.approx(float(prod), rel=1e-13)


def test_report_n100():
    r = density_report(100)
    assert r.pi_n == 25 and r.pi_density == 0.25
    assert r.pnt_estimate == pytest.approx(0.217147, abs=1e-6)
    assert r.mertens_product == pytest.approx(8 / 35, rel=1e-14)
    assert r.mertens_asymptote == pytest.approx(TWO_EXP_NEG_GAMMA_HP / math.log(100), rel=1e-13)
    # 2 e^{-gamma} / ln 100 = 0.2438388; the rounded figure 0.243843 is accepted at 1e-5
    assert r.mertens_asymptote == pytest.approx(0.243843, abs=1e-5)


def test_report_n4_and_domain():
    assert density_report(4).mertens_product == 0.5
    assert density_report(3).mertens_product == 1.0
    for bad in (0, 1, 2):
        with pytest.raises(DomainError):
            density_report(bad)


@pytest.mark.slow
def test_report_1e8():
    r = density_report(10**8)
    assert r.pi_n == load_golden()["pi"]["100000000"]
    assert abs(r.mertens_times_ln_n - 1.12292) <= 0.01


def test_scan_examples():
    reports = density_scan([10**2, 10**4, 10**6])
    assert len(reports) == 3
    assert reports[0].pi_density > reports[1].pi_density > reports[2].pi_density
    assert len(density_scan([4])) == 1
    a, b = density_scan([10**3, 10**3])
    assert a == b
    assert density_scan([]) == []


def test_scan_errors():
    with pytest.raises(UsageError):
        density_scan([10**4, 10**3])
    with pytest.raises(DomainError):
        density_scan([2, 10])


def test_scan_matches_single_reports():
    grid = [5, 99, 100, 101, 12_345]
    assert density_scan(grid) == [density_report(n) for n in grid]


@pytest.mark.slow
def test_pi_density_times_log_above_one_and_decreasing():
    grid = [10**k for k in range(2, 9)]
    values = [r.pi_over_pnt for r in density_scan(grid)]
    assert all(v > 1 for v in values)
    # the decrease starts at 10^3; pi(100) ln(100)/100 = 1.151 sits below pi(1000) ln(1000)/1000 = 1.160
    assert values[0] < values[1]
    tail = values[1:]
    assert all(b < a for a, b in zip(tail, tail[1:]))


def test_mertens_neighbourhood_of_limit():
    for n in [10**6, 3 * 10**6, 10**7, 10**8, 5 * 10**8, 10**9]:
        value = mertens_product(math.isqrt(n)) * math.log(n)
        assert 1.10 <= value <= 1.15, (n, value)


@pytest.mark.slow
def test_discrepancy_visible_at_1e8():
    r = density_report(10**8)
    assert abs(r.pi_over_pnt - r.mertens_over_pnt) > 0.05
    assert set(r.ratios) == {"pi_density/pnt_estimate", "mertens_product/pnt_estimate", "mertens_product*ln_n"}
