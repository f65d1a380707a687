"""Empirical laboratory for primes and strongly additive arithmetic functions on [1, n]."""

from .additive import (
    AdditiveFunctionSpec,
    ValueHistogram,
    big_omega,
    eval_at,
    exact_mean,
    histogram,
    mean_asymptote,
    omega,
    parse_spec,
    residue_class,
)
from .clt import erdos_kac_experiment, ks_distance, standard_normal_cdf
from .density import EULER_GAMMA, DensityReport, density_report, density_scan, mertens_product
from .errors import CapacityError, DomainError, HypothesisViolation, ProbNTError, UsageError
from .lln import BoundCheck, chebyshev_check, hardy_ramanujan_check, lln_scan, turan_check
from .models import (
    TwoPointModel,
    exact_distribution,
    match_report,
    model_central_moment_sum,
    monte_carlo,
    two_point_central_moment,
)
from .probspace import EmpiricalCDF, EmpiricalStats, empirical_cdf, moments_from_histogram
from .sieve import FactorBlock, PrimeTable, prime_count, primes_up_to, sieve_blocks

__version__ = "0.1.0"
