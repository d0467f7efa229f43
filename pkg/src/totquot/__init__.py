"""Totient and sum-of-divisors quotients over primes and twin primes:
constructive approximation of real targets, twin-prime scanning, and exact
verification of witness examples."""

from .arith import (
    CofactorStatus,
    FactorBudget,
    Factorization,
    Primality,
    PrimalityPolicy,
    SquarefreeNumber,
    crt_solve,
    factorize,
    is_prime,
    is_probable_prime,
    next_prime_at_least,
    sieve_primes,
    spf_segment,
)
from .families import (
    AdmissibilityReport,
    DicksonFamily,
    LinearPoly,
    TargetRangeError,
    build_successor_family,
    build_twin_gap_family,
    check_admissible,
    family_from_json,
    family_to_json,
    quotient_at,
)
from .greedy import TargetSpec, approx_phi_ratio, approx_sigma_ratio
from .multiplicative import (
    QuotientMode,
    RatioReport,
    phi,
    phi_ratio,
    ratio_report,
    sigma,
    sigma_ratio,
)
from .ratio import ExactRatio, digits_matched, truncate_decimal
from .scanner import ScanSummary, TwinRecord, pi2_estimate, scan, summarize, twin_prime_constant
from .search import SearchConfig, SearchResult, build_wheel, find_witness
from .targets import parse_target

__version__ = "0.1.0"
