import math
import random
from fractions import Fraction

import pytest

from totquot.arith import (
    CofactorStatus,
    FactorBudget,
    Factorization,
    SquarefreeNumber,
    factorize,
)
from totquot.multiplicative import (
    QuotientMode,
    phi,
    phi_ratio,
    ratio_report,
    sigma,
    sigma_ratio,
)

BUDGET = FactorBudget(trial_limit=10**4)


def phi_brute(n):
    return sum(1 for i in range(1, n + 1) if math.gcd(i, n) == 1)


def sigma_brute(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


class TestPhi:
    def test_one(self):
        assert phi(factorize(1)) == 1

    def test_2380(self):
        assert phi(factorize(2380)) == 768

    def test_2382(self):
        assert phi(factorize(2382)) == 792

    def test_brute_force_oracle_to_1e4(self):
        for n in range(1, 10**4 + 1):
            assert phi(factorize(n, BUDGET)) == phi_brute(n), n

    def test_unresolved_cofactor_rejected(self):
        bad = Factorization(
            entries=((2, 1),),
            cofactor=(2**89 - 1) * (2**107 - 1),
            cofactor_status=CofactorStatus.COMPOSITE_UNRESOLVED,
        )
        with pytest.raises(ValueError, match="cannot evaluate totient"):
            phi(bad)

    def test_probable_prime_cofactor_counts_as_prime(self):
        m = 2**89 - 1
        f = Factorization(
            entries=((2, 1),),
            cofactor=m,
            cofactor_status=CofactorStatus.PROBABLE_PRIME_COFACTOR,
        )
        assert phi(f) == m - 1


class TestSigma:
    def test_one(self):
        assert sigma(factorize(1)) == 1

    def test_six(self):
        assert sigma(factorize(6)) == 12

    def test_2382(self):
        assert sigma(factorize(2382)) == 4776

    def test_brute_force_oracle_to_1e4(self):
        for n in range(1, 10**4 + 1):
            assert sigma(factorize(n, BUDGET)) == sigma_brute(n), n


class TestSquarefreeRatios:
    def test_phi_empty(self):
        assert phi_ratio(SquarefreeNumber(())) == 1

    def test_phi_single(self):
        assert phi_ratio(SquarefreeNumber((2,))) == Fraction(1, 2)

    def test_phi_pair(self):
        assert phi_ratio(SquarefreeNumber((3, 5))) == Fraction(8, 15)

    def test_sigma_empty(self):
        assert sigma_ratio(SquarefreeNumber(())) == 1

    def test_sigma_single(self):
        assert sigma_ratio(SquarefreeNumber((2,))) == Fraction(3, 2)

    def test_sigma_pair(self):
        assert sigma_ratio(SquarefreeNumber((2, 3))) == 2

    def test_classical_product_bound(self):
        # phi(n)/n * sigma(n)/n is at most 1 and above 6/pi^2 (minus slack).
        rng = random.Random(5)
        lower = 6 / math.pi**2 - 0.02
        checked = 0
        for n in range(2, 10**4):
            f = factorize(n, BUDGET)
            if any(e > 1 for _, e in f.entries):
                continue
            sq = SquarefreeNumber(tuple(p for p, _ in f.entries))
            product = phi_ratio(sq) * sigma_ratio(sq)
            assert product <= 1
            assert float(product) > lower
            checked += 1
        assert checked > 6000


class TestRatioReport:
    def test_table1_first_failure(self):
        report = ratio_report(2381, QuotientMode("phi", "twin-gap"), BUDGET)
        assert report.quotient == Fraction(33, 32)
        assert report.decimal.startswith("1.03125")

    def test_table1_second_failure(self):
        report = ratio_report(3851, QuotientMode("phi", "twin-gap"), BUDGET)
        assert report.quotient == Fraction(53, 50)
        assert float(report.quotient) == 1.06

    def test_twin_successor_small(self):
        report = ratio_report(29, QuotientMode("phi", "twin-successor"), BUDGET)
        assert report.quotient == Fraction(2, 7)

    def test_factorizations_multiply_back(self):
        report = ratio_report(2381, QuotientMode("phi", "twin-gap"), BUDGET)
        assert report.numerator_factorization.value() == 2382
        assert report.denominator_factorization.value() == 2380

    def test_non_prime_rejected(self):
        with pytest.raises(ValueError, match="p not prime"):
            ratio_report(2382, QuotientMode("phi", "twin-gap"), BUDGET)

    def test_twin_shape_needs_twin(self):
        # 23 is prime but 25 is not.
        with pytest.raises(ValueError, match=r"p\+2 not prime"):
            ratio_report(23, QuotientMode("phi", "twin-gap"), BUDGET)

    def test_prime_successor_does_not_need_twin(self):
        report = ratio_report(23, QuotientMode("phi", "prime-successor"), BUDGET)
        assert report.quotient == Fraction(phi_brute(24), phi_brute(23))

    def test_digits_matched_against_target(self):
        report = ratio_report(
            2381,
            QuotientMode("phi", "twin-gap"),
            BUDGET,
            target=Fraction(1),
        )
        assert report.digits_matched == 2  # "1.0" then 3 vs 0 mismatch

    def test_unresolved_neighbor_raises(self):
        # p+1 = 2 * 153 * M89 * M107 where the Mersenne product is a
        # semiprime far beyond the rho budget.
        p = 2 * 153 * (2**89 - 1) * (2**107 - 1) - 1
        with pytest.raises(ValueError, match="factorization unresolved"):
            ratio_report(
                p,
                QuotientMode("phi", "prime-successor"),
                FactorBudget(trial_limit=10**3, rho_rounds=1),
            )

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            QuotientMode("phi", "bogus")
        with pytest.raises(ValueError):
            QuotientMode("tau", "twin-gap")
