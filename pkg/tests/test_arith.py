import math
import random

import pytest

from totquot.arith import (
    CofactorStatus,
    FactorBudget,
    Primality,
    PrimalityPolicy,
    SquarefreeNumber,
    crt_solve,
    factorize,
    is_prime,
    is_probable_prime,
    iter_primes,
    next_prime_at_least,
    sieve_primes,
    spf_segment,
)

EULER_GAMMA = 0.5772156649015328606065


def trial_is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def trial_factor(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


class TestIsPrime:
    def test_units_are_not_prime(self):
        assert is_prime(0) is Primality.COMPOSITE
        assert is_prime(1) is Primality.COMPOSITE

    def test_2381(self):
        assert is_prime(2381) is Primality.PRIME

    def test_1183(self):
        # 7 * 13^2
        assert is_prime(1183) is Primality.COMPOSITE

    def test_agrees_with_trial_division_below_1e5(self):
        for n in range(10**5):
            got = is_prime(n) is Primality.PRIME
            assert got == trial_is_prime(n), n

    def test_large_probable_primes(self):
        # 2^89 - 1 is a Mersenne prime; its neighbors are composite.
        m89 = 2**89 - 1
        assert is_prime(m89) is Primality.PROBABLE_PRIME
        assert is_prime(m89 - 2) is Primality.COMPOSITE
        assert is_prime(m89 + 2) is Primality.COMPOSITE

    def test_large_square_rejected(self):
        p = next_prime_at_least(2**33)
        assert is_prime(p * p) is Primality.COMPOSITE

    def test_deterministic_small_mode_refuses_large(self):
        policy = PrimalityPolicy(mode="deterministic-small")
        assert is_prime(2**61 - 1, policy) is Primality.PRIME
        with pytest.raises(ValueError):
            is_prime(2**89 - 1, policy)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            PrimalityPolicy(rounds=0)
        with pytest.raises(ValueError):
            PrimalityPolicy(mode="guess")

    def test_probable_prime_wrapper(self):
        assert is_probable_prime(2)
        assert not is_probable_prime(1)


class TestCrt:
    def test_spec_triple(self):
        assert crt_solve([(5, 8), (2, 9), (6, 25)]) == 1181

    def test_trivial_modulus(self):
        assert crt_solve([(0, 1)]) == 0

    def test_two_congruences(self):
        assert crt_solve([(1, 2), (2, 3)]) == 5

    def test_non_coprime_rejected(self):
        with pytest.raises(ValueError, match="moduli not pairwise coprime"):
            crt_solve([(1, 6), (2, 9)])

    def test_residue_range_checked(self):
        with pytest.raises(ValueError):
            crt_solve([(5, 3)])

    def test_random_property(self):
        rng = random.Random(7)
        for _ in range(200):
            moduli = []
            prod = 1
            while len(moduli) < 3:
                m = rng.randrange(2, 10**6)
                if math.gcd(m, prod) == 1:
                    moduli.append(m)
                    prod *= m
            congs = [(rng.randrange(m), m) for m in moduli]
            x = crt_solve(congs)
            assert 0 <= x < prod
            for r, m in congs:
                assert x % m == r


class TestSieve:
    def test_empty(self):
        assert sieve_primes(1).tolist() == []

    def test_ten(self):
        assert sieve_primes(10).tolist() == [2, 3, 5, 7]

    def test_hundred(self):
        primes = sieve_primes(100).tolist()
        assert len(primes) == 25
        assert primes[-1] == 97
        assert primes == [n for n in range(101) if trial_is_prime(n)]

    def test_memory_cap(self):
        with pytest.raises(ValueError, match="cap"):
            sieve_primes(10**7, cap=10**6)

    def test_iter_primes_matches_sieve(self):
        it = iter_primes()
        assert [next(it) for _ in range(25)] == sieve_primes(100).tolist()

    def test_iter_primes_from_offset(self):
        assert next(iter_primes(10**6)) == 1000003
        assert next_prime_at_least(1000003) == 1000003


class TestSpfSegment:
    def test_small_window(self):
        assert spf_segment(10, 14).tolist() == [2, 11, 2, 13]

    def test_twin_window(self):
        assert spf_segment(2381, 2383).tolist() == [2381, 2]

    def test_square(self):
        assert spf_segment(49, 50).tolist() == [7]

    def test_segment_cap(self):
        with pytest.raises(ValueError, match="cap"):
            spf_segment(2, 2 + 10**6, cap=10**5)

    def test_bounds_validated(self):
        with pytest.raises(ValueError):
            spf_segment(1, 10)

    def test_random_segments_vs_naive(self):
        rng = random.Random(3)
        for _ in range(20):
            lo = rng.randrange(2, 10**7)
            hi = lo + rng.randrange(1, 300)
            table = spf_segment(lo, hi)
            for i, n in enumerate(range(lo, hi)):
                smallest = next(
                    (d for d in range(2, math.isqrt(n) + 1) if n % d == 0), n
                )
                assert table[i] == smallest


class TestFactorize:
    def test_one(self):
        f = factorize(1)
        assert f.entries == ()
        assert f.cofactor == 1
        assert f.cofactor_status is CofactorStatus.FULLY_FACTORED

    def test_2380(self):
        f = factorize(2380)
        assert f.entries == ((2, 2), (5, 1), (7, 1), (17, 1))

    def test_2382(self):
        assert factorize(2382).entries == ((2, 1), (3, 1), (397, 1))

    def test_reassembly_below_1e6(self):
        rng = random.Random(11)
        budget = FactorBudget(trial_limit=10**4)
        for _ in range(2000):
            n = rng.randrange(1, 10**6)
            f = factorize(n, budget)
            assert f.value() == n
            assert f.cofactor_status is CofactorStatus.FULLY_FACTORED
            primes = [p for p, _ in f.entries]
            assert primes == sorted(primes)
            assert all(is_prime(p) is Primality.PRIME for p in primes)

    def test_matches_trial_oracle(self):
        rng = random.Random(13)
        for _ in range(300):
            n = rng.randrange(2, 10**9)
            assert list(factorize(n).entries) == trial_factor(n)

    def test_rho_splits_semiprime(self):
        p = next_prime_at_least(10**8)
        q = next_prime_at_least(10**9)
        f = factorize(p * q, FactorBudget(trial_limit=10**4, rho_rounds=8))
        assert f.entries == ((p, 1), (q, 1))

    def test_probable_prime_cofactor(self):
        big = 2**127 - 1  # Mersenne prime, far beyond proving range
        f = factorize(6 * big)
        assert f.entries == ((2, 1), (3, 1))
        assert f.cofactor == big
        assert f.cofactor_status is CofactorStatus.PROBABLE_PRIME_COFACTOR

    def test_unresolved_semiprime(self):
        # Product of two huge Mersenne primes: rho cannot split in budget.
        a = 2**89 - 1
        b = 2**107 - 1
        f = factorize(a * b, FactorBudget(trial_limit=10**3, rho_rounds=1))
        assert f.cofactor == a * b
        assert f.cofactor_status is CofactorStatus.COMPOSITE_UNRESOLVED
        assert not f.is_resolved

    def test_deterministic_for_fixed_budget(self):
        n = 2**64 + 13
        a = factorize(n)
        b = factorize(n)
        assert a == b

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            factorize(0)


class TestSquarefreeNumber:
    def test_empty_is_one(self):
        assert SquarefreeNumber(()).value == 1

    def test_product(self):
        assert SquarefreeNumber((2, 3, 7)).value == 42

    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            SquarefreeNumber((3, 3))
        with pytest.raises(ValueError):
            SquarefreeNumber((5, 3))


def test_mertens_product_sanity():
    # e^gamma * ln(x) * prod_{q <= x} (1 - 1/q) should be within 1% of 1.
    primes = sieve_primes(10**6).astype(float)
    log_sum = math.fsum(math.log1p(-1.0 / p) for p in primes.tolist())
    value = math.exp(EULER_GAMMA) * math.log(10**6) * math.exp(log_sum)
    assert abs(value - 1.0) < 0.01
