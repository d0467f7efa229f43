import random
from fractions import Fraction

import pytest

from totquot.arith import sieve_primes
from totquot.greedy import (
    OperationCancelled,
    TargetSpec,
    approx_phi_ratio,
    approx_sigma_ratio,
)
from totquot.multiplicative import phi_ratio, sigma_ratio


def naive_phi_greedy(xi, forbidden, eps, prime_bound=10**6):
    """Reference: probe every prime in ascending order."""
    ratio = Fraction(1)
    primes = []
    for q in sieve_primes(prime_bound).tolist():
        if ratio <= xi * (1 + eps):
            break
        if q in forbidden:
            continue
        if ratio * (q - 1) / q >= xi:
            primes.append(q)
            ratio *= Fraction(q - 1, q)
    return tuple(primes)


def naive_sigma_greedy(xi, forbidden, eps, prime_bound=10**6):
    ratio = Fraction(1)
    primes = []
    for q in sieve_primes(prime_bound).tolist():
        if ratio >= xi * (1 - eps):
            break
        if q in forbidden:
            continue
        if ratio * (q + 1) / q <= xi:
            primes.append(q)
            ratio *= Fraction(q + 1, q)
    return tuple(primes)


class TestPhiGreedy:
    def test_target_one_gives_empty_product(self):
        spec = TargetSpec(Fraction(1), frozenset({2, 5}), Fraction(1, 10))
        assert approx_phi_ratio(spec).primes == ()

    def test_half(self):
        spec = TargetSpec(Fraction(1, 2), frozenset(), Fraction(1, 100))
        n = approx_phi_ratio(spec)
        assert n.primes == (2,)
        assert phi_ratio(n) == Fraction(1, 2)

    def test_two_thirds_skips_two(self):
        spec = TargetSpec(Fraction(2, 3), frozenset(), Fraction(1, 100))
        assert approx_phi_ratio(spec).primes == (3,)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            approx_phi_ratio(TargetSpec(Fraction(3, 2), frozenset(), Fraction(1, 10)))
        with pytest.raises(ValueError):
            approx_phi_ratio(TargetSpec(Fraction(0), frozenset(), Fraction(1, 10)))

    def test_matches_naive_reference(self):
        rng = random.Random(17)
        for _ in range(60):
            xi = Fraction(rng.randrange(100, 1000), 1000)
            eps = Fraction(1, rng.choice([10, 100, 1000]))
            forbidden = frozenset(
                rng.sample([2, 3, 5, 7, 11, 13], rng.randrange(0, 4))
            )
            got = approx_phi_ratio(TargetSpec(xi, forbidden, eps))
            assert got.primes == naive_phi_greedy(xi, forbidden, eps)

    def test_postcondition_and_forbidden(self):
        rng = random.Random(19)
        for _ in range(40):
            xi = Fraction(rng.randrange(100, 999), 1000)
            eps = Fraction(1, 1000)
            forbidden = frozenset({2, 3})
            n = approx_phi_ratio(TargetSpec(xi, forbidden, eps))
            ratio = phi_ratio(n)
            assert xi <= ratio <= xi * (1 + eps)
            assert not (set(n.primes) & forbidden)
            assert len(set(n.primes)) == len(n.primes)

    def test_running_ratio_monotone(self):
        n = approx_phi_ratio(TargetSpec(Fraction(1, 8), frozenset(), Fraction(1, 100)))
        running = Fraction(1)
        previous = running
        for q in n.primes:
            running *= Fraction(q - 1, q)
            assert running < previous
            previous = running

    def test_deterministic(self):
        spec = TargetSpec(Fraction(355, 1130), frozenset({5}), Fraction(1, 10**6))
        assert approx_phi_ratio(spec) == approx_phi_ratio(spec)

    def test_block_mode_same_postcondition(self):
        xi = Fraction(7, 10)
        eps = Fraction(1, 100)
        spec = TargetSpec(xi, frozenset({2, 3}), eps)
        blocked = approx_phi_ratio(spec, block=True)
        ratio = phi_ratio(blocked)
        assert xi <= ratio <= xi * (1 + eps)
        # anchored above 1/eps: all primes beyond it
        assert min(blocked.primes) > 100

    def test_cancellation(self):
        spec = TargetSpec(Fraction(1, 2), frozenset(), Fraction(1, 10**6))
        with pytest.raises(OperationCancelled):
            approx_phi_ratio(spec, cancel=lambda: True)


class TestSigmaGreedy:
    def test_target_one_gives_empty_product(self):
        spec = TargetSpec(Fraction(1), frozenset(), Fraction(1, 10))
        assert approx_sigma_ratio(spec).primes == ()

    def test_three_halves(self):
        spec = TargetSpec(Fraction(3, 2), frozenset(), Fraction(1, 100))
        n = approx_sigma_ratio(spec)
        assert n.primes == (2,)
        assert sigma_ratio(n) == Fraction(3, 2)

    def test_two(self):
        spec = TargetSpec(Fraction(2), frozenset(), Fraction(1, 100))
        n = approx_sigma_ratio(spec)
        assert n.primes == (2, 3)
        assert sigma_ratio(n) == 2

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            approx_sigma_ratio(TargetSpec(Fraction(1, 2), frozenset(), Fraction(1, 10)))

    def test_matches_naive_reference(self):
        rng = random.Random(23)
        for _ in range(60):
            xi = Fraction(rng.randrange(1000, 4000), 1000)
            eps = Fraction(1, rng.choice([10, 100, 1000]))
            forbidden = frozenset(
                rng.sample([2, 3, 5, 7, 11, 13], rng.randrange(0, 4))
            )
            got = approx_sigma_ratio(TargetSpec(xi, forbidden, eps))
            assert got.primes == naive_sigma_greedy(xi, forbidden, eps)

    def test_postcondition_and_forbidden(self):
        rng = random.Random(29)
        for _ in range(40):
            xi = Fraction(rng.randrange(1001, 3000), 1000)
            eps = Fraction(1, 1000)
            forbidden = frozenset({2, 3})
            n = approx_sigma_ratio(TargetSpec(xi, forbidden, eps))
            ratio = sigma_ratio(n)
            assert xi * (1 - eps) <= ratio <= xi
            assert not (set(n.primes) & forbidden)

    def test_running_ratio_monotone(self):
        n = approx_sigma_ratio(TargetSpec(Fraction(5, 2), frozenset(), Fraction(1, 100)))
        running = Fraction(1)
        previous = running
        for q in n.primes:
            running *= Fraction(q + 1, q)
            assert running > previous
            previous = running

    def test_block_mode_same_postcondition(self):
        xi = Fraction(3, 2)
        eps = Fraction(1, 50)
        spec = TargetSpec(xi, frozenset({2, 3}), eps)
        blocked = approx_sigma_ratio(spec, block=True)
        ratio = sigma_ratio(blocked)
        assert xi * (1 - eps) <= ratio <= xi
        assert min(blocked.primes) > 50

    def test_epsilon_validated(self):
        with pytest.raises(ValueError):
            TargetSpec(Fraction(2), frozenset(), Fraction(0))
