"""Greedy construction of squarefree numbers with a prescribed phi(n)/n or
sigma(n)/n, avoiding a forbidden prime set.

The greedy walk starts at n = 1 and repeatedly multiplies in the next
smallest admissible prime that keeps phi(n)/n >= xi (resp. sigma(n)/n <= xi),
stopping once the ratio is within relative epsilon of the target.  Because
the inclusion condition is monotone in q for a fixed running ratio, the walk
can jump straight to the smallest usable prime instead of probing every one;
the resulting prime list is identical to the naive scan.

A `block` switch anchors the walk above max(1/epsilon, forbidden primes), so
the output is a product of (near) consecutive primes from a single interval;
it satisfies the same postcondition and exists for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .arith import SIEVE_LIMIT_CAP, SquarefreeNumber, iter_primes, next_prime_at_least


class OperationCancelled(RuntimeError):
    pass


@dataclass(frozen=True)
class TargetSpec:
    """Target ratio xi, primes to avoid, and relative tolerance epsilon."""

    xi: Fraction
    forbidden: frozenset[int] = frozenset()
    epsilon: Fraction = Fraction(1, 100)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "forbidden", frozenset(self.forbidden))


MAX_INCLUDED_PRIMES = 30_000
_EXP_NEG_GAMMA = 0.5614594835668851  # e^(-gamma), for feasibility estimates


def _next_usable_prime(n: int, forbidden: frozenset[int]) -> int:
    q = next_prime_at_least(n)
    while q in forbidden:
        q = next_prime_at_least(q + 1)
    return q


def _prime_bound_guard(q: int):
    # The jump target squares the distance to xi each step; refuse to walk
    # past what segmented sieving can reach.
    if q > SIEVE_LIMIT_CAP**2:
        raise ValueError(
            f"tolerance requires primes near {q:.3g}, beyond the sieve guard"
        )


def _feasibility_guard(kind: str, xi: Fraction):
    """Estimate the largest prime the walk must reach and refuse targets
    whose exact-arithmetic cost would be astronomical.

    By Mertens, prod (1-1/q) over all primes up to U is about e^-gamma/ln U,
    so a phi target xi needs U near exp(e^-gamma/xi); the sigma product grows
    like (6 e^gamma/pi^2) ln U, needing U near exp(0.924 xi)."""
    if kind == "phi":
        exponent = _EXP_NEG_GAMMA / float(xi)
    else:
        exponent = 0.9239 * float(xi)
    if exponent > 14.0:  # U beyond ~1.2e6: more than ~9e4 primes to include
        raise ValueError(
            f"{kind} target {float(xi):.4g} needs prime products up to about "
            f"exp({exponent:.1f}); too extreme for exact construction"
        )


def _included_guard(count: int):
    if count > MAX_INCLUDED_PRIMES:
        raise ValueError(
            f"construction would include more than {MAX_INCLUDED_PRIMES} "
            "primes; target too extreme for exact arithmetic"
        )


def approx_phi_ratio(
    spec: TargetSpec,
    block: bool = False,
    cancel: Callable[[], bool] | None = None,
) -> SquarefreeNumber:
    """Squarefree n avoiding spec.forbidden with xi <= phi(n)/n <= xi(1+eps)."""
    xi, eps = spec.xi, spec.epsilon
    if not 0 < xi <= 1:
        raise ValueError("xi must lie in (0, 1] for the phi constructor")
    _feasibility_guard("phi", xi)
    ceiling = xi * (1 + eps)
    primes: list[int] = []
    num, den = 1, 1  # running phi(n)/n, unreduced
    floor_q = 2
    if block:
        anchor = max([math.ceil(1 / eps) + 1, *[p + 1 for p in spec.forbidden]])
        floor_q = anchor
    while Fraction(num, den) > ceiling:
        if cancel is not None and cancel():
            raise OperationCancelled("phi constructor cancelled")
        _included_guard(len(primes))
        # Including q multiplies the ratio by (q-1)/q, allowed while the
        # ratio stays >= xi, i.e. q >= r/(r - xi); jump straight there.
        rnum = num * xi.denominator
        rden = den * xi.numerator
        qmin = -(-rnum // (rnum - rden))
        _prime_bound_guard(max(qmin, floor_q))
        q = _next_usable_prime(max(qmin, floor_q), spec.forbidden)
        while num * (q - 1) * xi.denominator < den * q * xi.numerator:
            # landed on a prime that would overshoot below xi; take the next
            q = _next_usable_prime(q + 1, spec.forbidden)
        primes.append(q)
        num *= q - 1
        den *= q
        floor_q = q + 1
    return SquarefreeNumber(tuple(primes))


def approx_sigma_ratio(
    spec: TargetSpec,
    block: bool = False,
    cancel: Callable[[], bool] | None = None,
) -> SquarefreeNumber:
    """Squarefree n avoiding spec.forbidden with xi(1-eps) <= sigma(n)/n <= xi."""
    xi, eps = spec.xi, spec.epsilon
    if xi < 1:
        raise ValueError("xi must be >= 1 for the sigma constructor")
    _feasibility_guard("sigma", xi)
    floor_ratio = xi * (1 - eps)
    primes: list[int] = []
    num, den = 1, 1  # running sigma(n)/n, unreduced
    floor_q = 2
    if block:
        anchor = max([math.ceil(1 / eps) + 1, *[p + 1 for p in spec.forbidden]])
        floor_q = anchor
    while Fraction(num, den) < floor_ratio:
        if cancel is not None and cancel():
            raise OperationCancelled("sigma constructor cancelled")
        _included_guard(len(primes))
        # Including q multiplies the ratio by (q+1)/q, allowed while the
        # ratio stays <= xi, i.e. q >= r/(xi - r); jump straight there.
        rnum = num * xi.denominator
        rden = den * xi.numerator
        qmin = max(2, -(-rnum // (rden - rnum)))
        _prime_bound_guard(max(qmin, floor_q))
        q = _next_usable_prime(max(qmin, floor_q), spec.forbidden)
        while num * (q + 1) * xi.denominator > den * q * xi.numerator:
            # landed on a prime that would overshoot above xi; take the next
            q = _next_usable_prime(q + 1, spec.forbidden)
        primes.append(q)
        num *= q + 1
        den *= q
        floor_q = q + 1
    return SquarefreeNumber(tuple(primes))
