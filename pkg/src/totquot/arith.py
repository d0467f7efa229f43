"""Integer arithmetic substrate: primality testing, sieves, CRT, factoring.

Everything here works on plain Python integers (arbitrary precision) with
numpy used only inside the sieves.  All functions are pure and deterministic
for a fixed policy/budget, so results are reproducible and safe to share
across worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

# Strong-pseudoprime bases making Miller-Rabin exact for all n < 2^64.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
DETERMINISTIC_LIMIT = 1 << 64

# Guard rails for the sieves (configurable by callers that know better).
SIEVE_LIMIT_CAP = 1 << 28
SEGMENT_CAP = 1 << 24


class Primality(str, Enum):
    PRIME = "prime"
    PROBABLE_PRIME = "probable-prime"
    COMPOSITE = "composite"


class CofactorStatus(str, Enum):
    FULLY_FACTORED = "fully-factored"
    PROBABLE_PRIME_COFACTOR = "probable-prime-cofactor"
    COMPOSITE_UNRESOLVED = "composite-cofactor-unresolved"


@dataclass(frozen=True)
class PrimalityPolicy:
    """How to test primality above the deterministic 2^64 threshold.

    ``probabilistic`` runs `rounds` strong-pseudoprime rounds with bases
    drawn deterministically from `seed`, plus one strong Lucas test.
    ``deterministic-small`` refuses inputs at or above 2^64, which keeps
    scanner output unconditional.
    """

    mode: str = "probabilistic"
    rounds: int = 40
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("probabilistic", "deterministic-small"):
            raise ValueError(f"unknown primality mode {self.mode!r}")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")


DEFAULT_POLICY = PrimalityPolicy()


@dataclass(frozen=True)
class FactorBudget:
    """Effort cap for `factorize`: trial division bound and rho attempts."""

    trial_limit: int = 10**6
    rho_rounds: int = 8


DEFAULT_BUDGET = FactorBudget()


@dataclass(frozen=True)
class Factorization:
    """Prime factorization evidence: sorted (prime, exponent) pairs plus an
    optional unsplit cofactor whose status records how far the budget got."""

    entries: tuple[tuple[int, int], ...]
    cofactor: int = 1
    cofactor_status: CofactorStatus = CofactorStatus.FULLY_FACTORED

    def value(self) -> int:
        n = self.cofactor
        for p, e in self.entries:
            n *= p**e
        return n

    @property
    def is_resolved(self) -> bool:
        return self.cofactor_status is not CofactorStatus.COMPOSITE_UNRESOLVED


@dataclass(frozen=True)
class SquarefreeNumber:
    """A squarefree positive integer kept as its ascending prime tuple.

    The empty tuple represents 1.  The product is materialized lazily so a
    construction with thousands of digits costs nothing until needed.
    """

    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if any(q >= r for q, r in zip(self.primes, self.primes[1:])):
            raise ValueError("primes must be strictly increasing")

    @property
    def value(self) -> int:
        return math.prod(self.primes)

    def __contains__(self, q: int) -> bool:
        return q in self.primes


def _miller_rabin_witness(n: int, a: int, d: int, s: int) -> bool:
    """True if base `a` witnesses n composite (n odd, n-1 = d*2^s)."""
    a %= n
    if a == 0:
        return False
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameter selection."""
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    if r * r == n:
        return False
    # Find D in 5, -7, 9, -11, ... with (D/n) = -1.
    d = 5
    while True:
        j = _jacobi(d % n, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    q = (1 - d) // 4
    # n + 1 = k * 2^s with k odd; compute U_k, V_k for P = 1.
    k = n + 1
    s = (k & -k).bit_length() - 1
    k >>= s
    u, v, qk = 1, 1, q % n
    for bit in bin(k)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (u + v) % n, (v + d * u) % n
            if u % 2:
                u += n
            if v % 2:
                v += n
            u, v = u // 2 % n, v // 2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def _probabilistic_bases(n: int, rounds: int, seed: int) -> Iterator[int]:
    # xorshift-style expansion of (n, seed); avoids random module state.
    state = (n % (1 << 61)) * 0x9E3779B97F4A7C15 + seed * 0xBF58476D1CE4E5B9 + 1
    mask = (1 << 64) - 1
    for _ in range(rounds):
        state = state & mask
        state ^= state >> 12
        state ^= (state << 25) & mask
        state ^= state >> 27
        yield 2 + (state * 0x2545F4914F6CDD1D & mask) % (n - 3)


def is_prime(n: int, policy: PrimalityPolicy = DEFAULT_POLICY) -> Primality:
    """Classify n as prime, probable-prime, or composite.

    Below 2^64 the answer is exact (fixed strong-pseudoprime base set).
    Above, `probable-prime` means n survived the policy's random strong
    rounds plus a strong Lucas test; the bases depend only on (n, seed).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < 2:
        return Primality.COMPOSITE
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return Primality.PRIME if n == p else Primality.COMPOSITE
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    if n < DETERMINISTIC_LIMIT:
        for a in _DETERMINISTIC_BASES:
            if _miller_rabin_witness(n, a, d, s):
                return Primality.COMPOSITE
        return Primality.PRIME
    if policy.mode == "deterministic-small":
        raise ValueError(
            f"deterministic-small policy cannot decide primality of {n.bit_length()}-bit input"
        )
    for a in _probabilistic_bases(n, policy.rounds, policy.seed):
        if _miller_rabin_witness(n, a, d, s):
            return Primality.COMPOSITE
    if not _strong_lucas_prp(n):
        return Primality.COMPOSITE
    return Primality.PROBABLE_PRIME


def is_probable_prime(n: int, policy: PrimalityPolicy = DEFAULT_POLICY) -> bool:
    """Convenience wrapper: True when is_prime is prime or probable-prime."""
    return n >= 2 and is_prime(n, policy) is not Primality.COMPOSITE


def crt_solve(congruences: Sequence[tuple[int, int]]) -> int:
    """Solve x = r_i (mod m_i) for pairwise coprime moduli.

    Returns the unique solution in [0, prod m_i).  Folding pairwise keeps the
    coprimality check exact: each new modulus must be coprime to the running
    product.
    """
    x, m = 0, 1
    for r, q in congruences:
        if q < 1:
            raise ValueError("moduli must be >= 1")
        if not 0 <= r < q:
            raise ValueError(f"residue {r} out of range for modulus {q}")
        if math.gcd(m, q) != 1:
            raise ValueError("moduli not pairwise coprime")
        if q == 1:
            continue
        # x + m*t = r (mod q)  =>  t = (r - x) / m (mod q)
        t = (r - x) * pow(m, -1, q) % q
        x += m * t
        m *= q
    return x % m


def sieve_primes(limit: int, cap: int = SIEVE_LIMIT_CAP) -> np.ndarray:
    """All primes <= limit, ascending, as an int64 array."""
    if limit > cap:
        raise ValueError(f"sieve limit {limit} exceeds memory cap {cap}")
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def spf_segment(lo: int, hi: int, cap: int = SEGMENT_CAP) -> np.ndarray:
    """Smallest prime factor of every n in [lo, hi) as an int64 array.

    Base primes are applied in descending order so each cell's final value is
    its least prime factor; cells never hit are primes and get n itself.
    """
    if not 2 <= lo < hi:
        raise ValueError("need 2 <= lo < hi")
    if hi - lo > cap:
        raise ValueError(f"segment of {hi - lo} exceeds cap {cap}")
    spf = np.zeros(hi - lo, dtype=np.int64)
    base = sieve_primes(math.isqrt(hi - 1))
    for p in base[::-1].tolist():
        start = max(p * p, (lo + p - 1) // p * p)
        if start < hi:
            spf[start - lo :: p] = p
    unmarked = spf == 0
    spf[unmarked] = np.arange(lo, hi, dtype=np.int64)[unmarked]
    return spf


def iter_primes(start: int = 2, chunk: int = 1 << 20) -> Iterator[int]:
    """Yield primes >= start indefinitely via a growing segmented sieve."""
    lo = max(2, start)
    if lo == 2:
        yield 2
        lo = 3
    if lo % 2 == 0:
        lo += 1
    while True:
        hi = lo + chunk
        base = sieve_primes(math.isqrt(hi - 1))
        mask = np.ones(chunk, dtype=bool)
        for p in base.tolist():
            first = max(p * p, (lo + p - 1) // p * p)
            if first < hi:
                mask[first - lo :: p] = False
        for off in np.flatnonzero(mask).tolist():
            n = lo + off
            if n % 2:
                yield n
        lo = hi


def next_prime_at_least(n: int) -> int:
    """Smallest prime >= n."""
    return next(iter_primes(max(2, n)))


def _brent_rho(n: int, x0: int, c: int, max_iters: int) -> int | None:
    """Brent-cycle Pollard rho; returns a nontrivial factor of odd n or None."""
    y, r, q = x0, 1, 1
    g, x, ys = 1, y, y
    iters = 0
    while g == 1 and iters < max_iters:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            steps = min(128, r - k)
            for _ in range(steps):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            iters += steps
            g = math.gcd(q, n)
            k += steps
        r *= 2
    if g == n:
        # Backtrack one step at a time to isolate the factor.
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if 1 < g < n else None


def _rho_split(n: int, seed: int, rounds: int) -> int | None:
    """Try `rounds` deterministic Brent runs on composite odd n."""
    for attempt in range(rounds):
        mix = ((n % (1 << 61)) * 1_000_003 + seed * 65_537 + attempt) % (1 << 61)
        x0 = 2 + mix % (n - 3) if n > 5 else 2
        c = 1 + (mix >> 17) % (n - 2)
        g = _brent_rho(n, x0, c, max_iters=1 << 17)
        if g is not None:
            return g
    return None


_TRIAL_CACHE: dict[int, list[int]] = {}


def _trial_primes(limit: int) -> list[int]:
    if limit not in _TRIAL_CACHE:
        _TRIAL_CACHE.clear()
        _TRIAL_CACHE[limit] = sieve_primes(limit).tolist()
    return _TRIAL_CACHE[limit]


def factorize(
    n: int,
    budget: FactorBudget = DEFAULT_BUDGET,
    policy: PrimalityPolicy = DEFAULT_POLICY,
) -> Factorization:
    """Factor n within a fixed budget, never failing outright.

    Strips primes up to budget.trial_limit by sieved trial division, then
    splits the remainder with Brent rho (deterministically seeded from the
    value and the policy seed).  Whatever survives is primality-tested and
    reported as the cofactor with an honest status.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    counts: dict[int, int] = {}
    rem = n
    for p in _trial_primes(budget.trial_limit):
        if p * p > rem:
            break
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            counts[p] = e
    if 1 < rem <= budget.trial_limit * budget.trial_limit:
        # Trial division reached sqrt(rem), so the remainder is prime.
        counts[rem] = counts.get(rem, 0) + 1
        rem = 1

    # Split the remainder; proven primes go to entries, anything that is only
    # probable (>= 2^64) or that rho could not crack stays in the cofactor.
    probable: list[int] = []
    unresolved: list[int] = []
    pending = [rem] if rem > 1 else []
    while pending:
        m = pending.pop()
        verdict = is_prime(m, policy)
        if verdict is Primality.PRIME:
            counts[m] = counts.get(m, 0) + 1
            continue
        if verdict is Primality.PROBABLE_PRIME:
            probable.append(m)
            continue
        g = _rho_split(m, policy.seed, budget.rho_rounds)
        if g is None:
            unresolved.append(m)
        else:
            pending.append(g)
            pending.append(m // g)

    cofactor = math.prod(probable) * math.prod(unresolved)
    if cofactor == 1:
        status = CofactorStatus.FULLY_FACTORED
    elif not unresolved and len(probable) == 1:
        status = CofactorStatus.PROBABLE_PRIME_COFACTOR
    else:
        status = CofactorStatus.COMPOSITE_UNRESOLVED
    entries = tuple(sorted(counts.items()))
    return Factorization(entries=entries, cofactor=cofactor, cofactor_status=status)


def factorization_from_primes(parts: Sequence[tuple[int, int]]) -> Factorization:
    """Build a Factorization from known (prime, exponent) parts, merging
    duplicates.  Used when the factor structure is known by construction."""
    counts: dict[int, int] = {}
    for p, e in parts:
        counts[p] = counts.get(p, 0) + e
    return Factorization(entries=tuple(sorted(counts.items())))
