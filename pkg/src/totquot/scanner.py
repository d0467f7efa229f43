"""Segmented enumeration of twin primes with exact quotient computation.

For every twin pair p, p+2 with 5 <= p <= limit the scanner factors p-1 and
p+1 inside a smallest-prime-factor segment (with trial-division fallback
once a quotient drops out of the segment) and emits the exact ratio
phi(p+1)/phi(p-1) or the sigma analogue.  A record is a dominance failure
when the ratio exceeds 1; running leaders are the failures whose ratio beats
every earlier one.

The summary also reports the conjectured pair count 2*C2*Integral(dt/ln^2 t)
with the twin prime constant C2 evaluated from a truncated prime product
plus an integral tail correction.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .arith import sieve_primes
from .ratio import truncate_decimal

SEGMENT_SIZE = 1 << 22
LIMIT_CAP = 1 << 56  # base sieve must reach sqrt(limit)

EULER_GAMMA = 0.5772156649015328606065


def _adaptive_simpson(f, a: float, b: float, rel_tol: float = 1e-9) -> float:
    """Adaptive Simpson quadrature with Richardson extrapolation."""

    def recurse(a, b, fa, fm, fb, whole, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        refined = left + right
        if depth <= 0 or abs(refined - whole) <= 15 * rel_tol * abs(refined):
            return refined + (refined - whole) / 15
        return recurse(a, m, fa, flm, fm, left, depth - 1) + recurse(
            m, b, fm, frm, fb, right, depth - 1
        )

    fa, fb = f(a), f(b)
    m = (a + b) / 2
    fm = f(m)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return recurse(a, b, fa, fm, fb, whole, 60)


@lru_cache(maxsize=1)
def twin_prime_constant(product_limit: int = 10**6) -> float:
    """C2 = prod over odd primes of (1 - 1/(p-1)^2), truncated at
    `product_limit` with an integral estimate of the omitted tail."""
    primes = sieve_primes(product_limit)
    odd = primes[primes >= 3].astype(np.float64)
    log_sum = math.fsum(np.log1p(-1.0 / (odd - 1.0) ** 2).tolist())

    def tail_integrand(u):
        t = 1.0 / u
        return -math.log1p(-1.0 / (t - 1.0) ** 2) / math.log(t) / (u * u)

    tail = _adaptive_simpson(tail_integrand, 1e-13, 1.0 / product_limit, 1e-12)
    return math.exp(log_sum - tail)


def pi2_estimate(x: float) -> float:
    """Conjectured twin pair count 2*C2*Integral_2^x dt/ln^2 t."""
    if x <= 2:
        return 0.0
    c2 = twin_prime_constant()
    return 2 * c2 * _adaptive_simpson(lambda t: 1.0 / math.log(t) ** 2, 2.0, float(x))


@dataclass(frozen=True)
class TwinRecord:
    p: int
    ratio: Fraction
    is_failure: bool


@dataclass(frozen=True)
class ScanSummary:
    limit: int
    fn: str
    twin_count: int
    failure_count: int
    leaders: tuple[TwinRecord, ...]
    pi2_estimate: float
    c2: float

    @property
    def failure_fraction(self) -> float:
        return self.failure_count / self.twin_count if self.twin_count else 0.0


def _phi_from_pairs(pairs) -> int:
    result = 1
    for q, e in pairs:
        result *= q ** (e - 1) * (q - 1)
    return result


def _sigma_from_pairs(pairs) -> int:
    result = 1
    for q, e in pairs:
        result *= (q ** (e + 1) - 1) // (q - 1)
    return result


def _factor_in_table(n: int, lo: int, spf, base_primes) -> list[tuple[int, int]]:
    """Factor n using the segment's SPF table while n stays inside it, then
    finish small quotients by trial division over the base primes."""
    counts: dict[int, int] = {}
    x = n
    while x >= lo:
        q = int(spf[x - lo])
        e = 0
        while x % q == 0:
            x //= q
            e += 1
        counts[q] = counts.get(q, 0) + e
    if x > 1:
        for q in base_primes:
            if q * q > x:
                break
            if x % q == 0:
                e = 0
                while x % q == 0:
                    x //= q
                    e += 1
                counts[q] = counts.get(q, 0) + e
        if x > 1:
            counts[x] = counts.get(x, 0) + 1
    return sorted(counts.items())


def _scan_window(window_lo: int, window_hi: int, fn: str) -> list[TwinRecord]:
    """Twin records for p in [window_lo, window_hi); the SPF table covers
    [window_lo - 1, window_hi + 2) so p-1 .. p+2 are always inside."""
    table_lo = window_lo - 1
    table_hi = window_hi + 2
    base_primes = sieve_primes(math.isqrt(table_hi - 1)).tolist()
    spf = np.zeros(table_hi - table_lo, dtype=np.int64)
    for p in reversed(base_primes):
        start = max(p * p, (table_lo + p - 1) // p * p)
        if start < table_hi:
            spf[start - table_lo :: p] = p
    cells = np.arange(table_lo, table_hi, dtype=np.int64)
    unmarked = spf == 0
    spf[unmarked] = cells[unmarked]

    prime_mask = spf == cells
    twin = prime_mask[:-2] & prime_mask[2:]
    evaluate = _phi_from_pairs if fn == "phi" else _sigma_from_pairs
    records = []
    for off in np.flatnonzero(twin).tolist():
        p = table_lo + off
        if p < window_lo or p % 2 == 0:
            continue
        num = evaluate(_factor_in_table(p + 1, table_lo, spf, base_primes))
        den = evaluate(_factor_in_table(p - 1, table_lo, spf, base_primes))
        ratio = Fraction(num, den)
        records.append(TwinRecord(p=p, ratio=ratio, is_failure=ratio > 1))
    return records


def _windows(limit: int) -> Iterator[tuple[int, int]]:
    lo = 5
    step = SEGMENT_SIZE - 3
    while lo <= limit:
        hi = min(lo + step, limit + 1)
        yield lo, hi
        lo = hi


def _check_limit(limit: int):
    if limit < 5:
        raise ValueError("limit must be at least 5")
    if limit > LIMIT_CAP:
        raise ValueError(f"limit {limit} beyond the segment plan cap {LIMIT_CAP}")


def _scan_window_task(args):
    return _scan_window(*args)


def scan(limit: int, fn: str = "phi", threads: int = 1) -> Iterator[TwinRecord]:
    """Every twin record with 5 <= p <= limit, in ascending p order.

    Segments are independent; with threads > 1 they are processed by worker
    processes and merged back in order, so output is identical either way.
    """
    _check_limit(limit)
    if fn not in ("phi", "sigma"):
        raise ValueError("fn must be phi or sigma")
    if threads <= 1:
        for lo, hi in _windows(limit):
            yield from _scan_window(lo, hi, fn)
    else:
        args = [(lo, hi, fn) for lo, hi in _windows(limit)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for records in pool.map(_scan_window_task, args):
                yield from records


def summarize(limit: int, fn: str = "phi", threads: int = 1) -> ScanSummary:
    """One-pass scan summary: counts, running leaders, and the pair-count
    model evaluated at the limit."""
    twin_count = failure_count = 0
    leaders: list[TwinRecord] = []
    best = Fraction(1)
    for record in scan(limit, fn, threads):
        twin_count += 1
        if record.is_failure:
            failure_count += 1
            if record.ratio > best:
                best = record.ratio
                leaders.append(record)
    return ScanSummary(
        limit=limit,
        fn=fn,
        twin_count=twin_count,
        failure_count=failure_count,
        leaders=tuple(leaders),
        pi2_estimate=pi2_estimate(limit),
        c2=twin_prime_constant(),
    )


def leaders(limit: int, fn: str = "phi", threads: int = 1) -> ScanSummary:
    """Summary whose `leaders` are the running maxima among failures."""
    return summarize(limit, fn, threads)


def stats(limit: int, fn: str = "phi", threads: int = 1) -> ScanSummary:
    """Alias of summarize; kept for symmetry with the command line."""
    return summarize(limit, fn, threads)


CSV_HEADER = "p,ratio_num,ratio_den,ratio_decimal6"


def record_csv_row(record: TwinRecord) -> str:
    return (
        f"{record.p},{record.ratio.numerator},{record.ratio.denominator},"
        f"{truncate_decimal(record.ratio, 6)}"
    )


def record_json(record: TwinRecord) -> dict:
    return {
        "p": record.p,
        "ratio": {
            "num": str(record.ratio.numerator),
            "den": str(record.ratio.denominator),
        },
        "decimal6": truncate_decimal(record.ratio, 6),
        "is_failure": record.is_failure,
    }
