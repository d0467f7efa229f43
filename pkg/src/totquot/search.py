"""Witness search: find t making every family polynomial simultaneously
prime, with wheel pre-filtering and block-parallel scanning.

The wheel stores, for each prime q up to the wheel bound, the residues of t
at which some polynomial value would be divisible by q while being larger
than q (hence composite).  Residues are kept per prime rather than modulo
the full wheel product, which for the default bound of 100 would have about
10^36 residue classes.

Scanning walks fixed-span blocks of t.  Blocks are independent work units:
a block's candidate list and test outcomes depend only on the family, the
wheel, and the block bounds, so the smallest-witness result and its counters
are identical for any thread count.  Workers beyond the winning block are
discarded, never merged.
"""

from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Callable, Iterator

import numpy as np

from .arith import (
    DEFAULT_POLICY,
    DETERMINISTIC_LIMIT,
    Primality,
    PrimalityPolicy,
    is_prime,
    sieve_primes,
)
from .families import (
    AdmissibilityReport,
    DicksonFamily,
    check_admissible,
    polys_of,
    quotient_at,
)
from .ratio import digits_matched as _digits_matched

BLOCK_CANDIDATE_GOAL = 1 << 16
BLOCK_SPAN_MIN = 1 << 16
BLOCK_SPAN_MAX = 1 << 24


@dataclass(frozen=True)
class SearchConfig:
    t_start: int = 1
    t_limit: int | None = None  # default guard: t_start + 10^7 * wheel product
    wheel_bound: int = 100
    policy: PrimalityPolicy = DEFAULT_POLICY
    threads: int = 1
    deterministic: bool = True

    def __post_init__(self):
        if self.t_start < 1:
            raise ValueError("t_start must be >= 1")
        if self.wheel_bound < 2:
            raise ValueError("wheel_bound must be >= 2")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


@dataclass(frozen=True)
class SearchStats:
    candidates_filtered: int = 0
    primality_tests: int = 0
    wall_time: float = 0.0

    def merged(self, other: "SearchStats") -> "SearchStats":
        return SearchStats(
            self.candidates_filtered + other.candidates_filtered,
            self.primality_tests + other.primality_tests,
            self.wall_time,
        )


@dataclass(frozen=True)
class SearchResult:
    t: int
    primes: tuple[tuple[int, str], ...]  # (value, "prime" | "probable-prime")
    p: int
    quotient: Fraction
    digits_matched: int
    family: DicksonFamily
    stats: SearchStats


@dataclass(frozen=True)
class WheelPlan:
    """Per-prime banned residues of t; t survives iff no prime bans it."""

    primes: tuple[int, ...]
    banned: tuple[tuple[int, tuple[int, ...]], ...]  # (q, residues), residues nonempty
    t_start: int

    @property
    def modulus(self) -> int:
        return prod(self.primes)

    def survival_fraction(self) -> Fraction:
        f = Fraction(1)
        for q, residues in self.banned:
            f *= Fraction(q - len(residues), q)
        return f

    def allows(self, t: int) -> bool:
        return all(t % q not in residues for q, residues in self.banned)

    def allowed_residues(self, cap: int = 10**7) -> list[int]:
        """Materialized allowed residues modulo the full wheel product.
        Only for small wheels; the default bound's product is astronomical."""
        w = self.modulus
        if w > cap:
            raise ValueError(f"wheel modulus {w} too large to materialize")
        return [r for r in range(w) if self.allows(r)]


def build_wheel(family, wheel_bound: int, t_start: int = 1) -> WheelPlan:
    """Banned residues of t modulo each prime q <= wheel_bound.

    Accepts a DicksonFamily or a bare polynomial sequence.  A residue is
    banned for q only when some polynomial value is divisible by q there AND
    already exceeds q at t_start, so it can never be the prime q itself
    anywhere on the scan range.  Admissibility guarantees at least one
    allowed residue survives for every prime.
    """
    polys = polys_of(family)
    report = check_admissible(polys)
    if not report.admissible:
        raise ValueError(f"family is not admissible: {report.reason}")
    primes = [int(q) for q in sieve_primes(wheel_bound)]
    banned: list[tuple[int, tuple[int, ...]]] = []
    for q in primes:
        residues = set()
        for f in polys:
            if f(t_start) <= q:
                continue
            if f.lead % q == 0:
                continue  # constant mod q; nonzero by admissibility
            residues.add(-f.const * pow(f.lead, -1, q) % q)
        if len(residues) >= q:
            raise ValueError(f"wheel leaves no residue modulo {q}")
        if residues:
            banned.append((q, tuple(sorted(residues))))
    return WheelPlan(primes=tuple(primes), banned=tuple(banned), t_start=t_start)


def _block_span(plan: WheelPlan) -> int:
    f = plan.survival_fraction()
    if f == 0:
        return BLOCK_SPAN_MIN
    span = int(BLOCK_CANDIDATE_GOAL / float(f))
    return max(BLOCK_SPAN_MIN, min(BLOCK_SPAN_MAX, span))


def _block_candidates(plan: WheelPlan, start: int, stop: int) -> Iterator[int]:
    span = stop - start
    mask = np.ones(span, dtype=bool)
    for q, residues in plan.banned:
        for r in residues:
            first = (r - start) % q
            if first < span:
                mask[first::q] = False
    for off in np.flatnonzero(mask).tolist():
        yield start + off


def _test_order(polys, t_start: int) -> list[int]:
    sizes = [(max(f(t_start), 2).bit_length(), i) for i, f in enumerate(polys)]
    return [i for _, i in sorted(sizes)]


def find_simultaneous(
    polys, cfg: SearchConfig = SearchConfig()
) -> tuple[int | None, SearchStats]:
    """Smallest t in range making every bare polynomial (probably) prime.

    Single-threaded engine without the quotient gate; find_witness layers
    the family-specific interval verification on top of the same scan.
    """
    polys = polys_of(polys)
    started = time.perf_counter()
    plan = build_wheel(polys, cfg.wheel_bound, cfg.t_start)
    t_limit = cfg.t_limit
    if t_limit is None:
        t_limit = cfg.t_start + 10**7 * plan.modulus
    order = _test_order(polys, cfg.t_start)
    span = _block_span(plan)
    filtered = tests = 0
    for start, stop in _blocks(cfg.t_start, t_limit, span):
        seen = 0
        for t in _block_candidates(plan, start, stop):
            seen += 1
            for i in order:
                v = polys[i](t)
                tests += 1
                if v < 2 or is_prime(v, cfg.policy) is Primality.COMPOSITE:
                    break
            else:
                filtered += (t - start + 1) - seen
                stats = SearchStats(filtered, tests, time.perf_counter() - started)
                return t, stats
        filtered += (stop - start) - seen
    return None, SearchStats(filtered, tests, time.perf_counter() - started)


def _scan_block(
    family: DicksonFamily,
    plan: WheelPlan,
    order: list[int],
    start: int,
    stop: int,
    policy: PrimalityPolicy,
) -> tuple[int | None, Fraction | None, int, int]:
    """Scan one block; returns (witness t or None, quotient, filtered, tests)."""
    tests = 0
    seen = 0
    lo, hi = family.interval
    for t in _block_candidates(plan, start, stop):
        seen += 1
        good = True
        for i in order:
            v = family.polys[i](t)
            tests += 1
            if v < 2 or is_prime(v, policy) is Primality.COMPOSITE:
                good = False
                break
        if not good:
            continue
        quotient = quotient_at(family, t, policy)
        if lo < quotient < hi:
            # Filtered count covers only the scanned prefix [start, t].
            return t, quotient, (t - start + 1) - seen, tests
        # Witness below the telescoping threshold: keep scanning.
    return None, None, (stop - start) - seen, tests


def _scan_block_task(args):
    index, family, plan, order, start, stop, policy = args
    t, quotient, filtered, tests = _scan_block(family, plan, order, start, stop, policy)
    return index, t, quotient, filtered, tests


def _blocks(t_start: int, t_limit: int, span: int) -> Iterator[tuple[int, int]]:
    lo = t_start
    while lo < t_limit:
        hi = min(lo + span, t_limit)
        yield lo, hi
        lo = hi


def find_witness(
    family: DicksonFamily,
    cfg: SearchConfig = SearchConfig(),
    should_stop: Callable[[], bool] | None = None,
) -> SearchResult | None:
    """Smallest t in [t_start, t_limit) at which every family polynomial is
    (probably) prime and the exact quotient lies in the target interval.

    Returns None when the range is exhausted.  With threads > 1, blocks run
    in worker processes but results are consumed in block order, so the
    outcome and counters match the single-threaded scan exactly.
    """
    started = time.perf_counter()
    plan = build_wheel(family, cfg.wheel_bound, cfg.t_start)
    t_limit = cfg.t_limit
    if t_limit is None:
        t_limit = cfg.t_start + 10**7 * plan.modulus
    order = _test_order(family.polys, cfg.t_start)
    span = _block_span(plan)

    filtered = 0
    tests = 0
    hit: tuple[int, Fraction] | None = None

    if cfg.threads == 1:
        for start, stop in _blocks(cfg.t_start, t_limit, span):
            if should_stop is not None and should_stop():
                break
            t, quotient, f, n = _scan_block(family, plan, order, start, stop, cfg.policy)
            filtered += f
            tests += n
            if t is not None:
                hit = (t, quotient)
                break
    else:
        hit, filtered, tests = _parallel_scan(
            family, plan, order, cfg, t_limit, span, should_stop
        )

    if hit is None:
        return None
    t, quotient = hit
    values = [f(t) for f in family.polys]
    statuses = tuple(
        (v, "prime" if v < DETERMINISTIC_LIMIT else "probable-prime") for v in values
    )
    p = values[0] if family.mode.shape == "twin-gap" else values[1]
    stats = SearchStats(
        candidates_filtered=filtered,
        primality_tests=tests,
        wall_time=time.perf_counter() - started,
    )
    return SearchResult(
        t=t,
        primes=statuses,
        p=p,
        quotient=quotient,
        digits_matched=_digits_matched(quotient, family.target_xi),
        family=family,
        stats=stats,
    )


def _parallel_scan(family, plan, order, cfg, t_limit, span, should_stop):
    """Deterministic block-ordered parallel scan.

    Counters are accumulated only over blocks up to and including the winning
    one, which makes the reported stats independent of the thread count.
    """
    block_iter = enumerate(_blocks(cfg.t_start, t_limit, span))
    window = cfg.threads * 2
    results: dict[int, tuple[int | None, Fraction | None, int, int]] = {}
    filtered = tests = 0
    next_index = 0
    hit = None
    with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
        pending = {}
        exhausted = False
        while True:
            while not exhausted and len(pending) < window:
                if should_stop is not None and should_stop():
                    exhausted = True
                    break
                try:
                    index, (start, stop) = next(block_iter)
                except StopIteration:
                    exhausted = True
                    break
                fut = pool.submit(
                    _scan_block_task,
                    (index, family, plan, order, start, stop, cfg.policy),
                )
                pending[fut] = index
            if not pending:
                break
            done, _ = wait(pending, return_when=FIRST_COMPLETED)
            for fut in done:
                index = pending.pop(fut)
                _, t, quotient, f, n = fut.result()
                results[index] = (t, quotient, f, n)
            # Consume results strictly in block order.
            while next_index in results:
                t, quotient, f, n = results.pop(next_index)
                filtered += f
                tests += n
                next_index += 1
                if t is not None:
                    hit = (t, quotient)
                    break
            if hit is not None:
                for fut in pending:
                    fut.cancel()
                break
    return hit, filtered, tests


def result_to_json(result: SearchResult) -> dict:
    """Stable JSON document for a search result.

    Wall time is deliberately omitted so identical runs serialize to
    identical bytes.
    """
    from .families import family_to_json
    from .ratio import ratio_to_json, truncate_decimal

    return {
        "mode": {
            "function": result.family.mode.function,
            "shape": result.family.mode.shape,
        },
        "target": ratio_to_json(result.family.target_xi),
        "delta": ratio_to_json(result.family.target_delta),
        "T": str(result.t),
        "p": str(result.p),
        "companions": [
            {"value": str(v), "status": s} for v, s in result.primes
        ],
        "quotient": {
            **ratio_to_json(result.quotient),
            "decimal": truncate_decimal(result.quotient, 40),
        },
        "digits_matched": result.digits_matched,
        "family": family_to_json(result.family),
        "stats": {
            "candidates_filtered": result.stats.candidates_filtered,
            "primality_tests": result.stats.primality_tests,
        },
    }
