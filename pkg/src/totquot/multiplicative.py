"""Euler totient and sum-of-divisors on factored inputs, plus the exact
quotient reports for a prime in each of the six quotient modes.

A quotient mode pairs a multiplicative function (phi or sigma) with the
shape of the quotient taken at a prime p:

    twin-gap        phi(p+1)/phi(p-1)   with p, p+2 both prime
    prime-successor phi(p+1)/phi(p)     with p prime
    twin-successor  phi(p+1)/phi(p)     same quotient, p and p+2 prime

(and identically with sigma in place of phi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    DEFAULT_BUDGET,
    DEFAULT_POLICY,
    CofactorStatus,
    FactorBudget,
    Factorization,
    Primality,
    PrimalityPolicy,
    SquarefreeNumber,
    factorize,
    is_prime,
)
from .ratio import digits_matched as _digits_matched
from .ratio import truncate_decimal

FUNCTIONS = ("phi", "sigma")
SHAPES = ("twin-gap", "prime-successor", "twin-successor")


@dataclass(frozen=True)
class QuotientMode:
    function: str
    shape: str

    def __post_init__(self):
        if self.function not in FUNCTIONS:
            raise ValueError(f"function must be one of {FUNCTIONS}")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}")

    @property
    def needs_twin(self) -> bool:
        return self.shape in ("twin-gap", "twin-successor")

    def __str__(self):
        return f"{self.function} {self.shape}"


@dataclass(frozen=True)
class RatioReport:
    """Exact quotient at a prime, with the factorization evidence used."""

    p: int
    mode: QuotientMode
    numerator_factorization: Factorization
    denominator_factorization: Factorization
    quotient: Fraction
    decimal: str
    digits_matched: int | None = None
    conditional: bool = False  # some factor only probable prime


def _effective_entries(f: Factorization, what: str) -> tuple[tuple[int, int], ...]:
    """Entries with a probable-prime cofactor folded in as a prime."""
    if f.cofactor_status is CofactorStatus.COMPOSITE_UNRESOLVED:
        raise ValueError(f"cannot evaluate {what}: composite cofactor unresolved")
    if f.cofactor_status is CofactorStatus.PROBABLE_PRIME_COFACTOR:
        merged = dict(f.entries)
        merged[f.cofactor] = merged.get(f.cofactor, 0) + 1
        return tuple(sorted(merged.items()))
    return f.entries


def phi(f: Factorization) -> int:
    """Euler totient from a factorization: prod q^(e-1) * (q-1)."""
    result = 1
    for q, e in _effective_entries(f, "totient"):
        result *= q ** (e - 1) * (q - 1)
    return result


def sigma(f: Factorization) -> int:
    """Sum of divisors from a factorization: prod (q^(e+1)-1)/(q-1)."""
    result = 1
    for q, e in _effective_entries(f, "sum of divisors"):
        result *= (q ** (e + 1) - 1) // (q - 1)
    return result


def phi_ratio(n: SquarefreeNumber) -> Fraction:
    """phi(n)/n for squarefree n: prod (q-1)/q, reduced."""
    num = den = 1
    for q in n.primes:
        num *= q - 1
        den *= q
    return Fraction(num, den)


def sigma_ratio(n: SquarefreeNumber) -> Fraction:
    """sigma(n)/n for squarefree n: prod (q+1)/q, reduced."""
    num = den = 1
    for q in n.primes:
        num *= q + 1
        den *= q
    return Fraction(num, den)


def _apply(function: str, f: Factorization) -> int:
    return phi(f) if function == "phi" else sigma(f)


def ratio_report(
    p: int,
    mode: QuotientMode,
    budget: FactorBudget = DEFAULT_BUDGET,
    policy: PrimalityPolicy = DEFAULT_POLICY,
    target: Fraction | None = None,
    decimal_digits: int = 40,
) -> RatioReport:
    """Factor the neighbors of p and report the exact quotient for `mode`.

    Fails cleanly when p (or p+2 for twin shapes) is not prime or when a
    neighbor resists factorization within the budget.  A probable-prime
    cofactor is treated as prime; the report is then flagged conditional.
    """
    if is_prime(p, policy) is Primality.COMPOSITE:
        raise ValueError("p not prime")
    if mode.needs_twin and is_prime(p + 2, policy) is Primality.COMPOSITE:
        raise ValueError("p+2 not prime")

    num_arg = p + 1
    den_arg = p - 1 if mode.shape == "twin-gap" else p
    num_fact = factorize(num_arg, budget, policy)
    den_fact = factorize(den_arg, budget, policy)
    for f in (num_fact, den_fact):
        if not f.is_resolved:
            raise ValueError("factorization unresolved")

    quotient = Fraction(_apply(mode.function, num_fact), _apply(mode.function, den_fact))
    conditional = (
        num_fact.cofactor_status is CofactorStatus.PROBABLE_PRIME_COFACTOR
        or den_fact.cofactor_status is CofactorStatus.PROBABLE_PRIME_COFACTOR
        or max(p, p + 2 if mode.needs_twin else p).bit_length() > 64
    )
    matched = None if target is None else _digits_matched(quotient, target)
    return RatioReport(
        p=p,
        mode=mode,
        numerator_factorization=num_fact,
        denominator_factorization=den_fact,
        quotient=quotient,
        decimal=truncate_decimal(quotient, decimal_digits),
        digits_matched=matched,
        conditional=conditional,
    )
