"""Linear polynomial families whose simultaneous prime values realize a
prescribed totient or sigma quotient.

Two constructions are provided.

Twin-gap families target phi(p+1)/phi(p-1) (or the sigma analogue) for twin
primes p, p+2.  Squarefree a = 3a' and b with controlled phi/sigma ratios
are built greedily, a residue c is assembled by CRT so that

    c = 5 (mod 8),  c = a-1 (mod a^2),  c = b+1 (mod b^2),

and with h(t) = 24 a^2 b^2 t + c the four polynomials

    f1 = h,  f2 = h+2,  f3 = (h-1)/(4b),  f4 = (h+1)/(2a)

have integer coefficients.  When all four are prime at T, the twins
p = f1(T), p+2 = f2(T) satisfy p-1 = 4b f3(T) and p+1 = 2a f4(T), which
pins the quotient near (phi(a)/a)(b/phi(b)) (times 6/7 adjustments in the
sigma variant).

Successor families target phi(p+1)/phi(p) (or sigma) with p = QT-1: the
family is {t, Qt-1, Qt+1} with Q = 6Q' for the twin version, or {t, Qt-1}
with Q = 2Q' (Q' odd) for the single-prime version.  The quotient tends to
phi(Q)/Q resp. sigma(Q)/Q as T grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith import (
    DEFAULT_POLICY,
    Primality,
    PrimalityPolicy,
    SquarefreeNumber,
    crt_solve,
    factorization_from_primes,
    is_prime,
)
from .greedy import TargetSpec, approx_phi_ratio, approx_sigma_ratio
from .multiplicative import QuotientMode, phi, phi_ratio, sigma, sigma_ratio
from .ratio import ratio_from_json, ratio_to_json


class TargetRangeError(ValueError):
    """Requested target lies outside the mode's valid interval."""


@dataclass(frozen=True)
class LinearPoly:
    lead: int
    const: int

    def __post_init__(self):
        if self.lead <= 0:
            raise ValueError("leading coefficient must be positive")

    def __call__(self, t: int) -> int:
        return self.lead * t + self.const

    def __str__(self):
        sign = "+" if self.const >= 0 else "-"
        return f"{self.lead}*t {sign} {abs(self.const)}"


@dataclass(frozen=True)
class DicksonFamily:
    mode: QuotientMode
    polys: tuple[LinearPoly, ...]
    predicted_limit: Fraction
    target_xi: Fraction
    target_delta: Fraction
    a: SquarefreeNumber | None = None
    b: SquarefreeNumber | None = None
    q: SquarefreeNumber | None = None
    c: int | None = None

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return (
            self.target_xi * (1 - self.target_delta),
            self.target_xi * (1 + self.target_delta),
        )

    def contains(self, value: Fraction) -> bool:
        lo, hi = self.interval
        return lo < value < hi


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    checked_primes: tuple[int, ...]
    witness_residues: dict[int, int]
    reason: str | None = None


def valid_interval(mode: QuotientMode) -> tuple[str, Callable[[Fraction], bool]]:
    """Human-readable target interval and membership test for a mode."""
    if mode.shape == "twin-gap":
        return "(0, ∞)", lambda x: x > 0
    if mode == QuotientMode("phi", "prime-successor"):
        return "(0, 1/2]", lambda x: 0 < x <= Fraction(1, 2)
    if mode == QuotientMode("phi", "twin-successor"):
        return "(0, 1/3)", lambda x: 0 < x < Fraction(1, 3)
    if mode == QuotientMode("sigma", "prime-successor"):
        return "[3/2, ∞)", lambda x: x >= Fraction(3, 2)
    return "[2, ∞)", lambda x: x >= 2


def _check_range(mode: QuotientMode, xi: Fraction, delta: Fraction):
    interval, member = valid_interval(mode)
    if not member(xi):
        raise TargetRangeError(f"target must lie in {interval}")
    if not 0 < delta < 1:
        raise TargetRangeError("delta must lie in (0, 1)")
    if mode == QuotientMode("phi", "twin-successor"):
        bound = (1 - 3 * xi) / (3 * xi)
        if delta >= bound:
            raise TargetRangeError(
                f"delta must be smaller than (1-3*xi)/(3*xi) = {bound}"
            )


_MAX_RETRIES = 10


def build_twin_gap_family(
    fn: str,
    xi: Fraction,
    delta: Fraction,
    force_ab: tuple[SquarefreeNumber, SquarefreeNumber] | None = None,
) -> DicksonFamily:
    """Build the four-polynomial twin-gap family for phi or sigma.

    The two greedy constructions aim at interior points of the windows the
    proof prescribes, with tolerance delta/4 halved on retry until the
    predicted limit provably lands inside (xi(1-delta), xi(1+delta)).
    `force_ab` bypasses the constructions (test hook); the exact membership
    check still runs.
    """
    mode = QuotientMode(fn, "twin-gap")
    _check_range(mode, xi, delta)

    if force_ab is not None:
        # Test hook: structural assembly only, no landing check (a forced
        # pair generally cannot hit the requested window).
        a, b = force_ab
        _validate_ab(a, b)
        return _assemble_twin_gap(mode, xi, delta, a, b, check=False)

    eps = delta / 4
    for _ in range(_MAX_RETRIES):
        a, b = _twin_gap_parts(fn, xi, delta, eps)
        family = _assemble_twin_gap(mode, xi, delta, a, b, check=False)
        if family.contains(family.predicted_limit):
            return family
        eps /= 2
    raise ValueError(
        "constructor tolerance too coarse to land the predicted limit in the "
        "target interval; retry with a finer epsilon"
    )


def _twin_gap_parts(fn, xi, delta, eps):
    if fn == "phi":
        x = min(Fraction(2, 3), xi)
        # b window (x/(xi(1+delta)), x/xi); aim slightly above the bottom.
        t_b = x / (xi * (1 + delta)) * (1 + delta / 4)
        b = approx_phi_ratio(TargetSpec(t_b, frozenset({2, 3}), eps))
        t_a = Fraction(3, 2) * x * (1 - delta) * (1 + delta / 4)
        a_spec = TargetSpec(t_a, frozenset({2, 3}) | set(b.primes), eps)
        a_prime = approx_phi_ratio(a_spec)
    else:
        x = max(Fraction(4, 3), Fraction(7, 6) * xi)
        # sigma windows open at the bottom; aim above it, result <= target.
        t_b = Fraction(6, 7) * x / xi * (1 + delta / 2)
        b = approx_sigma_ratio(TargetSpec(t_b, frozenset({2, 3}), eps))
        t_a = Fraction(3, 4) * x * (1 + delta / 2)
        a_spec = TargetSpec(t_a, frozenset({2, 3}) | set(b.primes), eps)
        a_prime = approx_sigma_ratio(a_spec)
    a = SquarefreeNumber(tuple(sorted((3,) + a_prime.primes)))
    return a, b


def _validate_ab(a: SquarefreeNumber, b: SquarefreeNumber):
    if 3 not in a.primes or 2 in a.primes:
        raise ValueError("a must be 3 times a squarefree number coprime to 6")
    if 2 in b.primes or 3 in b.primes:
        raise ValueError("b must be coprime to 6")
    if math.gcd(a.value, b.value) != 1:
        raise ValueError("a and b must be coprime")


def _assemble_twin_gap(mode, xi, delta, a, b, check=True) -> DicksonFamily:
    av, bv = a.value, b.value
    c = crt_solve([(5, 8), ((av - 1) % av**2, av**2), ((bv + 1) % bv**2, bv**2)])
    assert c % 8 == 5 and c % 3 == 2
    assert (c - 1) % (4 * bv) == 0 and (c + 1) % (2 * av) == 0
    lead = 24 * av**2 * bv**2
    polys = (
        LinearPoly(lead, c),
        LinearPoly(lead, c + 2),
        LinearPoly(6 * av**2 * bv, (c - 1) // (4 * bv)),
        LinearPoly(12 * av * bv**2, (c + 1) // (2 * av)),
    )
    if mode.function == "phi":
        predicted = phi_ratio(a) / phi_ratio(b)
    else:
        predicted = Fraction(6, 7) * sigma_ratio(a) / sigma_ratio(b)
    family = DicksonFamily(
        mode=mode,
        polys=polys,
        predicted_limit=predicted,
        target_xi=xi,
        target_delta=delta,
        a=a,
        b=b,
        c=c,
    )
    if check and not family.contains(predicted):
        lo, hi = family.interval
        raise ValueError(
            f"predicted limit {predicted} falls outside ({lo}, {hi}); "
            "use a finer construction tolerance"
        )
    return family


def build_successor_family(
    fn: str,
    shape: str,
    xi: Fraction,
    delta: Fraction,
    force_qprime: SquarefreeNumber | None = None,
) -> DicksonFamily:
    """Build {t, Qt-1, Qt+1} (twin-successor) or {t, Qt-1} (prime-successor).

    Q = 6Q' with (Q', 6) = 1 for twin shapes; Q = 2Q' with Q' odd otherwise,
    so Q is divisible by 2 but not 4.  Q' comes from the greedy constructor
    aimed so that phi(Q)/Q resp. sigma(Q)/Q lands inside the target window;
    membership is verified exactly and the build retried on failure.
    """
    if shape not in ("prime-successor", "twin-successor"):
        raise ValueError("shape must be prime-successor or twin-successor")
    mode = QuotientMode(fn, shape)
    _check_range(mode, xi, delta)

    twin = shape == "twin-successor"
    fixed = (2, 3) if twin else (2,)
    if fn == "phi":
        goal = 3 * xi if twin else min(2 * xi, Fraction(1))
        construct = approx_phi_ratio
    else:
        goal = xi / 2 if twin else Fraction(2, 3) * xi
        construct = approx_sigma_ratio

    if force_qprime is not None:
        for p in fixed:
            if p in force_qprime.primes:
                raise ValueError(f"Q' must not be divisible by {p}")
        return _assemble_successor(mode, xi, delta, fixed, force_qprime, check=False)

    eps = delta / 4
    for _ in range(_MAX_RETRIES):
        qprime = construct(TargetSpec(goal, frozenset(fixed), eps))
        family = _assemble_successor(mode, xi, delta, fixed, qprime, check=False)
        if family.contains(family.predicted_limit):
            return family
        eps /= 2
    raise ValueError(
        "constructor tolerance too coarse to land the predicted limit in the "
        "target interval; retry with a finer epsilon"
    )


def _assemble_successor(mode, xi, delta, fixed, qprime, check=True) -> DicksonFamily:
    q = SquarefreeNumber(tuple(sorted(fixed + qprime.primes)))
    qv = q.value
    polys = [LinearPoly(1, 0), LinearPoly(qv, -1)]
    if mode.shape == "twin-successor":
        polys.append(LinearPoly(qv, 1))
    predicted = phi_ratio(q) if mode.function == "phi" else sigma_ratio(q)
    family = DicksonFamily(
        mode=mode,
        polys=tuple(polys),
        predicted_limit=predicted,
        target_xi=xi,
        target_delta=delta,
        q=q,
    )
    if check and not family.contains(predicted):
        lo, hi = family.interval
        raise ValueError(
            f"predicted limit {predicted} falls outside ({lo}, {hi}); "
            "use a finer construction tolerance"
        )
    return family


def polys_of(family) -> tuple[LinearPoly, ...]:
    """Polynomials of a DicksonFamily or a bare sequence of LinearPoly."""
    if isinstance(family, DicksonFamily):
        return family.polys
    return tuple(family)


def check_admissible(family) -> AdmissibilityReport:
    """Decide whether the product of the family's polynomials avoids
    vanishing identically modulo every prime.

    Accepts a DicksonFamily or a bare polynomial sequence.  Complete check:
    a prime dividing some poly's lead and const makes that poly identically
    zero; otherwise a product of k nonzero linear polys mod q has at most k
    roots, so only q <= k needs a residue scan.
    """
    polys = polys_of(family)
    k = len(polys)
    for i, f in enumerate(polys):
        if math.gcd(f.lead, f.const) > 1:
            return AdmissibilityReport(
                admissible=False,
                checked_primes=(),
                witness_residues={},
                reason=f"f{i + 1} vanishes identically modulo a common "
                f"factor of its coefficients",
            )
    checked = [q for q in (2, 3) if q <= k]
    witnesses: dict[int, int] = {}
    for q in checked:
        for t in range(q):
            if all(f(t) % q != 0 for f in polys):
                witnesses[q] = t
                break
        else:
            return AdmissibilityReport(
                admissible=False,
                checked_primes=tuple(checked),
                witness_residues=witnesses,
                reason=f"product vanishes identically modulo {q}",
            )
    return AdmissibilityReport(
        admissible=True, checked_primes=tuple(checked), witness_residues=witnesses
    )


def quotient_at(
    family: DicksonFamily, t: int, policy: PrimalityPolicy = DEFAULT_POLICY
) -> Fraction:
    """Exact quotient realized by the family at witness t.

    Every polynomial value must pass the primality policy.  The neighbor
    factorizations are assembled from the known smooth parts plus the prime
    polynomial values; repeated primes (possible in successor modes when the
    prime t divides Q) are merged exactly rather than rejected.
    """
    values = [f(t) for f in family.polys]
    for i, v in enumerate(values):
        if v < 2 or is_prime(v, policy) is Primality.COMPOSITE:
            raise ValueError(f"f{i + 1}({t}) = {v} is not prime")

    fn = family.mode.function
    if family.mode.shape == "twin-gap":
        p, _, f3v, f4v = values
        av, bv = family.a.value, family.b.value
        if p + 1 != 2 * av * f4v or p - 1 != 4 * bv * f3v:
            raise ValueError("family polynomials are inconsistent with a, b")
        if math.gcd(2 * av, f4v) != 1:
            raise ValueError("coprimality (2a, f4(T)) = 1 violated")
        if math.gcd(4 * bv, f3v) != 1:
            raise ValueError("coprimality (4b, f3(T)) = 1 violated")
        num = factorization_from_primes(
            [(2, 1)] + [(q, 1) for q in family.a.primes] + [(f4v, 1)]
        )
        den = factorization_from_primes(
            [(2, 2)] + [(q, 1) for q in family.b.primes] + [(f3v, 1)]
        )
        if fn == "phi":
            return Fraction(phi(num), phi(den))
        return Fraction(sigma(num), sigma(den))

    p = values[1]  # Qt - 1
    succ = factorization_from_primes(
        [(q, 1) for q in family.q.primes] + [(t, 1)]
    )
    if fn == "phi":
        return Fraction(phi(succ), p - 1)
    return Fraction(sigma(succ), p + 1)


def family_to_json(family: DicksonFamily) -> dict:
    def sq(n: SquarefreeNumber | None):
        return None if n is None else [str(p) for p in n.primes]

    return {
        "mode": {"function": family.mode.function, "shape": family.mode.shape},
        "polys": [
            {"lead": str(f.lead), "const": str(f.const)} for f in family.polys
        ],
        "a": sq(family.a),
        "b": sq(family.b),
        "q": sq(family.q),
        "c": None if family.c is None else str(family.c),
        "predicted_limit": ratio_to_json(family.predicted_limit),
        "target": {
            "xi": ratio_to_json(family.target_xi),
            "delta": ratio_to_json(family.target_delta),
        },
    }


def family_from_json(doc: dict) -> DicksonFamily:
    def sq(lst):
        return None if lst is None else SquarefreeNumber(tuple(int(p) for p in lst))

    family = DicksonFamily(
        mode=QuotientMode(doc["mode"]["function"], doc["mode"]["shape"]),
        polys=tuple(
            LinearPoly(int(f["lead"]), int(f["const"])) for f in doc["polys"]
        ),
        predicted_limit=ratio_from_json(doc["predicted_limit"]),
        target_xi=ratio_from_json(doc["target"]["xi"]),
        target_delta=ratio_from_json(doc["target"]["delta"]),
        a=sq(doc.get("a")),
        b=sq(doc.get("b")),
        q=sq(doc.get("q")),
        c=None if doc.get("c") is None else int(doc["c"]),
    )
    verify_family(family)
    return family


def verify_family(family: DicksonFamily):
    """Structural invariants; raises ValueError on a corrupt family."""
    mode = family.mode
    if mode.shape == "twin-gap":
        if family.a is None or family.b is None or family.c is None:
            raise ValueError("twin-gap family needs a, b, c")
        av, bv, c = family.a.value, family.b.value, family.c
        if c % 8 != 5:
            raise ValueError("c = 5 (mod 8) violated")
        if c % 3 != 2:
            raise ValueError("c = 2 (mod 3) violated")
        if (c - 1) % (4 * bv) or (c + 1) % (2 * av):
            raise ValueError("integrality of f3/f4 coefficients violated")
        lead = 24 * av**2 * bv**2
        expect = (
            LinearPoly(lead, c),
            LinearPoly(lead, c + 2),
            LinearPoly(6 * av**2 * bv, (c - 1) // (4 * bv)),
            LinearPoly(12 * av * bv**2, (c + 1) // (2 * av)),
        )
        if family.polys != expect:
            raise ValueError("polynomials inconsistent with a, b, c")
        if mode.function == "phi":
            predicted = phi_ratio(family.a) / phi_ratio(family.b)
        else:
            predicted = Fraction(6, 7) * sigma_ratio(family.a) / sigma_ratio(family.b)
    else:
        if family.q is None:
            raise ValueError("successor family needs Q")
        qv = family.q.value
        count = 3 if mode.shape == "twin-successor" else 2
        if len(family.polys) != count:
            raise ValueError("wrong polynomial count for shape")
        expect = [LinearPoly(1, 0), LinearPoly(qv, -1)]
        if count == 3:
            expect.append(LinearPoly(qv, 1))
        if family.polys != tuple(expect):
            raise ValueError("polynomials inconsistent with Q")
        if mode.shape == "twin-successor":
            if 2 not in family.q.primes or 3 not in family.q.primes:
                raise ValueError("twin-successor Q must be divisible by 6")
        else:
            if 2 not in family.q.primes:
                raise ValueError("prime-successor Q must be even")
        predicted = (
            phi_ratio(family.q) if mode.function == "phi" else sigma_ratio(family.q)
        )
    if predicted != family.predicted_limit:
        raise ValueError("predicted limit inconsistent with the smooth parts")
    if not family.contains(predicted):
        raise ValueError("predicted limit outside the target interval")
