"""Exact rational quotients and their decimal presentation.

Quotients are plain `fractions.Fraction` values (eagerly reduced, arbitrary
precision), aliased as ExactRatio.  Rendering truncates toward zero so that
"how many digits agree" has a single well-defined answer.
"""

from __future__ import annotations

from fractions import Fraction

ExactRatio = Fraction


def truncate_decimal(value: Fraction, digits: int) -> str:
    """Decimal string of a nonnegative rational, truncated toward zero after
    `digits` fractional digits (no rounding, trailing zeros kept)."""
    if value < 0:
        raise ValueError("value must be nonnegative")
    if digits < 0:
        raise ValueError("digits must be >= 0")
    whole, rem = divmod(value.numerator, value.denominator)
    if digits == 0:
        return str(whole)
    frac = rem * 10**digits // value.denominator
    return f"{whole}.{frac:0{digits}d}"


def truncate_sigfigs(value: Fraction, sigfigs: int) -> str:
    """Truncate to `sigfigs` significant figures, trailing zeros stripped."""
    return _sigfigs(value, sigfigs, rounded=False)


def round_sigfigs(value: Fraction, sigfigs: int) -> str:
    """Round half-up to `sigfigs` significant figures, zeros stripped."""
    return _sigfigs(value, sigfigs, rounded=True)


def _sigfigs(value: Fraction, sigfigs: int, rounded: bool) -> str:
    if value < 0:
        raise ValueError("value must be nonnegative")
    if sigfigs < 1:
        raise ValueError("sigfigs must be >= 1")
    if value == 0:
        return "0"
    num, den = value.numerator, value.denominator
    # Position of the leading digit: value in [10^(k-1), 10^k).
    k = len(str(num // den)) if num >= den else -_leading_zeros(num, den)
    shift = sigfigs - k
    scaled = num * 10**shift // den if shift >= 0 else num // (den * 10**-shift)
    if rounded:
        # Half-up on the digit just past the kept ones.
        rem2 = 2 * (num * 10**shift - scaled * den) if shift >= 0 else 2 * (
            num - scaled * den * 10**-shift
        )
        bound = den if shift >= 0 else den * 10**-shift
        if rem2 >= bound:
            scaled += 1
            if len(str(scaled)) > sigfigs:  # 999.. rolled over to 1000..
                scaled //= 10
                k += 1
    text = str(scaled)
    if k >= sigfigs:
        out = text + "0" * (k - sigfigs)
    elif k >= 1:
        out = text[:k] + "." + text[k:]
    else:
        out = "0." + "0" * (-k) + text
    if "." in out:
        out = out.rstrip("0").rstrip(".")
    return out


def _leading_zeros(num: int, den: int) -> int:
    """For 0 < num/den < 1, count zeros between the point and first digit."""
    zeros = 0
    num *= 10
    while num < den:
        zeros += 1
        num *= 10
    return zeros


def digits_matched(value: Fraction, target: Fraction, digits: int = 50) -> int:
    """Count leading decimal digits shared by two nonnegative rationals.

    Both are rendered truncated at `digits` fractional digits and compared
    character by character; matching digit characters are counted (the
    decimal point is skipped but must align).
    """
    a = truncate_decimal(value, digits)
    b = truncate_decimal(target, digits)
    count = 0
    for ca, cb in zip(a, b):
        if ca != cb:
            break
        if ca != ".":
            count += 1
    return count


def ratio_to_json(value: Fraction) -> dict:
    return {"num": str(value.numerator), "den": str(value.denominator)}


def ratio_from_json(doc: dict) -> Fraction:
    return Fraction(int(doc["num"]), int(doc["den"]))
