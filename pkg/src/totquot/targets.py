"""Named high-precision constants and target parsing for the command line.

Constants ship as 64-digit decimal strings so no transcendental-function
dependency is needed; a target expression is a plain number, a constant
name, or a small arithmetic form like ``pi/10``, ``2pi``, ``10gamma``,
``pi-3``, ``golden-1`` or ``sqrt2/10+1/4``.
"""

from __future__ import annotations

import re
from fractions import Fraction

CONSTANTS = {
    "pi": "3.1415926535897932384626433832795028841971693993751058209749445923",
    "e": "2.7182818284590452353602874713526624977572470936999595749669676277",
    "gamma": "0.5772156649015328606065120900824024310421593359399235988057672348",
    "sqrt2": "1.4142135623730950488016887242096980785696718753769480731766797379",
    "sqrt3": "1.7320508075688772935274463415058723669428052538103806280558069794",
    "sqrt5": "2.2360679774997896964091736687312762354406183596115257242708972454",
    "sqrt7": "2.6457513110645905905016157536392604257102591830824501803683344592",
    "golden": "1.6180339887498948482045868343656381177203091798057628621354486227",
    "log2": "0.6931471805599453094172321214581765680755001343602552541206800094",
    "log3": "1.0986122886681096913952452369225257046474905578227494517346943336",
}

_TERM = re.compile(
    r"^(?:(?P<coef>\d+)\*?)?(?P<name>[a-z][a-z0-9]*)(?:/(?P<div>\d+))?$"
)


def _parse_term(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty target term")
    m = _TERM.match(text)
    if m:
        name = m.group("name")
        if name not in CONSTANTS:
            known = ", ".join(sorted(CONSTANTS))
            raise ValueError(f"unknown constant {name!r}; known: {known}")
        value = Fraction(CONSTANTS[name])
        if m.group("coef"):
            value *= int(m.group("coef"))
        if m.group("div"):
            value /= int(m.group("div"))
        return value
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse target term {text!r}") from exc


def _split_terms(text: str) -> list[str]:
    """Split on + and - at term boundaries, keeping 1e-9 style exponents."""
    terms, current = [], ""
    for i, ch in enumerate(text):
        if ch in "+-" and i > 0 and text[i - 1] not in "eE":
            terms.append(current)
            current = ch
        else:
            current += ch
    terms.append(current)
    return terms


def parse_target(text: str) -> Fraction:
    """Parse a target expression into an exact rational.

    Accepts decimal or fractional literals (``0.125``, ``1/3``, ``1e-9``),
    constant names with an optional integer coefficient and divisor
    (``pi/10``, ``2pi``, ``10gamma``), and sums and differences of such
    terms (``pi-3``, ``1/3-1e-9``).
    """
    text = text.strip().lower().replace(" ", "")
    if not text:
        raise ValueError("empty target")
    total = Fraction(0)
    for term in _split_terms(text):
        sign = 1
        if term and term[0] in "+-":
            sign = -1 if term[0] == "-" else 1
            term = term[1:]
        total += sign * _parse_term(term)
    return total
