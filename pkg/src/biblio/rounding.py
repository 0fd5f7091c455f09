"""Exact-rational rounding and rendering helpers.

All indicator math stays in :class:`fractions.Fraction`; these helpers are the
single place where values get rounded for display. Rounding is half-up (halves
away from zero), matching the hand-rounding convention used throughout the
reports, and is done in integer arithmetic so no float ever enters the path.
"""
from __future__ import annotations

from fractions import Fraction

RationalLike = Fraction | int | str


def round_half_up(value: RationalLike) -> int:
    """Round to the nearest integer, halves away from zero."""
    f = Fraction(value)
    if f < 0:
        return -round_half_up(-f)
    return int(f + Fraction(1, 2))


def decimal_str(value: RationalLike, places: int) -> str:
    """Render a rational as a fixed-point decimal string, half-up.

    decimal_str(Fraction(6850, 86), 1) == "79.7"
    """
    if places < 0:
        raise ValueError("places must be >= 0")
    f = Fraction(value)
    scaled = round_half_up(f * 10**places)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, part = divmod(scaled, 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{part:0{places}d}"


def rational_str(value: RationalLike) -> str:
    """Canonical rendering: reduced "num/den", whole values without the /1."""
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse either a "num/den" string or a plain decimal string."""
    return Fraction(str(text).strip())


def rational_json(value: RationalLike, places: int) -> dict[str, str]:
    """The serialization pair used in JSON outputs: exact plus rounded."""
    f = Fraction(value)
    return {"rational": rational_str(f), "decimal": decimal_str(f, places)}
