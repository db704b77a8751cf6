"""Directed rounding to a number of significant digits, and outward nudges."""

from __future__ import annotations

from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal

OUTWARD_RTOL = 1e-6


def _round_sig(x: float, digits: int, mode) -> float:
    if x == 0:
        return 0.0
    dx = Decimal(x)  # exact binary value
    exp = dx.adjusted() - digits + 1
    return float(dx.quantize(Decimal(1).scaleb(exp), rounding=mode))


def round_up_sig(x: float, digits: int = 3) -> float:
    """Smallest ``digits``-significant-digit decimal that is >= x."""
    return _round_sig(x, digits, ROUND_CEILING)


def round_down_sig(x: float, digits: int = 3) -> float:
    """Largest ``digits``-significant-digit decimal that is <= x."""
    return _round_sig(x, digits, ROUND_FLOOR)


def outward_up(x: float, rtol: float = OUTWARD_RTOL) -> float:
    return x + rtol * abs(x)


def outward_down(x: float, rtol: float = OUTWARD_RTOL) -> float:
    return x - rtol * abs(x)
