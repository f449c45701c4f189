"""Decimal renderings of exact rationals for reports.

Everything of consequence in this package is a :class:`fractions.Fraction`;
these helpers exist only at the reporting edge. Renderings are correctly
rounded at the requested number of significant digits (round half even),
using guard digits for the one genuinely irrational quantity, log2 of the
dictionary size.
"""

from __future__ import annotations

import decimal
from decimal import Decimal
from fractions import Fraction

GUARD_DIGITS = 15


def _plain(value: Decimal) -> Decimal:
    # exact division yields shortest-coefficient forms like 1E+1; reports
    # want plain integers
    if value == value.to_integral_value():
        with decimal.localcontext() as ctx:
            ctx.prec = max(28, len(value.as_tuple().digits))
            return value.quantize(Decimal(1))
    return value


def rational_decimal(value: Fraction, digits: int = 12) -> Decimal:
    """Correctly rounded decimal of a rational at ``digits`` significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        return _plain(Decimal(value.numerator) / Decimal(value.denominator))


def log2_decimal(n: int, digits: int = 12) -> Decimal:
    """log2(n) rounded to ``digits`` significant digits."""
    if n <= 0:
        raise ValueError(f"log2 needs a positive argument, got {n}")
    with decimal.localcontext() as ctx:
        ctx.prec = digits + GUARD_DIGITS
        raw = Decimal(n).ln() / Decimal(2).ln()
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        return _plain(+raw)


def rate_decimal(dict_size: int, expected_length: Fraction, digits: int = 12) -> Decimal:
    """log2(dict_size) / expected_length at ``digits`` significant digits."""
    if expected_length <= 0:
        raise ValueError("expected length must be positive")
    with decimal.localcontext() as ctx:
        ctx.prec = digits + GUARD_DIGITS
        log2 = Decimal(dict_size).ln() / Decimal(2).ln()
        e_len = Decimal(expected_length.numerator) / Decimal(expected_length.denominator)
        raw = log2 / e_len
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        return _plain(+raw)


def show(value: Fraction, digits: int = 12) -> str:
    """``num/den (decimal)`` rendering used throughout the CLI reports."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value} ({rational_decimal(value, digits)})"
