"""
Small numeric helpers for exact counts and arbitrarily large integers.
"""

import math
from fractions import Fraction
from decimal import Decimal, ROUND_HALF_EVEN


_ONE_DECIMAL = Decimal("0.1")


def percentage(numer, denom):
    """Return ``100 * numer / denom`` as a Decimal with one decimal.

    The exact rational is rounded half-to-even, so 81.25 renders as 81.2.
    A zero denominator gives ``Decimal("0.0")``.
    """
    if denom == 0:
        return Decimal("0.0")
    frac = Fraction(100 * numer, denom)
    value = Decimal(frac.numerator) / Decimal(frac.denominator)
    return value.quantize(_ONE_DECIMAL, rounding=ROUND_HALF_EVEN)


def log2_int(n):
    """Base-2 logarithm of a positive int of any size.

    Uses the bit length for the exponent and the top 64 bits for the
    mantissa, which is accurate to well beyond 10 significant digits.
    """
    if n <= 0:
        raise ValueError(f"log2_int() needs a positive int, got {n}.")
    shift = max(n.bit_length() - 64, 0)
    return math.log2(n >> shift) + shift


def round_pct(value, rounding=ROUND_HALF_EVEN):
    """Round a percentage (int, float or Decimal) to one decimal.

    Floats are converted exactly, so ``6.25`` rounds as 6.25 and not as a
    nearby binary value.
    """
    return Decimal(value).quantize(_ONE_DECIMAL, rounding=rounding)
