"""Exact rational helpers and the dyadic-interval selector used by the codec.

All capital values, probabilities and masses in the package are
:class:`fractions.Fraction` instances; nothing here touches floats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]

_RATIONAL_TEXT = re.compile(r"\A\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\Z")


def to_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` text into a Fraction.

    Floats and decimal text are refused on purpose.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    match = _RATIONAL_TEXT.match(text)
    if match is None:
        raise ValueError(f"not an integer or p/q rational: {text!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    """Serialize as ``p/q`` (always with a denominator, so parsing is uniform)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def pow_rational(base: RationalLike, n: int) -> Fraction:
    base = to_rational(base)
    if base <= 0:
        raise ValueError("pow_rational needs a positive base")
    return base**n


def floor_log2(value: RationalLike) -> int:
    """Exact ``floor(log2(value))`` for a positive rational."""
    value = to_rational(value)
    if value <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    p, q = value.numerator, value.denominator
    # candidate from bit lengths, then correct by at most one step
    e = p.bit_length() - q.bit_length()
    if e >= 0:
        if p < q << e:
            e -= 1
    else:
        if p << -e < q:
            e -= 1
    return e


def floor_log2_power(rho: RationalLike, n: int) -> int:
    """``floor(n * log2(rho))`` computed exactly as ``floor_log2(rho**n)``."""
    return floor_log2(pow_rational(rho, n))


@dataclass(frozen=True)
class DyadicInterval:
    """The closed interval ``[j/2^k, (j+1)/2^k]``."""

    j: int
    k: int

    def __post_init__(self):
        if self.k < 0 or self.j < 0 or self.j >= 1 << self.k:
            raise ValueError(f"invalid dyadic interval j={self.j}, k={self.k}")

    @property
    def low(self) -> Fraction:
        return Fraction(self.j, 1 << self.k)

    @property
    def high(self) -> Fraction:
        return Fraction(self.j + 1, 1 << self.k)

    @property
    def width(self) -> Fraction:
        return Fraction(1, 1 << self.k)

    def within(self, a: Fraction, b: Fraction) -> bool:
        return a <= self.low and self.high <= b

    def bits(self) -> str:
        """``j`` written MSB-first in exactly ``k`` bits."""
        return format(self.j, "b").zfill(self.k) if self.k else ""

    @classmethod
    def from_bits(cls, bits: str) -> "DyadicInterval":
        return cls(int(bits, 2) if bits else 0, len(bits))


def contained_dyadic(a: RationalLike, b: RationalLike) -> DyadicInterval:
    """Smallest-``j`` dyadic interval of width ``2^-(m+2)`` inside ``[a, b]``.

    ``m = floor(log2(1/(b-a)))``.  One of the four quarter-width children of
    the best-aligned width-``2^-m`` interval always fits, so the scan below
    never comes up empty for valid input.
    """
    a, b = to_rational(a), to_rational(b)
    if not (0 <= a < b <= 1):
        raise ValueError(f"need 0 <= a < b <= 1, got a={a}, b={b}")
    m = floor_log2(1 / (b - a))
    k = m + 2
    scale = 1 << k
    scaled = a * scale
    j = -(-scaled.numerator // scaled.denominator)  # ceil(a * 2^k)
    if Fraction(j + 1, scale) > b:
        raise AssertionError(f"no dyadic interval of width 2^-{k} in [{a}, {b}]")
    return DyadicInterval(j, k)
