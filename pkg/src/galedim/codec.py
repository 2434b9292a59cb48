"""Compression from an exact s-gale: one dyadic interval per source string.

For ``x`` of length ``n`` let ``p(y) = d(y) / rho^|y|``.  The gale law makes
``p`` additive over extensions, so the lexicographic cumulative mass

    c_n(x) = sum_{y < x, |y| = n} p(y)

telescopes into ``sum over i with x[i] = 1 of p(x[:i] + "0")``.  When
``d(x) > 1`` the interval ``[c_n(x), c_n(x) + p(x)]`` is wider than
``2^-floor(s n)`` and contains a dyadic interval of at most ``floor(s n) + 2``
bits; that interval is the payload.

Wire format (all integers unsigned LEB128 unless noted)::

    b"GF" | version byte | n | len(rho text) | rho text "p/q" (ascii)
         | payload bit count (one byte) | payload bits MSB-first, zero padded
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import DyadicInterval, contained_dyadic, format_rational, parse_rational
from .gales import GALE, BettingStrategy, check_bits

MAGIC = b"GF"
VERSION = 1


class NotCompressible(ValueError):
    """The source string has capital at most 1, so it gets no codeword."""


class CorruptCodeword(ValueError):
    pass


@dataclass(frozen=True)
class Codeword:
    n: int
    rho: Fraction
    interval: DyadicInterval

    @property
    def payload_bits(self) -> int:
        return self.interval.k

    def header(self) -> bytes:
        rho_text = format_rational(self.rho).encode("ascii")
        return (MAGIC + bytes([VERSION]) + _varint(self.n) + _varint(len(rho_text))
                + rho_text + bytes([self.interval.k]))

    @property
    def header_bits(self) -> int:
        return 8 * len(self.header())

    def to_bytes(self) -> bytes:
        if self.interval.k > 255:
            raise ValueError("payload longer than 255 bits does not fit the count byte")
        bits = self.interval.bits()
        padded = bits + "0" * (-len(bits) % 8)
        payload = int(padded, 2).to_bytes(len(padded) // 8, "big") if padded else b""
        return self.header() + payload

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Codeword":
        if blob[:2] != MAGIC:
            raise CorruptCodeword("bad magic")
        if len(blob) < 3 or blob[2] != VERSION:
            raise CorruptCodeword("unsupported version")
        pos = 3
        n, pos = _read_varint(blob, pos)
        size, pos = _read_varint(blob, pos)
        rho = parse_rational(blob[pos: pos + size].decode("ascii"))
        pos += size
        if pos >= len(blob):
            raise CorruptCodeword("truncated header")
        k = blob[pos]
        pos += 1
        payload = blob[pos:]
        if len(payload) != (k + 7) // 8:
            raise CorruptCodeword(f"expected {(k + 7) // 8} payload bytes, got {len(payload)}")
        bits = "".join(format(b, "08b") for b in payload)[:k]
        return cls(n, rho, DyadicInterval.from_bits(bits))


def _varint(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def _read_varint(blob: bytes, pos: int) -> tuple[int, int]:
    value = shift = 0
    while True:
        if pos >= len(blob):
            raise CorruptCodeword("truncated varint")
        byte = blob[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        shift += 7
        if not byte & 0x80:
            return value, pos


def _left_capital(d, prefix: str, cap: Fraction) -> Fraction:
    """``d(prefix + "0")`` given ``cap = d(prefix)``."""
    if isinstance(d, BettingStrategy):
        return d.rho * cap * d.shares(prefix)[0] if cap else cap
    return d.capital(prefix + "0")


def _require_gale(d) -> None:
    if d.kind != GALE:
        raise ValueError("the codec needs an exact s-gale, not a supergale")
    if d.capital("") > 1:
        raise ValueError("the codec needs initial capital at most 1")


def cumulative(d, x: str) -> Fraction:
    """``c_n(x)`` by the telescoped path sum (``n`` capital steps)."""
    _require_gale(d)
    check_bits(x)
    total = Fraction(0)
    cap = d.capital("")
    scale = Fraction(1)
    for i, bit in enumerate(x):
        prefix = x[:i]
        scale /= d.rho
        left = _left_capital(d, prefix, cap)
        if bit == "1":
            total += left * scale
            cap = d.capital(prefix + "1") if not isinstance(d, BettingStrategy) else (
                d.rho * cap * d.shares(prefix)[1] if cap else cap)
        else:
            cap = left
    return total


def source_interval(d, x: str) -> tuple[Fraction, Fraction]:
    """``[c_n(x), c_n(x+1)]`` with ``c_n(1^n + 1) = 1``."""
    low = cumulative(d, x)
    if x == "1" * len(x):
        return low, Fraction(1)
    return low, low + d.capital(x) / d.rho ** len(x)


def encode(d, x: str) -> Codeword:
    _require_gale(d)
    check_bits(x)
    cap = d.capital(x)
    if cap <= 1:
        raise NotCompressible(f"d(x) = {cap} <= 1; x is outside S_n")
    low, high = source_interval(d, x)
    return Codeword(len(x), d.rho, contained_dyadic(low, high))


def decode(d, codeword: Codeword) -> str:
    """Binary search down the cumulative tree, one left-child mass per level."""
    _require_gale(d)
    if codeword.rho != d.rho:
        raise CorruptCodeword(f"codeword growth {codeword.rho} != gale growth {d.rho}")
    target = codeword.interval
    lo, hi = Fraction(0), Fraction(1)
    x = ""
    cap = d.capital("")
    scale = Fraction(1)
    for _ in range(codeword.n):
        scale /= d.rho
        left = _left_capital(d, x, cap)
        mid = lo + left * scale
        if target.within(lo, mid):
            x += "0"
            hi = mid
            cap = left
        elif target.within(mid, hi):
            x += "1"
            lo = mid
            cap = d.capital(x)
        else:
            raise CorruptCodeword(
                f"interval [{target.low}, {target.high}] fits neither child of {x!r}")
    return x


def rate_upper_bound(d, x: str) -> Fraction:
    """Codeword size (header plus payload bits) per source bit."""
    cw = encode(d, x)
    return Fraction(cw.payload_bits + cw.header_bits, len(x))
