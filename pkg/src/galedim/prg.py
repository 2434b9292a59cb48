"""Toy generator families, the block extension map ``g``, and the sampler for ``nu``.

Indexing convention for the extension map
-----------------------------------------
Block ``n`` of the output (1-based positions ``2^(n-1)+1 .. 2^n``) is
``G_{2^(n-1)}`` applied to the seed slice ``w[s*2^(n-1), s*2^n - 1]`` read as
1-based and inclusive, i.e. the 0-based half-open range
``[s*2^(n-1) - 1, s*2^n - 1)``.  The blocks tile the seed from its first bit,
so an output of length ``2^j`` reads the first ``s*2^j - 1`` seed bits and
never the last bit of a length-``s*2^j`` seed.
"""

from __future__ import annotations

import functools
import hashlib
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .gales import all_strings, check_bits

MAX_SEED_BITS = 20

Generator = Callable[[int, str], str]


@dataclass(frozen=True)
class PrgFamily:
    """``G_N : {0,1}^(N/2^m) -> {0,1}^N`` for every power of two ``N >= 2^m``."""

    name: str
    m: int
    generator: Generator

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("shrink exponent m must be at least 1")

    @property
    def s(self) -> Fraction:
        return Fraction(1, 1 << self.m)

    def __call__(self, N: int, seed: str) -> str:
        if N < 1 << self.m or N & (N - 1):
            raise ValueError(f"G_N needs N a power of two >= 2^{self.m}, got {N}")
        if len(seed) != N >> self.m:
            raise ValueError(f"G_{N} takes {N >> self.m} seed bits, got {len(seed)}")
        out = self.generator(N, seed)
        assert len(out) == N
        return out


def _repetition(N: int, x: str) -> str:
    return x * (N // len(x))


def _lfsr(N: int, x: str) -> str:
    # feedback b[t] = b[t-L] ^ b[t-L+1], seed emitted verbatim first
    L = len(x)
    bits = [ch == "1" for ch in x]
    for t in range(L, N):
        bits.append(bits[t - 1] if L == 1 else bits[t - L] ^ bits[t - L + 1])
    return "".join("1" if b else "0" for b in bits)


def _hash_chain(N: int, x: str) -> str:
    out = []
    counter = 0
    while len(out) * 256 < N:
        digest = hashlib.sha256(f"{N}:{x}:{counter}".encode()).digest()
        out.append(format(int.from_bytes(digest, "big"), "0256b"))
        counter += 1
    return "".join(out)[:N]


_GENERATORS = {
    "repetition": _repetition,
    "lfsr": _lfsr,
    "hash-chain": _hash_chain,
}


@functools.lru_cache(maxsize=None)
def get_prg(name: str, m: int = 2) -> PrgFamily:
    """Built-in generators by id: ``repetition``, ``lfsr``, ``hash-chain``."""
    try:
        gen = _GENERATORS[name]
    except KeyError:
        raise KeyError(f"unknown prg {name!r}; known: {sorted(_GENERATORS)}") from None
    return PrgFamily(name, m, gen)


def prg_names() -> list[str]:
    return sorted(_GENERATORS)


def _log2_exact(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{n} is not a power of two")
    return n.bit_length() - 1


def bits_read(prg: PrgFamily, out_len: int) -> int:
    """Seed bits the extension actually reads for an output of ``out_len`` bits."""
    return (out_len >> prg.m) - 1


def extend_g(prg: PrgFamily, seed: str, out_len: int) -> str:
    j = _log2_exact(out_len)
    m = prg.m
    if j < m:
        raise ValueError(f"out_len must be at least 2^m = {1 << m}")
    check_bits(seed)
    need = bits_read(prg, out_len)
    if len(seed) < need:
        raise ValueError(f"seed has {len(seed)} bits, output of {out_len} reads {need}")
    parts = ["0" * (1 << m)]
    for n in range(m + 1, j + 1):
        half = 1 << (n - 1)
        lo = (half >> m) - 1
        parts.append(prg(half, seed[lo: lo + (half >> m)]))
    return "".join(parts)


def g_map(prg: PrgFamily, w: str) -> str:
    """The finite map ``g_|w|(w)``: output length ``2^(m + floor(log2 |w|))``."""
    if not w:
        return ""
    return extend_g(prg, w, 1 << (prg.m + len(w).bit_length() - 1))


# --------------------------------------------------------------------------
# seed descriptions: the output prefix is recomputable from s*2^j seed bits


@dataclass(frozen=True)
class PrefixDescription:
    prg: str
    m: int
    seed_bits: str

    @property
    def size(self) -> int:
        return len(self.seed_bits)


def describe_prefix(prg: PrgFamily, seed: str, j: int) -> PrefixDescription:
    return PrefixDescription(prg.name, prg.m, seed[: (1 << j) >> prg.m])


def run_description(desc: PrefixDescription, j: int) -> str:
    return extend_g(get_prg(desc.prg, desc.m), desc.seed_bits, 1 << j)


# --------------------------------------------------------------------------
# the sampled distribution nu


def _ceil_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


@dataclass(frozen=True)
class SampledDistribution:
    """Short-seed sampler: seed -> ``g`` -> trim to ``n`` bits."""

    prg: PrgFamily

    @property
    def name(self) -> str:
        return f"nu[{self.prg.name},m={self.prg.m}]"

    def seed_bits(self, n: int) -> int:
        """Random bits drawn for an ``n``-bit sample: ``floor(s * 2^ceil(log2 n))``."""
        if n < 1:
            raise ValueError("samples have positive length")
        return _ceil_pow2(n) >> self.prg.m

    def sample_length(self, n: int) -> int:
        return max(_ceil_pow2(n), 1 << self.prg.m)

    def generate(self, n: int, seed: str) -> str:
        return _cached_extend(self.prg, seed, self.sample_length(n))[:n]

    def sample(self, n: int, rng) -> str:
        k = self.seed_bits(n)
        seed = format(rng.getrandbits(k), "b").zfill(k) if k else ""
        return self.generate(n, seed)

    def mass(self, w: str) -> Fraction:
        if not w:
            return Fraction(1)
        counts, total = _prefix_table(self, len(w))
        return Fraction(counts.get(w, 0), total)

    def table(self, n: int) -> list[tuple[str, Fraction]]:
        counts, total = _prefix_table(self, n)
        return [(w, Fraction(c, total)) for w, c in sorted(counts.items())]

    def support(self, n: int) -> list[str]:
        return sorted(_prefix_table(self, n)[0])


@functools.lru_cache(maxsize=1 << 16)
def _cached_extend(prg: PrgFamily, seed: str, out_len: int) -> str:
    return extend_g(prg, seed, out_len)


@functools.lru_cache(maxsize=256)
def _prefix_table(dist: SampledDistribution, n: int) -> tuple[dict, int]:
    k = dist.seed_bits(n)
    if k > MAX_SEED_BITS:
        raise ValueError(f"nu_{n} needs 2^{k} seeds; exhaustive limit is 2^{MAX_SEED_BITS}")
    counts = Counter(dist.generate(n, seed) for seed in all_strings(k))
    return dict(counts), 1 << k


def sample_nu(dist: SampledDistribution, n: int, rng) -> str:
    return dist.sample(n, rng)


def nu_mass(dist: SampledDistribution, w: str) -> Fraction:
    check_bits(w)
    return dist.mass(w)


def support_chain(dist: SampledDistribution, depth: int) -> str:
    """Lexicographically least string of length ``depth`` in the support.

    Every prefix of the result is in-support too, by consistency of ``nu``.
    """
    w = ""
    while len(w) < depth:
        w += "0" if dist.mass(w + "0") > 0 else "1"
    if dist.mass(w) == 0:
        raise AssertionError("sampler support is empty")
    return w


def approximation_errors(dist: SampledDistribution, d, approximator: Callable[[str], Fraction],
                         n: int, c: Fraction) -> tuple[list[str], list[str], Fraction]:
    """Strings where ``approximator`` leaves ``[c*d(w), d(w)]``.

    Returns ``(errors, off_support_errors, error_mass)``.
    """
    if n > MAX_SEED_BITS:
        raise ValueError(f"exhaustive check over 2^{n} strings refused")
    errors, outside = [], []
    mass = Fraction(0)
    for w in all_strings(n):
        exact = d.capital(w)
        got = approximator(w)
        if not (c * exact <= got <= exact):
            errors.append(w)
            mu = dist.mass(w)
            if mu == 0:
                outside.append(w)
            mass += mu
    return errors, outside, mass


def check_nu_approximable(dist: SampledDistribution, d, approximator, n: int,
                          c: Fraction, k: int) -> bool:
    if c > 1:
        raise ValueError("band constant c must be at most 1")
    _, outside, mass = approximation_errors(dist, d, approximator, n, Fraction(c))
    return not outside and mass <= Fraction(1, n**k)


def support_floor(dist: SampledDistribution, rho: Fraction, n: int) -> Fraction:
    """Lower bound ``rho^n * 2^-(seed bits)`` on the induced supergale over the support."""
    return Fraction(rho) ** n / (1 << dist.seed_bits(n))
