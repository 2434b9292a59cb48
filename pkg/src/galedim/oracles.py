"""Brute-force reference computations.

Nothing here reuses the fast paths it is compared against: capitals are
refolded from the betting shares, cumulative masses are literal sums over
all smaller strings, and counts come from full enumeration.  Everything is
exponential on purpose and guarded by a depth limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

MAX_ORACLE_DEPTH = 14

Value = Union[Fraction, int, str, bool]


@dataclass(frozen=True)
class OracleReport:
    name: str
    size: int
    expected: Value
    actual: Value

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} size={self.size} expected={_fmt(self.expected)} actual={_fmt(self.actual)}"


def _fmt(value: Value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def _guard(n: int, limit: int = MAX_ORACLE_DEPTH) -> None:
    if n < 0 or n > limit:
        raise ValueError(f"oracle depth {n} outside 0..{limit}")


def _strings(n: int) -> Iterator[str]:
    # independent of gales.all_strings on purpose
    if n == 0:
        yield ""
        return
    for head in _strings(n - 1):
        yield head + "0"
        yield head + "1"


def fold_capital(d, w: str) -> Fraction:
    """Capital by the product formula ``d(λ) * prod rho * share``; no shortcuts."""
    if not hasattr(d, "split"):
        return d.capital(w)
    value = Fraction(d.initial_capital)
    for i in range(len(w)):
        share = Fraction(d.split(w[:i])[int(w[i])])
        value = value * d.rho * share
    return value


def kolmogorov_count(d, w_prime: str, n: int, c: Fraction) -> int:
    """Number of ``y`` in ``Σ^n`` with ``d(w'z) >= c d(w')`` for some prefix ``z`` of ``y``."""
    _guard(n)
    base = fold_capital(d, w_prime)
    target = Fraction(c) * base
    tn, td = target.numerator, target.denominator
    depth = len(w_prime) + n
    count = 0
    # capitals as unreduced (num, den) pairs; only cross-multiplied comparisons
    stack = [(w_prime, base.numerator, base.denominator)]
    while stack:
        z, num, den = stack.pop()
        if num * td >= tn * den:
            count += 1 << (depth - len(z))
            continue
        if len(z) == depth or num == 0:
            continue
        for bit in "01":
            if hasattr(d, "split"):
                share = Fraction(d.split(z)[int(bit)])
                stack.append((z + bit, num * d.rho.numerator * share.numerator,
                              den * d.rho.denominator * share.denominator))
            else:
                cap = d.capital(z + bit)
                stack.append((z + bit, cap.numerator, cap.denominator))
    return count


def naive_cumulative(d, x: str) -> Fraction:
    """``sum over y < x with |y| = |x| of d(y) / rho^|x|``."""
    _guard(len(x), 12)
    n = len(x)
    scale = Fraction(d.rho) ** n
    return sum((fold_capital(d, y) / scale for y in _strings(n) if y < x), Fraction(0))


def naive_cumulative_table(d, n: int) -> Iterator[tuple[str, Fraction]]:
    """``(x, c_n(x))`` for every ``x`` in lexicographic order, as running literal sums."""
    _guard(n, 12)
    scale = Fraction(d.rho) ** n
    running = Fraction(0)
    for y in _strings(n):
        yield y, running
        running += fold_capital(d, y) / scale


def exhaustive_success_set(d, n: int, threshold: Fraction) -> set[str]:
    _guard(n)
    threshold = Fraction(threshold)
    return {x for x in _strings(n) if fold_capital(d, x) > threshold}


def exhaustive_mass(generator, seed_len: int, out_len: int, w: str) -> Fraction:
    """Fraction of ``seed_len``-bit seeds whose ``out_len`` output starts with ``w``."""
    _guard(seed_len, 20)
    hits = sum(1 for r in _strings(seed_len) if generator(r, out_len).startswith(w))
    return Fraction(hits, 1 << seed_len)


# --------------------------------------------------------------------------
# suites used by the command line


def kolmogorov_suite(n: int = 12, fixtures: int = 100, seed: int = 0) -> list[OracleReport]:
    from .gales import SUPERGALE, double_on_zero, random_strategy

    _guard(n, 12)
    reports = [OracleReport("kolmogorov/tight double-on-zero c=4 n=3", 3, 2,
                            kolmogorov_count(double_on_zero(), "", 3, Fraction(4)))]
    rng = random.Random(seed)
    for i in range(fixtures):
        d = random_strategy(rng.getrandbits(32), 2, SUPERGALE, rng.choice([2, 4, 8]))
        # the inequality concerns w' with positive capital; fall back to λ
        w_prime = "".join(rng.choice("01") for _ in range(rng.randrange(4)))
        if fold_capital(d, w_prime) == 0:
            w_prime = ""
        for c in (2, 4, 8):
            count = kolmogorov_count(d, w_prime, n, Fraction(c))
            reports.append(OracleReport(f"kolmogorov/random#{i} c={c} count*c<=2^n", n, True,
                                        count * c <= 1 << n))
    return reports


def cumulative_suite(n: int = 12) -> list[OracleReport]:
    from .codec import cumulative
    from .fixtures import CODEC_GALES, get_strategy

    _guard(n, 12)
    reports = []
    for ident in CODEC_GALES:
        d = get_strategy(ident)
        for length in range(n + 1):
            bad = sum(1 for x, ref in naive_cumulative_table(d, length) if cumulative(d, x) != ref)
            reports.append(OracleReport(f"cumulative/{ident} mismatches", length, 0, bad))
    return reports


def success_suite(n: int = 10) -> list[OracleReport]:
    from .fixtures import SOUND_STRATEGIES, get_strategy

    _guard(n)
    reports = [OracleReport("success/double-on-zero n=3 t=1", 3, "000",
                            ",".join(sorted(exhaustive_success_set(get_strategy("double-on-zero"),
                                                                   3, Fraction(1)))))]
    thresholds = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(8)]
    for ident in SOUND_STRATEGIES:
        d = get_strategy(ident)
        sets = [exhaustive_success_set(d, n, t) for t in thresholds]
        monotone = all(b <= a for a, b in zip(sets, sets[1:]))
        reports.append(OracleReport(f"success/{ident} monotone in threshold", n, True, monotone))
    return reports


def codec_suite(n: int = 12) -> list[OracleReport]:
    from .codec import decode, encode
    from .exact import floor_log2_power
    from .fixtures import CODEC_GALES, get_strategy

    _guard(n)
    reports = []
    for ident in CODEC_GALES:
        d = get_strategy(ident)
        for length in range(1, n + 1):
            bad = 0
            for x in _strings(length):
                if fold_capital(d, x) <= 1:
                    continue
                cw = encode(d, x)
                if decode(d, cw) != x or cw.payload_bits > floor_log2_power(d.rho, length) + 2:
                    bad += 1
            reports.append(OracleReport(f"codec/{ident} failures", length, 0, bad))
    return reports


def sampler_suite(n: int = 12) -> list[OracleReport]:
    from .prg import SampledDistribution, extend_g, get_prg, prg_names

    _guard(n, 16)
    reports = []
    for name in prg_names():
        prg = get_prg(name)
        dist = SampledDistribution(prg)

        def gen(r: str, out_len: int, prg=prg) -> str:
            return extend_g(prg, r, out_len)

        for length in range(1, n + 1):
            out_len = max(1 << (length - 1).bit_length(), 1 << prg.m)
            k = dist.seed_bits(length)
            bad = sum(1 for w, p in dist.table(length)
                      if exhaustive_mass(gen, k, out_len, w) != p)
            reports.append(OracleReport(f"sampler/{name} mass mismatches", length, 0, bad))
    return reports


SUITES = {
    "kolmogorov": kolmogorov_suite,
    "cumulative": cumulative_suite,
    "success": success_suite,
    "codec": codec_suite,
    "sampler": sampler_suite,
}
