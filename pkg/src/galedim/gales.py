"""Betting strategies, their capital functions, and the jump-event predicates.

A strategy is given incrementally: for each prefix ``w`` it splits its stake
into shares ``(share0, share1)`` and the capital obeys

    d(wb) = rho * d(w) * share_b

where ``rho = 2^s`` is the growth factor.  For ``kind="gale"`` the shares sum
to one, which makes ``d(w0) + d(w1) = rho * d(w)`` hold by construction; for
``kind="supergale"`` they may sum to less.  The exponent ``s`` itself is never
stored, only the rational ``rho``.

Anything exposing ``kind``, ``rho``, ``initial_capital`` and ``capital(w)``
(for example :class:`galedim.universal.CombinedGale`) can be passed to the
functions in this module.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .exact import RationalLike, pow_rational, to_rational

GALE = "gale"
SUPERGALE = "supergale"

Shares = tuple[Fraction, Fraction]
SplitRule = Callable[[str], Shares]

HALF = Fraction(1, 2)
EVEN: Shares = (HALF, HALF)


def _unit_cost(prefix_len: int) -> int:
    return 1


@dataclass(frozen=True)
class BettingStrategy:
    """An exact (super)gale defined by its betting shares.

    ``step_cost(L)`` is the number of abstract steps charged for the split
    call on a prefix of length ``L``; computing ``d(w)`` therefore costs
    ``sum(step_cost(L) for L < |w|)`` steps.
    """

    kind: str
    rho: Fraction
    split: SplitRule
    initial_capital: Fraction = Fraction(1)
    step_cost: Callable[[int], int] = _unit_cost
    name: str = "anonymous"

    def __post_init__(self):
        if self.kind not in (GALE, SUPERGALE):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        object.__setattr__(self, "rho", to_rational(self.rho))
        object.__setattr__(self, "initial_capital", to_rational(self.initial_capital))
        if self.rho <= 0:
            raise ValueError("growth factor must be positive")
        if self.initial_capital < 0:
            raise ValueError("initial capital must be non-negative")

    def shares(self, prefix: str) -> Shares:
        s0, s1 = self.split(prefix)
        return Fraction(s0), Fraction(s1)

    def capital(self, w: str) -> Fraction:
        return self.extend(self.initial_capital, "", w)

    def capitals_along(self, w: str) -> list[Fraction]:
        """Capital at every prefix length ``0..|w|``."""
        caps = [self.initial_capital]
        cap = self.initial_capital
        for i, bit in enumerate(w):
            if cap:
                cap = self.rho * cap * self.split(w[:i])[bit == "1"]
            caps.append(cap)
        return caps

    def extend(self, cap: Fraction, prefix: str, suffix: str) -> Fraction:
        """Capital at ``prefix + suffix`` given ``cap = d(prefix)``."""
        # integer numerator/denominator product, reduced once at the end
        num, den = cap.numerator, cap.denominator
        rn, rd = self.rho.numerator, self.rho.denominator
        w = prefix
        split = self.split
        for bit in suffix:
            if not num:
                return Fraction(0)  # zero capital is absorbing
            share = split(w)[bit == "1"]
            num *= rn * share.numerator
            den *= rd * share.denominator
            w += bit
        return Fraction(num, den)

    def cost(self, prefix_len: int) -> int:
        """Steps needed to compute the capital of a string of this length."""
        return sum(self.step_cost(L) for L in range(prefix_len))


def evaluate(strategy, w: str) -> Fraction:
    """Exact capital ``d(w)``."""
    check_bits(w)
    return strategy.capital(w)


def check_bits(w: str) -> None:
    if any(ch not in "01" for ch in w):
        raise ValueError(f"not a binary string: {w!r}")


def all_strings(n: int) -> Iterator[str]:
    """Every binary string of length ``n`` in lexicographic order."""
    if n == 0:
        yield ""
        return
    for i in range(1 << n):
        yield format(i, "b").zfill(n)


def capitals_along(strategy, w: str) -> list[Fraction]:
    if hasattr(strategy, "capitals_along"):
        return strategy.capitals_along(w)
    return [strategy.capital(w[:i]) for i in range(len(w) + 1)]


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    kind: str
    rho: Fraction
    depth: int
    checked: int
    violation: Optional[str] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def validate(strategy, depth: int, kind: Optional[str] = None,
             rho: Optional[RationalLike] = None) -> ValidationReport:
    """Walk every prefix shorter than ``depth`` and check the (super)gale law.

    ``kind`` and ``rho`` default to the strategy's own declaration; passing
    them checks the strategy against a different claim (e.g. a scaled
    strategy as a supermartingale with ``rho=2``).
    """
    kind = kind or strategy.kind
    rho = to_rational(rho) if rho is not None else strategy.rho
    if depth > 22:
        raise ValueError("validate walks 2^depth prefixes; depth must be <= 22")
    checked = 0
    stack = [("", strategy.capital(""))]
    if stack[0][1] < 0:
        return ValidationReport(False, kind, rho, depth, 0, "", "negative capital")
    while stack:
        w, cap = stack.pop()
        if len(w) >= depth:
            continue
        c0 = strategy.capital(w + "0")
        c1 = strategy.capital(w + "1")
        checked += 1
        if c0 < 0 or c1 < 0:
            return ValidationReport(False, kind, rho, depth, checked, w,
                                    f"negative capital below {w!r}")
        total = c0 + c1
        if kind == GALE and total != rho * cap:
            return ValidationReport(False, kind, rho, depth, checked, w,
                                    f"d(w0)+d(w1) = {total} != {rho * cap} = rho*d(w)")
        if kind == SUPERGALE and total > rho * cap:
            return ValidationReport(False, kind, rho, depth, checked, w,
                                    f"d(w0)+d(w1) = {total} > {rho * cap} = rho*d(w)")
        stack.append((w + "1", c1))
        stack.append((w + "0", c0))
    return ValidationReport(True, kind, rho, depth, checked)


# --------------------------------------------------------------------------
# transformations


def scale_strategy(d: BettingStrategy, target_rho: RationalLike) -> BettingStrategy:
    """Turn an ``s'``-(super)gale into the supermartingale ``d(w) * 2^((1-s'')|w|)``.

    ``target_rho`` is ``2^s''`` and must be at least ``d.rho``.  The result
    bets with growth 2 and shares multiplied by ``rho / target_rho <= 1``.
    """
    target = to_rational(target_rho)
    if target < d.rho:
        raise ValueError(f"target growth {target} is below source growth {d.rho}")
    ratio = d.rho / target
    inner = d.split

    def split(prefix: str) -> Shares:
        s0, s1 = inner(prefix)
        return Fraction(s0) * ratio, Fraction(s1) * ratio

    return BettingStrategy(SUPERGALE, Fraction(2), split, d.initial_capital,
                           d.step_cost, f"scaled({d.name},{target})")


def as_strategy(gale, name: Optional[str] = None) -> BettingStrategy:
    """Recover betting shares from any capital function with positive capital."""
    rho = gale.rho

    def split(prefix: str) -> Shares:
        cap = gale.capital(prefix)
        if not cap:
            return EVEN
        return gale.capital(prefix + "0") / (rho * cap), gale.capital(prefix + "1") / (rho * cap)

    return BettingStrategy(gale.kind, rho, split, gale.capital(""),
                           name=name or getattr(gale, "name", "derived"))


def induced_supergale(nu, rho: RationalLike) -> BettingStrategy:
    """The supergale ``d(w) = rho^|w| * nu(w)`` of a sampled distribution."""
    rho = to_rational(rho)

    def split(prefix: str) -> Shares:
        here = nu.mass(prefix)
        if not here:
            return EVEN
        return nu.mass(prefix + "0") / here, nu.mass(prefix + "1") / here

    return BettingStrategy(SUPERGALE, rho, split, Fraction(1),
                           name=f"induced({nu.name},{rho})")


# --------------------------------------------------------------------------
# jump events


def jump_threshold(rho_tilde: RationalLike, n: int, span: str = "block") -> Fraction:
    """``2^((1-s~) * L)`` as the exact power ``(2/rho_tilde)^L``.

    ``span="block"`` uses ``L = 2^n`` (the event function's exponent);
    ``span="half"`` uses ``L = 2^(n-1)`` (the growth lemma's exponent).
    """
    if span == "block":
        length = 1 << n
    elif span == "half":
        length = 1 << (n - 1)
    else:
        raise ValueError(f"unknown span {span!r}")
    return pow_rational(Fraction(2) / to_rational(rho_tilde), length)


def jump_event(d, x_prefix: str, n: int, threshold: RationalLike) -> bool:
    """True iff ``d(X|2^n) > threshold * d(X|2^(n-1))`` (strict)."""
    if n < 1:
        raise ValueError("jump events start at n = 1")
    if len(x_prefix) < 1 << n:
        raise ValueError(f"prefix of length {len(x_prefix)} is shorter than 2^{n}")
    threshold = to_rational(threshold)
    half, full = x_prefix[: 1 << (n - 1)], x_prefix[: 1 << n]
    low = d.capital(half)
    high = d.extend(low, half, full[len(half):]) if hasattr(d, "extend") else d.capital(full)
    return high > threshold * low


def min_ell(rho_tilde: Fraction, rho_dblprime: Fraction, half: int) -> int:
    """Least ``l`` with ``l >= ((s~ - s'')/s'') * half``.

    Equivalent to ``rho''^(l + half) >= rho~^half``, which is checked exactly.
    """
    target = rho_tilde**half
    ell = 0
    power = rho_dblprime**half
    while power < target:
        power *= rho_dblprime
        ell += 1
    return ell


def ell_scan_event(d, x_prefix: str, n: int, rho_tilde: RationalLike,
                   rho_dblprime: RationalLike) -> bool:
    """Second disjunct: some ``l`` in range has ``d(X|2^(n-1)+l) > 2^((1-s'')(2^(n-1)+l))``."""
    rho_tilde, rho_dblprime = to_rational(rho_tilde), to_rational(rho_dblprime)
    if not (1 < rho_dblprime < rho_tilde):
        raise ValueError("need 1 < 2^s'' < 2^s~")
    if len(x_prefix) < 1 << n:
        raise ValueError(f"prefix of length {len(x_prefix)} is shorter than 2^{n}")
    half = 1 << (n - 1)
    caps = capitals_along(d, x_prefix[: 1 << n])
    unfair = Fraction(2) / rho_dblprime
    for ell in range(min_ell(rho_tilde, rho_dblprime, half), half + 1):
        if caps[half + ell] > unfair ** (half + ell):
            return True
    return False


def general_jump_event(d, x_prefix: str, n: int, rho_tilde: RationalLike,
                       rho_dblprime: RationalLike, span: str = "half") -> bool:
    """Either the plain jump event or the ``l``-scan event holds."""
    if jump_event(d, x_prefix, n, jump_threshold(rho_tilde, n, span)):
        return True
    return ell_scan_event(d, x_prefix, n, rho_tilde, rho_dblprime)


# --------------------------------------------------------------------------
# finite-scale success statistics


CapitalTrace = list[tuple[int, Fraction]]


def capital_trace(d, x_prefix: str) -> CapitalTrace:
    return list(enumerate(capitals_along(d, x_prefix)))


def success_stats(d, x_prefix: str, threshold: RationalLike
                  ) -> tuple[Optional[int], Optional[int]]:
    """``(first_hit, last_below)`` along the prefix.

    ``first_hit`` is the first length whose capital reaches ``threshold``.
    ``last_below`` is the last length after ``first_hit`` (or anywhere, if the
    threshold is never reached) at which capital is below ``threshold``;
    ``None`` means capital never falls back once it has reached the threshold.
    """
    threshold = to_rational(threshold)
    trace = capital_trace(d, x_prefix)
    first_hit = next((L for L, cap in trace if cap >= threshold), None)
    start = 0 if first_hit is None else first_hit
    below = [L for L, cap in trace[start:] if cap < threshold]
    return first_hit, (below[-1] if below else None)


# --------------------------------------------------------------------------
# built-in strategies


def uniform(rho: RationalLike = 2, initial_capital: RationalLike = 1) -> BettingStrategy:
    """Even bettor; capital ``initial * (rho/2)^|w|``."""
    return BettingStrategy(GALE, to_rational(rho), lambda w: EVEN,
                           to_rational(initial_capital), name="uniform")


def double_on_zero(rho: RationalLike = 2, initial_capital: RationalLike = 1) -> BettingStrategy:
    return BettingStrategy(GALE, to_rational(rho), lambda w: (Fraction(1), Fraction(0)),
                           to_rational(initial_capital), name="double-on-zero")


def constant_shares(share0: RationalLike, share1: RationalLike, rho: RationalLike = 2,
                    kind: str = GALE, initial_capital: RationalLike = 1,
                    name: str = "constant") -> BettingStrategy:
    shares = (to_rational(share0), to_rational(share1))
    return BettingStrategy(kind, to_rational(rho), lambda w: shares,
                           to_rational(initial_capital), name=name)


def table_strategy(table: dict[str, Sequence[RationalLike]], default=EVEN,
                   rho: RationalLike = 2, kind: str = GALE,
                   initial_capital: RationalLike = 1, name: str = "table") -> BettingStrategy:
    """Shares looked up per prefix, falling back to ``default``."""
    frozen = {k: (to_rational(v[0]), to_rational(v[1])) for k, v in table.items()}
    fallback = (to_rational(default[0]), to_rational(default[1]))
    return BettingStrategy(kind, to_rational(rho), lambda w: frozen.get(w, fallback),
                           to_rational(initial_capital), name=name)


def repetition_gale(m: int = 2) -> BettingStrategy:
    """Martingale that exploits the repetition generator inside the g-extension.

    On the zero lead block it bets everything on 0.  Inside block ``n``
    (positions ``2^(n-1)..2^n - 1``, 0-based) the first ``2^(n-1-m)`` bits are
    bet evenly and every later bit is predicted to repeat the bit one period
    earlier, with the whole stake on the prediction.
    """
    lead = 1 << m
    one, zero = Fraction(1), Fraction(0)

    def split(w: str) -> Shares:
        pos = len(w)
        if pos < lead:
            return one, zero
        block = 1 << (pos.bit_length() - 1)
        period = block >> m
        if pos - block < period:
            return EVEN
        return (one, zero) if w[pos - period] == "0" else (zero, one)

    return BettingStrategy(GALE, Fraction(2), split, name=f"repetition(m={m})")


def random_strategy(seed: int, rho: RationalLike = 2, kind: str = SUPERGALE,
                    denominator: int = 8) -> BettingStrategy:
    """Pseudo-random shares derived from ``(seed, prefix)``; pure in the prefix.

    For ``kind="supergale"`` the two shares sum to at most one, for
    ``kind="gale"`` exactly one.
    """

    @functools.lru_cache(maxsize=1 << 16)
    def split(w: str) -> Shares:
        r = random.Random(f"{seed}:{w}")
        a = r.randint(0, denominator)
        if kind == GALE:
            return Fraction(a, denominator), Fraction(denominator - a, denominator)
        b = r.randint(0, denominator - a)
        return Fraction(a, denominator), Fraction(b, denominator)

    return BettingStrategy(kind, to_rational(rho), split, name=f"random({seed},{kind})")
