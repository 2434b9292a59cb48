"""Universal s-gale over a finite roster of metered strategies.

For ``2^n <= |x| < 2^(n+1)`` the combined capital is

    d~(x) = 2^-n * (rho/2)^|x| + sum_{i=1..n} 2^-i * M_i'(x)

where roster member ``i`` only starts betting after position ``2^i`` (its
capital there is pinned to the even value ``(rho/2)^(2^i)``), absent indices
bet evenly, and a member is frozen to even betting from the first prefix at
which it overruns its step budget or stops betting like a gale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact import RationalLike, to_rational
from .gales import GALE, BettingStrategy


class DominationUndefined(ValueError):
    """The domination constant is not defined for this member and prefix."""


def poly_budget(exponent: int) -> Callable[[int], int]:
    """Step allowance ``t(n) = n^exponent``."""
    return lambda n: n**exponent


@dataclass(frozen=True)
class StrategyProgram:
    index: int
    strategy: BettingStrategy
    budget: Callable[[int], int] = poly_budget(1)

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("roster indices start at 1")


@dataclass(frozen=True)
class CombinedGale:
    roster: tuple[StrategyProgram, ...]
    rho: Fraction

    kind = GALE
    initial_capital = Fraction(1)

    def __post_init__(self):
        indices = [p.index for p in self.roster]
        if len(set(indices)) != len(indices):
            raise ValueError(f"duplicate roster indices in {indices}")
        object.__setattr__(self, "rho", to_rational(self.rho))

    @property
    def name(self) -> str:
        return "combined[" + ",".join(f"{p.index}:{p.strategy.name}" for p in self.roster) + "]"

    def member(self, index: int) -> Optional[StrategyProgram]:
        for p in self.roster:
            if p.index == index:
                return p
        return None

    def freeze_index(self, index: int, x: str) -> Optional[int]:
        """Least ``j < |x|`` at which member ``index`` breaks its contract on ``x``."""
        p = self.member(index)
        if p is None:
            return None
        strat = p.strategy
        spent = 0
        for j in range(len(x)):
            if j == 0 and strat.initial_capital != 1:
                return 0
            if spent > p.budget(j):
                return j
            s0, s1 = strat.shares(x[:j])
            if s0 < 0 or s1 < 0 or strat.rho * (s0 + s1) != self.rho:
                return j
            spent += strat.step_cost(j)
        return None

    def member_capital(self, index: int, x: str) -> Fraction:
        """The normalized member capital ``M_i'(x)``; needs ``|x| >= 2^index``."""
        start = 1 << index
        length = len(x)
        if length < start:
            raise ValueError(f"member {index} is inactive below length {start}")
        unfair = self.rho / 2
        p = self.member(index)
        if p is None:
            return unfair**length
        frozen = self.freeze_index(index, x)
        if frozen is not None and frozen < start:
            return unfair**length
        stop = length if frozen is None else frozen
        strat = p.strategy
        value = unfair**start
        for pos in range(start, stop):
            if not value:
                break
            value *= strat.rho * strat.shares(x[:pos])[x[pos] == "1"]
        if frozen is not None:
            value *= unfair ** (length - frozen)
        return value

    def capital(self, x: str) -> Fraction:
        length = len(x)
        n = length.bit_length() - 1 if length else 0
        total = (self.rho / 2) ** length / (1 << n)
        for i in range(1, n + 1):
            total += self.member_capital(i, x) / (1 << i)
        return total


def combine(roster: Sequence[StrategyProgram], rho: RationalLike) -> CombinedGale:
    return CombinedGale(tuple(sorted(roster, key=lambda p: p.index)), to_rational(rho))


def domination_constant(combined: CombinedGale, index: int, w: str) -> Fraction:
    """``c_i = 2^-i * (rho/2)^(2^i) / d_i(w|2^i)`` with ``d~(w) >= c_i * d_i(w)``."""
    p = combined.member(index)
    if p is None:
        raise DominationUndefined(f"no roster member with index {index}")
    start = 1 << index
    if len(w) < start:
        raise DominationUndefined(f"member {index} is inactive below length {start}")
    frozen = combined.freeze_index(index, w)
    if frozen is not None:
        raise DominationUndefined(f"member {index} is frozen at {frozen} on this prefix")
    anchor = p.strategy.capital(w[:start])
    if not anchor:
        raise DominationUndefined(f"member {index} has zero capital at length {start}")
    return (combined.rho / 2) ** start / (1 << index) / anchor
