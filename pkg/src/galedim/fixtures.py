"""Named strategies and rosters, defined by plain-text records.

Strategy record (one per line, ``#`` starts a comment)::

    <id> <rule> rho=p/q capital=p/q [key=value ...]

Rules and their extra keys:

* ``uniform``, ``double-on-zero``: none
* ``repetition``: ``m=<int>`` (rho must be 2)
* ``constant``: ``shares=a,b``
* ``table``: ``table=<prefix>:a,b;<prefix>:a,b`` (``-`` is the empty prefix)
  and ``default=a,b``
* ``random``: ``seed=<int>`` and optionally ``denominator=<int>``

Common optional keys: ``kind=gale|supergale`` and ``cost=unit|linear``
(``linear`` charges ``L + 1`` steps for the split call on a length-``L`` prefix).

Roster record::

    <index> <strategy id> <budget exponent>
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Optional

from .exact import parse_rational
from .gales import (GALE, SUPERGALE, BettingStrategy, constant_shares, double_on_zero,
                    random_strategy, repetition_gale, table_strategy, uniform)
from .universal import CombinedGale, StrategyProgram, combine, poly_budget

BUILTIN_STRATEGIES = """\
uniform          uniform         rho=2 capital=1
double-on-zero   double-on-zero  rho=2 capital=1
repetition       repetition      rho=2 capital=1 m=2
biased-3-2       constant        rho=3/2 capital=1 shares=2/3,1/3
all-zero-3-2     constant        rho=3/2 capital=1 shares=1,0
table-2          table           rho=2 capital=1 table=-:3/4,1/4;0:1/4,3/4;01:1,0 default=3/5,2/5
random-gale      random          rho=3/2 capital=1 seed=11 kind=gale
rich-start       uniform         rho=2 capital=2
half-super       constant        rho=3/2 capital=1 shares=1/2,1/4 kind=supergale
random-super     random          rho=2 capital=1 seed=5 kind=supergale
expensive        double-on-zero  rho=2 capital=1 cost=linear
late-violation   table           rho=2 capital=1 table=0000:3/5,3/5 default=1/2,1/2
"""

# gales valid for the codec: exact gales with initial capital at most 1
CODEC_GALES = ("uniform", "double-on-zero", "repetition", "biased-3-2", "all-zero-3-2",
               "table-2", "random-gale")

# every strategy whose declaration is honest (validate passes)
SOUND_STRATEGIES = CODEC_GALES + ("rich-start", "half-super", "random-super", "expensive")

BUILTIN_ROSTERS = {
    "basic": ("2", "1 uniform 1\n2 double-on-zero 1\n"),
    "mixed": ("2", "1 table-2 1\n2 late-violation 1\n3 expensive 1\n"
                   "4 repetition 2\n5 rich-start 1\n6 random-super 1\n"),
    "three-halves": ("3/2", "1 biased-3-2 1\n2 all-zero-3-2 1\n3 random-gale 2\n"
                           "4 half-super 1\n5 double-on-zero 1\n"),
    "sparse": ("2", "2 repetition 1\n5 double-on-zero 1\n"),
}


class FixtureError(ValueError):
    pass


def _shares(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise FixtureError(f"shares need two comma-separated rationals: {text!r}")
    return parse_rational(parts[0]), parse_rational(parts[1])


def _linear_cost(prefix_len: int) -> int:
    return prefix_len + 1


def _lines(text: str) -> Iterable[list[str]]:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def parse_strategy_record(fields: list[str]) -> tuple[str, BettingStrategy]:
    if len(fields) < 2:
        raise FixtureError(f"strategy record needs an id and a rule: {fields}")
    ident, rule, *rest = fields
    opts: dict[str, str] = {}
    for item in rest:
        key, sep, value = item.partition("=")
        if not sep:
            raise FixtureError(f"expected key=value, got {item!r} in record {ident!r}")
        opts[key] = value
    rho = parse_rational(opts.pop("rho", "2"))
    capital = parse_rational(opts.pop("capital", "1"))
    kind = opts.pop("kind", GALE)
    if kind not in (GALE, SUPERGALE):
        raise FixtureError(f"unknown kind {kind!r}")
    cost = opts.pop("cost", "unit")
    if rule == "uniform":
        strat = uniform(rho, capital)
    elif rule == "double-on-zero":
        strat = double_on_zero(rho, capital)
    elif rule == "repetition":
        if rho != 2:
            raise FixtureError("the repetition bettor is a martingale; rho must be 2")
        strat = repetition_gale(int(opts.pop("m", "2")))
    elif rule == "constant":
        s0, s1 = _shares(opts.pop("shares", "1/2,1/2"))
        strat = constant_shares(s0, s1, rho, kind, capital)
    elif rule == "table":
        table = {}
        entries_text = opts.pop("table", "")
        for entry in filter(None, entries_text.split(";")):
            prefix, sep, pair = entry.partition(":")
            if not sep:
                raise FixtureError(f"table entry needs prefix:a,b, got {entry!r}")
            table["" if prefix == "-" else prefix] = _shares(pair)
        strat = table_strategy(table, _shares(opts.pop("default", "1/2,1/2")), rho, kind, capital)
    elif rule == "random":
        strat = random_strategy(int(opts.pop("seed", "0")), rho, kind,
                                int(opts.pop("denominator", "8")))
    else:
        raise FixtureError(f"unknown rule {rule!r}")
    if opts:
        raise FixtureError(f"unused keys {sorted(opts)} in record {ident!r}")
    changes = {"name": ident, "kind": kind, "initial_capital": capital}
    if cost == "linear":
        changes["step_cost"] = _linear_cost
    elif cost != "unit":
        raise FixtureError(f"unknown cost model {cost!r}")
    return ident, _replace(strat, **changes)


def _replace(strat: BettingStrategy, **changes) -> BettingStrategy:
    fields = dict(kind=strat.kind, rho=strat.rho, split=strat.split,
                  initial_capital=strat.initial_capital, step_cost=strat.step_cost,
                  name=strat.name)
    fields.update(changes)
    return BettingStrategy(**fields)


def parse_strategies(text: str) -> dict[str, BettingStrategy]:
    out: dict[str, BettingStrategy] = {}
    for fields in _lines(text):
        ident, strat = parse_strategy_record(fields)
        if ident in out:
            raise FixtureError(f"duplicate strategy id {ident!r}")
        out[ident] = strat
    return out


@functools.lru_cache(maxsize=None)
def builtin_strategies() -> dict[str, BettingStrategy]:
    return parse_strategies(BUILTIN_STRATEGIES)


def get_strategy(ident: str, extra: Optional[dict[str, BettingStrategy]] = None) -> BettingStrategy:
    pool = dict(builtin_strategies())
    if extra:
        pool.update(extra)
    try:
        return pool[ident]
    except KeyError:
        raise FixtureError(f"unknown strategy {ident!r}; known: {sorted(pool)}") from None


def parse_roster(text: str, rho, extra: Optional[dict[str, BettingStrategy]] = None
                 ) -> CombinedGale:
    programs = []
    for fields in _lines(text):
        if len(fields) != 3:
            raise FixtureError(f"roster record needs index, strategy id, exponent: {fields}")
        index, ident, exponent = int(fields[0]), fields[1], int(fields[2])
        programs.append(StrategyProgram(index, get_strategy(ident, extra), poly_budget(exponent)))
    return combine(programs, rho)


@functools.lru_cache(maxsize=None)
def builtin_roster(name: str) -> CombinedGale:
    try:
        rho, text = BUILTIN_ROSTERS[name]
    except KeyError:
        raise FixtureError(f"unknown roster {name!r}; known: {sorted(BUILTIN_ROSTERS)}") from None
    return parse_roster(text, rho)
