from fractions import Fraction

import pytest

from galedim.fixtures import (BUILTIN_ROSTERS, FixtureError, builtin_roster, builtin_strategies,
                              get_strategy, parse_roster, parse_strategies)
from galedim.gales import validate

F = Fraction


def test_builtin_records_parse():
    pool = builtin_strategies()
    assert pool["biased-3-2"].capital("01") == F(1, 2)
    assert pool["rich-start"].initial_capital == 2
    assert pool["expensive"].step_cost(5) == 6
    assert pool["table-2"].shares("") == (F(3, 4), F(1, 4))
    assert pool["table-2"].shares("0110") == (F(3, 5), F(2, 5))
    assert pool["half-super"].kind == "supergale"
    assert not validate(pool["late-violation"], 6).ok


def test_custom_records():
    pool = parse_strategies("""
        # comment line
        lean   constant rho=3/2 capital=1/2 shares=3/4,1/4
        fancy  table    rho=2 capital=1 table=-:1,0;01:0,1 default=1/2,1/2 kind=supergale
    """)
    assert pool["lean"].capital("0") == F(1, 2) * F(3, 2) * F(3, 4)
    assert pool["fancy"].kind == "supergale"
    assert get_strategy("lean", pool).name == "lean"


@pytest.mark.parametrize("record", [
    "x", "x unknown rho=2", "x constant rho=2 shares=1", "x uniform rho=0.5",
    "x repetition rho=3/2", "x table table=0-1,0", "x uniform kind=mart",
    "x uniform cost=cubic", "x uniform colour=red", "x uniform rho",
])
def test_bad_records(record):
    with pytest.raises(ValueError):
        parse_strategies(record)


def test_duplicate_ids():
    with pytest.raises(FixtureError):
        parse_strategies("a uniform\na uniform\n")


def test_rosters():
    for name in BUILTIN_ROSTERS:
        d = builtin_roster(name)
        assert [p.index for p in d.roster] == sorted(p.index for p in d.roster)
    d = parse_roster("2 double-on-zero 1\n1 uniform 3\n", 2)
    assert [p.index for p in d.roster] == [1, 2]
    assert d.roster[0].budget(4) == 64
    with pytest.raises(FixtureError):
        parse_roster("1 uniform\n", 2)
    with pytest.raises(FixtureError):
        parse_roster("1 nobody 1\n", 2)
    with pytest.raises(FixtureError):
        builtin_roster("huge")
