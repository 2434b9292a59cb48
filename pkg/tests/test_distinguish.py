import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galedim.distinguish import (DistinguisherConfig, advantage, exhaustive_acceptance,
                                 general_bound, jump_frequency, prg_floor, q_in_range, run_A,
                                 run_A_general, uniform_bound)
from galedim.gales import SUPERGALE, double_on_zero, jump_threshold, random_strategy, repetition_gale, uniform
from galedim.prg import SampledDistribution, get_prg

F = Fraction
RT, RD, Q = F(5, 3), F(4, 3), F(1, 2)
rep = get_prg("repetition")


class ZeroRng:
    def getrandbits(self, k):
        return 0


def config(martingale=None, prg=rep, **kw):
    return DistinguisherConfig(prg, martingale or repetition_gale(), RT, **kw)


def test_run_A_accepts_generator_output():
    assert jump_threshold(RT, 3) <= 16
    cfg = config()
    for x in ("00", "01", "10", "11"):
        w = rep(8, x)
        for seed in range(5):
            assert run_A(cfg, w, random.Random(seed)) == 1


def test_run_A_rejects_non_repetitive_block():
    cfg = config()
    for seed in range(5):
        assert run_A(cfg, "01101001", random.Random(seed)) == 0


def test_run_A_zero_approximator_accepts_vacuously():
    cfg = config(approximator=lambda w: F(0))
    assert run_A(cfg, "01101001", random.Random(0)) == 1


def test_run_A_length_guard():
    with pytest.raises(ValueError):
        run_A(config(), "0110100", random.Random(0))
    with pytest.raises(ValueError):
        run_A(config(), "0110", random.Random(0))  # 2^n must exceed 2^m


def test_run_A_is_deterministic_given_randomness():
    cfg = config(random_strategy(3, 2, SUPERGALE))
    rng = random.Random(99)
    for _ in range(50):
        w = "".join(rng.choice("01") for _ in range(16))
        seed = rng.getrandbits(32)
        assert run_A(cfg, w, random.Random(seed)) == run_A(cfg, w, random.Random(seed))


def general(martingale, **kw):
    return DistinguisherConfig(rep, martingale, RT, rho_dblprime=RD, q=Q, **kw)


def test_run_A_general_extends_run_A():
    plain, gen = config(), general(repetition_gale())
    rng = random.Random(5)
    for _ in range(40):
        w = rep(16, "".join(rng.choice("01") for _ in range(4)))
        seed = rng.getrandbits(16)
        if run_A(plain, w, random.Random(seed)):
            assert run_A_general(gen, w, random.Random(seed)) == 1


def test_run_A_general_ell_scan_on_zero_sequence():
    cfg = general(double_on_zero())
    N = 16
    assert run_A_general(cfg, "0" * N, ZeroRng()) == 1
    # plain test fails once the last bit kills the capital; the ell-scan still fires
    w = "0" * (N - 1) + "1"
    assert run_A(config(double_on_zero()), w, ZeroRng()) == 0
    assert run_A_general(cfg, w, ZeroRng()) == 1


def test_uniform_martingale_never_accepts():
    cfg, gen = config(uniform()), general(uniform())
    rng = random.Random(1)
    for _ in range(30):
        w = "".join(rng.choice("01") for _ in range(16))
        assert run_A(cfg, w, rng) == 0
        assert run_A_general(gen, w, rng) == 0


def test_q_range():
    assert q_in_range(Q, RT, RD)
    assert not q_in_range(F(1, 10), RT, RD)
    assert not q_in_range(F(9, 10), RT, RD)
    assert not q_in_range(Q, RD, RT)
    with pytest.raises(ValueError):
        DistinguisherConfig(rep, uniform(), RT, rho_dblprime=RD, q=F(9, 10))
    with pytest.raises(ValueError):
        DistinguisherConfig(rep, uniform(), RT, q=Q)
    with pytest.raises(ValueError):
        DistinguisherConfig(rep, uniform(), RT, c=F(3, 2))


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 40))
def test_q_range_agrees_with_log_inequality(qn, a, b):
    import math
    q = F(qn, 20)
    rd, rt = 1 + F(min(a, b), 41), 1 + F(max(a, b), 41) + F(1, 100)
    sd, st_ = math.log2(rd), math.log2(rt)
    lo, hi = (st_ - sd) / (2 * sd), (st_ - sd) / sd
    # skip ties that floats cannot settle
    if min(abs(float(q) - lo), abs(float(q) - hi)) < 1e-9:
        return
    assert q_in_range(q, rt, rd) == (lo <= q <= hi)


def test_bounds():
    cfg = config()
    assert uniform_bound(cfg, 64) == (RT / 2) ** 64 + F(1, 64**2) + F(1, 2**48)
    assert prg_floor(cfg, 6) == F(1, 49) - F(1, 64**2)
    gen = general(repetition_gale())
    assert general_bound(gen, 64) == (RT / 2) ** 64 + (RT / 2) ** 96


def test_advantage_small_scale_report():
    rep_report = advantage(config(), 4, 300, seed=3)
    assert rep_report.prg_mode == "exhaustive" and rep_report.prg_trials == 16
    assert rep_report.accept_prg == 1
    assert rep_report.advantage == abs(rep_report.accept_prg - rep_report.accept_uniform)
    text = rep_report.to_text()
    assert "accept_prg 1/1" in text and "rng_seed 3" in text
    assert advantage(config(), 4, 300, seed=3).to_text() == text
    assert len(rep_report.csv_row()) == 7


def test_advantage_monte_carlo_mode():
    report = advantage(config(), 7, 50, seed=1)  # 2^32 seeds: sampled
    assert report.prg_mode == "monte-carlo" and report.prg_trials == 50
    assert report.accept_prg == 1


def test_advantage_general_variant():
    report = advantage(general(repetition_gale()), 5, 200, seed=2)
    assert report.general and report.analytic_general_bound is not None
    assert report.accept_prg == 1
    assert "variant ell-scan" in report.to_text()


def test_zero_denominator_acceptances_are_flagged():
    cfg = config(prg=get_prg("hash-chain"))
    report = advantage(cfg, 4, 100, seed=0)
    assert report.zero_denominator_prg <= report.accept_prg * report.prg_trials
    assert report.zero_denominator_uniform <= report.accept_uniform * report.uniform_trials


@settings(max_examples=10)
@given(st.integers(0, 1000))
def test_exhaustive_acceptance_respects_kolmogorov_count(seed):
    cfg = config(random_strategy(seed, 2, SUPERGALE, 4))
    counts = exhaustive_acceptance(cfg, 3)
    N = 8
    per_seed_cap = 2**N * (RT / 2) ** N
    assert counts["max_per_seed"] <= per_seed_cap
    assert counts["accepted"] - counts["vacuous"] <= counts["pairs"] * (RT / 2) ** N


def test_jump_frequency_examples():
    dist = SampledDistribution(rep)
    assert jump_frequency(dist, repetition_gale(), 4, jump_threshold(RT, 4)) == 1
    assert jump_frequency(dist, uniform(), 4, jump_threshold(RT, 4)) == 0
    # ratio 1: frequency of any strict growth between lengths 8 and 16
    assert jump_frequency(dist, repetition_gale(), 4, F(1)) == 1
    assert jump_frequency(SampledDistribution(get_prg("hash-chain")), repetition_gale(), 4, F(1)) < 1


@pytest.mark.parametrize("name", ["repetition", "lfsr", "hash-chain"])
def test_jump_frequency_monotone_in_threshold(name):
    dist = SampledDistribution(get_prg(name))
    d = random_strategy(17, 2, "gale", 4)
    freqs = [jump_frequency(dist, d, 4, t) for t in (F(1, 2), F(1), F(2), F(8), F(64))]
    assert all(a >= b for a, b in zip(freqs, freqs[1:]))
