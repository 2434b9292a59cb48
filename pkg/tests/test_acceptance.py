"""End-to-end acceptance checks, one test per criterion.

Each test is tagged with ``criterion(number, title)``; ``conftest.py``
prints a PASS/FAIL line per criterion in the terminal summary.
"""

import math
import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from galedim.cli import main
from galedim.codec import decode, encode
from galedim.distinguish import DistinguisherConfig, advantage, jump_frequency
from galedim.exact import floor_log2_power
from galedim.fixtures import BUILTIN_ROSTERS, CODEC_GALES, SOUND_STRATEGIES, builtin_roster, get_strategy
from galedim.gales import SUPERGALE, all_strings, jump_threshold, repetition_gale, scale_strategy, uniform, validate
from galedim.oracles import cumulative_suite, kolmogorov_count, kolmogorov_suite
from galedim.prg import (SampledDistribution, describe_prefix, extend_g, g_map, get_prg, prg_names,
                         run_description)
from galedim.universal import DominationUndefined, domination_constant

F = Fraction
RHO_TILDE = F(5, 3)


def note(request, **items):
    for key, value in items.items():
        request.node.user_properties.append((key, value))


def positive_prefixes(d, depth):
    """Every string of length <= depth whose capital exceeds 1, with its capital."""
    stack = [("", d.capital(""))]
    while stack:
        w, cap = stack.pop()
        if w and cap > 1:
            yield w, cap
        if len(w) < depth and cap:
            for bit in "01":
                stack.append((w + bit, d.extend(cap, w, bit)))


@pytest.mark.criterion(1, "codec round trip and payload <= floor(s n) + 2, n <= 14")
def test_criterion_1_codec(request):
    start = time.perf_counter()
    encoded = failures = 0
    for ident in CODEC_GALES:
        d = get_strategy(ident)
        for x, _ in positive_prefixes(d, 14):
            cw = encode(d, x)
            encoded += 1
            if decode(d, cw) != x or cw.payload_bits > floor_log2_power(d.rho, len(x)) + 2:
                failures += 1
    elapsed = time.perf_counter() - start
    note(request, strings=encoded, failures=failures, seconds=round(elapsed, 1))
    assert encoded > 0 and failures == 0
    assert elapsed < 60


@pytest.mark.criterion(2, "Kolmogorov inequality on 100 random supermartingales, tight witness")
def test_criterion_2_kolmogorov(request):
    start = time.perf_counter()
    reports = []
    for n in (3, 6, 9, 12):
        reports += kolmogorov_suite(n, fixtures=100, seed=n)
    witness = kolmogorov_count(get_strategy("double-on-zero"), "", 3, F(4))
    elapsed = time.perf_counter() - start
    failed = [r.line() for r in reports if not r.passed]
    note(request, checks=len(reports), failed=len(failed), witness=witness,
         seconds=round(elapsed, 1))
    assert not failed, failed[:5]
    assert witness == 2 == 8 // 4
    assert elapsed < 30


@pytest.mark.criterion(3, "incremental cumulative equals the literal sum, n <= 12")
def test_criterion_3_cumulative(request):
    start = time.perf_counter()
    reports = cumulative_suite(12)
    elapsed = time.perf_counter() - start
    failed = [r.line() for r in reports if not r.passed]
    note(request, checks=len(reports), failed=len(failed), seconds=round(elapsed, 1))
    assert not failed, failed[:5]
    assert elapsed < 60


def _sample_inputs(rng, count, max_len):
    rep = get_prg("repetition")
    out = []
    for i in range(count):
        length = rng.randrange(1, max_len + 1)
        kind = i % 4
        if kind == 0:
            w = "".join(rng.choice("01") for _ in range(length))
        elif kind == 1:
            w = "0" * length
        elif kind == 2:
            cut = rng.randrange(length)
            w = "0" * cut + "".join(rng.choice("01") for _ in range(length - cut))
        else:
            seed = "".join(rng.choice("01") for _ in range(64))
            w = extend_g(rep, seed, 256)[:length]
        out.append(w)
    return out


@pytest.mark.criterion(4, "universal gale: exact identity at depth 10 and domination by c_i")
def test_criterion_4_universal(request):
    checked = undefined = 0
    rng = random.Random(4)
    for name in sorted(BUILTIN_ROSTERS):
        d = builtin_roster(name)
        report = validate(d, 10)
        assert report.ok, (name, report)
        words = list(all_strings(10)) + _sample_inputs(rng, 120, 256)
        words += [w for n in range(10) for w in all_strings(n)]
        for w in words:
            total = d.capital(w)
            for p in d.roster:
                try:
                    c = domination_constant(d, p.index, w)
                except DominationUndefined:
                    undefined += 1
                    continue
                assert total >= c * p.strategy.capital(w), (name, p.index, w)
                checked += 1
    note(request, domination_checks=checked, undefined=undefined)
    assert checked > 0


@pytest.mark.criterion(5, "sampler consistency, 3-sigma Monte Carlo agreement, seed accounting")
def test_criterion_5_sampler(request):
    worst_sigma = 0.0
    samples = 100_000
    for name in prg_names():
        dist = SampledDistribution(get_prg(name))
        for n in range(1, 17):
            parents = dict(dist.table(n - 1)) if n > 1 else {"": F(1)}
            folded = Counter()
            for w, p in dist.table(n):
                folded[w[:-1]] += p
            assert dict(folded) == parents, (name, n)

            class Counting:
                bits = 0
                inner = random.Random(n)

                def getrandbits(self, k):
                    Counting.bits += k
                    return self.inner.getrandbits(k)

            rng = Counting()
            dist.sample(n, rng)
            assert Counting.bits == dist.seed_bits(n) == (1 << (n - 1).bit_length()) >> 2
        for n in (6, 11, 16):
            rng = random.Random(f"{name}:{n}")
            counts = Counter(dist.sample(n, rng) for _ in range(samples))
            table = dict(dist.table(n))
            assert set(counts) <= set(table), (name, n)
            for w, p in table.items():
                sigma = math.sqrt(samples * float(p) * (1 - float(p)))
                dev = abs(counts[w] - samples * float(p))
                if sigma:
                    worst_sigma = max(worst_sigma, dev / sigma)
                assert dev <= 3 * sigma + 1e-9, (name, n, w, counts[w], p)
    note(request, worst_deviation_sigma=round(worst_sigma, 2))


@pytest.mark.criterion(6, "positive control: repetition generator, N = 64")
def test_criterion_6_positive_control(request):
    start = time.perf_counter()
    cfg = DistinguisherConfig(get_prg("repetition"), repetition_gale(), RHO_TILDE)
    report = advantage(cfg, 6, 10_000, seed=6)
    elapsed = time.perf_counter() - start
    floor = F(1, (6 + 1) ** 2)
    note(request, accept_prg=report.accept_prg, accept_uniform=report.accept_uniform,
         uniform_bound=f"{float(report.analytic_uniform_bound):.3e}",
         reference_floor=floor, seconds=round(elapsed, 1))
    assert report.prg_mode == "exhaustive"
    assert report.accept_prg == 1
    assert report.accept_uniform <= F(5, 100)
    assert report.advantage >= F(95, 100) >= floor
    assert report.analytic_uniform_bound < F(5, 100)
    assert elapsed < 120


@pytest.mark.criterion(7, "negative control: hash-chain generator, N = 64")
def test_criterion_7_negative_control(request):
    cfg = DistinguisherConfig(get_prg("hash-chain"), repetition_gale(), RHO_TILDE)
    report = advantage(cfg, 6, 10_000, seed=7)
    note(request, accept_prg=report.accept_prg, accept_uniform=report.accept_uniform,
         vacuous_prg=report.zero_denominator_prg, vacuous_uniform=report.zero_denominator_uniform)
    assert report.advantage <= F(5, 100)


@pytest.mark.criterion(8, "jump frequency >= 1/n^2 for n in 4..6; uniform bettor never jumps")
def test_criterion_8_jump_frequency(request):
    dist = SampledDistribution(get_prg("repetition"))
    freqs = {}
    for n in (4, 5, 6):
        for span in ("block", "half"):
            t = jump_threshold(RHO_TILDE, n, span)
            freq = jump_frequency(dist, repetition_gale(), n, t)
            freqs[f"{n}{span[0]}"] = freq
            assert freq >= F(1, n * n)
            assert jump_frequency(dist, uniform(), n, t) == 0
    note(request, **{f"freq_{k}": v for k, v in freqs.items()})


@pytest.mark.criterion(9, "scaled strategies are supermartingales equal to d(w) (2/rho'')^|w|")
def test_criterion_9_scaling(request):
    pairs = 0
    for ident in SOUND_STRATEGIES:
        d = get_strategy(ident)
        targets = sorted({d.rho, (d.rho + 2) / 2, F(2)})
        for target in targets:
            scaled = scale_strategy(d, target)
            assert validate(scaled, 12, SUPERGALE, 2).ok, (ident, target)
            for n in range(13):
                factor = (2 / target) ** n
                for w in all_strings(n):
                    assert scaled.capital(w) == d.capital(w) * factor
            pairs += 1
    note(request, strategy_target_pairs=pairs)


@pytest.mark.criterion(10, "g-map prefix order, zero first block, seed-prefix reconstruction")
def test_criterion_10_g_map(request):
    checks = 0
    for name in prg_names():
        prg = get_prg(name)
        for length in range(0, 9):
            for seed in all_strings(length):
                image = g_map(prg, seed)
                if seed:
                    assert image.startswith("0000")
                    assert image.startswith(g_map(prg, seed[:-1]))
                    for j in range(2, 6):
                        if (1 << j >> 2) - 1 <= length:
                            out = extend_g(prg, seed, 1 << j)
                            assert out.startswith("0000")
                            assert extend_g(prg, seed + "1", 1 << j) == out
                checks += 1
        rng = random.Random(name)
        for j in range(2, 11):
            for _ in range(20):
                seed = "".join(rng.choice("01") for _ in range(1 << j >> 2))
                desc = describe_prefix(prg, seed + "0110", j)
                assert desc.size == 1 << j >> 2
                assert run_description(desc, j) == extend_g(prg, seed + "1", 1 << j)
                checks += 1
    note(request, checks=checks)


REPRO_COMMANDS = [
    ["distinguish", "--prg", "repetition", "--gale", "repetition", "--n", "5",
     "--trials", "2000", "--rng", "11"],
    ["distinguish", "--prg", "lfsr", "--gale", "repetition", "--n", "5", "--trials", "500",
     "--rng", "3", "--rho-dblprime", "4/3", "--q", "1/2"],
    ["sample", "--prg", "hash-chain", "--n", "12", "--count", "50", "--rng", "99"],
    ["encode", "--gale", "all-zero-3-2", "--input", "000000000000"],
    ["jump-freq", "--prg", "lfsr", "--gale", "repetition", "--n", "5", "--span", "half"],
    ["combine-demo", "--roster", "mixed", "--input", "0" * 40, "--depth", "6"],
    ["oracle", "--suite", "success", "--n", "6"],
    ["mass", "--prg", "lfsr", "--n", "12"],
]


@pytest.mark.criterion(11, "identical config and rng seed give byte-identical reports")
def test_criterion_11_reproducibility(request, tmp_path):
    for i, argv in enumerate(REPRO_COMMANDS):
        blobs = []
        for run in ("a", "b"):
            out = tmp_path / f"{i}-{run}.txt"
            assert main([*argv, "--out", str(out)]) == 0, argv
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1], argv
    note(request, commands=len(REPRO_COMMANDS))
