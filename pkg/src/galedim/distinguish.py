"""Capital-jump distinguisher for toy generators, its ell-scan variant, and
jump-event frequencies.

The test on a candidate block ``w`` of length ``N = 2^n``:

    draw r (s*N bits), w' = g(r) of length N,
    accept iff M(w'w) >= c * (2/rho~)^N * M(w').

``M`` is an approximator of the martingale (exact evaluation by default).
When ``M(w') = 0`` the test accepts vacuously; such acceptances are counted
separately in the report rather than silently mixed in.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .exact import RationalLike, format_rational, pow_rational, to_rational
from .gales import BettingStrategy, all_strings, capitals_along, jump_event
from .prg import MAX_SEED_BITS, PrgFamily, SampledDistribution, bits_read, extend_g

Approximator = Callable[[str], Fraction]


def q_in_range(q: RationalLike, rho_tilde: RationalLike, rho_dblprime: RationalLike) -> bool:
    """``(s~ - s'')/(2 s'') <= q <= (s~ - s'')/s''`` decided exactly.

    With ``q = p/r`` the two ends become ``rho''^(r+2p) >= rho~^r`` and
    ``rho''^(r+p) <= rho~^r``.
    """
    q = to_rational(q)
    rt, rd = to_rational(rho_tilde), to_rational(rho_dblprime)
    if q <= 0 or not (1 < rd < rt):
        return False
    p, r = q.numerator, q.denominator
    return rd ** (r + p) <= rt**r <= rd ** (r + 2 * p)


@dataclass(frozen=True)
class DistinguisherConfig:
    prg: PrgFamily
    martingale: BettingStrategy
    rho_tilde: Fraction
    c: Fraction = Fraction(1)
    k: int = 2
    approximator: Optional[Approximator] = None
    rho_dblprime: Optional[Fraction] = None
    q: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "rho_tilde", to_rational(self.rho_tilde))
        object.__setattr__(self, "c", to_rational(self.c))
        if not (0 < self.c <= 1):
            raise ValueError("band constant c must lie in (0, 1]")
        if not (0 < self.rho_tilde):
            raise ValueError("rho~ must be positive")
        if self.general:
            object.__setattr__(self, "rho_dblprime", to_rational(self.rho_dblprime))
            object.__setattr__(self, "q", to_rational(self.q))
            if not q_in_range(self.q, self.rho_tilde, self.rho_dblprime):
                raise ValueError(f"q = {self.q} is outside the admissible range for "
                                 f"rho~ = {self.rho_tilde}, rho'' = {self.rho_dblprime}")
        elif (self.rho_dblprime is None) != (self.q is None):
            raise ValueError("the ell-scan variant needs both rho'' and q")

    @property
    def general(self) -> bool:
        return self.rho_dblprime is not None and self.q is not None

    @property
    def exact(self) -> bool:
        return self.approximator is None

    def approx(self, w: str) -> Fraction:
        if self.approximator is None:
            return self.martingale.capital(w)
        return to_rational(self.approximator(w))

    def params(self) -> dict[str, str]:
        out = {
            "prg": self.prg.name,
            "m": str(self.prg.m),
            "martingale": self.martingale.name,
            "rho_tilde": format_rational(self.rho_tilde),
            "c": format_rational(self.c),
            "k": str(self.k),
            "approximator": "exact" if self.exact else getattr(self.approximator, "__name__", "custom"),
        }
        if self.general:
            out["rho_dblprime"] = format_rational(self.rho_dblprime)
            out["q"] = format_rational(self.q)
        return out


@dataclass(frozen=True)
class Decision:
    accept: bool
    zero_denominator: bool = False


def _block_exponent(w: str, m: int) -> int:
    N = len(w)
    if N < 1 or N & (N - 1):
        raise ValueError(f"candidate block length {N} is not a power of two")
    n = N.bit_length() - 1
    if n <= m:
        raise ValueError(f"candidate block length 2^{n} must exceed 2^m = 2^{m}")
    return n


def _draw_seed(rng: random.Random, bits: int) -> str:
    return format(rng.getrandbits(bits), "b").zfill(bits) if bits else ""


class _Run:
    """One configured test with a per-run cache of ``M(w')``."""

    def __init__(self, config: DistinguisherConfig):
        self.config = config
        self.prefix_cache: dict[str, Fraction] = {}

    def prefix_capital(self, w_prime: str) -> Fraction:
        cap = self.prefix_cache.get(w_prime)
        if cap is None:
            cap = self.config.approx(w_prime)
            self.prefix_cache[w_prime] = cap
        return cap

    def decide(self, w: str, r: str, general: bool) -> Decision:
        cfg = self.config
        N = len(w)
        _block_exponent(w, cfg.prg.m)
        w_prime = extend_g(cfg.prg, r, N)
        base = self.prefix_capital(w_prime)
        threshold = cfg.c * pow_rational(2 / cfg.rho_tilde, N)
        if cfg.exact:
            whole = cfg.martingale.extend(base, w_prime, w)
        else:
            whole = cfg.approx(w_prime + w)
        if whole >= threshold * base:
            return Decision(True, base == 0)
        if not general:
            return Decision(False)
        # ell-scan: M(w' + w[:ell]) >= (2/rho~)^(N + ell) for ceil(qN) <= ell <= N
        lo = math.ceil(cfg.q * N)
        unfair = 2 / cfg.rho_tilde
        if cfg.exact:
            caps = capitals_along(cfg.martingale, w_prime + w)
            hit = any(caps[N + ell] >= unfair ** (N + ell) for ell in range(lo, N + 1))
        else:
            hit = any(cfg.approx(w_prime + w[:ell]) >= unfair ** (N + ell)
                      for ell in range(lo, N + 1))
        return Decision(hit)


def run_A(config: DistinguisherConfig, w: str, rng: random.Random) -> int:
    n = _block_exponent(w, config.prg.m)
    r = _draw_seed(rng, (1 << n) >> config.prg.m)
    return int(_Run(config).decide(w, r, general=False).accept)


def run_A_general(config: DistinguisherConfig, w: str, rng: random.Random) -> int:
    if not config.general:
        raise ValueError("run_A_general needs rho'' and q in the config")
    n = _block_exponent(w, config.prg.m)
    r = _draw_seed(rng, (1 << n) >> config.prg.m)
    return int(_Run(config).decide(w, r, general=True).accept)


# --------------------------------------------------------------------------
# advantage estimation


REPORT_FIELDS = ("n", "N", "accept_prg", "accept_uniform", "advantage",
                 "analytic_uniform_bound", "analytic_prg_floor")


@dataclass
class DistinguisherReport:
    n: int
    N: int
    accept_prg: Fraction
    accept_uniform: Fraction
    analytic_uniform_bound: Fraction
    analytic_prg_floor: Fraction
    prg_mode: str
    prg_trials: int
    uniform_trials: int
    zero_denominator_prg: int
    zero_denominator_uniform: int
    general: bool = False
    analytic_general_bound: Optional[Fraction] = None
    params: dict[str, str] = field(default_factory=dict)

    @property
    def advantage(self) -> Fraction:
        return abs(self.accept_prg - self.accept_uniform)

    def records(self) -> list[tuple[str, str]]:
        rows = [(k, v) for k, v in self.params.items()]
        rows += [
            ("n", str(self.n)),
            ("N", str(self.N)),
            ("variant", "ell-scan" if self.general else "plain"),
            ("prg_mode", self.prg_mode),
            ("prg_trials", str(self.prg_trials)),
            ("uniform_trials", str(self.uniform_trials)),
            ("accept_prg", format_rational(self.accept_prg)),
            ("accept_uniform", format_rational(self.accept_uniform)),
            ("advantage", format_rational(self.advantage)),
            ("zero_denominator_prg", str(self.zero_denominator_prg)),
            ("zero_denominator_uniform", str(self.zero_denominator_uniform)),
            ("analytic_uniform_bound", format_rational(self.analytic_uniform_bound)),
            ("analytic_prg_floor", format_rational(self.analytic_prg_floor)),
        ]
        if self.analytic_general_bound is not None:
            rows.append(("analytic_general_bound", format_rational(self.analytic_general_bound)))
        return rows

    def to_text(self) -> str:
        return "".join(f"{k} {v}\n" for k, v in self.records())

    def csv_row(self) -> list[str]:
        return [str(self.n), str(self.N), format_rational(self.accept_prg),
                format_rational(self.accept_uniform), format_rational(self.advantage),
                format_rational(self.analytic_uniform_bound),
                format_rational(self.analytic_prg_floor)]


def uniform_bound(config: DistinguisherConfig, N: int) -> Fraction:
    """``c^-2 (rho~/2)^N + N^-k + 2^-(N(1-s))``."""
    s_bits = N >> config.prg.m
    return (pow_rational(config.rho_tilde / 2, N) / config.c**2
            + Fraction(1, N**config.k) + Fraction(1, 1 << (N - s_bits)))


def prg_floor(config: DistinguisherConfig, n: int) -> Fraction:
    """Reference line ``1/(n+1)^2 - N^-k`` (not guaranteed at any fixed n)."""
    return Fraction(1, (n + 1) ** 2) - Fraction(1, (1 << n) ** config.k)


def general_bound(config: DistinguisherConfig, N: int) -> Fraction:
    """``(rho~/2)^N + (rho~/2)^floor((1+q)N)`` for the ell-scan variant."""
    half = config.rho_tilde / 2
    return pow_rational(half, N) + pow_rational(half, math.floor((1 + config.q) * N))


def _trial_rng(seed: int, label: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{label}:{i}")


def advantage(config: DistinguisherConfig, n: int, trials: int, seed: int = 0,
              general: Optional[bool] = None) -> DistinguisherReport:
    """Acceptance on generator outputs versus uniform blocks of length ``2^n``.

    The generator side enumerates every seed when there are at most
    ``2^20`` of them; otherwise it draws ``trials`` seeds.  The uniform side
    always draws ``trials`` blocks.  Trial ``i`` of side ``label`` uses its own
    stream ``Random(f"{seed}:{label}:{i}")``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    general = config.general if general is None else general
    if general and not config.general:
        raise ValueError("the ell-scan variant needs rho'' and q in the config")
    N = 1 << n
    m = config.prg.m
    if n <= m:
        raise ValueError(f"n must exceed m = {m}")
    seed_len = N >> m
    run = _Run(config)

    def one(w: str, rng: random.Random) -> Decision:
        return run.decide(w, _draw_seed(rng, seed_len), general)

    prg_acc = prg_zero = 0
    if seed_len <= MAX_SEED_BITS:
        mode = "exhaustive"
        prg_total = 1 << seed_len
        for i, x in enumerate(all_strings(seed_len)):
            d = one(config.prg(N, x), _trial_rng(seed, "prg", i))
            prg_acc += d.accept
            prg_zero += d.accept and d.zero_denominator
    else:
        mode = "monte-carlo"
        prg_total = trials
        for i in range(trials):
            rng = _trial_rng(seed, "prg", i)
            d = one(config.prg(N, _draw_seed(rng, seed_len)), rng)
            prg_acc += d.accept
            prg_zero += d.accept and d.zero_denominator

    uni_acc = uni_zero = 0
    for i in range(trials):
        rng = _trial_rng(seed, "uniform", i)
        d = one(_draw_seed(rng, N), rng)
        uni_acc += d.accept
        uni_zero += d.accept and d.zero_denominator

    return DistinguisherReport(
        n=n, N=N,
        accept_prg=Fraction(prg_acc, prg_total),
        accept_uniform=Fraction(uni_acc, trials),
        analytic_uniform_bound=uniform_bound(config, N),
        analytic_prg_floor=prg_floor(config, n),
        prg_mode=mode, prg_trials=prg_total, uniform_trials=trials,
        zero_denominator_prg=prg_zero, zero_denominator_uniform=uni_zero,
        general=general,
        analytic_general_bound=general_bound(config, N) if general else None,
        params={**config.params(), "rng_seed": str(seed)},
    )


def exhaustive_acceptance(config: DistinguisherConfig, n: int) -> dict[str, int]:
    """Exact acceptance counts over every ``(w, r)`` pair at a small block size.

    Returns the total pair count, accepted pairs, the vacuous ones among them,
    and the largest per-``r`` count of non-vacuous acceptances.
    """
    N = 1 << n
    seed_len = N >> config.prg.m
    if N + seed_len > MAX_SEED_BITS:
        raise ValueError(f"2^{N + seed_len} pairs exceed the exhaustive limit")
    run = _Run(config)
    accepted = vacuous = worst = 0
    for r in all_strings(seed_len):
        per_r = 0
        for w in all_strings(N):
            d = run.decide(w, r, config.general)
            if d.accept:
                accepted += 1
                if d.zero_denominator:
                    vacuous += 1
                else:
                    per_r += 1
        worst = max(worst, per_r)
    return {"pairs": (1 << N) << seed_len, "accepted": accepted,
            "vacuous": vacuous, "max_per_seed": worst}


# --------------------------------------------------------------------------
# jump-event frequency over seeds


def jump_frequency(dist: SampledDistribution, d, n: int, threshold: RationalLike) -> Fraction:
    """Fraction of seeds ``x`` of length ``s 2^n`` whose extension ``g(x)``
    has ``d(g(x)|2^n) > threshold * d(g(x)|2^(n-1))``.

    Only the ``s 2^n - 1`` seed bits that the extension reads are enumerated;
    the unread last bit does not change the event, so the fraction is exact.
    """
    prg = dist.prg
    if n <= prg.m:
        raise ValueError(f"n must exceed m = {prg.m}")
    N = 1 << n
    used = bits_read(prg, N)
    if used > MAX_SEED_BITS:
        raise ValueError(f"2^{used} seeds exceed the exhaustive limit 2^{MAX_SEED_BITS}")
    threshold = to_rational(threshold)
    hits = sum(jump_event(d, extend_g(prg, x, N), n, threshold) for x in all_strings(used))
    return Fraction(hits, 1 << used)
