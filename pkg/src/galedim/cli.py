"""Command-line front end: ``galedim <command> [options]``.

Every command writes a plain-text report whose header echoes the tool
version and every parameter, so two runs with the same arguments produce
byte-identical files.  Rational flags accept integers or ``p/q`` only.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .codec import Codeword, NotCompressible, decode, encode
from .distinguish import DistinguisherConfig, advantage, jump_frequency
from .exact import format_rational, parse_rational
from .fixtures import BUILTIN_ROSTERS, FixtureError, builtin_roster, get_strategy, parse_roster, parse_strategies
from .gales import capitals_along, check_bits, jump_threshold, validate
from .oracles import SUITES
from .prg import SampledDistribution, extend_g, get_prg, prg_names
from .universal import DominationUndefined, domination_constant


class CommandError(Exception):
    """A failed check; the report is still written but the exit code is 1."""


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _bits(text: str) -> str:
    if any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"not a binary string: {text!r}")
    return text


class Report:
    def __init__(self, command: str, args: argparse.Namespace):
        self.lines = [f"# galedim {__version__}", f"# command {command}"]
        for key in sorted(vars(args)):
            if key in ("func", "command", "out", "csv"):
                continue
            value = getattr(args, key)
            if isinstance(value, Fraction):
                value = format_rational(value)
            self.lines.append(f"# param {key} {value}")

    def add(self, key: str, value) -> None:
        if isinstance(value, Fraction):
            value = format_rational(value)
        self.lines.append(f"{key} {value}")

    def raw(self, line: str) -> None:
        self.lines.append(line)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _extra(args) -> Optional[dict]:
    if getattr(args, "strategy_file", None):
        return parse_strategies(Path(args.strategy_file).read_text())
    return None


def _strategy(args, ident: str):
    return get_strategy(ident, _extra(args))


def _combined(args):
    if args.roster_file:
        if args.rho is None:
            raise FixtureError("--roster-file needs --rho")
        return parse_roster(Path(args.roster_file).read_text(), args.rho, _extra(args))
    return builtin_roster(args.roster)


def _read_seed(args) -> str:
    if args.seed_file:
        seed = Path(args.seed_file).read_text().strip()
        check_bits(seed)
        return seed
    return args.seed


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, rep: Report) -> None:
    target = _combined(args) if (args.roster or args.roster_file) else _strategy(args, args.strategy)
    is_roster = bool(args.roster or args.roster_file)
    result = validate(target, args.depth, args.kind, None if is_roster else args.rho)
    rep.add("target", getattr(target, "name", "?"))
    rep.add("kind", result.kind)
    rep.add("rho", result.rho)
    rep.add("checked_prefixes", result.checked)
    rep.add("result", "pass" if result.ok else "fail")
    if not result.ok:
        rep.add("violation_prefix", repr(result.violation))
        rep.add("detail", result.detail)
        raise CommandError("validation failed")


def cmd_eval(args, rep: Report) -> None:
    d = _strategy(args, args.strategy)
    for length, cap in enumerate(capitals_along(d, args.input)):
        rep.add(f"capital.{length}", cap)


def cmd_encode(args, rep: Report) -> None:
    d = _strategy(args, args.gale)
    try:
        cw = encode(d, args.input)
    except NotCompressible as exc:
        rep.add("error", str(exc))
        raise CommandError(str(exc)) from None
    blob = cw.to_bytes()
    if args.codeword:
        Path(args.codeword).write_bytes(blob)
    rep.add("n", cw.n)
    rep.add("j", cw.interval.j)
    rep.add("k", cw.interval.k)
    rep.add("payload_bits", cw.interval.bits())
    rep.add("header_bits", cw.header_bits)
    rep.add("codeword_hex", blob.hex())


def cmd_decode(args, rep: Report) -> None:
    d = _strategy(args, args.gale)
    blob = Path(args.codeword).read_bytes() if args.codeword else bytes.fromhex(args.hex)
    x = decode(d, Codeword.from_bytes(blob))
    rep.add("decoded", x)


def cmd_extend(args, rep: Report) -> None:
    prg = get_prg(args.prg, args.m)
    rep.add("output", extend_g(prg, _read_seed(args), args.out_len))


def cmd_sample(args, rep: Report) -> None:
    dist = SampledDistribution(get_prg(args.prg, args.m))
    rng = random.Random(args.rng)
    rep.add("seed_bits_per_sample", dist.seed_bits(args.n))
    for _ in range(args.count):
        rep.raw(dist.sample(args.n, rng))


def cmd_mass(args, rep: Report) -> None:
    dist = SampledDistribution(get_prg(args.prg, args.m))
    for w, p in dist.table(args.n):
        rep.add(w, p)


def _config(args) -> DistinguisherConfig:
    return DistinguisherConfig(get_prg(args.prg, args.m), _strategy(args, args.gale),
                               args.rho_tilde, args.c, args.k,
                               rho_dblprime=args.rho_dblprime, q=args.q)


def cmd_distinguish(args, rep: Report) -> None:
    report = advantage(_config(args), args.n, args.trials, args.rng)
    for key, value in report.records():
        if key not in report.params:
            rep.add(key, value)
    if args.csv:
        header = "n,N,accept_prg,accept_uniform,advantage,analytic_uniform_bound,analytic_prg_floor\n"
        Path(args.csv).write_text(header + ",".join(report.csv_row()) + "\n")


def cmd_jump_freq(args, rep: Report) -> None:
    dist = SampledDistribution(get_prg(args.prg, args.m))
    d = _strategy(args, args.gale)
    if args.threshold is not None:
        threshold = args.threshold
    else:
        threshold = jump_threshold(args.rho_tilde, args.n, args.span)
    rep.add("threshold", threshold)
    freq = jump_frequency(dist, d, args.n, threshold)
    rep.add("frequency", freq)
    rep.add("reference_floor", Fraction(1, args.n**2))


def cmd_combine_demo(args, rep: Report) -> None:
    combined = _combined(args)
    x = args.input
    rep.add("roster", combined.name)
    rep.add("rho", combined.rho)
    rep.add("capital", combined.capital(x))
    for program in combined.roster:
        i = program.index
        frozen = combined.freeze_index(i, x)
        rep.add(f"member.{i}.frozen_at", "none" if frozen is None else frozen)
        try:
            c = domination_constant(combined, i, x)
        except DominationUndefined as exc:
            rep.add(f"member.{i}.domination", f"undefined ({exc})")
            continue
        member = program.strategy.capital(x)
        rep.add(f"member.{i}.domination_constant", c)
        ok = combined.capital(x) >= c * member
        rep.add(f"member.{i}.dominated", "yes" if ok else "NO")
        if not ok:
            raise CommandError(f"domination fails for member {i}")
    if args.depth:
        result = validate(combined, args.depth)
        rep.add("validate", "pass" if result.ok else f"fail at {result.violation!r}")
        if not result.ok:
            raise CommandError("combined gale fails validation")


def cmd_oracle(args, rep: Report) -> None:
    reports = SUITES[args.suite](args.n)
    failed = 0
    for r in reports:
        rep.raw(r.line())
        failed += not r.passed
    rep.add("checks", len(reports))
    rep.add("failures", failed)
    if failed:
        raise CommandError(f"{failed} oracle checks failed")


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galedim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"galedim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--strategy-file", help="extra strategy records to resolve ids against")
        return p

    def prg_opts(p):
        p.add_argument("--prg", choices=prg_names(), required=True)
        p.add_argument("--m", type=int, default=2, help="shrink exponent, s = 2^-m")

    def roster_opts(p, required=False):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--roster", choices=sorted(BUILTIN_ROSTERS))
        g.add_argument("--roster-file")

    p = command("validate", cmd_validate, "check the (super)gale law exhaustively")
    p.add_argument("--strategy", default="uniform")
    roster_opts(p)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--kind", choices=["gale", "supergale"])
    p.add_argument("--rho", type=_rational)

    p = command("eval", cmd_eval, "capital along a string")
    p.add_argument("--strategy", required=True)
    p.add_argument("--input", type=_bits, required=True)

    p = command("encode", cmd_encode, "compress a string with an exact gale")
    p.add_argument("--gale", required=True)
    p.add_argument("--input", type=_bits, required=True)
    p.add_argument("--codeword", help="also write the binary codeword here")

    p = command("decode", cmd_decode, "invert a codeword")
    p.add_argument("--gale", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--codeword")
    g.add_argument("--hex")

    p = command("extend", cmd_extend, "apply the block extension map to a seed")
    prg_opts(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--seed", type=_bits)
    g.add_argument("--seed-file")
    p.add_argument("--out-len", type=int, required=True)

    p = command("sample", cmd_sample, "draw samples of length n from the short-seed sampler")
    prg_opts(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--rng", type=int, default=0)

    p = command("mass", cmd_mass, "exact prefix masses at length n")
    prg_opts(p)
    p.add_argument("--n", type=int, required=True)

    p = command("distinguish", cmd_distinguish, "acceptance rates on generator vs uniform blocks")
    prg_opts(p)
    p.add_argument("--gale", required=True)
    p.add_argument("--n", type=int, required=True, help="block length is 2^n")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--rng", type=int, default=0)
    p.add_argument("--rho-tilde", type=_rational, default=Fraction(5, 3))
    p.add_argument("--c", type=_rational, default=Fraction(1))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--rho-dblprime", type=_rational)
    p.add_argument("--q", type=_rational)
    p.add_argument("--csv", help="also write a one-row CSV summary here")

    p = command("jump-freq", cmd_jump_freq, "fraction of seeds with a capital jump at scale n")
    prg_opts(p)
    p.add_argument("--gale", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho-tilde", type=_rational, default=Fraction(5, 3))
    p.add_argument("--span", choices=["block", "half"], default="block")
    p.add_argument("--threshold", type=_rational, help="explicit ratio, overrides --rho-tilde")

    p = command("combine-demo", cmd_combine_demo, "universal gale over a roster")
    roster_opts(p, required=True)
    p.add_argument("--rho", type=_rational)
    p.add_argument("--input", type=_bits, default="00000000")
    p.add_argument("--depth", type=int, default=0, help="also validate to this depth")

    p = command("oracle", cmd_oracle, "run a brute-force oracle suite")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--n", type=int, default=10)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.command, args)
    status = 0
    try:
        args.func(args, rep)
    except CommandError as exc:
        rep.add("status", f"fail: {exc}")
        status = 1
    except (ValueError, KeyError, FixtureError, OSError) as exc:
        print(f"galedim {args.command}: error: {exc}", file=sys.stderr)
        return 2
    else:
        rep.add("status", "ok")
    text = rep.text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
