"""Command-line front end.

Subcommands: ``keygen``, ``recover``, ``verify``, ``rsa-assemble`` and
``bench``. Exit codes: 0 success, 1 not recovered / invariant failed /
generation exhausted, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .bench import run_bench, write_csv
from .errors import DomainError, EscrowKeyError, Exhausted, NotRecovered, TrivialFactor
from .instancefile import InstanceFile, InstanceFormatError, decode_int, encode_int
from .numtheory import bitsize, is_probable_prime
from .rsa import DEFAULT_E, rsa_assemble
from .ssb import (
    RecoveryTrace,
    SsbParams,
    check_ssb,
    generate_escrow_key,
    ssb_generate,
    ssb_recover,
)
from .tsb import TsbParams, tsb_conditions, tsb_generate, tsb_recover

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_arg(text: str) -> int:
    try:
        return decode_int(text)
    except InstanceFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _k_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad K list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("K list must not be empty")
    return values


def _rng(seed: int | None) -> random.Random:
    return random.SystemRandom() if seed is None else random.Random(seed)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _make_params(kind: str, alpha: int, c: int, k_max: int, b: int | None):
    if kind == "ssb":
        if b is not None:
            raise UsageError("--b only applies to tsb")
        return SsbParams(alpha, c, k_max)
    return TsbParams(alpha, c, k_max, b)


def cmd_keygen(args) -> int:
    params = _make_params(args.kind, args.alpha, args.c, args.kmax, args.b)
    rng = _rng(args.seed)
    key = generate_escrow_key(params, rng)
    if args.kind == "ssb":
        doc = InstanceFile.from_ssb(key, ssb_generate(key, rng))
    else:
        doc = InstanceFile.from_tsb(key, tsb_generate(key, rng))
    _emit(doc.dumps(args.format), args.out)
    if args.public_out:
        doc.public_only().write(args.public_out, args.format)
    return EXIT_OK


def cmd_recover(args) -> int:
    doc = InstanceFile.read(args.infile)
    if args.T is not None:
        T = args.T
    elif doc.secret is not None:
        T = doc.secret["T"]
    else:
        raise UsageError("the escrow key is required: pass --T")
    k_max = args.kmax if args.kmax is not None else doc.params.k_max
    trace = RecoveryTrace()
    result: dict = {"kind": doc.kind}
    try:
        if doc.kind == "ssb":
            p, q = ssb_recover(doc.public["N"], T, k_max, trace)
            result["factors"] = {"p": p, "q": q}
            result["witnesses"] = {"k": trace.solution["k"]}
        else:
            B = args.b if args.b is not None else doc.params.b_threshold
            (p1, q1), (p2, q2) = tsb_recover(
                doc.public["N1"], doc.public["N2"], T, B, k_max, trace, prune=args.prune
            )
            result["factors"] = {"p1": p1, "q1": q1, "p2": p2, "q2": q2}
            sol = trace.solution
            result["witnesses"] = {name: sol[name] for name in ("h", "k1", "k2", "kt1", "kt2")}
    except TrivialFactor as exc:
        print(f"escrow key shares a factor with the input: gcd = {exc.factor}", file=sys.stderr)
        return EXIT_FAIL
    except NotRecovered as exc:
        print(f"not recovered: {exc}", file=sys.stderr)
        return EXIT_FAIL
    result["factors"] = {k: encode_int(v, args.format) for k, v in result["factors"].items()}
    result["trace"] = _jsonable(trace.summary())
    _emit(json.dumps(result, indent=2) + "\n", args.out)
    return EXIT_OK


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, int) and not isinstance(obj, bool) and obj.bit_length() > 53:
        return str(obj)
    return obj


def _within_one(actual: int, expected: int) -> bool:
    return abs(actual - expected) <= 1


def verification_report(doc: InstanceFile) -> dict[str, bool]:
    """Named pass/fail checks for an instance file with a secret section."""
    key = doc.escrow_key()
    inst = doc.instance()
    params = doc.params
    checks = {
        "T prime": is_probable_prime(key.T),
        "bitsize(T) ~ alpha - c": _within_one(bitsize(key.T), params.alpha - params.c),
    }
    if doc.kind == "ssb":
        checks.update(
            {
                "N = p*q": inst.N == inst.p * inst.q,
                "p prime": is_probable_prime(inst.p),
                "q prime": is_probable_prime(inst.q),
                "H0 (recorded k)": 1 < inst.k <= params.k_max
                and (inst.p - inst.k * inst.q) % key.T == 0,
                "H0 (scan)": check_ssb(inst, key),
                "bitsize(p) ~ alpha": _within_one(bitsize(inst.p), params.alpha),
                "bitsize(q) ~ alpha": _within_one(bitsize(inst.q), params.alpha),
            }
        )
    else:
        checks.update(tsb_conditions(inst, key))
        for name in ("p1", "q1", "p2", "q2"):
            checks[f"bitsize({name}) ~ alpha"] = _within_one(bitsize(getattr(inst, name)), params.alpha)
    return checks


def cmd_verify(args) -> int:
    doc = InstanceFile.read(args.infile)
    if doc.secret is None:
        raise UsageError("verify needs an instance file with a secret section")
    report = verification_report(doc)
    for name, ok in report.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(report.values()) else EXIT_FAIL


def cmd_rsa_assemble(args) -> int:
    N, e, d = rsa_assemble(args.p, args.q, args.e)
    print(f"N={encode_int(N, args.format)}")
    print(f"e={e}")
    print(f"d={encode_int(d, args.format)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.kind == "ssb" and args.b is not None:
        raise UsageError("--b only applies to tsb")
    records = run_bench(
        args.kind,
        args.alpha,
        args.c,
        args.kvalues,
        args.trials,
        args.seed,
        b_threshold=args.b,
        jobs=args.jobs,
    )
    if args.out is None or args.out == "-":
        write_csv(records, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh)
    failed = [r.k_value for r in records if not r.ok]
    if failed:
        print(f"recovery failed for K in {failed}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="escrowkey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def design_flags(p):
        p.add_argument("kind", choices=("ssb", "tsb"))
        p.add_argument("--alpha", type=int, required=True, help="factor size in bits")
        p.add_argument("--c", type=int, required=True, help="escrow key is alpha - c bits")
        p.add_argument("--kmax", type=int, required=True, help="bound K on the hidden coefficients")
        p.add_argument("--b", type=_int_arg, help="TSB detection threshold (default 2**(alpha-2c))")
        p.add_argument("--seed", type=int, help="seed for reproducible runs")

    def fmt_flag(p):
        p.add_argument("--format", choices=("dec", "hex"), default="dec")

    p = sub.add_parser("keygen", help="generate an escrow key and a vulnerable instance")
    design_flags(p)
    p.add_argument("--out", help="instance file with secret section (default stdout)")
    p.add_argument("--public-out", help="also write the public-only instance file here")
    fmt_flag(p)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("recover", help="factor the semi-prime(s) of an instance file using T")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--T", type=_int_arg, help="escrow key (defaults to the file's secret T)")
    p.add_argument("--kmax", type=int)
    p.add_argument("--b", type=_int_arg)
    p.add_argument("--prune", action="store_true", help="TSB: drop splits with h or k1 above K")
    p.add_argument("--out")
    fmt_flag(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify", help="check every backdoor invariant of an instance file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rsa-assemble", help="build (N, e, d) from two primes")
    p.add_argument("p", type=_int_arg)
    p.add_argument("q", type=_int_arg)
    p.add_argument("--e", type=int, default=DEFAULT_E)
    fmt_flag(p)
    p.set_defaults(func=cmd_rsa_assemble)

    p = sub.add_parser("bench", help="time generate+recover cycles over a sweep of K")
    p.add_argument("kind", choices=("ssb", "tsb"))
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--kvalues", type=_k_list, required=True, help="comma-separated K values")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--b", type=_int_arg)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1, help="run independent trials in parallel")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InstanceFormatError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exhausted as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except EscrowKeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
