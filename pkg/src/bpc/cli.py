"""Command-line frontend for the balanced permutation codecs.

Exit codes: 0 success or valid; 1 constraint violation, selector violation,
or not-a-codeword; 2 usage/parameter error; 3 broken encoder invariant
(a reproducible defect witness is printed to stderr).  Diagnostics go to
stderr, payloads to stdout; JSON payloads have a fixed key order and end
with a newline.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analysis
from .d1_codec import (
    D1Input,
    d1_message_decode,
    d1_message_input,
    decode_d1,
    encode_d1,
    encode_d1_streaming,
    interleave,
)
from .d2_codec import (
    D2Params,
    d2_input_from_json_dict,
    d2_input_to_json_dict,
    decode_d2,
    encode_d2,
)
from .errors import (
    BpcError,
    NotCodeword,
    ParamInvalid,
    SelectorViolation,
    SourceExhausted,
)
from .perm_core import (
    BalanceSpec,
    NeighborSpec,
    Permutation,
    check_two_neighbor,
    d1_preset,
    d2_preset,
    disc,
    format_permutation,
    parse_permutation,
    verify_balance,
)
from .tn_codec import (
    TnParams,
    decode_tn,
    encode_tn,
    tn_input_from_json_dict,
    tn_input_to_json_dict,
)

USAGE_ERROR = 2
VIOLATION = 1
DEFECT = 3


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _read_source(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    return value


def _read_file_or_stdin(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _perm_arg(value: str) -> Permutation:
    return parse_permutation(_read_source(value))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParamInvalid(f"bad rational {text!r}") from exc


def _fraction_arg(text: str) -> Fraction:
    # argparse only maps ValueError/ArgumentTypeError to a usage error
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ParamInvalid(f"bad integer list {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bpc",
        description="Balanced permutation codes: encode, decode, verify, analyze.")
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="encode inputs into a balanced permutation")
    enc_sub = enc.add_subparsers(dest="codec", required=True)

    e1 = enc_sub.add_parser("d1", help="two-source codec")
    e1.add_argument("--n", type=int, required=True)
    e1.add_argument("--gamma1")
    e1.add_argument("--gamma2")
    e1.add_argument("--i1", help="decimal rank of the low ordering")
    e1.add_argument("--i2", help="decimal rank of the high ordering")
    e1.add_argument("--streaming", action="store_true",
                    help="use the transposition encoder (same output)")
    e1.add_argument("--format", choices=("text", "json"), default="text")

    e2 = enc_sub.add_parser("d2", help="block codec")
    e2.add_argument("--input", required=True,
                    help="JSON file with n, N, sigmas ('-' for stdin)")
    e2.add_argument("--tie-upper", action="store_true",
                    help="route exact balance ties to the upper pair")

    et = enc_sub.add_parser("tn", help="neighbor-constrained codec")
    et.add_argument("--input", required=True,
                    help="JSON file with n, k, sigmas, selector ('-' for stdin)")

    dec = sub.add_parser("decode", help="decode a permutation back to its inputs")
    dec_sub = dec.add_subparsers(dest="codec", required=True)

    d1p = dec_sub.add_parser("d1")
    d1p.add_argument("--perm", required=True, help="permutation text ('-' for stdin)")
    d1p.add_argument("--message", action="store_true",
                     help="emit the two decimal ranks instead of orderings")
    d1p.add_argument("--format", choices=("text", "json"), default="text")

    d2p = dec_sub.add_parser("d2")
    d2p.add_argument("--perm", required=True)
    d2p.add_argument("--n", type=int, required=True)
    d2p.add_argument("--N", type=int, required=True, dest="num_blocks")

    dtp = dec_sub.add_parser("tn")
    dtp.add_argument("--perm", required=True)
    dtp.add_argument("--n", type=int, required=True)
    dtp.add_argument("--k", type=int, required=True)

    ver = sub.add_parser("verify", help="check a permutation against a preset")
    ver.add_argument("--preset", choices=("d1", "d2", "tn-neighbor"), required=True)
    ver.add_argument("--N", type=int, dest="num_blocks")
    ver.add_argument("--k", type=int)
    ver.add_argument("--perm", required=True)

    dsc = sub.add_parser("disc", help="discrepancy of a permutation at one length")
    dsc.add_argument("--perm", required=True)
    dsc.add_argument("--b", type=int, required=True)

    ana = sub.add_parser("analyze", help="brute-force censuses and rate reports")
    ana_sub = ana.add_subparsers(dest="what", required=True)

    cen = ana_sub.add_parser("census", help="count permutations passing checks")
    cen.add_argument("--n", type=int, required=True)
    cen.add_argument("--preset", choices=("d1", "d2"))
    cen.add_argument("--N", type=int, dest="num_blocks")
    cen.add_argument("--blocks", help="comma-separated window lengths")
    cen.add_argument("--dev-max", dest="dev_max",
                     help="allowed deviations (one per block, or one for all)")
    cen.add_argument("--neighbor-k", dest="neighbor_k", type=int)
    cen.add_argument("--cap", type=int, default=0,
                     help="how many achievers to list")
    cen.add_argument("--limit", type=int, default=analysis.DEFAULT_ENUM_LIMIT)
    cen.add_argument("--threads", type=int)

    mnd = ana_sub.add_parser("min-disc", help="minimum discrepancy over S_n")
    mnd.add_argument("--n", type=int, required=True)
    mnd.add_argument("--b", type=int, required=True)
    mnd.add_argument("--limit", type=int, default=analysis.DEFAULT_ENUM_LIMIT)
    mnd.add_argument("--threads", type=int)

    rat = ana_sub.add_parser("rate", help="code-size and rate report")
    rat.add_argument("--config", choices=("d1", "d2", "tn"), required=True)
    rat.add_argument("--n", required=True,
                     help="length, or comma-separated list for a table")
    rat.add_argument("--N", type=int, dest="num_blocks")
    rat.add_argument("--epsilon", type=_fraction_arg)
    rat.add_argument("--k", type=int)
    rat.add_argument("--epsilon-k", dest="epsilon_k", type=_fraction_arg)
    rat.add_argument("--limit", type=int, default=analysis.DEFAULT_ENUM_LIMIT)
    rat.add_argument("--format", choices=("json", "csv"), default="json")

    clm = ana_sub.add_parser("claims", help="batch-check codeword bounds")
    clm.add_argument("--config", choices=("d1", "d2", "tn"), required=True)
    clm.add_argument("--N", type=int, dest="num_blocks")
    clm.add_argument("--k", type=int)
    clm.add_argument("--perms", required=True,
                     help="file of permutations, one per line ('-' for stdin)")

    return parser


def _cmd_encode_d1(args) -> int:
    gamma_form = args.gamma1 is not None or args.gamma2 is not None
    rank_form = args.i1 is not None or args.i2 is not None
    if gamma_form and rank_form:
        raise ParamInvalid("--gamma1/--gamma2 and --i1/--i2 are mutually exclusive")
    if gamma_form:
        if args.gamma1 is None or args.gamma2 is None:
            raise ParamInvalid("both --gamma1 and --gamma2 are required")
        inp = D1Input(parse_permutation(args.gamma1), parse_permutation(args.gamma2))
        if inp.n != args.n:
            raise ParamInvalid(
                f"--n {args.n} contradicts orderings of total length {inp.n}")
    elif rank_form:
        if args.i1 is None or args.i2 is None:
            raise ParamInvalid("both --i1 and --i2 are required")
        try:
            i1, i2 = int(args.i1), int(args.i2)
        except ValueError as exc:
            raise ParamInvalid("ranks must be decimal integers") from exc
        inp = d1_message_input(i1, i2, args.n)
    else:
        raise ParamInvalid("supply --gamma1/--gamma2 or --i1/--i2")

    if args.streaming:
        pi, trace = encode_d1_streaming(inp)
        if args.format == "json":
            _emit_json({
                "perm": list(pi.values),
                "interleaving": list(interleave(inp).values),
                "trace": [{"position": s.position, "moved": s.moved_symbol}
                          for s in trace.steps],
            })
            return 0
    else:
        pi = encode_d1(inp)
        if args.format == "json":
            _emit_json({"perm": list(pi.values)})
            return 0
    print(format_permutation(pi))
    return 0


def _cmd_encode_d2(args) -> int:
    obj = json.loads(_read_file_or_stdin(args.input))
    inp = d2_input_from_json_dict(obj)
    pi = encode_d2(inp, tie_to_upper=args.tie_upper)
    print(format_permutation(pi))
    return 0


def _cmd_encode_tn(args) -> int:
    obj = json.loads(_read_file_or_stdin(args.input))
    inp = tn_input_from_json_dict(obj)
    pi = encode_tn(inp)
    print(format_permutation(pi))
    return 0


def _cmd_decode_d1(args) -> int:
    pi = _perm_arg(args.perm)
    if args.message:
        i1, i2 = d1_message_decode(pi)
        if args.format == "json":
            _emit_json({"i1": str(i1), "i2": str(i2)})
        else:
            print(f"{i1} {i2}")
        return 0
    inp = decode_d1(pi)
    if args.format == "json":
        _emit_json({"gamma1": list(inp.gamma1.values),
                    "gamma2": list(inp.gamma2.values)})
    else:
        print(format_permutation(inp.gamma1))
        print(format_permutation(inp.gamma2))
    return 0


def _cmd_decode_d2(args) -> int:
    pi = _perm_arg(args.perm)
    inp = decode_d2(pi, D2Params(args.n, args.num_blocks))
    _emit_json(d2_input_to_json_dict(inp))
    return 0


def _cmd_decode_tn(args) -> int:
    pi = _perm_arg(args.perm)
    inp = decode_tn(pi, TnParams(args.n, args.k))
    _emit_json(tn_input_to_json_dict(inp))
    return 0


def _cmd_verify(args) -> int:
    pi = _perm_arg(args.perm)
    if args.preset == "d1":
        report = verify_balance(pi, d1_preset(pi.n))
    elif args.preset == "d2":
        if args.num_blocks is None:
            raise ParamInvalid("--N is required for the d2 preset")
        report = verify_balance(pi, d2_preset(pi.n, args.num_blocks))
    else:
        if args.k is None:
            raise ParamInvalid("--k is required for the tn-neighbor preset")
        report = check_two_neighbor(pi, NeighborSpec(args.k))
    _emit_json(report.to_json_dict())
    return 0 if report.is_valid else VIOLATION


def _cmd_disc(args) -> int:
    pi = _perm_arg(args.perm)
    print(str(disc(pi, args.b)))
    return 0


def _census_spec(args):
    if args.preset == "d1":
        return d1_preset(args.n)
    if args.preset == "d2":
        if args.num_blocks is None:
            raise ParamInvalid("--N is required for the d2 preset")
        return d2_preset(args.n, args.num_blocks)
    if args.blocks is None:
        raise ParamInvalid("supply --preset or --blocks/--dev-max")
    blocks = _int_list(args.blocks)
    if args.dev_max is None:
        raise ParamInvalid("--dev-max is required with --blocks")
    devs = [_fraction(t) for t in args.dev_max.replace(",", " ").split()]
    if len(devs) == 1:
        devs = devs * len(blocks)
    if len(devs) != len(blocks):
        raise ParamInvalid("--dev-max must list one value, or one per block")
    return BalanceSpec(args.n, tuple(blocks), dict(zip(blocks, devs)))


def _cmd_census(args) -> int:
    spec = _census_spec(args)
    neighbor = NeighborSpec(args.neighbor_k) if args.neighbor_k is not None else None
    result = analysis.census(args.n, spec, neighbor=neighbor, cap=args.cap,
                             limit=args.limit, workers=args.threads)
    _emit_json(result.to_json_dict())
    return 0


def _cmd_min_disc(args) -> int:
    value, count = analysis.min_disc(args.n, args.b, limit=args.limit,
                                     workers=args.threads)
    _emit_json({"n": args.n, "b": args.b, "value": str(value),
                "achievers": str(count)})
    return 0


def _cmd_rate(args) -> int:
    lengths = _int_list(args.n)
    reports = [
        analysis.rate_report(args.config, n, N=args.num_blocks,
                             epsilon=args.epsilon, k=args.k,
                             epsilon_k=args.epsilon_k, limit=args.limit)
        for n in lengths
    ]
    if args.format == "csv":
        rows = ["config,n,code_log2,perm_log2,rate,target,note"]
        for r in reports:
            rows.append(",".join([
                r.config.replace(",", ";"), str(r.n),
                "" if r.code_log2 is None else repr(r.code_log2),
                repr(r.perm_log2),
                "" if r.rate is None else repr(r.rate),
                "" if r.target is None else repr(r.target),
                r.note or "",
            ]))
        sys.stdout.write("\n".join(rows) + "\n")
        return 0
    if len(reports) == 1:
        _emit_json(reports[0].to_json_dict())
    else:
        _emit_json([r.to_json_dict() for r in reports])
    return 0


def _cmd_claims(args) -> int:
    lines = [ln for ln in _read_file_or_stdin(args.perms).splitlines() if ln.strip()]
    perms = [parse_permutation(ln) for ln in lines]
    if not perms:
        raise ParamInvalid("no permutations supplied")
    n = perms[0].n
    if args.config == "d1":
        report = analysis.d1_claim_suite(perms, n)
    elif args.config == "d2":
        if args.num_blocks is None:
            raise ParamInvalid("--N is required for the d2 claim suite")
        report = analysis.d2_claim_suite(perms, D2Params(n, args.num_blocks))
    else:
        if args.k is None:
            raise ParamInvalid("--k is required for the tn claim suite")
        report = analysis.tn_claim_suite(perms, TnParams(n, args.k))
    _emit_json(report.to_json_dict())
    return 0


_HANDLERS = {
    ("encode", "d1"): _cmd_encode_d1,
    ("encode", "d2"): _cmd_encode_d2,
    ("encode", "tn"): _cmd_encode_tn,
    ("decode", "d1"): _cmd_decode_d1,
    ("decode", "d2"): _cmd_decode_d2,
    ("decode", "tn"): _cmd_decode_tn,
}


def run(argv: list[str]) -> int:
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR

    try:
        if args.command in ("encode", "decode"):
            return _HANDLERS[(args.command, args.codec)](args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "disc":
            return _cmd_disc(args)
        if args.command == "analyze":
            handler = {"census": _cmd_census, "min-disc": _cmd_min_disc,
                       "rate": _cmd_rate, "claims": _cmd_claims}[args.what]
            return handler(args)
        raise ParamInvalid(f"unknown command {args.command!r}")
    except SourceExhausted as exc:
        print(f"defect: {exc}", file=sys.stderr)
        print(f"defect state: {exc.state!r}", file=sys.stderr)
        return DEFECT
    except SelectorViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"remaining sets: {exc.remaining!r}", file=sys.stderr)
        return VIOLATION
    except NotCodeword as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION
    except (BpcError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
