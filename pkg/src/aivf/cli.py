"""Command-line interface.

Subcommands: build, analyze, rate, encode, decode, verify. Reports print
every quantity as an exact rational alongside a correctly rounded 12-digit
decimal. Exit status: 0 on success, 1 when a check or domain invariant
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import render
from .codec import CodeSystem, decode, encode, load_code_system, parse_words, save_code_system
from .errors import CodingError, TooLargeError, UnknownSymbolError
from .global_solver import (
    brute_force_optimum,
    count_trees,
    enumerate_trees,
    solve_cutting_plane,
    solve_iterative,
)
from .local_dp import dp_costs_only
from .markov import Chain, global_parse_length, multityped_intersection, stationary, transition_matrix
from .parse_tree import (
    expected_parse_length,
    occurrence_probs,
    transition_probs,
    validate_tree,
)
from .source_model import SourceModel, load_probability_file
from .tunstall import build_tunstall, coding_rate


class _UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational list {text!r}: {exc}")


def _int_list(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(int(part.strip()) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}: {exc}")


def _frac_json(value: Fraction) -> dict:
    return {"fraction": str(value), "decimal": str(render.rational_decimal(value))}


def _solve(src: SourceModel, dict_size: int, solver: str):
    if solver == "iterative":
        return solve_iterative(src, dict_size)
    if solver == "cutting-plane":
        return solve_cutting_plane(src, dict_size)
    if solver == "brute":
        return brute_force_optimum(src, dict_size)
    raise _UsageError(f"unknown solver {solver!r}")


def _print_tables(tables) -> None:
    size = tables.dict_size
    names = ["weights: (" + ", ".join(str(w) for w in tables.weights) + ")"]
    names.append("restriction: {" + ", ".join(str(i) for i in sorted(tables.restriction)) + "}")
    print("; ".join(names))
    for label, grid in (("OPT", tables.opt), ("SPLIT", tables.split)):
        print(f"{label} table (rows are types, columns are sizes 1..{size})")
        cells = [
            [("-" if v is None else str(v)) for v in row[1:]] for row in grid
        ]
        widths = [
            max(len(f"{d + 1}"), max(len(cells[i][d]) for i in range(len(cells))))
            for d in range(size)
        ]
        header = "  type \\ size " + " ".join(
            f"{d + 1}".rjust(widths[d]) for d in range(size)
        )
        print(header)
        for i, row in enumerate(cells):
            print(f"  {i:11d} " + " ".join(row[d].rjust(widths[d]) for d in range(size)))


def _cmd_build(args) -> int:
    src = load_probability_file(args.probs)
    n = len(src)
    if args.local_only:
        if args.method != "aivf":
            raise _UsageError("--local-only applies to the aivf method")
        if args.dict_size is None:
            raise _UsageError("--local-only needs --dict-size")
        weights = args.weights or (Fraction(0),) * (n - 2)
        if len(weights) != n - 2:
            raise _UsageError(
                f"--weights needs {n - 2} entries for {n} symbols, got {len(weights)}"
            )
        restriction = set(args.restrict) if args.restrict else None
        if restriction is not None and (
            0 not in restriction or not restriction <= set(range(n - 1))
        ):
            raise _UsageError(
                f"--restrict must contain 0 and only types 0..{n - 2}"
            )
        tables = dp_costs_only(src, args.dict_size, weights, restriction)
        _print_tables(tables)
        return 0

    if args.method == "tunstall":
        if args.expansions is not None:
            expansions = args.expansions
        elif args.dict_size is not None:
            step, rem = divmod(args.dict_size - n, n - 1)
            if rem or step < 0:
                raise _UsageError(
                    f"no Tunstall code over {n} symbols has dictionary size "
                    f"{args.dict_size}; sizes are {n} + k*{n - 1}"
                )
            expansions = step
        else:
            raise _UsageError("tunstall needs --expansions or --dict-size")
        code = build_tunstall(src, expansions)
        e_len = code.expected_length
        rate = coding_rate(code.dict_size, e_len)
        cs = CodeSystem(src, code.dict_size, (code.tree,), "tunstall")
        if args.json:
            print(
                json.dumps(
                    {
                        "kind": "tunstall",
                        "dict_size": code.dict_size,
                        "expansions": expansions,
                        "expected_length": _frac_json(e_len),
                        "rate": str(rate.decimal),
                        "dictionary": [
                            {
                                "index": e.index,
                                "word": [src.symbols[s] for s in e.word],
                                "prob": str(e.occurrence_prob),
                            }
                            for e in code.entries
                        ],
                    },
                    indent=2,
                )
            )
        else:
            print("Tunstall code")
            print(f"  symbols:         {_symbols_line(src)}")
            print(f"  dictionary size: {code.dict_size} ({expansions} expansions)")
            print(f"  expected length: {render.show(e_len)}")
            print(f"  code rate:       {rate.decimal} bits/symbol")
            print("  dictionary:")
            for e in code.entries:
                word = "".join(src.symbols[s] for s in e.word)
                print(f"    {e.index:3d}  {word:<12} {e.occurrence_prob}")
        if args.out:
            save_code_system(cs, args.out)
        return 0

    if args.dict_size is None:
        raise _UsageError("aivf needs --dict-size")
    result = _solve(src, args.dict_size, args.solver)
    verified = None
    if args.verify and args.solver != "brute":
        try:
            reference = brute_force_optimum(src, args.dict_size)
            verified = reference.parse_length == result.parse_length
        except TooLargeError as exc:
            print(f"note: brute-force verification skipped: {exc}", file=sys.stderr)
    cs = CodeSystem(src, args.dict_size, tuple(result.chain.trees), "aivf")
    e_lens = [expected_parse_length(t, src) for t in result.chain]
    rate = coding_rate(args.dict_size, result.parse_length)
    if args.json:
        doc = {
            "kind": "aivf",
            "dict_size": args.dict_size,
            "solver": args.solver,
            "iterations": result.iterations,
            "certified": result.certified,
            "tree_expected_lengths": [_frac_json(v) for v in e_lens],
            "parse_length": _frac_json(result.parse_length),
            "meet_point": [_frac_json(v) for v in result.point],
            "meet_height": _frac_json(result.height),
            "rate": str(rate.decimal),
        }
        if verified is not None:
            doc["brute_force_agrees"] = verified
        print(json.dumps(doc, indent=2))
    else:
        print("AIVF code system")
        print(f"  symbols:             {_symbols_line(src)}")
        print(f"  dictionary size:     {args.dict_size}")
        print(f"  codeword bits:       {cs.codeword_bits}")
        print(f"  solver:              {args.solver} ({result.iterations} iterations)")
        for k, v in enumerate(e_lens):
            print(f"  tree {k} parse length: {render.show(v)}")
        print(f"  long-run length:     {render.show(result.parse_length)}")
        for j, v in enumerate(result.point, start=1):
            print(f"  meet point x_{j}:      {render.show(v)}")
        print(f"  meet height:         {render.show(result.height)}")
        print(f"  certificate:         {'all tight' if result.certified else 'FAILED'}")
        print(f"  code rate:           {rate.decimal} bits/symbol")
        if verified is not None:
            print(f"  brute-force check:   {'agrees' if verified else 'DISAGREES'}")
    if args.out:
        save_code_system(cs, args.out)
    if not result.certified or verified is False:
        return 1
    return 0


def _symbols_line(src: SourceModel) -> str:
    return ", ".join(f"{s} ({p})" for s, p in zip(src.symbols, src.probs))


def _cmd_analyze(args) -> int:
    cs = load_code_system(args.code)
    src = cs.source
    if cs.kind == "tunstall":
        e_len = expected_parse_length(cs.trees[0], src)
        rate = coding_rate(cs.dict_size, e_len)
        if args.json:
            print(
                json.dumps(
                    {
                        "kind": "tunstall",
                        "dict_size": cs.dict_size,
                        "expected_length": _frac_json(e_len),
                        "rate": str(rate.decimal),
                    },
                    indent=2,
                )
            )
        else:
            print("Tunstall code")
            print(f"  dictionary size: {cs.dict_size}")
            print(f"  expected length: {render.show(e_len)}")
            print(f"  code rate:       {rate.decimal} bits/symbol")
        return 0
    chain = Chain(cs.trees)
    matrix = transition_matrix(chain, src)
    pi = stationary(matrix)
    length = global_parse_length(chain, src)
    meet = multityped_intersection(chain, src, cs.dict_size)
    rate = coding_rate(cs.dict_size, length)
    if args.json:
        print(
            json.dumps(
                {
                    "kind": "aivf",
                    "dict_size": cs.dict_size,
                    "transition_matrix": [[str(v) for v in row] for row in matrix],
                    "stationary": [_frac_json(v) for v in pi],
                    "parse_length": _frac_json(length),
                    "meet_point": [_frac_json(v) for v in meet.point],
                    "meet_height": _frac_json(meet.height),
                    "rate": str(rate.decimal),
                },
                indent=2,
            )
        )
        return 0
    print("AIVF code system")
    print(f"  symbols:         {_symbols_line(src)}")
    print(f"  dictionary size: {cs.dict_size}")
    print("  transition matrix (rows = from tree, columns = to tree):")
    for k, row in enumerate(matrix):
        print(f"    tree {k}: " + "  ".join(str(v) for v in row))
    print("  stationary distribution:")
    for k, v in enumerate(pi):
        print(f"    tree {k}: {render.show(v)}")
    for k, tree in enumerate(cs.trees):
        print(f"  tree {k} parse length: {render.show(expected_parse_length(tree, src))}")
    print(f"  long-run length: {render.show(length)}")
    for j, v in enumerate(meet.point, start=1):
        print(f"  meet point x_{j}:  {render.show(v)}")
    print(f"  meet height:     {render.show(meet.height)}")
    print(f"  code rate:       {rate.decimal} bits/symbol")
    return 0


def _cmd_rate(args) -> int:
    cs = load_code_system(args.code)
    src = cs.source
    if cs.kind == "tunstall":
        e_len = expected_parse_length(cs.trees[0], src)
    else:
        e_len = global_parse_length(Chain(cs.trees), src)
    rate = coding_rate(cs.dict_size, e_len)
    if args.json:
        print(
            json.dumps(
                {
                    "dict_size": cs.dict_size,
                    "expected_length": _frac_json(e_len),
                    "rate": str(rate.decimal),
                },
                indent=2,
            )
        )
    else:
        print(
            f"rate = log2({cs.dict_size}) / {e_len} = {rate.decimal} bits/symbol"
        )
    return 0


def _read_symbols(cs: CodeSystem, path, byte_mode: bool) -> list[int]:
    src = cs.source
    if byte_mode:
        with open(path, "rb") as handle:
            data = handle.read()
        n = len(src)
        for b in data:
            if b >= n:
                raise UnknownSymbolError(f"byte {b} outside alphabet of {n}")
        return list(data)
    with open(path, "r", encoding="utf-8") as handle:
        tokens = handle.read().split()
    out = []
    for token in tokens:
        try:
            out.append(src.index_of(token))
        except KeyError:
            raise UnknownSymbolError(f"symbol {token!r} not in the alphabet") from None
    return out


def _cmd_encode(args) -> int:
    cs = load_code_system(args.code)
    symbols = _read_symbols(cs, args.input, args.bytes)
    blob = encode(cs, symbols)
    with open(args.output, "wb") as handle:
        handle.write(blob)
    words = sum(1 for _ in parse_words(cs, symbols))
    print(
        f"encoded {len(symbols)} symbols into {words} words "
        f"({len(blob)} bytes with header)"
    )
    return 0


def _cmd_decode(args) -> int:
    cs = load_code_system(args.code)
    with open(args.input, "rb") as handle:
        blob = handle.read()
    symbols = decode(cs, blob)
    if args.bytes:
        with open(args.output, "wb") as handle:
            handle.write(bytes(symbols))
    else:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(" ".join(cs.source.symbols[s] for s in symbols))
            if symbols:
                handle.write("\n")
    print(f"decoded {len(symbols)} symbols")
    return 0


def _cmd_verify(args) -> int:
    src = load_probability_file(args.probs)
    dict_size = args.dict_size
    rng = random.Random(args.seed)
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str = ""):
        checks.append((name, bool(ok), detail))

    iterative = solve_iterative(src, dict_size)
    cutting = solve_cutting_plane(src, dict_size)
    check(
        "solvers agree",
        iterative.parse_length == cutting.parse_length
        and iterative.height == cutting.height,
        f"iterative {iterative.parse_length}, cutting-plane {cutting.parse_length}",
    )
    check("iterative certificate", iterative.certified)
    check("cutting-plane certificate", cutting.certified)
    try:
        brute = brute_force_optimum(src, dict_size)
        check(
            "brute force agrees",
            brute.parse_length == iterative.parse_length,
            f"brute {brute.parse_length}",
        )
    except TooLargeError as exc:
        check("brute force agrees", True, f"skipped: {exc}")

    ok_conservation = True
    for tree in iterative.chain:
        entries = occurrence_probs(tree, src)
        q = transition_probs(tree, src)
        e_len = expected_parse_length(tree, src)
        ok_conservation &= sum(e.occurrence_prob for e in entries) == 1
        ok_conservation &= sum(q) == 1 and q[0] > 0
        ok_conservation &= 0 <= e_len <= dict_size
        ok_conservation &= tree.node_count <= 2 * dict_size
        ok_conservation &= not validate_tree(tree, src)
    check("chain conservation laws", ok_conservation)

    expected = sum(
        (
            p * expected_parse_length(t, src)
            for p, t in zip(
                stationary(transition_matrix(iterative.chain, src)), iterative.chain
            )
        ),
        Fraction(0),
    )
    check(
        "stationary identity",
        expected == iterative.parse_length
        and iterative.parse_length == dict_size - iterative.height,
    )

    cs = CodeSystem(src, dict_size, tuple(iterative.chain.trees), "aivf")
    ok_roundtrip = True
    for _ in range(args.trials):
        length = rng.randrange(0, 200)
        seq = rng.choices(range(len(src)), weights=[float(p) for p in src.probs], k=length)
        ok_roundtrip &= decode(cs, encode(cs, seq)) == seq
    check(f"codec round-trip x{args.trials}", ok_roundtrip)

    failed = [c for c in checks if not c[1]]
    if args.json:
        print(
            json.dumps(
                {
                    "checks": [
                        {"name": name, "ok": ok, "detail": detail}
                        for name, ok, detail in checks
                    ],
                    "ok": not failed,
                },
                indent=2,
            )
        )
    else:
        for name, ok, detail in checks:
            suffix = f"  [{detail}]" if detail else ""
            print(f"{'PASS' if ok else 'FAIL'}  {name}{suffix}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aivf",
        description="Build, analyze, and use optimal variable-to-fixed codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="construct a code system from probabilities")
    build.add_argument("--probs", required=True, help="probability file")
    build.add_argument("--method", choices=("aivf", "tunstall"), default="aivf")
    build.add_argument("--dict-size", type=_positive_int, help="dictionary size D")
    build.add_argument(
        "--expansions", type=int, help="tunstall greedy steps (alternative to --dict-size)"
    )
    build.add_argument(
        "--solver",
        choices=("iterative", "cutting-plane", "brute"),
        default="iterative",
    )
    build.add_argument(
        "--verify", action="store_true", help="cross-check against brute force"
    )
    build.add_argument("--out", help="write the code system to this JSON file")
    build.add_argument("--json", action="store_true", help="machine-readable report")
    build.add_argument(
        "--local-only",
        action="store_true",
        help="dump the size-DP tables instead of solving globally",
    )
    build.add_argument(
        "--weights",
        type=_fraction_list,
        help="comma-separated rational weights for --local-only (default zeros)",
    )
    build.add_argument(
        "--restrict",
        type=_int_list,
        help="comma-separated transfer types allowed under --local-only",
    )
    build.add_argument(
        "--threads",
        type=_positive_int,
        default=1,
        help="worker hint; current solvers are sequential at these scales",
    )
    build.set_defaults(func=_cmd_build)

    analyze = sub.add_parser("analyze", help="report on a stored code system")
    analyze.add_argument("--code", required=True)
    analyze.add_argument("--json", action="store_true")
    analyze.set_defaults(func=_cmd_analyze)

    rate = sub.add_parser("rate", help="coding rate of a stored code system")
    rate.add_argument("--code", required=True)
    rate.add_argument("--json", action="store_true")
    rate.set_defaults(func=_cmd_rate)

    enc = sub.add_parser("encode", help="encode symbols with a stored code system")
    enc.add_argument("--code", required=True)
    enc.add_argument("--input", required=True)
    enc.add_argument("--output", required=True)
    enc.add_argument(
        "--bytes",
        action="store_true",
        help="treat the input as raw bytes of symbol indices",
    )
    enc.set_defaults(func=_cmd_encode)

    dec = sub.add_parser("decode", help="decode a bitstream")
    dec.add_argument("--code", required=True)
    dec.add_argument("--input", required=True)
    dec.add_argument("--output", required=True)
    dec.add_argument("--bytes", action="store_true")
    dec.set_defaults(func=_cmd_decode)

    verify = sub.add_parser("verify", help="run the self-check suite on an instance")
    verify.add_argument("--probs", required=True)
    verify.add_argument("--dict-size", type=_positive_int, required=True)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=_positive_int, default=100)
    verify.add_argument("--json", action="store_true")
    verify.add_argument("--threads", type=_positive_int, default=1)
    verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CodingError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
