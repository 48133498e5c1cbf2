"""Command-line interface.

Exit status: 0 verified, 1 rejected, 2 bad input (unreadable file, parse
error, formula/proof mismatch, invalid arguments).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import formats as fm
from .formats import FormatError, parse_opb
from .state import Configuration, Mode, ProofError
from .verifier import run_proof

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2

log = logging.getLogger("pbdom")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _stream(path: Path):
    with path.open(encoding="utf-8") as fh:
        yield from fh


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    try:
        instance = parse_opb(Path(args.opb).read_text(encoding="utf-8"))
    except OSError as e:
        print(f"ERROR cannot read {args.opb}: {e.strerror}", file=out)
        return EXIT_INPUT
    except FormatError as e:
        print(f"ERROR {args.opb}: {e}", file=out)
        return EXIT_INPUT
    proof_path = Path(args.proof)
    if not proof_path.is_file():
        print(f"ERROR cannot read {args.proof}", file=out)
        return EXIT_INPUT
    mode = Mode(args.mode)
    cfg = Configuration(instance.constraints, instance.objective, mode, instance.vocab.copy())

    trace_lines: list[str] = []

    def trace(line: int, rule: str, ids: list[int]) -> None:
        trace_lines.append(" ".join([f"c line {line} {rule}", *map(str, ids)]))

    on_step = None
    if args.safety_oracle is not None:
        from .oracle import check_safety

        if len(cfg.vocab) > args.safety_oracle:
            print(f"ERROR safety oracle limited to {args.safety_oracle} variables, "
                  f"instance has {len(cfg.vocab)}", file=out)
            return EXIT_INPUT

        def on_step(state: Configuration, cmd: fm.Command) -> None:
            problems = check_safety(state, max_vars=max(args.safety_oracle, len(state.vocab)))
            if problems:
                raise ProofError("safety oracle: " + "; ".join(problems), cmd.line)

    try:
        verdict = run_proof(cfg, instance, _stream(proof_path),
                            trace if args.trace else None, on_step)
    except FormatError as e:
        print(f"ERROR {args.proof}: {e}", file=out)
        return EXIT_INPUT
    except ProofError as e:
        print(f"REJECTED line {e.line if e.line is not None else 0}: {e.reason}", file=out)
        return EXIT_REJECTED
    except OSError as e:
        print(f"ERROR cannot read {args.proof}: {e.strerror}", file=out)
        return EXIT_INPUT
    print(f"VERIFIED {verdict}", file=out)
    for line in trace_lines:
        print(line, file=out)
    if args.stats:
        print("c stats " + json.dumps(verdict.stats.summary(), sort_keys=True), file=out)
    return EXIT_OK


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def cmd_gen_php(args: argparse.Namespace, out: TextIO) -> int:
    from .generators import gen_pigeonhole

    pigeons = args.pigeons if args.pigeons is not None else args.p
    holes = args.holes if args.holes is not None else args.h
    if pigeons is None or holes is None or pigeons < 1 or holes < 1:
        print("ERROR need positive pigeon and hole counts", file=out)
        return EXIT_INPUT
    inst = gen_pigeonhole(pigeons, holes)
    target = Path(args.output or f"php_{pigeons}_{holes}.opb")
    _write(target, fm.render_opb(inst))
    print(f"wrote {target} with {len(inst.constraints)} constraints", file=out)
    return EXIT_OK


def cmd_gen_breaksym(args: argparse.Namespace, out: TextIO) -> int:
    from .generators import emit_symmetry_breaking, parse_symmetries

    try:
        inst = parse_opb(Path(args.opb).read_text(encoding="utf-8"))
        syms = parse_symmetries(Path(args.syms).read_text(encoding="utf-8"), inst.vocab.copy())
    except OSError as e:
        print(f"ERROR cannot read input: {e.strerror}", file=out)
        return EXIT_INPUT
    except FormatError as e:
        print(f"ERROR {e}", file=out)
        return EXIT_INPUT
    if args.order:
        names = args.order.split()
        missing = [n for n in names if n not in inst.vocab]
        if missing:
            print(f"ERROR unknown variable {missing[0]} in --order", file=out)
            return EXIT_INPUT
        order = [inst.vocab.lookup(n) for n in names]
    else:
        moved = set().union(*(s.domain() for s in syms)) if syms else set()
        order = sorted(moved)
    try:
        proof = emit_symmetry_breaking(inst, syms, order, limit=args.limit,
                                       half_support=args.half_support, compact=args.compact,
                                       output=args.output_kind)
    except ValueError as e:
        print(f"ERROR {e}", file=out)
        return EXIT_INPUT
    target = Path(args.output or Path(args.opb).with_suffix(".pbp"))
    _write(target, proof)
    print(f"wrote {target}", file=out)
    return EXIT_OK


def cmd_gen_clique(args: argparse.Namespace, out: TextIO) -> int:
    from .generators import parse_dimacs, solve_clique_certified

    try:
        g = parse_dimacs(Path(args.graph).read_text(encoding="utf-8"))
    except OSError as e:
        print(f"ERROR cannot read {args.graph}: {e.strerror}", file=out)
        return EXIT_INPUT
    except FormatError as e:
        print(f"ERROR {args.graph}: {e}", file=out)
        return EXIT_INPUT
    inst, proof, omega = solve_clique_certified(g, use_dominance=not args.no_dominance)
    stem = Path(args.output) if args.output else Path(args.graph).with_suffix("")
    _write(stem.with_suffix(".opb"), fm.render_opb(inst))
    _write(stem.with_suffix(".pbp"), proof)
    print(f"optimum {omega}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pbdom", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check a proof against an OPB instance")
    v.add_argument("opb")
    v.add_argument("proof")
    v.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CHECKED.value)
    v.add_argument("--trace", action="store_true", help="list the ids created by each rule")
    v.add_argument("--stats", action="store_true")
    v.add_argument("--safety-oracle", type=int, metavar="MAXVARS",
                   help="check the safety invariants by enumeration after every step")
    v.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="generate instances and proofs")
    gsub = gen.add_subparsers(dest="generator", required=True, parser_class=_Parser)

    php = gsub.add_parser("php", help="pigeonhole formula")
    php.add_argument("p", type=int, nargs="?")
    php.add_argument("h", type=int, nargs="?")
    php.add_argument("--pigeons", type=int)
    php.add_argument("--holes", type=int)
    php.add_argument("-o", "--output")
    php.set_defaults(func=cmd_gen_php)

    bs = gsub.add_parser("breaksym", help="lex-leader symmetry breaking proof")
    bs.add_argument("--opb", required=True)
    bs.add_argument("--syms", required=True, help="one permutation per line in cycle notation")
    bs.add_argument("--order", help="space-separated breaking variables (default: moved ones)")
    bs.add_argument("--limit", type=int, default=100)
    bs.add_argument("--half-support", action="store_true",
                    help="break at most half of each symmetry's moved positions")
    bs.add_argument("--compact", action="store_true")
    bs.add_argument("--output-kind", choices=["NONE", "EQUISATISFIABLE"], default="NONE")
    bs.add_argument("-o", "--output")
    bs.set_defaults(func=cmd_gen_breaksym)

    cl = gsub.add_parser("clique", help="certified maximum clique")
    cl.add_argument("--graph", required=True, help="DIMACS graph file")
    cl.add_argument("--no-dominance", action="store_true")
    cl.add_argument("-o", "--output", help="output stem for the .opb/.pbp pair")
    cl.set_defaults(func=cmd_gen_clique)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    return args.func(args, out if out is not None else sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
