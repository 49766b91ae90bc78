"""Command-line driver.

    buchi-effects analyze --program ex1.rec --policy ex1.aut --entry f --format json
    buchi-effects classes --policy ex2.aut [--table]
    buchi-effects oracle --program ex1.rec --proc f --budget 3 [--phi N] [--lasso]

``analyze`` exits 0 when every selected entry passes, 1 when one fails and
2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .automaton import Automaton, AutomatonError, parse_automaton
from .inference import analyze
from .lang import Program, ProgramError, parse_program, validate
from .lattice import BuchiDomain
from .oracle import enumerate_prefixes, iterate_phi, lasso_witnesses
from .report import SCHEMA, class_lines, pair_lines, render_json, render_text, word_text

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    program: Optional[Path] = None
    policy: Optional[Path] = None
    entry: Optional[str] = None
    all_entries: bool = False
    format: str = "text"
    budget: int = 4
    phi: Optional[int] = None
    lasso: bool = False
    max_u: int = 6
    max_v: int = 6
    max_stack: int = 6
    dump_classes: bool = False
    dump_pairs: bool = False
    dump_table: bool = False


class InputError(Exception):
    pass


def _read(path: Optional[Path], what: str) -> str:
    if path is None:
        raise InputError(f"missing --{what}")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc.strerror}") from None


def _load_policy(config: RunConfig) -> Automaton:
    return parse_automaton(_read(config.policy, "policy"))


def _load_program(config: RunConfig) -> Program:
    return parse_program(_read(config.program, "program"))


def _analyze(config: RunConfig, out: TextIO) -> int:
    aut = _load_policy(config)
    program = _load_program(config)
    validate(program, aut)
    if config.all_entries:
        entries = program.names
    else:
        entry = config.entry or program.names[0]
        if entry not in program.procedures:
            raise InputError(f"unknown entry procedure {entry}")
        entries = [entry]
    dom = BuchiDomain(aut)
    results = analyze(program, aut, dom)
    if config.format == "json":
        out.write(render_json(dom, results, entries))
    else:
        out.write(render_text(dom, results, entries, config.dump_classes, config.dump_pairs))
    return EXIT_PASS if all(results[e].passed for e in entries) else EXIT_FAIL


def _classes(config: RunConfig, out: TextIO) -> int:
    dom = BuchiDomain(_load_policy(config))
    if config.format == "json":
        doc = {
            "schema": SCHEMA,
            "classes": [
                {"id": c, "representative": word_text(rep, ""), "epsilon": c == 0}
                for c, rep in enumerate(dom.table.representatives)
            ],
            "pairs": [
                {"id": p, "C": c, "D": d, "accepted": dom.pair_accepted(p)}
                for p, (c, d) in dom.iter_pairs()
            ],
        }
        if config.dump_table:
            doc["mul"] = dom.table.mul
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        lines = class_lines(dom, config.dump_table) + pair_lines(dom)
        out.write("\n".join(lines) + "\n")
    return EXIT_PASS


def _oracle(config: RunConfig, out: TextIO) -> int:
    program = _load_program(config)
    validate(program)
    proc = config.entry or program.names[0]
    if proc not in program.procedures:
        raise InputError(f"unknown procedure {proc}")
    for word, flag in enumerate_prefixes(program, proc, config.budget):
        out.write(f"{word_text(word)}\t{flag}\n")
    if config.phi is not None:
        level = iterate_phi(program, config.phi)
        words = sorted(level.sets[proc], key=lambda w: (len(w), w))
        out.write(f"# phi level {config.phi}: {len(words)} words\n")
        for w in words:
            out.write(f"{word_text(w)}\tphi\n")
    if config.lasso:
        for u, v in lasso_witnesses(program, proc, config.max_u, config.max_v, config.max_stack):
            out.write(f"{word_text(u)}\t{word_text(v)}\tlasso\n")
    return EXIT_PASS


def run(config: RunConfig, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    handlers = {"analyze": _analyze, "classes": _classes, "oracle": _oracle}
    try:
        for bound in (config.budget, config.max_u, config.max_v, config.max_stack):
            if bound < 0:
                raise InputError("bounds must be non-negative")
        return handlers[config.command](config, out)
    except (InputError, AutomatonError, ProgramError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="buchi-effects", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="infer effects and check them against a policy")
    a.add_argument("--program", type=Path, required=True)
    a.add_argument("--policy", type=Path, required=True)
    group = a.add_mutually_exclusive_group()
    group.add_argument("--entry", help="procedure to check (default: first declared)")
    group.add_argument("--all", dest="all_entries", action="store_true", help="check every procedure")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--dump-classes", action="store_true")
    a.add_argument("--dump-pairs", action="store_true")

    c = sub.add_parser("classes", help="dump the class monoid and pair table of a policy")
    c.add_argument("--policy", type=Path, required=True)
    c.add_argument("--table", dest="dump_table", action="store_true", help="also print the multiplication table")
    c.add_argument("--format", choices=("text", "json"), default="text")

    o = sub.add_parser("oracle", help="run the concrete trace semantics")
    o.add_argument("--program", type=Path, required=True)
    o.add_argument("--proc", dest="entry")
    o.add_argument("--budget", type=int, default=4)
    o.add_argument("--phi", type=int, help="also print this iterate of the terminating-trace operator")
    o.add_argument("--lasso", action="store_true", help="also print lasso witnesses of infinite traces")
    o.add_argument("--max-u", type=int, default=6)
    o.add_argument("--max-v", type=int, default=6)
    o.add_argument("--max-stack", type=int, default=6)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
