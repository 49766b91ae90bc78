"""Text and JSON renderings of class tables and analysis results."""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Sequence

from .inference import ProcedureResult
from .lattice import BuchiDomain

SCHEMA = 1


def word_text(word: Sequence[str], empty: str = "<eps>") -> str:
    if not word:
        return empty
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


def class_label(dom: BuchiDomain, c: int) -> str:
    return "[" + word_text(dom.table.representatives[c], "ε") + "]"


def pair_label(dom: BuchiDomain, p: int) -> str:
    c, d = dom.pairs.pairs[p]
    return f"({class_label(dom, c)},{class_label(dom, d)})"


def _set(labels: Iterable[str]) -> str:
    return "{" + ", ".join(labels) + "}"


def class_lines(dom: BuchiDomain, table: bool = False) -> List[str]:
    reps = dom.table.representatives
    lines = [f"# classes ({len(reps)})"]
    for c, rep in enumerate(reps):
        flag = "epsilon" if c == 0 else "-"
        lines.append(f"{c}\t{word_text(rep)}\t{flag}")
    if table:
        lines.append("# multiplication")
        for c, row in enumerate(dom.table.mul):
            lines.extend(f"{c} {d} -> {x}" for d, x in enumerate(row))
    return lines


def pair_lines(dom: BuchiDomain) -> List[str]:
    reps = dom.table.representatives
    lines = [f"# pairs ({len(dom.pairs)})"]
    for p, (c, d) in dom.iter_pairs():
        acc = "accepted" if dom.pair_accepted(p) else "rejected"
        lines.append(f"{p}\t({word_text(reps[c])}, {word_text(reps[d])})\t{acc}")
    return lines


def render_text(
    dom: BuchiDomain,
    results: Dict[str, ProcedureResult],
    entries: Sequence[str],
    dump_classes: bool = False,
    dump_pairs: bool = False,
) -> str:
    aut = dom.automaton
    lines = [f"policy: {aut.n_states} states, {len(dom.table)} classes, {len(dom.pairs)} pairs"]
    if dump_classes:
        lines += class_lines(dom)
    if dump_pairs:
        lines += pair_lines(dom)
    for name, r in results.items():
        lines.append(f"procedure {name}")
        lines.append("  finite:   " + _set(class_label(dom, c) for c in sorted(r.finite)))
        lines.append("  infinite: " + _set(pair_label(dom, p) for p in sorted(r.infinite)))
        lines.append(f"  finite_ok: {'yes' if r.finite_ok else 'no'}  infinite_ok: {'yes' if r.infinite_ok else 'no'}")
    for name in entries:
        r = results[name]
        lines.append(f"verdict {name}: {'pass' if r.passed else 'fail'}")
        for d in r.diagnostics:
            label = class_label(dom, d.ident) if d.kind == "class" else pair_label(dom, d.ident)
            if d.kind == "class":
                lines.append(f"  rejected class {label}, witness {word_text(d.prefix)}")
            else:
                lines.append(f"  rejected pair {label}, witness {word_text(d.prefix)} ({word_text(d.period)})^ω")
    return "\n".join(lines) + "\n"


def report_dict(dom: BuchiDomain, results: Dict[str, ProcedureResult], entries: Sequence[str]) -> dict:
    reps = dom.table.representatives
    return {
        "schema": SCHEMA,
        "policy": {
            "states": list(dom.automaton.state_names),
            "alphabet": list(dom.automaton.alphabet),
        },
        "classes": {
            str(c): {
                "representative": word_text(rep, ""),
                "epsilon": c == 0,
                "accepted": dom.class_accepted(c),
            }
            for c, rep in enumerate(reps)
        },
        "pairs": {
            str(p): {
                "C": c,
                "D": d,
                "representative": [word_text(reps[c], ""), word_text(reps[d], "")],
                "accepted": dom.pair_accepted(p),
            }
            for p, (c, d) in dom.iter_pairs()
        },
        "procedures": {
            name: {
                "finite": sorted(r.finite),
                "infinite": sorted(r.infinite),
                "finite_ok": r.finite_ok,
                "infinite_ok": r.infinite_ok,
            }
            for name, r in results.items()
        },
        "verdict": [{"procedure": name, "pass": results[name].passed} for name in entries],
        "diagnostics": [
            {
                "procedure": name,
                "kind": d.kind,
                "id": d.ident,
                "prefix": word_text(d.prefix, ""),
                "period": word_text(d.period, ""),
            }
            for name in entries
            for d in results[name].diagnostics
        ],
    }


def render_json(dom: BuchiDomain, results: Dict[str, ProcedureResult], entries: Sequence[str]) -> str:
    return json.dumps(report_dict(dom, results, entries), indent=2, ensure_ascii=False) + "\n"
