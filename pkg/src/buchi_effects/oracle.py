"""Concrete trace semantics, used to cross-check the abstract analysis.

Everything here works on explicit finite words (tuples of event symbols)
and is deliberately independent of the class monoid.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .lang import Call, Choice, Emit, Expr, Program, Seq

CHECK = "✓"
TERMINATED = "terminated"
TRUNCATED = "truncated"

Word = Tuple[str, ...]


def strip_checks(trace: Iterable[str]) -> Word:
    return tuple(x for x in trace if x != CHECK)


def format_word(word: Sequence[str]) -> str:
    if not word:
        return "<eps>"
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


# -- Φ iterates ---------------------------------------------------------------


@dataclass(frozen=True)
class PhiIterate:
    level: int
    sets: Dict[str, FrozenSet[Word]]


class OracleLimit(Exception):
    """An exact word set grew beyond the caller's limit."""


def _eval(e: Expr, env: Dict[str, FrozenSet[Word]], limit: Optional[int] = None) -> FrozenSet[Word]:
    if isinstance(e, Emit):
        return frozenset([(e.symbol,)])
    if isinstance(e, Call):
        return env[e.name]
    if isinstance(e, Seq):
        left = _eval(e.first, env, limit)
        if not left:
            return frozenset()
        right = _eval(e.second, env, limit)
        if limit is not None and len(left) * len(right) > limit:
            raise OracleLimit(f"concatenation of {len(left)} and {len(right)} words")
        return frozenset(u + v for u in left for v in right)
    out = _eval(e.left, env, limit) | _eval(e.right, env, limit)
    if limit is not None and len(out) > limit:
        raise OracleLimit(f"union of {len(out)} words")
    return out


def phi_iterates(program: Program, limit: Optional[int] = None) -> Iterator[PhiIterate]:
    """Level 0, 1, 2, ... of the terminating-trace operator (unbounded).

    With ``limit``, raises ``OracleLimit`` once an intermediate word set
    would exceed that many words.
    """
    sets: Dict[str, FrozenSet[Word]] = {f: frozenset() for f in program.names}
    level = 0
    while True:
        yield PhiIterate(level, sets)
        sets = {f: _eval(program.body(f), sets, limit) for f in program.names}
        level += 1


def iterate_phi(program: Program, n: int, limit: Optional[int] = None) -> PhiIterate:
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    for it in phi_iterates(program, limit):
        if it.level == n:
            return it
    raise AssertionError("unreachable")


# -- bounded executions ---------------------------------------------------------


def enumerate_prefixes(program: Program, entry: str, budget: int) -> List[Tuple[Word, str]]:
    """Traces of ``entry`` with at most ``budget`` procedure calls (✓-events).

    An execution is reported ``terminated`` when it completes within the
    budget and ``truncated`` when it attempts call number ``budget + 1``;
    the entry call itself counts. Sorted by length, then word, then flag.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    memo: Dict[Tuple[int, int], FrozenSet[tuple]] = {}
    bodies = program.procedures

    def run(e: Expr, b: int) -> FrozenSet[tuple]:
        # outcomes: (TERMINATED, word, remaining budget) or (TRUNCATED, word)
        key = (id(e), b)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(e, Emit):
            out = frozenset([(TERMINATED, (e.symbol,), b)])
        elif isinstance(e, Call):
            out = frozenset([(TRUNCATED, ())]) if b == 0 else run(bodies[e.name], b - 1)
        elif isinstance(e, Seq):
            acc = set()
            for o in run(e.first, b):
                if o[0] == TRUNCATED:
                    acc.add(o)
                    continue
                for o2 in run(e.second, o[2]):
                    if o2[0] == TRUNCATED:
                        acc.add((TRUNCATED, o[1] + o2[1]))
                    else:
                        acc.add((TERMINATED, o[1] + o2[1], o2[2]))
            out = frozenset(acc)
        else:
            out = run(e.left, b) | run(e.right, b)
        memo[key] = out
        return out

    root = Call(entry)
    results = {(o[1], o[0]) for o in run(root, budget)}
    return sorted(results, key=lambda wf: (len(wf[0]), wf[0], wf[1]))


# -- lasso search -----------------------------------------------------------------


class _Nodes:
    """Expression nodes of a program, numbered by object identity."""

    def __init__(self, program: Program):
        self.exprs: List[Expr] = []
        self._ids: Dict[int, int] = {}
        self.body: Dict[str, int] = {}
        for name, e in program.procedures.items():
            self.body[name] = self.intern(e)

    def intern(self, e: Expr) -> int:
        key = id(e)
        if key in self._ids:
            return self._ids[key]
        i = len(self.exprs)
        self._ids[key] = i
        self.exprs.append(e)
        if isinstance(e, Seq):
            self.intern(e.first)
            self.intern(e.second)
        elif isinstance(e, Choice):
            self.intern(e.left)
            self.intern(e.right)
        return i

    def step(self, config: Tuple[int, ...]) -> List[Tuple[Optional[str], Tuple[int, ...]]]:
        """Small-step successors of a stack of pending expressions (head first)."""
        if not config:
            return []
        head, rest = self.exprs[config[0]], config[1:]
        if isinstance(head, Emit):
            return [(head.symbol, rest)]
        if isinstance(head, Call):
            return [(None, (self.body[head.name],) + rest)]
        if isinstance(head, Seq):
            return [(None, (self.intern(head.first), self.intern(head.second)) + rest)]
        return [
            (None, (self.intern(head.left),) + rest),
            (None, (self.intern(head.right),) + rest),
        ]


def _bounded_paths(nodes: _Nodes, start, max_len: int, max_stack: int):
    """0-1 BFS from ``start``: each reachable config with a shortest emitted word."""
    best: Dict[tuple, Word] = {start: ()}
    order = [start]
    dq = deque([start])
    while dq:
        c = dq.popleft()
        w = best[c]
        for sym, c2 in nodes.step(c):
            if len(c2) > max_stack:
                continue
            w2 = w if sym is None else w + (sym,)
            if len(w2) > max_len or (c2 in best and len(best[c2]) <= len(w2)):
                continue
            if c2 not in best:
                order.append(c2)
            best[c2] = w2
            if sym is None:
                dq.appendleft(c2)
            else:
                dq.append(c2)
    return order, best


def _shortest_cycle(nodes: _Nodes, config, max_v: int, max_stack: int) -> Optional[Word]:
    best: Dict[tuple, Word] = {}
    dq = deque()
    for sym, c2 in nodes.step(config):
        w = () if sym is None else (sym,)
        if len(c2) <= max_stack and len(w) <= max_v and (c2 not in best or len(best[c2]) > len(w)):
            best[c2] = w
            dq.append(c2)
    while dq:
        c = dq.popleft()
        w = best[c]
        if c == config:
            return w
        for sym, c2 in nodes.step(c):
            if len(c2) > max_stack:
                continue
            w2 = w if sym is None else w + (sym,)
            if len(w2) > max_v or (c2 in best and len(best[c2]) <= len(w2)):
                continue
            best[c2] = w2
            if sym is None:
                dq.appendleft(c2)
            else:
                dq.append(c2)
    return best.get(config)


def lasso_witnesses(
    program: Program, entry: str, max_u: int = 6, max_v: int = 6, max_stack: int = 6
) -> Iterator[Tuple[Word, Word]]:
    """Yield ``(u, v)`` such that ``u·v^ω`` is a genuine infinite trace of ``entry``.

    A configuration reachable while emitting ``u`` that returns to itself
    while emitting ``v`` gives a real non-terminating run; ``v`` may be empty
    (silent divergence). One witness per configuration, in discovery order.
    """
    nodes = _Nodes(program)
    start = (nodes.intern(Call(entry)),)
    order, best = _bounded_paths(nodes, start, max_u, max_stack)
    seen = set()
    for c in order:
        v = _shortest_cycle(nodes, c, max_v, max_stack)
        if v is not None and (best[c], v) not in seen:
            seen.add((best[c], v))
            yield best[c], v


def search_lasso(
    program: Program, entry: str, max_u: int = 6, max_v: int = 6, max_stack: int = 6
) -> Optional[Tuple[Word, Word]]:
    return next(lasso_witnesses(program, entry, max_u, max_v, max_stack), None)
