"""Abstract domains over the class monoid.

``FinAbs`` values are frozensets of class ids and abstract sets of finite
words. ``InfAbs`` values are frozensets of pair ids; a pair ``(C, D)`` with
``CD = C`` and ``DD = D`` stands for the language ``C·D^ω`` (just ``C`` when
``D`` is the empty-word class). Infinite abstractions are kept *closed*:
whenever a member's language meets another pair's language, that pair is a
member too.

Concretisations are never built; they are queried through representative
words and witnesses instead.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .automaton import Automaton
from .classes import EPSILON, ClassTable, build_class_table
from .ndfs import generalized_nonempty, nonempty

FinAbs = FrozenSet[int]
InfAbs = FrozenSet[int]

# Re-verify closedness of every union / mixed concatenation result. Costly;
# switched on by the test-suite.
DEBUG_CHECKS = False


@dataclass
class PairTable:
    table: ClassTable
    pairs: List[Tuple[int, int]]
    index: Dict[Tuple[int, int], int]
    _overlap: Dict[int, FrozenSet[int]] = field(default_factory=dict, repr=False)
    _factors: Optional[Dict[int, List[Tuple[int, int]]]] = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _blocks: Dict[Tuple[int, int], list] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def is_finite(self, p: int) -> bool:
        return self.pairs[p][1] == EPSILON

    def infinite_ids(self) -> List[int]:
        return [p for p, (_, d) in enumerate(self.pairs) if d != EPSILON]

    def overlap(self, p: int, q: int) -> bool:
        """Whether the languages of pairs ``p`` and ``q`` intersect.

        For infinite pairs, ``C1·D1^ω`` meets ``C2·D2^ω`` iff there are
        classes ``a, b`` with ``ab = D1``, ``ba = D2`` and ``C1·a = C2``.
        If so, ``rep(C1)·(rep(a)·rep(b))^ω`` lies in both. Conversely,
        alternate the block boundaries of a common word and apply Ramsey's
        theorem to the classes of the segments in between.
        """
        if p == q:
            return True
        (c1, d1), (c2, d2) = self.pairs[p], self.pairs[q]
        if d1 == EPSILON and d2 == EPSILON:
            return c1 == c2
        if d1 == EPSILON or d2 == EPSILON:
            return False
        return q in self.neighbours(p)

    def neighbours(self, p: int) -> FrozenSet[int]:
        """Infinite pairs overlapping the infinite pair ``p`` (``p`` included)."""
        with self._lock:
            hit = self._overlap.get(p)
        if hit is None:
            c1, d1 = self.pairs[p]
            mul = self.table.mul
            found = set()
            for a, b in self._factorizations().get(d1, ()):
                q = self.index.get((mul[c1][a], mul[b][a]))
                if q is not None:
                    found.add(q)
            hit = frozenset(found)
            with self._lock:
                self._overlap[p] = hit
        return hit

    def _factorizations(self) -> Dict[int, List[Tuple[int, int]]]:
        # d -> all (a, b) with a·b = d, for idempotent non-empty d
        with self._lock:
            if self._factors is None:
                mul = self.table.mul
                targets = {d for _, d in self.pairs if d != EPSILON}
                out: Dict[int, List[Tuple[int, int]]] = {d: [] for d in targets}
                for a, row in enumerate(mul):
                    for b, d in enumerate(row):
                        if d in out:
                            out[d].append((a, b))
                self._factors = out
            return self._factors

    def overlap_witness(self, p: int, q: int) -> Optional[Tuple[int, int]]:
        """Classes ``(a, b)`` certifying that two infinite pairs overlap."""
        (c1, d1), (c2, d2) = self.pairs[p], self.pairs[q]
        if d1 == EPSILON or d2 == EPSILON:
            return None
        mul = self.table.mul
        n = len(mul)
        for a in range(n):
            if mul[c1][a] != c2:
                continue
            row = mul[a]
            for b in range(n):
                if row[b] == d1 and mul[b][a] == d2:
                    return a, b
        return None

    def overlap_by_product(self, p: int, q: int) -> bool:
        """Reference decision for infinite pairs: emptiness of the block-automaton product."""
        return _product_nonempty(self.table, self._block_table(self.pairs[p]), self._block_table(self.pairs[q]))

    def _block_table(self, pair: Tuple[int, int]) -> List[List[Tuple[int, ...]]]:
        with self._lock:
            rows = self._blocks.get(pair)
        if rows is None:
            rows = _pair_table(self.table, pair)
            with self._lock:
                self._blocks[pair] = rows
        return rows


def build_pairs(table: ClassTable) -> PairTable:
    mul = table.mul
    pairs = [
        (c, d)
        for c in range(len(table))
        for d in range(len(table))
        if mul[c][d] == c and mul[d][d] == d
    ]
    return PairTable(table, pairs, {pd: i for i, pd in enumerate(pairs)})


# -- lasso automata over the Cayley graph ------------------------------------
#
# A pair (C, D) with D non-empty is recognised by guessing block boundaries:
# state (phase, m, done) has read a block prefix of class m; phase 0 is the
# C-block, phase 1 the D-blocks; ``done`` marks that the last step closed a
# D-block. Büchi acceptance: ``done`` infinitely often.

_START = (0, EPSILON, False)


def _pair_step(table: ClassTable, pair: Tuple[int, int], state, letter_class: int):
    phase, m, _ = state
    c, d = pair
    m2 = table.mul[m][letter_class]
    out = [(phase, m2, False)]
    if phase == 0 and m2 == c:
        out.append((1, EPSILON, False))
    elif phase == 1 and m2 == d:
        out.append((1, EPSILON, True))
    return out


def _pair_run(table: ClassTable, pair, word: Sequence[str]) -> set:
    states = {_START}
    for a in word:
        lc = table.letter[a]
        states = {t for s in states for t in _pair_step(table, pair, s, lc)}
    return states


def _pair_nonempty_from(table: ClassTable, pair, starts: Iterable) -> bool:
    letters = [table.letter[a] for a in table.automaton.alphabet]

    def successors(s):
        for lc in letters:
            yield from _pair_step(table, pair, s, lc)

    return nonempty(sorted(starts), successors, lambda s: s[2])


def _pair_table(table: ClassTable, pair: Tuple[int, int]) -> List[List[Tuple[int, ...]]]:
    """Integer transition table of the block automaton of ``(C, D)``.

    States ``m`` (``m < n``) read the C-block so far, ``n + m`` a D-block so
    far; ``2n`` is the block-completed state and behaves like ``n + ε``.
    """
    n = len(table)
    c, d = pair
    mul = table.mul
    letters = [table.letter[a] for a in table.automaton.alphabet]
    rows: List[List[Tuple[int, ...]]] = []
    for s in range(2 * n + 1):
        phase, m = (0, s) if s < n else (1, s - n if s < 2 * n else EPSILON)
        row = []
        for lc in letters:
            m2 = mul[m][lc]
            if phase == 0:
                row.append((m2, n) if m2 == c else (m2,))
            else:
                row.append((n + m2, 2 * n) if m2 == d else (n + m2,))
        rows.append(row)
    return rows


def _product_nonempty(table: ClassTable, t1, t2) -> bool:
    """Emptiness of ``C1·D1^ω ∩ C2·D2^ω``.

    Both block automata run in lockstep; the intersection is non-empty iff
    the product has a reachable cycle on which both sides complete D-blocks.
    """
    width = len(t1)
    done = width - 1
    k = len(table.automaton.alphabet)

    def successors(node):
        s1, s2 = divmod(node, width)
        r1, r2 = t1[s1], t2[s2]
        out = set()
        for i in range(k):
            for x in r1[i]:
                for y in r2[i]:
                    out.add(x * width + y)
        return sorted(out)

    return generalized_nonempty(
        [EPSILON * width + EPSILON],
        successors,
        [lambda node: node // width == done, lambda node: node % width == done],
    )


class BuchiDomain:
    """Class monoid, pair table and the abstract operators for one policy."""

    def __init__(self, aut: Automaton, table: Optional[ClassTable] = None):
        self.automaton = aut
        self.table = table if table is not None else build_class_table(aut)
        self.pairs = build_pairs(self.table)
        self._accept_cls: Dict[int, bool] = {}

    # -- naming helpers -------------------------------------------------------

    def cls(self, word: str) -> int:
        return self.table.class_of_word(word)

    def pair(self, c_word: str, d_word: str) -> int:
        """Pair id of ``([c_word], [d_word])``; ``KeyError`` if not a valid pair."""
        return self.pairs.index[(self.cls(c_word), self.cls(d_word))]

    def pair_witness(self, p: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        """``(u, v)`` with ``u·v^ω`` (or ``u`` when ``v`` is empty) in the pair's language."""
        c, d = self.pairs.pairs[p]
        reps = self.table.representatives
        if c == d:
            # D idempotent, so D^ω = D·D^ω and the stem can be dropped
            return (), reps[d]
        return reps[c], reps[d]

    # -- finite words ---------------------------------------------------------

    def alpha_fin(self, words: Iterable[Sequence[str]]) -> FinAbs:
        return frozenset(self.table.class_of_word(w) for w in words)

    @staticmethod
    def fin_union(u1: FinAbs, u2: FinAbs) -> FinAbs:
        return u1 | u2

    def fin_concat(self, u1: FinAbs, u2: FinAbs) -> FinAbs:
        mul = self.table.mul
        return frozenset(mul[a][b] for a in u1 for b in u2)

    def fin_star(self, u: FinAbs) -> FinAbs:
        mul = self.table.mul
        result = {EPSILON}
        frontier = [EPSILON]
        while frontier:
            nxt = []
            for x in frontier:
                for a in u:
                    y = mul[a][x]
                    if y not in result:
                        result.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(result)

    def semigroup(self, u: FinAbs) -> FrozenSet[int]:
        """Classes of non-empty products of non-empty members of ``u``."""
        gens = [a for a in u if a != EPSILON]
        mul = self.table.mul
        result = set(gens)
        frontier = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for a in gens:
                    y = mul[x][a]
                    if y not in result:
                        result.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(result)

    # -- finite and infinite words --------------------------------------------

    def embed(self, u: FinAbs) -> InfAbs:
        """View a set of classes as the pairs ``(C, [ε])``."""
        return frozenset(self.pairs.index[(c, EPSILON)] for c in u)

    def close(self, ps: Iterable[int]) -> InfAbs:
        result = set(ps)
        work = deque(p for p in sorted(result) if not self.pairs.is_finite(p))
        while work:
            p = work.popleft()
            for q in sorted(self.pairs.neighbours(p) - result):
                result.add(q)
                work.append(q)
        return frozenset(result)

    def is_closed(self, v: InfAbs) -> bool:
        return all(self.pairs.neighbours(p) <= v for p in v if not self.pairs.is_finite(p))

    def mixed_concat(self, u: FinAbs, v: InfAbs) -> InfAbs:
        mul = self.table.mul
        index, pairs = self.pairs.index, self.pairs.pairs
        out = frozenset(index[(mul[a][pairs[p][0]], pairs[p][1])] for a in u for p in v)
        if DEBUG_CHECKS:
            assert self.is_closed(out), "concatenation result not closed"
        return out

    def inf_union(self, v1: InfAbs, v2: InfAbs) -> InfAbs:
        out = v1 | v2
        if DEBUG_CHECKS:
            assert self.is_closed(out), "union result not closed"
        return out

    def omega(self, u: FinAbs) -> InfAbs:
        """Abstraction of ``γ(u)^ω``: infinite products of member words.

        Infinite products land in ``X·Y^ω`` for ``X, Y`` in the semigroup
        generated by ``u``; when ``[ε]`` is a member, the finite products
        (the monoid generated by ``u``) are included as well.
        """
        s = self.semigroup(u)
        mul = self.table.mul
        seeds = {
            self.pairs.index[(x, y)]
            for x in s
            for y in s
            if mul[y][y] == y and mul[x][y] == x
        }
        if EPSILON in u:
            seeds |= {self.pairs.index[(c, EPSILON)] for c in s | {EPSILON}}
        return self.close(seeds)

    # -- acceptance -------------------------------------------------------------

    def class_accepted(self, c: int) -> bool:
        hit = self._accept_cls.get(c)
        if hit is None:
            aut = self.automaton
            if c == EPSILON:
                hit = aut.initial in aut.finals
            else:
                fmask = sum(1 << q for q in aut.finals)
                hit = bool(self.table.profiles[c].reach[aut.initial] & fmask)
            self._accept_cls[c] = hit
        return hit

    def pair_accepted(self, p: int) -> bool:
        c, d = self.pairs.pairs[p]
        if d == EPSILON:
            return self.class_accepted(c)
        q0 = self.automaton.initial
        starts = (1 << q0) if c == EPSILON else self.table.profiles[c].reach[q0]
        loops = self.table.profiles[d].reach_final
        return any(starts >> q & 1 and loops[q] >> q & 1 for q in range(self.automaton.n_states))

    def fin_accepted(self, u: FinAbs) -> bool:
        return all(self.class_accepted(c) for c in u)

    def inf_accepted(self, v: InfAbs) -> bool:
        return all(self.pair_accepted(p) for p in v)

    def accepted_classes(self) -> FinAbs:
        return frozenset(c for c in range(len(self.table)) if self.class_accepted(c))

    def accepted_pairs(self) -> InfAbs:
        return frozenset(p for p in range(len(self.pairs)) if self.pair_accepted(p))

    # -- prefixes ---------------------------------------------------------------

    def feasible_prefix(self, word: Sequence[str], v: InfAbs) -> bool:
        """Whether ``word`` is a prefix of some word in the concretisation of ``v``."""
        table = self.table
        table.automaton.check_word(word)
        start = table.class_of_word(word)
        reachable: Optional[FrozenSet[int]] = None
        for p in sorted(v):
            c, d = self.pairs.pairs[p]
            if d == EPSILON:
                if reachable is None:
                    reachable = self._right_orbit(start)
                if c in reachable:
                    return True
            else:
                states = _pair_run(table, (c, d), word)
                if states and _pair_nonempty_from(table, (c, d), states):
                    return True
        return False

    def _right_orbit(self, c: int) -> FrozenSet[int]:
        # classes [w·z] for all words z, including z = ε
        seen = {c}
        frontier = [c]
        letters = list(self.table.letter.values())
        while frontier:
            nxt = []
            for x in frontier:
                for lc in letters:
                    y = self.table.mul[x][lc]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    # -- presentation -----------------------------------------------------------

    def pair_names(self, v: Iterable[int]) -> List[Tuple[str, str]]:
        reps = self.table.representatives
        return sorted(("".join(reps[c]), "".join(reps[d])) for c, d in (self.pairs.pairs[p] for p in v))

    def class_names(self, u: Iterable[int]) -> List[str]:
        return sorted(self.table.rep(c) for c in u)

    def iter_pairs(self) -> Iterator[Tuple[int, Tuple[int, int]]]:
        return enumerate(self.pairs.pairs)
