"""Extended Büchi automata: finite words are read NFA-style, infinite words Büchi-style.

States are arbitrary tokens in the source text and dense indices ``0..n-1``
everywhere else; ``Automaton.state_names`` maps back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple

from .ndfs import nonempty

Word = Sequence[str]


class AutomatonError(ValueError):
    """Malformed automaton text or a word outside the alphabet."""


@dataclass(frozen=True)
class Automaton:
    state_names: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    initial: int
    finals: FrozenSet[int]
    # delta[(state, symbol)] -> frozenset of successor states
    delta: Dict[Tuple[int, str], FrozenSet[int]]

    def __post_init__(self):
        n = len(self.state_names)
        if not self.alphabet:
            raise AutomatonError("alphabet is empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate symbol in alphabet")
        if not 0 <= self.initial < n:
            raise AutomatonError("initial state out of range")
        if any(not 0 <= q < n for q in self.finals):
            raise AutomatonError("final state out of range")
        for (p, a), targets in self.delta.items():
            if not 0 <= p < n or any(not 0 <= q < n for q in targets):
                raise AutomatonError("transition endpoint out of range")
            if a not in self.alphabet:
                raise AutomatonError(f"transition symbol {a!r} not in alphabet")

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    def step(self, states: Iterable[int], symbol: str) -> FrozenSet[int]:
        out: set = set()
        for p in states:
            out |= self.delta.get((p, symbol), frozenset())
        return frozenset(out)

    def successors(self, state: int, symbol: str) -> FrozenSet[int]:
        return self.delta.get((state, symbol), frozenset())

    def check_word(self, word: Word) -> None:
        for a in word:
            if a not in self.alphabet:
                raise AutomatonError(f"symbol {a!r} not in alphabet")

    def to_text(self) -> str:
        lines = [
            "states: " + " ".join(self.state_names),
            "alphabet: " + " ".join(self.alphabet),
            "initial: " + self.state_names[self.initial],
            "final: " + " ".join(self.state_names[q] for q in sorted(self.finals)),
        ]
        for (p, a), targets in sorted(self.delta.items(), key=lambda kv: (kv[0][0], self.alphabet.index(kv[0][1]))):
            for q in sorted(targets):
                lines.append(f"trans: {self.state_names[p]} {a} {self.state_names[q]}")
        return "\n".join(lines) + "\n"


def make_automaton(
    n_states: int,
    alphabet: Sequence[str],
    transitions: Iterable[Tuple[int, str, int]],
    finals: Iterable[int],
    initial: int = 0,
) -> Automaton:
    """Build an automaton over states ``0..n_states-1`` (named by their index)."""
    delta: Dict[Tuple[int, str], set] = {}
    for p, a, q in transitions:
        delta.setdefault((p, a), set()).add(q)
    return Automaton(
        state_names=tuple(str(i) for i in range(n_states)),
        alphabet=tuple(alphabet),
        initial=initial,
        finals=frozenset(finals),
        delta={k: frozenset(v) for k, v in delta.items()},
    )


def parse_automaton(text: str) -> Automaton:
    """Parse the line-based ``.aut`` format.

    >>> aut = parse_automaton('''
    ... states: 0 1
    ... alphabet: a b
    ... initial: 0
    ... final: 1
    ... trans: 0 a 0
    ... trans: 0 b 1
    ... ''')
    >>> aut.n_states, aut.alphabet
    (2, ('a', 'b'))
    """
    names: list = []
    index: Dict[str, int] = {}
    alphabet: list = []
    initial = None
    finals: set = set()
    pending: list = []  # (lineno, p, a, q); symbols may be declared after use

    def state(tok: str, lineno: int) -> int:
        if tok not in index:
            raise AutomatonError(f"line {lineno}: undeclared state {tok!r}")
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise AutomatonError(f"line {lineno}: syntax error, expected 'key: value'")
        key = key.strip()
        toks = rest.split()
        if key == "states":
            for tok in toks:
                if tok in index:
                    raise AutomatonError(f"line {lineno}: duplicate state {tok!r}")
                index[tok] = len(names)
                names.append(tok)
        elif key == "alphabet":
            for tok in toks:
                if tok in alphabet:
                    raise AutomatonError(f"line {lineno}: duplicate symbol {tok!r}")
                alphabet.append(tok)
        elif key == "initial":
            if len(toks) != 1:
                raise AutomatonError(f"line {lineno}: syntax error, 'initial:' takes one state")
            if initial is not None:
                raise AutomatonError(f"line {lineno}: duplicate 'initial:' line")
            initial = state(toks[0], lineno)
        elif key == "final":
            finals.update(state(tok, lineno) for tok in toks)
        elif key == "trans":
            if len(toks) != 3:
                raise AutomatonError(f"line {lineno}: syntax error, 'trans:' takes <state> <symbol> <state>")
            pending.append((lineno, state(toks[0], lineno), toks[1], state(toks[2], lineno)))
        else:
            raise AutomatonError(f"line {lineno}: syntax error, unknown key {key!r}")

    if initial is None:
        raise AutomatonError("missing 'initial:' line")
    if not alphabet:
        raise AutomatonError("missing or empty 'alphabet:' line")
    delta: Dict[Tuple[int, str], set] = {}
    for lineno, p, a, q in pending:
        if a not in alphabet:
            raise AutomatonError(f"line {lineno}: undeclared symbol {a!r}")
        delta.setdefault((p, a), set()).add(q)
    return Automaton(
        state_names=tuple(names),
        alphabet=tuple(alphabet),
        initial=initial,
        finals=frozenset(finals),
        delta={k: frozenset(v) for k, v in delta.items()},
    )


def accepts_finite(aut: Automaton, word: Word) -> bool:
    aut.check_word(word)
    current = frozenset([aut.initial])
    for a in word:
        current = aut.step(current, a)
        if not current:
            return False
    return bool(current & aut.finals)


def accepts_upword(aut: Automaton, prefix: Word, period: Word) -> bool:
    """Decide whether ``prefix · period^ω`` is Büchi-accepted.

    The product graph has nodes ``(state, position)``; positions
    ``0..len(prefix)-1`` index the prefix and the remaining ones cycle
    through the period. Accepting nodes are final states inside the period.
    """
    if not period:
        raise AutomatonError("period of an ultimately periodic word must be non-empty")
    aut.check_word(prefix)
    aut.check_word(period)
    word = list(prefix) + list(period)
    m, k = len(prefix), len(period)

    def successors(node):
        q, i = node
        j = i + 1 if i + 1 < m + k else m
        return [(r, j) for r in sorted(aut.successors(q, word[i]))]

    def accepting(node):
        q, i = node
        return i >= m and q in aut.finals

    return nonempty([(aut.initial, 0)], successors, accepting)
