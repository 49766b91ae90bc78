"""The finite monoid of word classes induced by an automaton.

Two non-empty words are equivalent when they induce the same transition
profile: the same state-to-state reachability, and the same reachability
while visiting a final state. Profiles are stored as tuples of row bitmasks,
``reach[p] >> q & 1`` meaning ``q`` is reachable from ``p``.

Class 0 is always the empty-word class. It is kept apart from every
non-empty class, even one whose profile coincides with the identity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .automaton import Automaton, AutomatonError

EPSILON = 0


@dataclass(frozen=True)
class Profile:
    reach: Tuple[int, ...]
    reach_final: Tuple[int, ...]

    def __mul__(self, other: "Profile") -> "Profile":
        return profile_mul(self, other)

    def pairs(self, final: bool = False) -> List[Tuple[int, int]]:
        rows = self.reach_final if final else self.reach
        return [(p, q) for p, row in enumerate(rows) for q in range(len(rows)) if row >> q & 1]


def _compose(rows1: Sequence[int], rows2: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for row in rows1:
        acc = 0
        q = 0
        while row:
            if row & 1:
                acc |= rows2[q]
            row >>= 1
            q += 1
        out.append(acc)
    return tuple(out)


def profile_mul(p1: Profile, p2: Profile) -> Profile:
    if len(p1.reach) != len(p2.reach):
        raise ValueError("profiles over different state sets")
    reach = _compose(p1.reach, p2.reach)
    f1 = _compose(p1.reach_final, p2.reach)
    f2 = _compose(p1.reach, p2.reach_final)
    return Profile(reach, tuple(x | y for x, y in zip(f1, f2)))


def identity_profile(aut: Automaton) -> Profile:
    """Profile of the empty word: the identity, final-visiting only at final states."""
    n = aut.n_states
    return Profile(
        tuple(1 << p for p in range(n)),
        tuple((1 << p) if p in aut.finals else 0 for p in range(n)),
    )


def letter_profile(aut: Automaton, symbol: str) -> Profile:
    if symbol not in aut.alphabet:
        raise AutomatonError(f"symbol {symbol!r} not in alphabet")
    fmask = sum(1 << q for q in aut.finals)
    reach, reach_final = [], []
    for p in range(aut.n_states):
        row = sum(1 << q for q in aut.successors(p, symbol))
        reach.append(row)
        reach_final.append(row if p in aut.finals else row & fmask)
    return Profile(tuple(reach), tuple(reach_final))


@dataclass
class ClassTable:
    automaton: Automaton
    profiles: List[Profile]
    representatives: List[Tuple[str, ...]]
    mul: List[List[int]]
    letter: Dict[str, int]
    _by_profile: Dict[Profile, int] = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.profiles)

    def is_epsilon(self, c: int) -> bool:
        return c == EPSILON

    def rep(self, c: int) -> str:
        return "".join(self.representatives[c])

    def class_of_profile(self, profile: Profile) -> int:
        """Non-empty class with the given profile; ``KeyError`` if none."""
        return self._by_profile[profile]

    def class_of_word(self, word: Sequence[str]) -> int:
        c = EPSILON
        for a in word:
            try:
                c = self.mul[c][self.letter[a]]
            except KeyError:
                raise AutomatonError(f"symbol {a!r} not in alphabet") from None
        return c

    def power(self, c: int, k: int) -> int:
        out = EPSILON
        for _ in range(k):
            out = self.mul[out][c]
        return out

    def idempotent_exponent(self, c: int) -> int:
        """Least ``k >= 1`` with ``c^k`` idempotent."""
        x, k = c, 1
        while self.mul[x][x] != x:
            x = self.mul[x][c]
            k += 1
        return k

    def idempotent_power(self, c: int) -> int:
        return self.power(c, self.idempotent_exponent(c))

    def is_idempotent(self, c: int) -> bool:
        return self.mul[c][c] == c

    def abstract_of_upword(self, prefix: Sequence[str], period: Sequence[str]) -> Tuple[int, int]:
        """Pair ``(C, D)`` with ``CD = C``, ``DD = D`` and ``prefix·period^ω`` in ``C·D^ω``.

        With ``m = [period]`` and ``k`` its idempotent exponent, the word is
        rewritten as ``(prefix·period^k)·(period^k)^ω``.
        """
        u = self.class_of_word(prefix)
        if not period:
            return u, EPSILON
        k = self.idempotent_exponent(self.class_of_word(period))
        d = self.class_of_word(list(period) * k)
        return self.mul[u][d], d


def build_class_table(aut: Automaton) -> ClassTable:
    """Close the letter profiles under multiplication, breadth first.

    Words are explored in shortlex order (alphabet order as declared), so
    the first word reaching a profile is its shortest, lexicographically
    least representative.
    """
    profiles: List[Profile] = [identity_profile(aut)]
    reps: List[Tuple[str, ...]] = [()]
    by_profile: Dict[Profile, int] = {}
    letters = [letter_profile(aut, a) for a in aut.alphabet]
    # right[c][i] = class of rep(c)·alphabet[i]; filled during the search
    right: List[List[int]] = [[0] * len(letters)]
    parent_of: List[int] = [EPSILON]

    queue = deque([EPSILON])
    while queue:
        c = queue.popleft()
        for i, lp in enumerate(letters):
            prof = lp if c == EPSILON else profile_mul(profiles[c], lp)
            d = by_profile.get(prof)
            if d is None:
                d = len(profiles)
                by_profile[prof] = d
                profiles.append(prof)
                reps.append(reps[c] + (aut.alphabet[i],))
                parent_of.append(c)
                right.append([0] * len(letters))
                queue.append(d)
            right[c][i] = d

    letter = {a: right[EPSILON][i] for i, a in enumerate(aut.alphabet)}
    n = len(profiles)
    mul = [[0] * n for _ in range(n)]
    for c in range(n):
        mul[EPSILON][c] = c
        mul[c][EPSILON] = c
    # rep(d) = rep(parent)·a, hence c·d = (c·parent)·a; parents precede children.
    index = {a: i for i, a in enumerate(aut.alphabet)}
    for c in range(1, n):
        row = mul[c]
        for d in range(1, n):
            parent = parent_of[d]
            row[d] = right[row[parent]][index[reps[d][-1]]]
    return ClassTable(aut, profiles, reps, mul, letter, by_profile)
