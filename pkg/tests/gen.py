"""Seeded generators for randomized automata, programs and words."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Sequence, Tuple

from buchi_effects.automaton import Automaton, make_automaton
from buchi_effects.classes import build_class_table
from buchi_effects.lang import Call, Choice, Emit, Expr, Program, Seq
from buchi_effects.lattice import BuchiDomain

SEED = 20240611
ALPHABETS = (("a",), ("a", "b"), ("a", "b", "c"))
# Random automata occasionally have monoids with over a thousand classes.
# Property runs skip those so the pairwise overlap checks stay desk-scale.
MAX_CLASSES = 120


def random_automaton(rng: random.Random, max_states: int = 4, max_letters: int = 3) -> Automaton:
    n = rng.randint(1, max_states)
    alphabet = ALPHABETS[rng.randint(1, max_letters) - 1]
    density = rng.choice((0.2, 0.35, 0.5))
    trans = [(p, a, q) for p in range(n) for a in alphabet for q in range(n) if rng.random() < density]
    finals = [q for q in range(n) if rng.random() < 0.5]
    return make_automaton(n, alphabet, trans, finals)


def automata(count: int, seed: int = SEED, max_states: int = 4, max_classes: int = MAX_CLASSES) -> Iterator[Automaton]:
    """``count`` random automata whose class monoid has at most ``max_classes`` elements."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        aut = random_automaton(rng, max_states)
        if len(build_class_table(aut)) <= max_classes:
            made += 1
            yield aut


def domains(count: int, seed: int = SEED, **kw) -> Iterator[Tuple[random.Random, BuchiDomain]]:
    rng = random.Random(seed + 1)
    for aut in automata(count, seed, **kw):
        yield rng, BuchiDomain(aut)


def random_word(rng: random.Random, alphabet: Sequence[str], max_len: int) -> Tuple[str, ...]:
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


def all_words(alphabet: Sequence[str], max_len: int) -> Iterator[Tuple[str, ...]]:
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def random_expr(rng: random.Random, names: Sequence[str], alphabet: Sequence[str], depth: int) -> Expr:
    if depth <= 1 or rng.random() < 0.3:
        if rng.random() < 0.55:
            return Emit(rng.choice(alphabet))
        return Call(rng.choice(names))
    left = random_expr(rng, names, alphabet, depth - 1)
    right = random_expr(rng, names, alphabet, depth - 1)
    return Seq(left, right) if rng.random() < 0.55 else Choice(left, right)


def random_program(rng: random.Random, alphabet: Sequence[str], max_procs: int = 4, depth: int = 4) -> Program:
    names = [f"p{i}" for i in range(rng.randint(1, max_procs))]
    return Program({f: random_expr(rng, names, alphabet, depth) for f in names})


def programs(count: int, alphabet: Sequence[str], seed: int = SEED, **kw) -> List[Program]:
    rng = random.Random(seed + 7)
    return [random_program(rng, alphabet, **kw) for _ in range(count)]
