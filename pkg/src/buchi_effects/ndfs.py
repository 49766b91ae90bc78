"""Nested depth-first search for Büchi emptiness on implicitly given graphs.

Graphs are described by an iterable of initial nodes, a successor function
and an acceptance predicate. Nodes must be hashable. Both searches are
iterative so deep product graphs do not hit the recursion limit.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Optional, Sequence, Tuple, TypeVar

N = TypeVar("N", bound=Hashable)

Lasso = Tuple[Sequence[N], Sequence[N]]


def find_lasso(
    initials: Iterable[N],
    successors: Callable[[N], Iterable[N]],
    accepting: Callable[[N], bool],
) -> Optional[Lasso]:
    """Return ``(stem, cycle)`` for an accepting lasso, or ``None``.

    ``stem`` runs from an initial node to an accepting node ``s`` (inclusive);
    ``cycle`` is the path from a successor of ``s`` back to ``s`` (inclusive),
    so ``stem + cycle * k`` is a valid path for every ``k``.
    """
    visited: set = set()
    flagged: set = set()

    for root in initials:
        if root in visited:
            continue
        visited.add(root)
        path = [root]
        stack = [iter(successors(root))]
        while stack:
            advanced = False
            for nxt in stack[-1]:
                if nxt not in visited:
                    visited.add(nxt)
                    path.append(nxt)
                    stack.append(iter(successors(nxt)))
                    advanced = True
                    break
            if advanced:
                continue
            node = path[-1]
            if accepting(node):
                cycle = _inner(node, successors, flagged)
                if cycle is not None:
                    return list(path), cycle
            stack.pop()
            path.pop()
    return None


def _inner(seed, successors, flagged) -> Optional[list]:
    # Nodes flagged by an earlier inner search cannot reach any later seed.
    path: list = []
    stack = [iter(successors(seed))]
    while stack:
        advanced = False
        for nxt in stack[-1]:
            if nxt == seed:
                path.append(nxt)
                return path
            if nxt not in flagged:
                flagged.add(nxt)
                path.append(nxt)
                stack.append(iter(successors(nxt)))
                advanced = True
                break
        if not advanced:
            stack.pop()
            if path:
                path.pop()
    return None


def nonempty(
    initials: Iterable[N],
    successors: Callable[[N], Iterable[N]],
    accepting: Callable[[N], bool],
) -> bool:
    return find_lasso(initials, successors, accepting) is not None


def generalized_nonempty(
    initials: Iterable[N],
    successors: Callable[[N], Iterable[N]],
    acceptance: Sequence[Callable[[N], bool]],
) -> bool:
    """Whether some reachable cycle visits every acceptance set.

    Iterative Tarjan: a non-trivial strongly connected component meeting
    all acceptance sets contains such a cycle.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    for root in initials:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)), False)]
        while work:
            node, it, looped = work[-1]
            advanced = False
            for nxt in it:
                if nxt == node:
                    looped = True
                    work[-1] = (node, it, True)
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(successors(nxt)), False))
                    advanced = True
                    break
                if nxt in on_stack and index[nxt] < low[node]:
                    low[node] = index[nxt]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == node:
                        break
                if (len(comp) > 1 or looped) and all(any(acc(x) for x in comp) for acc in acceptance):
                    return True
    return False
