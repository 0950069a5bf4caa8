"""Upper accessibility graph, communication classes, top class, TCR and TCA."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Optional

import numpy as np

from .core import StateSpace
from .operator import UpperTransitionOperator
from .rows import lower_event_positive, upper_event_positive


@dataclass(frozen=True, eq=False)
class AccessibilityGraph:
    """Edge ``i -> j`` iff the upper probability of jumping from ``i`` to ``j`` is positive."""

    space: StateSpace
    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        n = self.space.n
        if adj.shape != (n, n):
            raise ValueError(f"adjacency must be {n}x{n}, got {adj.shape}")
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return self.space.n

    def successors(self, i: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.adjacency[i])]

    def edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.adjacency))]

    def reachability(self) -> np.ndarray:
        """Reflexive-transitive closure: ``R[i, j]`` iff ``i -> j``."""
        reach = self.adjacency | np.eye(self.n, dtype=bool)
        # Warshall; n is small.
        for k in range(self.n):
            reach = reach | (reach[:, [k]] & reach[[k], :])
        return reach


def build_upper_graph(T: UpperTransitionOperator) -> AccessibilityGraph:
    n = T.n
    adj = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(T.rows):
        for j in range(n):
            adj[i, j] = upper_event_positive(row, (j,), n)
    return AccessibilityGraph(T.space, adj)


@dataclass(frozen=True)
class ClassDecomposition:
    """Communication classes of a graph and their accessibility order.

    ``classes`` are tuples of state indices, listed in order of their
    smallest member. ``order`` holds the pairs ``(a, b)`` of class positions
    with class ``b`` accessible from class ``a`` (reflexive). ``maximal``
    lists the classes from which no other class is accessible; ``top`` is
    the unique maximal class when there is exactly one.
    """

    classes: tuple[tuple[int, ...], ...]
    order: frozenset
    maximal: tuple[tuple[int, ...], ...]
    top: Optional[tuple[int, ...]]

    def class_of(self, state: int) -> tuple[int, ...]:
        for c in self.classes:
            if state in c:
                return c
        raise KeyError(state)


def strongly_connected_components(adjacency: np.ndarray) -> list[list[int]]:
    """Iterative Tarjan; returns components in reverse topological order."""
    n = adjacency.shape[0]
    succ = [list(np.flatnonzero(adjacency[i])) for i in range(n)]
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for p in range(pos, len(succ[v])):
                w = int(succ[v][p])
                if index[w] is None:
                    work.append((v, p + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def decompose(graph: AccessibilityGraph) -> ClassDecomposition:
    comps = sorted(strongly_connected_components(graph.adjacency), key=min)
    classes = tuple(tuple(c) for c in comps)
    reach = graph.reachability()
    order = frozenset(
        (a, b)
        for a, ca in enumerate(classes)
        for b, cb in enumerate(classes)
        if reach[ca[0], cb[0]]
    )
    maximal = tuple(
        c for a, c in enumerate(classes)
        if not any((a, b) in order for b in range(len(classes)) if b != a)
    )
    top = maximal[0] if len(maximal) == 1 else None
    return ClassDecomposition(classes, order, maximal, top)


def top_class(graph: AccessibilityGraph) -> Optional[tuple[int, ...]]:
    """States accessible from every state, or ``None`` if there are none."""
    reach = graph.reachability()
    top = tuple(int(j) for j in np.flatnonzero(reach.all(axis=0)))
    return top or None


def _bool_matmul(a, b):
    return (a.astype(np.int64) @ b.astype(np.int64)) > 0


def bool_power(adjacency: np.ndarray, k: int) -> np.ndarray:
    """Boolean ``k``-th power by repeated squaring."""
    n = adjacency.shape[0]
    result = np.eye(n, dtype=bool)
    base = np.array(adjacency, dtype=bool)
    while k:
        if k & 1:
            result = _bool_matmul(result, base)
        base = _bool_matmul(base, base)
        k >>= 1
    return result


def path_of_length_exists(graph: AccessibilityGraph, x: int, y: int, k: int) -> bool:
    """Whether a directed walk with exactly ``k >= 1`` edges leads from ``x`` to ``y``."""
    if k < 1:
        raise ValueError("path length must be at least 1")
    return bool(bool_power(graph.adjacency, k)[x, y])


def class_period(graph: AccessibilityGraph, members) -> int:
    """Gcd of the cycle lengths inside a communication class.

    Returns 0 for a singleton class without a self-loop, where the period
    is undefined.
    """
    members = sorted(members)
    inside = set(members)
    root = members[0]
    level = {root: 0}
    queue = deque([root])
    period = 0
    while queue:
        u = queue.popleft()
        for v in graph.successors(u):
            if v not in inside:
                continue
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
            else:
                period = gcd(period, level[u] + 1 - level[v])
    return abs(period)


def is_tcr(T: UpperTransitionOperator, graph: AccessibilityGraph | None = None) -> bool:
    """Top class regular: a top class exists and it is aperiodic."""
    graph = graph or build_upper_graph(T)
    top = decompose(graph).top
    return top is not None and class_period(graph, top) == 1


def regularity_by_powers(graph: AccessibilityGraph, states) -> bool:
    """Constructive regularity check via the eventually periodic Boolean powers.

    True iff for every ``x`` in ``states`` there is ``k*`` such that every
    state has a walk of length exactly ``k`` into ``x`` for all ``k >= k*``.
    The power sequence ``A, A^2, ...`` is eventually periodic; once a
    repeat is seen, the condition is checked on the periodic tail.
    """
    states = list(states)
    seen = {}
    powers = []
    current = np.array(graph.adjacency, dtype=bool)
    while True:
        key = current.tobytes()
        if key in seen:
            tail = powers[seen[key]:]
            return all(p[:, states].all() for p in tail)
        seen[key] = len(powers)
        powers.append(current)
        current = _bool_matmul(current, graph.adjacency)


def absorbing_sets(T: UpperTransitionOperator, top) -> list[frozenset]:
    """Growing sets ``B_0 = top``, ``B_{m+1} = B_m + {x : lower P(B_m | x) > 0}``.

    ``B_m`` is exactly the set of states from which the top class is
    reached within ``m`` steps with positive lower probability. The list
    stops at the first repeat (at most ``n`` sets).
    """
    n = T.n
    B = frozenset(top)
    chain = [B]
    while True:
        grown = B | {x for x in range(n) if lower_event_positive(T.rows[x], B, n)}
        if grown == B:
            return chain
        B = frozenset(grown)
        chain.append(B)


def is_tca(T: UpperTransitionOperator, graph: AccessibilityGraph | None = None) -> bool:
    """Top class absorbing: from every state the top class is eventually
    entered with positive lower probability."""
    graph = graph or build_upper_graph(T)
    top = decompose(graph).top
    if top is None:
        return False
    return len(absorbing_sets(T, top)[-1]) == T.n


def trapping_set(T: UpperTransitionOperator, top) -> frozenset:
    """States outside the final absorbing set.

    Non-empty exactly when the top class is not absorbing; every state in
    it can stay in it forever, so its indicator ``1_A`` satisfies
    ``1_A <= T 1_A``.
    """
    return frozenset(range(T.n)) - absorbing_sets(T, top)[-1]
