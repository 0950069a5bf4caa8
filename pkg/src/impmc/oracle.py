"""Brute-force upper/lower expectations by enumerating precise Markov chains.

For each time step and each state a strategy picks one vertex of that
state's credal set, giving a (time-inhomogeneous) precise chain. Pushing
the point mass at every initial state forward through each such chain and
taking the best value per initial state reproduces the upper expectations
of ``f(X_k)`` and of the time average of ``f`` over ``X_0..X_k``. The
maximising chain may differ between initial states.

Nothing here calls the operator recursion; it is an independent check.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .core import gamble
from .errors import SizeLimit, UnsupportedRow
from .operator import UpperTransitionOperator
from .rows import ProbabilityIntervals, Precise, Vacuous, VertexList, interval_row_vertices

MAX_PROFILES = 10**7
MODES = ("instant", "average")


def row_vertex_lists(T: UpperTransitionOperator) -> list[np.ndarray]:
    out = []
    for row in T.rows:
        if isinstance(row, Vacuous):
            out.append(np.eye(T.n))
        elif isinstance(row, Precise):
            out.append(row.mass[None, :])
        elif isinstance(row, VertexList):
            out.append(row.vertices)
        elif isinstance(row, ProbabilityIntervals):
            out.append(interval_row_vertices(row).vertices)
        else:
            raise UnsupportedRow(f"cannot enumerate row of type {type(row).__name__}")
    return out


def profile_count(T: UpperTransitionOperator, k: int) -> int:
    per_step = math.prod(len(v) for v in row_vertex_lists(T))
    return per_step**k


def _step_matrices(vertex_lists):
    for choice in itertools.product(*(range(len(v)) for v in vertex_lists)):
        yield np.array([v[c] for v, c in zip(vertex_lists, choice)])


def _search(D, t, k, matrices, f, acc, mode, best, sense):
    # D: distributions of X_t for every initial state (one per row).
    if t == k:
        value = D @ f if mode == "instant" else acc / (k + 1)
        np.maximum(best, sense * value, out=best)
        return
    for M in matrices:
        D_next = D @ M
        sums = D_next.sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise ValueError(f"distribution mass drifted to {sums} (bad vertex data)")
        _search(D_next, t + 1, k, matrices, f, acc + D_next @ f, mode, best, sense)


def _brute_force(T, f, k, mode, sense):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if k < 0:
        raise ValueError("k must be non-negative")
    f = gamble(f, T.n)
    vertex_lists = row_vertex_lists(T)
    per_step = math.prod(len(v) for v in vertex_lists)
    if per_step**k > MAX_PROFILES:
        raise SizeLimit(f"{per_step}**{k} strategy profiles exceed the limit of {MAX_PROFILES}")
    matrices = list(_step_matrices(vertex_lists))
    D0 = np.eye(T.n)
    best = np.full(T.n, -np.inf)
    _search(D0, 0, k, matrices, f, D0 @ f, mode, best, sense)
    return gamble(sense * best)


def brute_force_upper(T: UpperTransitionOperator, f, k: int, mode: str = "instant") -> np.ndarray:
    """Per-state maximum over all vertex strategies of ``E f(X_k)`` or of the time average."""
    return _brute_force(T, f, k, mode, 1.0)


def brute_force_lower(T: UpperTransitionOperator, f, k: int, mode: str = "instant") -> np.ndarray:
    """Per-state minimum over all vertex strategies (same enumeration as the upper)."""
    return _brute_force(T, f, k, mode, -1.0)
