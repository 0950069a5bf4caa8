"""Random upper transition operators for property tests and fixtures.

Masses and interval bounds are multiples of ``1/grid`` with ``grid`` a power
of two, so every entry and every partial sum is exact in binary floating
point. Supports are random, which produces the full range of graph
structures (transient states, several maximal classes, periodic classes,
non-absorbing top classes).
"""

from __future__ import annotations

import numpy as np

from .core import StateSpace
from .operator import UpperTransitionOperator
from .rows import Precise, ProbabilityIntervals, Vacuous, VertexList

KINDS = ("precise", "vertices", "intervals", "vacuous")


def _random_support(rng, n, p_keep):
    keep = rng.random(n) < p_keep
    if not keep.any():
        keep[rng.integers(n)] = True
    return np.flatnonzero(keep)


def random_mass(rng, n, grid=16, p_keep=0.6):
    """A mass function on a random support with entries in ``{1/grid, 2/grid, ...}``."""
    support = _random_support(rng, n, p_keep)
    if grid < len(support):
        support = support[:grid]
    units = np.ones(len(support), dtype=int)
    extra = grid - len(support)
    if extra:
        units += rng.multinomial(extra, rng.dirichlet(np.ones(len(support))))
    p = np.zeros(n)
    p[support] = units / grid
    return p


def random_intervals(rng, n, grid=16, p_keep=0.6):
    """Intervals around a random centre mass; always a nonempty credal set."""
    centre = random_mass(rng, n, grid, p_keep)
    support = centre > 0
    width = rng.integers(0, 4, n) / grid
    lower = np.where(support, np.maximum(centre - width, 0.0), 0.0)
    upper = np.where(support, np.minimum(centre + width, 1.0), 0.0)
    # occasionally open an extra state with zero lower bound
    extra = (~support) & (rng.random(n) < 0.2)
    upper[extra] = rng.integers(1, 4, int(extra.sum())) / grid
    return ProbabilityIntervals(lower, upper)


def random_row(rng, n, kind, grid=16, p_keep=0.6, max_vertices=3):
    if kind == "precise":
        return Precise(random_mass(rng, n, grid, p_keep))
    if kind == "vertices":
        m = int(rng.integers(1, max_vertices + 1))
        return VertexList(np.array([random_mass(rng, n, grid, p_keep) for _ in range(m)]))
    if kind == "intervals":
        return random_intervals(rng, n, grid, p_keep)
    if kind == "vacuous":
        return Vacuous()
    raise ValueError(f"unknown row kind {kind!r}")


def random_operator(rng, n, kinds=("precise", "vertices", "intervals"), weights=None,
                    grid=16, p_keep=0.6, max_vertices=3, vacuous_rate=0.05):
    """Operator with each row's representation drawn from ``kinds``.

    A row is made vacuous with probability ``vacuous_rate`` regardless of
    ``kinds``; pass 0 to exclude vacuous rows.
    """
    rows = []
    for _ in range(n):
        if rng.random() < vacuous_rate:
            rows.append(Vacuous())
            continue
        kind = kinds[rng.choice(len(kinds), p=weights)]
        rows.append(random_row(rng, n, kind, grid, p_keep, max_vertices))
    return UpperTransitionOperator(StateSpace.of_size(n), rows)


def random_vertex_operator(rng, n, max_vertices=2, grid=16, p_keep=0.6):
    """Operator whose rows are all vertex lists with at most ``max_vertices`` entries."""
    rows = [random_row(rng, n, "vertices", grid, p_keep, max_vertices) for _ in range(n)]
    return UpperTransitionOperator(StateSpace.of_size(n), rows)
