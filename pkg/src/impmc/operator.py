"""Upper transition operators, their iterates and expected time averages."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import StateSpace, gamble
from .errors import DimensionMismatch, InvalidRow, NotMaximalClass
from .rows import (
    Precise,
    RowCredalSet,
    VertexList,
    lower_row_expectation,
    upper_row_expectation,
    validate_row,
)


class UpperTransitionOperator:
    """Upper envelope of a separately specified set of transition matrices.

    Parameters
    ----------
    space : StateSpace or int
        The state space, or its size (labels then default to ``x0, x1, ...``).
    rows : sequence of row credal sets
        ``rows[i]`` is the credal set of the state with index ``i``.
    check : bool
        Run :func:`validate_row` on every row. Only self-tests that need a
        deliberately broken operator should pass ``False``.
    """

    def __init__(self, space, rows: Sequence[RowCredalSet], check: bool = True):
        if isinstance(space, int):
            space = StateSpace.of_size(space)
        self.space = space
        self.rows = tuple(rows)
        if len(self.rows) != space.n:
            raise DimensionMismatch(f"{len(self.rows)} rows for {space.n} states")
        self.reports = {}
        if check:
            for label, row in zip(space.labels, self.rows):
                try:
                    self.reports[label] = validate_row(row, space.n)
                except InvalidRow as exc:
                    raise InvalidRow(str(exc), state=label) from None
        # Precise and vertex rows are linear maxima; stack them once.
        self._vertex_blocks = [
            row.mass[None, :] if isinstance(row, Precise)
            else row.vertices if isinstance(row, VertexList)
            else None
            for row in self.rows
        ]

    @property
    def n(self) -> int:
        return self.space.n

    def __repr__(self):
        kinds = ", ".join(type(r).__name__ for r in self.rows)
        return f"UpperTransitionOperator({list(self.space.labels)}, [{kinds}])"

    def __call__(self, h) -> np.ndarray:
        return apply_upper(self, h)


def apply_upper(T: UpperTransitionOperator, h) -> np.ndarray:
    """``(T h)(x)``: the upper row expectation of ``h`` at every state."""
    h = gamble(h, T.n)
    out = np.empty(T.n)
    for i, (row, block) in enumerate(zip(T.rows, T._vertex_blocks)):
        if block is not None:
            out[i] = (block @ h).max()
        else:
            out[i] = upper_row_expectation(row, h)
    return gamble(out)


def apply_lower(T: UpperTransitionOperator, h) -> np.ndarray:
    """Conjugate lower operator ``-T(-h)``."""
    return gamble(-apply_upper(T, -gamble(h, T.n)))


def iterate_upper(T: UpperTransitionOperator, f, k: int) -> np.ndarray:
    """``T^k f``, the upper expectation of ``f(X_k)`` given each ``X_0``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    h = gamble(f, T.n)
    for _ in range(k):
        h = apply_upper(T, h)
    return h


def iterate_lower(T: UpperTransitionOperator, f, k: int) -> np.ndarray:
    return gamble(-iterate_upper(T, -gamble(f, T.n), k))


@dataclass(frozen=True)
class AverageIterator:
    """State of the recursion ``m_k = f + T m_{k-1}`` with ``m_0 = f``.

    ``m / (k + 1)`` is the upper expected time average over ``X_0..X_k``.
    """

    operator: UpperTransitionOperator
    f: np.ndarray
    k: int = 0
    m: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "f", gamble(self.f, self.operator.n))
        if self.m is None:
            object.__setattr__(self, "m", self.f)

    @property
    def average(self) -> np.ndarray:
        return self.m / (self.k + 1)


def average_step(it: AverageIterator) -> AverageIterator:
    m = gamble(it.f + apply_upper(it.operator, it.m))
    return AverageIterator(it.operator, it.f, it.k + 1, m)


def accumulated_sum(T: UpperTransitionOperator, f, k: int) -> np.ndarray:
    """The unnormalised accumulator ``m_k`` (equal to ``T_f^{k+1}(0)``)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    it = AverageIterator(T, f)
    for _ in range(k):
        it = average_step(it)
    return it.m


def upper_expected_average(T: UpperTransitionOperator, f, k: int) -> np.ndarray:
    """Upper expectation of ``(f(X_0) + ... + f(X_k)) / (k + 1)`` per initial state."""
    return gamble(accumulated_sum(T, f, k) / (k + 1))


def lower_expected_average(T: UpperTransitionOperator, f, k: int) -> np.ndarray:
    return gamble(-upper_expected_average(T, -gamble(f, T.n), k))


def average_map(T: UpperTransitionOperator, f):
    """The topical map ``h -> f + T h`` as a closure."""
    f = gamble(f, T.n)

    def F(h):
        return gamble(f + apply_upper(T, h))

    return F


class RestrictedAverageMap:
    """``h -> (f + T h_ext)|_S`` on gambles over a maximal class ``S``.

    ``h_ext`` is the zero extension of ``h`` to the whole state space. For a
    maximal class, iterating this map reproduces the full recursion on
    ``S`` because no state of ``S`` can put upper mass outside ``S``.
    """

    def __init__(self, T: UpperTransitionOperator, f, states: Sequence[int]):
        self.operator = T
        self.f = gamble(f, T.n)
        self.states = tuple(sorted(states))
        self._idx = np.array(self.states, dtype=int)
        self._f_S = self.f[self._idx]

    @property
    def n(self) -> int:
        return len(self.states)

    def extend(self, h) -> np.ndarray:
        out = np.zeros(self.operator.n)
        out[self._idx] = h
        return out

    def __call__(self, h) -> np.ndarray:
        h = gamble(h, self.n)
        ext = self.extend(h)
        vals = np.array([
            upper_row_expectation(self.operator.rows[i], ext) for i in self.states
        ])
        return gamble(self._f_S + vals)

    def iterate(self, k: int, h=None) -> np.ndarray:
        h = np.zeros(self.n) if h is None else gamble(h, self.n)
        for _ in range(k):
            h = self(h)
        return h


def restrict_to_class(T: UpperTransitionOperator, f, S) -> RestrictedAverageMap:
    """Restriction of the average map to a maximal communication class.

    ``S`` is an iterable of state indices or labels; raises
    :class:`NotMaximalClass` unless it is one of the maximal classes of the
    accessibility graph of ``T``.
    """
    from .structure import build_upper_graph, decompose

    idx = frozenset(T.space.index(s) if isinstance(s, str) else int(s) for s in S)
    maximal = decompose(build_upper_graph(T)).maximal
    if idx not in {frozenset(c) for c in maximal}:
        names = T.space.subset_labels(idx)
        raise NotMaximalClass(f"{{{', '.join(names)}}} is not a maximal communication class")
    return RestrictedAverageMap(T, f, idx)


@dataclass
class CoherenceReport:
    """Worst violation per coherence property, as a non-negative magnitude."""

    violations: dict
    samples: int

    @property
    def worst(self) -> float:
        return max(self.violations.values())

    def ok(self, tol: float = 1e-9) -> bool:
        return self.worst <= tol


def coherence_violations(F, h, g, lam: float, mu: float) -> dict:
    """Violation magnitudes of the six coherence properties of ``F`` on one sample.

    ``F`` is any map on gambles (for instance ``T`` or ``T^k``).
    """
    Fh, Fg = F(h), F(g)
    low, high = np.minimum(h, g), np.maximum(h, g)
    return {
        "C1": max(0.0, float(np.max(h.min() - Fh)), float(np.max(Fh - h.max()))),
        "C2": max(0.0, float(np.max(F(h + g) - Fh - Fg))),
        "C3": float(np.max(np.abs(F(lam * h) - lam * Fh))),
        "C4": float(np.max(np.abs(F(h + mu) - (Fh + mu)))),
        "C5": max(0.0, float(np.max(F(low) - F(high)))),
        "C6": max(0.0, float(np.max(Fh - Fg - F(h - g)))),
    }


def coherence_selftest(T: UpperTransitionOperator, samples: int = 200, seed=0,
                       power: int = 1) -> CoherenceReport:
    """Probe C1-C6 for ``T**power`` on randomly drawn gambles."""
    rng = np.random.default_rng(seed)

    def F(h):
        return iterate_upper(T, h, power)

    worst = dict.fromkeys(("C1", "C2", "C3", "C4", "C5", "C6"), 0.0)
    for _ in range(samples):
        h = rng.uniform(-5, 5, T.n)
        g = rng.uniform(-5, 5, T.n)
        lam = float(rng.uniform(0, 4))
        mu = float(rng.uniform(-3, 3))
        for key, v in coherence_violations(F, h, g, lam, mu).items():
            worst[key] = max(worst[key], v)
    return CoherenceReport(worst, samples)
