"""Per-state credal sets and their one-step upper/lower expectations.

Four row representations are supported:

``Precise``
    a single transition mass function;
``VertexList``
    the convex hull of finitely many mass functions;
``ProbabilityIntervals``
    all mass functions ``p`` with ``lower <= p <= upper``;
``Vacuous``
    every mass function on the state space.

Row objects only normalise their payload to arrays. The stochasticity and
nonemptiness invariants are checked by :func:`validate_row`, so that
deliberately broken rows can still be built for self-tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .core import gamble
from .errors import DimensionMismatch, InvalidRow, SizeLimit

STOCHASTIC_TOL = 1e-12
MAX_INTERVAL_VERTEX_STATES = 12


def _as_vector(values, what):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidRow(f"{what} must be a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidRow(f"{what} has non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Precise:
    mass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mass", _as_vector(self.mass, "mass function"))

    @property
    def n(self):
        return self.mass.size


@dataclass(frozen=True, eq=False)
class VertexList:
    vertices: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vertices, dtype=float)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise InvalidRow("vertex list must be a non-empty list of mass functions")
        if not np.all(np.isfinite(arr)):
            raise InvalidRow("vertex list has non-finite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "vertices", arr)

    @property
    def n(self):
        return self.vertices.shape[1]


@dataclass(frozen=True, eq=False)
class ProbabilityIntervals:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _as_vector(self.lower, "lower bounds"))
        object.__setattr__(self, "upper", _as_vector(self.upper, "upper bounds"))
        if self.lower.size != self.upper.size:
            raise InvalidRow("lower and upper bounds differ in length")

    @property
    def n(self):
        return self.lower.size


@dataclass(frozen=True)
class Vacuous:
    @property
    def n(self):
        return None


RowCredalSet = Union[Precise, VertexList, ProbabilityIntervals, Vacuous]


@dataclass(frozen=True)
class RowReport:
    """Outcome of :func:`validate_row`.

    ``unreachable`` lists the indices whose interval bound (lower or upper)
    cannot be attained by any member of the credal set.
    """

    valid: bool
    unreachable: tuple[int, ...] = ()

    @property
    def reachable(self) -> bool:
        return not self.unreachable


def _check_mass(p, what):
    if np.any(p < 0):
        raise InvalidRow(f"{what} has negative entries")
    total = float(np.sum(p))
    if abs(total - 1.0) > STOCHASTIC_TOL:
        raise InvalidRow(f"{what} sums to {total!r}, not 1")


def validate_row(row: RowCredalSet, n: int | None = None) -> RowReport:
    """Check the invariants of ``row``; raise :class:`InvalidRow` if broken.

    Non-reachable interval bounds are reported, not rejected.
    """
    if isinstance(row, Vacuous):
        return RowReport(True)
    if n is not None and row.n != n:
        raise InvalidRow(f"row has {row.n} entries, expected {n}")
    if isinstance(row, Precise):
        _check_mass(row.mass, "mass function")
        return RowReport(True)
    if isinstance(row, VertexList):
        for i, v in enumerate(row.vertices):
            _check_mass(v, f"vertex {i}")
        return RowReport(True)
    if isinstance(row, ProbabilityIntervals):
        lo, up = row.lower, row.upper
        if np.any(lo < 0) or np.any(up > 1):
            raise InvalidRow("interval bounds must lie in [0, 1]")
        if np.any(lo > up):
            raise InvalidRow("some lower bound exceeds its upper bound")
        if lo.sum() > 1 + STOCHASTIC_TOL:
            raise InvalidRow(f"lower bounds sum to {lo.sum()!r} > 1: empty credal set")
        if up.sum() < 1 - STOCHASTIC_TOL:
            raise InvalidRow(f"upper bounds sum to {up.sum()!r} < 1: empty credal set")
        slack_lo = lo + (up.sum() - up)  # l(y) + sum_{z != y} u(z) >= 1
        slack_up = up + (lo.sum() - lo)  # u(y) + sum_{z != y} l(z) <= 1
        bad = (slack_lo < 1 - STOCHASTIC_TOL) | (slack_up > 1 + STOCHASTIC_TOL)
        return RowReport(True, tuple(int(i) for i in np.flatnonzero(bad)))
    raise InvalidRow(f"unknown row type {type(row).__name__}")


def _interval_greedy(lower, upper, h):
    # Start from the lower bounds and pour the remaining mass into the
    # states with the largest h first; stable sort breaks ties by index.
    order = np.argsort(-h, kind="stable")
    remaining = 1.0 - float(np.sum(lower))
    p = np.array(lower, dtype=float)
    for j in order:
        if remaining <= 0:
            break
        add = min(upper[j] - lower[j], remaining)
        p[j] += add
        remaining -= add
    return p


def upper_row_expectation(row: RowCredalSet, h) -> float:
    """Exact supremum of ``sum_y p(y) h(y)`` over the row's credal set."""
    h = gamble(h)
    if isinstance(row, Vacuous):
        return float(h.max())
    if row.n != h.size:
        raise DimensionMismatch(f"row has {row.n} entries, gamble has {h.size}")
    if isinstance(row, Precise):
        return float(row.mass @ h)
    if isinstance(row, VertexList):
        return float((row.vertices @ h).max())
    if isinstance(row, ProbabilityIntervals):
        return float(_interval_greedy(row.lower, row.upper, h) @ h)
    raise InvalidRow(f"unknown row type {type(row).__name__}")


def lower_row_expectation(row: RowCredalSet, h) -> float:
    return -upper_row_expectation(row, -gamble(h))


def interval_row_vertices(row: ProbabilityIntervals, tol: float = 1e-12) -> VertexList:
    """Enumerate the extreme points of a probability-interval credal set.

    Every extreme point has all coordinates but (at most) one at a bound;
    so for each residual coordinate ``j`` and each assignment of the others
    to their lower or upper bound we solve for ``p[j]`` and keep the
    feasible candidates. Cost is ``n * 2**(n-1)``.
    """
    if not isinstance(row, ProbabilityIntervals):
        raise InvalidRow("interval_row_vertices needs a ProbabilityIntervals row")
    validate_row(row)
    n = row.n
    if n > MAX_INTERVAL_VERTEX_STATES:
        raise SizeLimit(f"vertex enumeration limited to {MAX_INTERVAL_VERTEX_STATES} states, got {n}")
    lo, up = row.lower, row.upper
    found = []
    for j in range(n):
        others = [i for i in range(n) if i != j]
        for pattern in itertools.product((False, True), repeat=n - 1):
            p = np.empty(n)
            for i, at_upper in zip(others, pattern):
                p[i] = up[i] if at_upper else lo[i]
            p[j] = 1.0 - sum(p[i] for i in others)
            if p[j] < lo[j] - tol or p[j] > up[j] + tol:
                continue
            p[j] = min(max(p[j], lo[j]), up[j])
            if not any(np.max(np.abs(p - q)) <= tol for q in found):
                found.append(p)
    return VertexList(np.array(found))


def row_vertices(row: RowCredalSet, n: int) -> np.ndarray:
    """Vertex matrix (one mass function per row) of any supported row."""
    if isinstance(row, Vacuous):
        return np.eye(n)
    if isinstance(row, Precise):
        return row.mass[None, :]
    if isinstance(row, VertexList):
        return row.vertices
    if isinstance(row, ProbabilityIntervals):
        return interval_row_vertices(row).vertices
    raise InvalidRow(f"unknown row type {type(row).__name__}")


# Structural positivity predicates. Entries given by the user are compared
# with zero exactly; only slack terms of the form ``1 - sum(bounds)``, which
# inherit rounding noise from decimal literals, get the stochastic tolerance.

def _fsum(values):
    return float(sum((Fraction(float(v)) for v in values), Fraction(0)))


def upper_event_positive(row: RowCredalSet, event, n: int) -> bool:
    """Whether some member of the credal set gives ``event`` positive mass."""
    event = set(event)
    if not event:
        return False
    if isinstance(row, Vacuous):
        return True
    if isinstance(row, Precise):
        return any(row.mass[j] > 0 for j in event)
    if isinstance(row, VertexList):
        return any(v[j] > 0 for v in row.vertices for j in event)
    if isinstance(row, ProbabilityIntervals):
        slack = 1.0 - _fsum(row.lower[j] for j in range(n) if j not in event)
        return any(row.upper[j] > 0 for j in event) and slack > STOCHASTIC_TOL
    raise InvalidRow(f"unknown row type {type(row).__name__}")


def lower_event_positive(row: RowCredalSet, event, n: int) -> bool:
    """Whether every member of the credal set gives ``event`` positive mass."""
    event = set(event)
    if not event:
        return False
    if isinstance(row, Vacuous):
        return len(event) == n
    if isinstance(row, Precise):
        return any(row.mass[j] > 0 for j in event)
    if isinstance(row, VertexList):
        return all(any(v[j] > 0 for j in event) for v in row.vertices)
    if isinstance(row, ProbabilityIntervals):
        slack = 1.0 - _fsum(row.upper[j] for j in range(n) if j not in event)
        return any(row.lower[j] > 0 for j in event) or slack > STOCHASTIC_TOL
    raise InvalidRow(f"unknown row type {type(row).__name__}")
