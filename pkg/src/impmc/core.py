"""State spaces, gambles and the two norms used by the stopping rules.

Gambles are plain one-dimensional ``float64`` numpy arrays, indexed by
state position. :func:`gamble` validates and freezes them; every public
routine in the package accepts any array-like and runs it through
:func:`gamble` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidGamble, UnknownState


@dataclass(frozen=True)
class StateSpace:
    """An ordered finite set of distinct state labels."""

    labels: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise ValueError("a state space needs at least one state")
        if len(set(labels)) != len(labels):
            dupes = sorted({s for s in labels if labels.count(s) > 1})
            raise ValueError(f"duplicate state labels: {dupes}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(labels)})

    @classmethod
    def of_size(cls, n: int) -> "StateSpace":
        """Default labels ``x0 .. x{n-1}``."""
        return cls(f"x{i}" for i in range(n))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownState(label) from None

    def indices(self, labels: Iterable[str]) -> list[int]:
        return [self.index(s) for s in labels]

    def label(self, i: int) -> str:
        return self.labels[i]

    def subset_labels(self, idx: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in sorted(idx)]


def gamble(values, n: int | None = None) -> np.ndarray:
    """Validate ``values`` as a gamble and return a read-only float array.

    Raises :class:`InvalidGamble` for NaN/inf entries or a non-1-D shape and
    :class:`DimensionMismatch` when ``n`` is given and the length differs.
    """
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidGamble(f"a gamble must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidGamble("gamble entries must be finite")
    if n is not None and arr.size != n:
        raise DimensionMismatch(f"gamble has {arr.size} entries, expected {n}")
    arr.flags.writeable = False
    return arr


def hilbert_seminorm(h) -> float:
    """Spread ``max h - min h``; zero exactly on constant gambles."""
    h = gamble(h)
    return float(h.max() - h.min())


def sup_norm(h) -> float:
    h = gamble(h)
    return float(np.abs(h).max())


def indicator(space: StateSpace, states: Iterable[str]) -> np.ndarray:
    """Indicator gamble of a set of state labels."""
    out = np.zeros(space.n)
    out[space.indices(states)] = 1.0
    return gamble(out)


def indicator_of_indices(n: int, idx: Iterable[int]) -> np.ndarray:
    out = np.zeros(n)
    out[list(idx)] = 1.0
    return gamble(out)


def is_constant(h: Sequence[float], atol: float = 0.0) -> bool:
    h = np.asarray(h)
    return bool(h.max() - h.min() <= atol)
