"""Ergodicity verdicts and certified limits of upper expectations and averages.

Both limit routines stop on a bracket that provably contains the limit:

* for ``T^k f`` (ergodic case) the limit lies in ``[min T^k f, max T^k f]``,
  which shrinks monotonically;
* for the time averages, write ``h_k = F^k(0)`` with ``F h = f + T h``.
  ``F`` is topical, so whenever the average limit ``mu`` is state
  independent, ``min(h_k - h_{k-w}) / w <= mu <= max(h_k - h_{k-w}) / w``
  for every window ``w``. A zero-width bracket is a period lock.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import gamble
from .errors import IterationBudgetExceeded, MonotonicityViolation
from .operator import UpperTransitionOperator, apply_upper, average_map, restrict_to_class
from .structure import (
    absorbing_sets,
    build_upper_graph,
    class_period,
    decompose,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000
LOCK_TOL = 1e-12
MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class ErgodicityReport:
    """Structural verdicts for an upper transition operator.

    Class members are state indices; :meth:`to_dict` renders labels.
    """

    labels: tuple[str, ...]
    has_top_class: bool
    top_class: Optional[tuple[int, ...]]
    maximal_classes: tuple[tuple[int, ...], ...]
    top_period: Optional[int]
    tcr: bool
    tca: bool

    @property
    def ergodic(self) -> bool:
        return self.tcr and self.tca

    @property
    def weakly_ergodic(self) -> bool:
        return self.tca

    def names(self, members) -> list[str]:
        return [self.labels[i] for i in members]

    def to_dict(self) -> dict:
        return {
            "has_top_class": self.has_top_class,
            "top_class": None if self.top_class is None else self.names(self.top_class),
            "top_period": self.top_period,
            "maximal_classes": [self.names(c) for c in self.maximal_classes],
            "tcr": self.tcr,
            "tca": self.tca,
            "ergodic": self.ergodic,
            "weakly_ergodic": self.weakly_ergodic,
        }


def classify(T: UpperTransitionOperator) -> ErgodicityReport:
    graph = build_upper_graph(T)
    dec = decompose(graph)
    top = dec.top
    period = class_period(graph, top) if top is not None else None
    tca = top is not None and len(absorbing_sets(T, top)[-1]) == T.n
    return ErgodicityReport(
        labels=T.space.labels,
        has_top_class=top is not None,
        top_class=top,
        maximal_classes=dec.maximal,
        top_period=period,
        tcr=period == 1,
        tca=tca,
    )


@dataclass(frozen=True)
class LimitResult:
    """A limit value with a certified half-width.

    ``period`` and ``lock_start`` are set for ``period-lock`` results:
    ``h_{lock_start + period} - h_{lock_start}`` was found constant.
    ``converged`` is False when the iteration budget ran out before the
    requested tolerance; ``error_bound`` is then the bound actually achieved.
    """

    value: float
    error_bound: float
    iterations: int
    method: str
    converged: bool = True
    period: Optional[int] = None
    lock_start: Optional[int] = None

    def __neg__(self):
        return LimitResult(-self.value, self.error_bound, self.iterations, self.method,
                           self.converged, self.period, self.lock_start)

    def to_dict(self) -> dict:
        d = {
            "value": self.value,
            "error_bound": self.error_bound,
            "iterations": self.iterations,
            "method": self.method,
            "converged": self.converged,
        }
        if self.period is not None:
            d["period"] = self.period
            d["lock_start"] = self.lock_start
        return d


@dataclass(frozen=True)
class NotErgodic:
    """Outcome (not an error) when ``T^k f`` need not converge to a constant."""

    report: ErgodicityReport


@dataclass(frozen=True)
class NotWeaklyErgodic:
    """Outcome (not an error) when the averages need not converge to a constant.

    Per-class limits remain available through :func:`class_average_limit`.
    """

    report: ErgodicityReport


def _budget(result: LimitResult, strict: bool, what: str) -> LimitResult:
    if strict:
        raise IterationBudgetExceeded(
            f"{what}: tolerance not reached after {result.iterations} iterations "
            f"(achieved error bound {result.error_bound:.3g})",
            result,
        )
    log.warning("%s: budget exhausted with error bound %.3g", what, result.error_bound)
    return result


def limit_upper_expectation(T: UpperTransitionOperator, f, tol: float = DEFAULT_TOL,
                            k_max: int = DEFAULT_MAX_ITER, *, report=None,
                            strict: bool = False):
    """Limit of ``T^k f`` for an ergodic ``T``, else :class:`NotErgodic`."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    report = report or classify(T)
    if not report.ergodic:
        return NotErgodic(report)
    h = gamble(f, T.n)
    spread = float(h.max() - h.min())
    k = 0
    while True:
        if spread <= 2 * tol:
            return LimitResult((h.max() + h.min()) / 2, spread / 2, k, "seminorm-contraction")
        if k >= k_max:
            partial = LimitResult((h.max() + h.min()) / 2, spread / 2, k,
                                  "seminorm-contraction", converged=False)
            return _budget(partial, strict, "limit_upper_expectation")
        h = apply_upper(T, h)
        k += 1
        new_spread = float(h.max() - h.min())
        if new_spread > spread + MONOTONE_SLACK:
            raise MonotonicityViolation(
                f"spread of T^k f increased from {spread!r} to {new_spread!r} at k={k}"
            )
        spread = new_spread


def limit_lower_expectation(T, f, tol=DEFAULT_TOL, k_max=DEFAULT_MAX_ITER, **kwargs):
    res = limit_upper_expectation(T, -gamble(f, T.n), tol, k_max, **kwargs)
    return -res if isinstance(res, LimitResult) else res


def slope_limit(F: Callable, n: int, tol: float = DEFAULT_TOL, k_max: int = DEFAULT_MAX_ITER,
                p_max: Optional[int] = None, method: Optional[str] = None,
                strict: bool = False) -> LimitResult:
    """Cycle time ``lim F^k(0) / k`` of a topical map with a constant cycle time.

    Tries a period lock first at every step, then the tightest window
    bracket seen so far (windows ``1..p_max`` and the whole run).
    ``method`` overrides the tag on the returned result.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p_max = n if p_max is None else p_max
    history = deque([np.zeros(n)], maxlen=p_max + 1)  # h_{k-p_max} .. h_k
    lo, hi = -np.inf, np.inf
    for k in range(1, k_max + 1):
        h = F(history[-1])
        history.append(h)
        for p in range(1, min(p_max, k) + 1):
            d = h - history[-1 - p]
            d_lo, d_hi = float(d.min()), float(d.max())
            if d_hi - d_lo <= LOCK_TOL:
                return LimitResult((d_hi + d_lo) / 2 / p, (d_hi - d_lo) / 2 / p, k,
                                   method or "period-lock", period=p, lock_start=k - p)
            lo, hi = max(lo, d_lo / p), min(hi, d_hi / p)
        # whole-run window: h_0 = 0
        lo, hi = max(lo, float(h.min()) / k), min(hi, float(h.max()) / k)
        if (hi - lo) / 2 <= tol:
            return LimitResult((hi + lo) / 2, max(hi - lo, 0.0) / 2, k,
                               method or "cesaro-window")
    partial = LimitResult((hi + lo) / 2, max(hi - lo, 0.0) / 2, k_max,
                          method or "cesaro-window", converged=False)
    return _budget(partial, strict, "slope_limit")


def limit_upper_average(T: UpperTransitionOperator, f, tol: float = DEFAULT_TOL,
                        k_max: int = DEFAULT_MAX_ITER, *, p_max: Optional[int] = None,
                        report=None, strict: bool = False):
    """Limit upper expected time average, or :class:`NotWeaklyErgodic` without TCA."""
    report = report or classify(T)
    if not report.tca:
        return NotWeaklyErgodic(report)
    return slope_limit(average_map(T, f), T.n, tol, k_max, p_max, strict=strict)


def limit_lower_average(T, f, tol=DEFAULT_TOL, k_max=DEFAULT_MAX_ITER, **kwargs):
    res = limit_upper_average(T, -gamble(f, T.n), tol, k_max, **kwargs)
    return -res if isinstance(res, LimitResult) else res


def class_average_limit(T: UpperTransitionOperator, f, S, tol: float = DEFAULT_TOL,
                        k_max: int = DEFAULT_MAX_ITER, *, p_max: Optional[int] = None,
                        strict: bool = False) -> LimitResult:
    """Limit of the upper expected average from any state of the maximal class ``S``.

    Defined whether or not ``T`` is weakly ergodic; the value is shared by
    all states of ``S``.
    """
    F = restrict_to_class(T, f, S)
    res = slope_limit(F, F.n, tol, k_max, p_max, strict=strict)
    return LimitResult(res.value, res.error_bound, res.iterations, "class-restricted",
                       res.converged, res.period, res.lock_start)


def class_lower_average_limit(T, f, S, tol=DEFAULT_TOL, k_max=DEFAULT_MAX_ITER, **kwargs):
    return -class_average_limit(T, -gamble(f, T.n), S, tol, k_max, **kwargs)
