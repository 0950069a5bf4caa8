"""Imprecise Markov chains: upper expectations, expected time averages and
(weak) ergodicity on finite state spaces."""

from .core import StateSpace, gamble, hilbert_seminorm, indicator, sup_norm
from .ergodicity import (
    ErgodicityReport,
    LimitResult,
    NotErgodic,
    NotWeaklyErgodic,
    class_average_limit,
    classify,
    limit_lower_average,
    limit_lower_expectation,
    limit_upper_average,
    limit_upper_expectation,
)
from .errors import (
    DimensionMismatch,
    ImpmcError,
    InvalidGamble,
    InvalidRow,
    IterationBudgetExceeded,
    NotMaximalClass,
    ParseError,
    SizeLimit,
    UnknownState,
)
from .model_io import ModelDocument, load_model, save_model
from .operator import (
    AverageIterator,
    UpperTransitionOperator,
    apply_lower,
    apply_upper,
    average_step,
    coherence_selftest,
    iterate_upper,
    lower_expected_average,
    restrict_to_class,
    upper_expected_average,
)
from .oracle import brute_force_lower, brute_force_upper
from .rows import (
    Precise,
    ProbabilityIntervals,
    Vacuous,
    VertexList,
    interval_row_vertices,
    lower_row_expectation,
    upper_row_expectation,
    validate_row,
)
from .structure import (
    AccessibilityGraph,
    ClassDecomposition,
    build_upper_graph,
    class_period,
    decompose,
    is_tca,
    is_tcr,
    path_of_length_exists,
)

__version__ = "0.1.0"
