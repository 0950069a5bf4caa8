"""JSON model documents.

A model file looks like::

    {
      "schema_version": 1,
      "states": ["a", "b"],
      "rows": {
        "a": {"type": "vacuous"},
        "b": {"type": "precise", "mass": [1, 0]}
      },
      "gambles": {"1_b": [0, 1]}
    }

Other row types are ``{"type": "vertices", "vertices": [[...], ...]}`` and
``{"type": "intervals", "lower": [...], "upper": [...]}``. All vectors
follow the order of ``states``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import StateSpace, gamble
from .errors import ImpmcError, InvalidRow, ParseError
from .operator import UpperTransitionOperator
from .rows import Precise, ProbabilityIntervals, RowCredalSet, Vacuous, VertexList

SCHEMA_VERSION = 1


@dataclass
class ModelDocument:
    operator: UpperTransitionOperator
    gambles: dict = field(default_factory=dict)

    @property
    def space(self) -> StateSpace:
        return self.operator.space


def _vector(value, n, where):
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise ParseError("expected a list of numbers", field=where)
    if len(value) != n:
        raise ParseError(f"expected {n} entries, got {len(value)}", field=where)
    return [float(v) for v in value]


def _parse_row(desc, n, where) -> RowCredalSet:
    if not isinstance(desc, dict) or "type" not in desc:
        raise ParseError("row descriptor must be an object with a 'type'", field=where)
    kind = desc["type"]
    if kind == "vacuous":
        return Vacuous()
    if kind == "precise":
        return Precise(_vector(desc.get("mass"), n, f"{where}.mass"))
    if kind == "vertices":
        verts = desc.get("vertices")
        if not isinstance(verts, list) or not verts:
            raise ParseError("expected a non-empty list of vertices", field=f"{where}.vertices")
        return VertexList([_vector(v, n, f"{where}.vertices[{i}]") for i, v in enumerate(verts)])
    if kind == "intervals":
        return ProbabilityIntervals(_vector(desc.get("lower"), n, f"{where}.lower"),
                                    _vector(desc.get("upper"), n, f"{where}.upper"))
    raise ParseError(f"unknown row type {kind!r}", field=f"{where}.type")


def model_from_dict(doc) -> ModelDocument:
    if not isinstance(doc, dict):
        raise ParseError("model document must be a JSON object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {version!r}", field="schema_version")
    states = doc.get("states")
    if not isinstance(states, list) or not states or not all(isinstance(s, str) for s in states):
        raise ParseError("expected a non-empty list of state names", field="states")
    try:
        space = StateSpace(states)
    except ValueError as exc:
        raise ParseError(str(exc), field="states") from None
    rows_doc = doc.get("rows")
    if not isinstance(rows_doc, dict):
        raise ParseError("expected an object mapping states to rows", field="rows")
    unknown = set(rows_doc) - set(states)
    if unknown:
        raise ParseError(f"rows for undeclared states {sorted(unknown)}", field="rows")
    rows = []
    for s in states:
        if s not in rows_doc:
            raise ParseError(f"missing row for state {s!r}", field="rows")
        try:
            rows.append(_parse_row(rows_doc[s], space.n, f"rows.{s}"))
        except InvalidRow as exc:
            raise InvalidRow(str(exc), state=s) from None
    operator = UpperTransitionOperator(space, rows)
    gambles = {}
    for name, values in (doc.get("gambles") or {}).items():
        gambles[name] = gamble(_vector(values, space.n, f"gambles.{name}"))
    return ModelDocument(operator, gambles)


def load_model(path) -> ModelDocument:
    """Read and validate a model file.

    Raises :class:`ParseError` (with the line for JSON syntax errors and the
    field path for schema errors) or :class:`InvalidRow` naming the state.
    """
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return model_from_dict(doc)


def _row_to_dict(row) -> dict:
    if isinstance(row, Vacuous):
        return {"type": "vacuous"}
    if isinstance(row, Precise):
        return {"type": "precise", "mass": row.mass.tolist()}
    if isinstance(row, VertexList):
        return {"type": "vertices", "vertices": row.vertices.tolist()}
    if isinstance(row, ProbabilityIntervals):
        return {"type": "intervals", "lower": row.lower.tolist(), "upper": row.upper.tolist()}
    raise ImpmcError(f"cannot serialise row of type {type(row).__name__}")


def model_to_dict(model: ModelDocument) -> dict:
    T = model.operator
    return {
        "schema_version": SCHEMA_VERSION,
        "states": list(T.space.labels),
        "rows": {s: _row_to_dict(r) for s, r in zip(T.space.labels, T.rows)},
        "gambles": {name: np.asarray(v).tolist() for name, v in model.gambles.items()},
    }


def save_model(model: ModelDocument, path) -> None:
    # json writes floats with repr(), the shortest string that round-trips.
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n")
