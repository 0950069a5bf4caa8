import io
import json

import numpy as np
import pytest

from impmc.cli import main
from impmc.errors import InvalidRow, ParseError
from impmc.model_io import ModelDocument, load_model, model_from_dict, model_to_dict, save_model
from impmc.operator import apply_upper
from impmc.random_models import random_operator


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def model(models_dir, name):
    return str(models_dir / f"{name}.json")


class TestCheck:
    def test_example1(self, models_dir):
        code, text = run("--model", model(models_dir, "example1"), "check")
        assert code == 0
        assert text.splitlines()[0] == "weakly ergodic: yes; ergodic: no; top class: {a,b}; period: 2"

    def test_example2(self, models_dir):
        code, text = run("--model", model(models_dir, "example2"), "check")
        assert text.splitlines()[0] == "weakly ergodic: yes; ergodic: yes; top class: {a,b}"

    def test_two_isolated(self, models_dir):
        code, text = run("--model", model(models_dir, "two_isolated"), "check")
        assert code == 0
        assert text.splitlines()[0] == "no top class; maximal classes: {a},{b}; weakly ergodic: no"

    def test_not_absorbing(self, models_dir):
        _, text = run("--model", model(models_dir, "not_absorbing"), "check")
        assert "TCA: no" in text and "TCR: yes" in text

    def test_trailing_json_line(self, models_dir):
        _, text = run("--model", model(models_dir, "example1"), "check")
        lines = text.splitlines()
        assert lines[-2] == "---"
        assert json.loads(lines[-1])["top_period"] == 2

    def test_json_format(self, models_dir):
        code, text = run("check", "--model", model(models_dir, "two_isolated"), "--format", "json")
        d = json.loads(text)
        assert d["maximal_classes"] == [["a"], ["b"]] and d["top_class"] is None


class TestExpect:
    def test_example2(self, models_dir):
        code, text = run("--model", model(models_dir, "example2"), "expect", "-g", "1_b", "-k", "2")
        assert (code, text) == (0, "a: 1\nb: 1\n")

    def test_lower(self, models_dir):
        _, text = run("--model", model(models_dir, "example2"), "expect", "-g", "1_b",
                      "-k", "1", "--bound", "lower")
        assert text == "a: 0\nb: 0\n"

    def test_inline_values_and_state(self, models_dir):
        _, text = run("--model", model(models_dir, "example1"), "expect",
                      "--values", "1,0", "-k", "3", "--state", "b")
        assert text == "b: 1\n"

    def test_unknown_state(self, models_dir):
        code, _ = run("--model", model(models_dir, "example1"), "expect",
                      "--values", "1,0", "-k", "3", "--state", "z")
        assert code == 2

    def test_unknown_gamble(self, models_dir, capsys):
        code, _ = run("--model", model(models_dir, "example1"), "expect", "-g", "nope", "-k", "1")
        assert code == 2
        assert "nope" in capsys.readouterr().err

    def test_wrong_length(self, models_dir):
        code, _ = run("--model", model(models_dir, "example1"), "expect", "--values", "1,0,0", "-k", "1")
        assert code == 2


class TestAverage:
    def test_finite_k(self, models_dir):
        _, text = run("--model", model(models_dir, "example2"), "average", "-g", "1_b", "-k", "1")
        assert text == "a: 0.5\nb: 0.5\n"

    def test_limit_period_lock(self, models_dir):
        code, text = run("--model", model(models_dir, "example2"), "average", "-g", "1_b", "--limit")
        assert code == 0
        lines = text.splitlines()
        assert lines[:3] == ["value: 0.5", "error bound: 0", "method: period-lock"]
        assert "period: 2" in lines

    def test_limit_json(self, models_dir):
        _, text = run("--model", model(models_dir, "example1"), "--format", "json",
                      "average", "-g", "f", "--limit")
        d = json.loads(text)
        assert d["weakly_ergodic"] and d["limit"]["value"] == 0.5

    def test_not_weakly_ergodic_lists_classes(self, models_dir):
        _, text = run("--model", model(models_dir, "two_isolated"), "average", "-g", "classes", "--limit")
        lines = text.splitlines()
        assert lines[0].startswith("not weakly ergodic")
        assert "class {a}:" in lines and "class {b}:" in lines
        assert lines[lines.index("class {a}:") + 1] == "  value: 0"
        assert lines[lines.index("class {b}:") + 1] == "  value: 1"

    def test_cesaro(self, models_dir):
        _, text = run("--model", model(models_dir, "intervals3"), "average", "-g", "h", "--limit",
                      "--tol", "1e-9")
        assert "method: cesaro-window" in text

    def test_budget_warning(self, models_dir):
        code, text = run("--model", model(models_dir, "intervals3"), "average", "-g", "h", "--limit",
                         "--tol", "1e-14", "--max-iter", "5")
        assert code == 0
        assert "WARNING" in text

    def test_needs_k_or_limit(self, models_dir):
        code, _ = run("--model", model(models_dir, "example2"), "average", "-g", "1_b")
        assert code == 2


class TestGraph:
    EXPECTED = (
        'digraph "accessibility" {\n'
        "  subgraph cluster_0 {\n"
        '    label="top class";\n'
        '    "a" [shape=doublecircle];\n'
        '    "b" [shape=doublecircle];\n'
        "  }\n"
        '  "a" -> "b";\n'
        '  "b" -> "a";\n'
        "}\n"
    )

    def test_example1_dot(self, models_dir):
        code, text = run("--model", model(models_dir, "example1"), "graph", "--dot")
        assert (code, text) == (0, self.EXPECTED)

    def test_out_file(self, models_dir, tmp_path):
        dest = tmp_path / "g.dot"
        code, text = run("--model", model(models_dir, "example1"), "graph", "--out", str(dest))
        assert code == 0 and text == ""
        assert dest.read_text() == self.EXPECTED

    def test_maximal_clusters(self, models_dir):
        _, text = run("--model", model(models_dir, "two_isolated"), "graph")
        assert text.count('label="maximal class"') == 2

    def test_deterministic(self, models_dir):
        outs = {run("--model", model(models_dir, "intervals3"), "graph")[1] for _ in range(3)}
        assert len(outs) == 1


class TestOracle:
    def test_no_gap(self, models_dir):
        code, text = run("--model", model(models_dir, "intervals3"), "oracle", "-g", "h", "-k", "3")
        assert code == 0
        gap = float(text.splitlines()[-1].split(":")[1])
        assert gap <= 1e-10

    def test_average_mode(self, models_dir):
        _, text = run("--model", model(models_dir, "example2"), "--format", "json",
                      "oracle", "-g", "1_b", "-k", "1", "--mode", "average")
        d = json.loads(text)
        assert d["brute_force"] == {"a": 0.5, "b": 0.5} and d["max_gap"] == 0

    def test_size_limit_exit_code(self, tmp_path):
        n = 4
        doc = {
            "schema_version": 1,
            "states": list("abcd"),
            "rows": {s: {"type": "vertices", "vertices": np.eye(n).tolist()} for s in "abcd"},
            "gambles": {"f": [1, 0, 0, 0]},
        }
        path = tmp_path / "big.json"
        path.write_text(json.dumps(doc))
        code, _ = run("--model", str(path), "oracle", "-g", "f", "-k", "3")
        assert code == 3


class TestErrors:
    def test_invalid_row_exit(self, tmp_path, capsys):
        doc = {
            "schema_version": 1,
            "states": ["a", "b"],
            "rows": {"a": {"type": "precise", "mass": [0.5, 0.4]}, "b": {"type": "vacuous"}},
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, _ = run("--model", str(path), "check")
        assert code == 2
        assert "'a'" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run("--model", str(tmp_path / "absent.json"), "check")[0] == 2

    def test_missing_model_flag(self):
        assert run("check")[0] == 2

    def test_broken_json_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "schema_version": 1,\n  "states": ["a"\n}\n')
        with pytest.raises(ParseError) as exc:
            load_model(path)
        assert exc.value.line == 4

    def test_missing_row(self):
        with pytest.raises(ParseError):
            model_from_dict({"schema_version": 1, "states": ["a", "b"], "rows": {"a": {"type": "vacuous"}}})

    def test_invalid_row_names_state(self):
        doc = {"schema_version": 1, "states": ["a", "b"],
               "rows": {"a": {"type": "vacuous"},
                        "b": {"type": "intervals", "lower": [0.6, 0.6], "upper": [1, 1]}}}
        with pytest.raises(InvalidRow, match="'b'"):
            model_from_dict(doc)


def test_round_trip_bit_identical(rng, tmp_path):
    for i in range(30):
        T = random_operator(rng, int(rng.integers(1, 5)))
        g = rng.normal(size=T.n)
        path = tmp_path / f"m{i}.json"
        original = ModelDocument(T, {"g": g})
        save_model(original, path)
        doc = load_model(path)
        assert np.array_equal(doc.gambles["g"], g)
        for _ in range(5):
            h = rng.normal(size=T.n)
            assert np.array_equal(apply_upper(doc.operator, h), apply_upper(T, h))
        assert model_to_dict(doc) == model_to_dict(original)


def test_shipped_models_load(models_dir):
    for path in sorted(models_dir.glob("*.json")):
        doc = load_model(path)
        assert doc.operator.n >= 1 and doc.gambles
