from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from qselect.cli import main, parse_size_range
from qselect.generators import ProblemSpec, generate
from qselect.ml.pipeline import CLASS_NAMES
from qselect.qubo import QuboProblem


def write_problem(path, problem):
    path.write_text(json.dumps(problem.to_json()))
    return str(path)


@pytest.fixture
def triangle(tmp_path):
    p = generate(ProblemSpec("max_cut", 3, density=1.0, coeff_range=(1, 1)))
    return write_problem(tmp_path / "tri.json", p)


@pytest.fixture(scope="module")
def chain(tmp_path_factory):
    """generate -> label -> train on a small 30-problem suite."""
    root = tmp_path_factory.mktemp("chain")
    assert main(["generate", "--count", "30", "--n", "3..5", "--seed", "3", "--out", str(root / "gen")]) == 0
    assert main(["label", str(root / "gen" / "manifest.json"), "--runs", "5", "--seed", "3",
                 "--out", str(root / "data.csv")]) == 0
    assert main(["train", str(root / "data.csv"), "--model", "knn", "--seed", "3",
                 "--out", str(root / "model.json")]) == 0
    return root


class TestGenerate:
    def test_count_zero(self, tmp_path):
        assert main(["generate", "--count", "0", "--out", str(tmp_path)]) == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["problems"] == [] and manifest["count"] == 0

    def test_invalid_family(self, tmp_path, capsys):
        assert main(["generate", "--count", "2", "--families", "tsp", "--out", str(tmp_path)]) != 0
        assert "tsp" in capsys.readouterr().err

    def test_files_match_manifest(self, tmp_path):
        argv = ["generate", "--count", "12", "--families", "maxcut,random", "--n", "3..6",
                "--seed", "7", "--out", str(tmp_path)]
        assert main(argv) == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert len(manifest["problems"]) == 12
        for entry in manifest["problems"]:
            p = QuboProblem.from_json(json.loads((tmp_path / entry["file"]).read_text()))
            assert 3 <= p.num_vars <= 6 and entry["spec"]["family"] in ("max_cut", "random_qubo")

    def test_size_range(self):
        assert parse_size_range("3..10") == (3, 10)
        assert parse_size_range("5") == (5, 5)


class TestSolve:
    def test_triangle_sa(self, triangle, tmp_path):
        assert main(["solve", triangle, "--solver", "sa", "--runs", "100", "--out", str(tmp_path)]) == 0
        rows = list(csv.reader((tmp_path / "cumulative.csv").open()))
        assert rows[0] == ["solver", "rank", "value", "cumulative"]
        values = [float(r[2]) for r in rows[1:]]
        assert len(values) == 100 and values == sorted(values) and rows[-1][3] == "1.0"
        assert min(values) == -2
        runs = [json.loads(line) for line in (tmp_path / "runs.jsonl").read_text().splitlines()]
        assert len(runs) == 100 and min(r["objective"] for r in runs) == -2

    def test_repeatable(self, triangle, tmp_path):
        for d in ("a", "b"):
            assert main(["solve", triangle, "--runs", "1", "--seed", "7", "--out", str(tmp_path / d)]) == 0
        for name in ("runs.jsonl", "cumulative.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_gas_too_large(self, tmp_path, capsys):
        big = QuboProblem.from_terms(23, {i: 1.0 for i in range(23)})
        path = write_problem(tmp_path / "big.json", big)
        assert main(["solve", path, "--solver", "gas", "--runs", "1", "--out", str(tmp_path)]) != 0
        assert "capacity" in capsys.readouterr().err

    def test_value_register_override_too_small(self, triangle, tmp_path, capsys):
        argv = ["solve", triangle, "--solver", "gas", "--gas-value-qubits", "1", "--runs", "1", "--out", str(tmp_path)]
        assert main(argv) != 0
        assert "error:" in capsys.readouterr().err

    def test_bad_problem_file(self, tmp_path):
        (tmp_path / "x.json").write_text("{}")
        assert main(["solve", str(tmp_path / "x.json"), "--out", str(tmp_path)]) != 0

    def test_unknown_flag(self, triangle):
        with pytest.raises(SystemExit):
            main(["solve", triangle, "--turbo"])


class TestChain:
    def test_dataset(self, chain):
        lines = (chain / "data.csv").read_text().splitlines()
        assert len(lines) == 31

    def test_predict(self, chain, capsys):
        problem = str(chain / "gen" / "problem_0000.json")
        assert main(["predict", str(chain / "model.json"), problem]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] in CLASS_NAMES
        probs = {line.split()[0]: float(line.split()[1]) for line in out[1:]}
        assert list(probs) == list(CLASS_NAMES)
        assert sum(probs.values()) == pytest.approx(1.0)
        assert max(probs, key=probs.get) == out[0] or probs[out[0]] == max(probs.values())

    def test_predict_wrong_width(self, chain, capsys):
        assert main(["predict", str(chain / "model.json"), "--features", "1,2,3,4"]) != 0
        assert "9 features" in capsys.readouterr().err

    def test_evaluate_rows(self, chain, tmp_path):
        out = tmp_path / "eval.csv"
        argv = ["evaluate", str(chain / "data.csv"), "--models", "knn,nb",
                "--preprocessing", "none,pca-2,pca-3", "--folds", "3", "--out", str(out)]
        assert main(argv) == 0
        assert len(out.read_text().splitlines()) == 1 + 2 * 3

    def test_report(self, chain, tmp_path):
        out = tmp_path / "report.csv"
        assert main(["report", str(chain / "data.csv"), "--out", str(out)]) == 0
        rows = list(csv.reader(out.open()))
        assert rows[0][:2] == ["n_vars", "problems"]
        assert sum(int(r[1]) for r in rows[1:]) == 30

    def test_unknown_model(self, chain, tmp_path):
        assert main(["train", str(chain / "data.csv"), "--model", "svm", "--out", str(tmp_path / "m")]) != 0

    def test_model_format_error(self, chain, tmp_path, capsys):
        data = json.loads((chain / "model.json").read_text())
        data["format_version"] = 7
        (tmp_path / "m.json").write_text(json.dumps(data))
        assert main(["predict", str(tmp_path / "m.json"), "--features", ",".join(["0"] * 9)]) != 0
        assert "format_version" in capsys.readouterr().err


def test_seed_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QSELECT_SEED", "42")
    assert main(["generate", "--count", "1", "--out", str(tmp_path)]) == 0
    assert "seed=42" in capsys.readouterr().err
    assert json.loads((tmp_path / "manifest.json").read_text())["seed"] == 42


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "qselect.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("generate", "solve", "label", "train", "predict", "evaluate", "report"):
        assert cmd in out.stdout
