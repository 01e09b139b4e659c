import json

import pytest

from spr.main import build_parser, main


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture
def caterpillar_file(tmp_path):
    path = tmp_path / "cat.spr"
    assert main(["gen", "caterpillar", "--k", "6", "--eps", "0.1", "-o", str(path)]) == 0
    return path


def test_gen_to_stdout(capsys):
    assert main(["gen", "binary-tree", "--depth", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "spr-graph 1"
    assert lines[1].startswith("# generated family=binary_tree")
    assert lines[2] == "7 6 4"


def test_gen_auto_epsilon(tmp_path):
    path = tmp_path / "bg.spr"
    assert main(["gen", "bg-lb", "--k", "8", "--eps", "auto", "-o", str(path)]) == 0
    assert path.read_text().splitlines()[2] == "17 16 8"


def test_run_then_eval(caterpillar_file, tmp_path, capsys):
    out = tmp_path / "run.jsonl"
    assert main(["run", str(caterpillar_file), "--algo", "fast", "--seed", "3", "-o", str(out)]) == 0
    minor, report = records(out.read_text())
    assert minor["record"] == "minor" and minor["weight_mode"] == "single_crossing"
    assert minor["terminals"] == list(range(6))
    assert report["record"] == "distortion" and report["seed"] == 3

    assert main(["eval", str(caterpillar_file), str(out)]) == 0
    (again,) = records(capsys.readouterr().out)
    assert again["worst"] == pytest.approx(report["worst"], rel=1e-12)
    assert again["algorithm"] == "fast"


def test_run_with_trace(caterpillar_file, capsys):
    assert main(["run", str(caterpillar_file), "--algo", "noisy", "--trace", "--seed", "1"]) == 0
    kinds = [r["record"] for r in records(capsys.readouterr().out)]
    assert kinds[:2] == ["minor", "distortion"]
    assert kinds[2:] == ["round"] * 6


def test_ball_trace(caterpillar_file, capsys):
    assert main(["run", str(caterpillar_file), "--algo", "ball", "--trace"]) == 0
    out = records(capsys.readouterr().out)
    assert out[0]["scale"] == 1.0
    assert {r["record"] for r in out[2:]} == {"ball_step"}


def test_pinned_draws(caterpillar_file, capsys):
    assert main(["run", str(caterpillar_file), "--algo", "noisy", "--delta", "0.05", "--draws", "10,1,1,1,1,1"]) == 0
    minor = records(capsys.readouterr().out)[0]
    pairs = {(e["i"], e["j"]) for e in minor["edges"]}
    assert (0, 1) in pairs


def test_trials(caterpillar_file, capsys):
    assert main(["trials", str(caterpillar_file), "--algo", "noisy", "--trials", "3", "--pairs", "--threads", "2"]) == 0
    out = records(capsys.readouterr().out)
    assert [r["record"] for r in out] == ["trial_pair"] * 15 + ["trial_summary"]
    assert out[-1]["trials"] == 3


def test_intervals(caterpillar_file, capsys):
    assert main(["intervals", str(caterpillar_file), "--pair", "0,5"]) == 0
    rows = records(capsys.readouterr().out)
    assert [(r["start"], r["end"]) for r in rows] == [(i, i) for i in range(8)]


def test_intervals_reject_large_c_int(caterpillar_file):
    assert main(["intervals", str(caterpillar_file), "--pair", "0,5", "--c-int", "2", "--delta", "0.75"]) == 2


def test_bench(capsys):
    assert main(["bench", "--sizes", "100,200", "--repeats", "1", "--compare-slow"]) == 0
    first, second = records(capsys.readouterr().out)
    assert (first["n"], first["m"], first["k"]) == (20, 100, 4)
    assert first["ratio"] is None and second["ratio"] > 0
    assert second["extractions"] <= second["extraction_bound"]
    assert second["slow_seconds"] > 0


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "caterpillar", "--k", "1", "--eps", "0.1"],
        ["gen", "random", "--n", "10"],
        ["gen", "caterpillar", "--k", "5", "--eps", "tiny"],
    ],
)
def test_bad_generator_arguments(argv):
    assert main(argv) == 2


def test_unknown_algorithm(caterpillar_file):
    assert main(["run", str(caterpillar_file), "--algo", "greedy"]) == 2


def test_invalid_probability(caterpillar_file):
    assert main(["run", str(caterpillar_file), "--p", "1.5"]) == 2


def test_missing_graph(tmp_path):
    assert main(["run", str(tmp_path / "missing.spr")]) == 3


def test_malformed_graph(tmp_path):
    path = tmp_path / "bad.spr"
    path.write_text("spr-graph 1\n2 1 2\n0\n1\n0 1 -3\n")
    assert main(["run", str(path)]) == 2


def test_non_utf8_graph(caterpillar_file, tmp_path):
    path = tmp_path / "binary.spr"
    path.write_bytes(b"spr-graph 1\n\xff 1 2\n")
    assert main(["run", str(path)]) == 2
    records_file = tmp_path / "binary.jsonl"
    records_file.write_bytes(b"\xff\n")
    assert main(["eval", str(caterpillar_file), str(records_file)]) == 2


def test_eval_rejects_foreign_minor(caterpillar_file, tmp_path):
    out = tmp_path / "run.jsonl"
    assert main(["run", str(caterpillar_file), "-o", str(out)]) == 0
    other = tmp_path / "other.spr"
    assert main(["gen", "caterpillar", "--k", "5", "--eps", "0.1", "-o", str(other)]) == 0
    assert main(["eval", str(other), str(out)]) == 2


def test_every_command_is_mounted():
    parser = build_parser()
    subparsers = next(a for a in parser._actions if a.dest == "command")
    assert set(subparsers.choices) == {"gen", "run", "eval", "trials", "bench", "intervals"}
