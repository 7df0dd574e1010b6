import json
import pathlib
import random

import numpy as np
import pytest

from wittkummer import cli
from wittkummer.algebra import _matpow, frobenius_endomorphism, make_product, make_finite_field
from wittkummer.cohomology import is_cocycle
from wittkummer.kummer import witt_module

PROBLEMS = pathlib.Path(__file__).resolve().parent.parent / "demos" / "problems"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, path, *extra):
    code, out, err = run(capsys, "run", str(path), "--json", *extra)
    return code, json.loads(out) if out else None, err


def test_every_task_has_an_example():
    tasks = {cli.tomllib.loads(p.read_text())["task"]
             for p in PROBLEMS.glob("*.toml")}
    assert tasks == set(cli.TASKS)


@pytest.mark.parametrize("name", sorted(p.name for p in PROBLEMS.glob("*.toml")))
def test_examples_run(capsys, name):
    code, report, err = run_json(capsys, PROBLEMS / name)
    assert report["task"] in cli.TASKS
    assert code == (0 if report["verdict"] else 1)
    assert len(report["run_hash"]) == 64


def test_cyclotomic_example_table(capsys):
    code, report, _ = run_json(capsys, PROBLEMS / "cyclotomic_check.toml")
    assert code == 0 and report["verdict"]
    assert [row["surjective"] for row in report["result"]["subgroups"]] == [True, True]


def test_negative_verdict_exit_code(capsys):
    code, report, _ = run_json(capsys, PROBLEMS / "cyclotomic_fail.toml")
    assert code == 1 and not report["verdict"]
    assert report["result"]["witness"]["subgroup"] == [0, 2]
    code, _, _ = run_json(capsys, PROBLEMS / "cyclotomic_fail.toml", "--allow-negative")
    assert code == 0


def test_fit_witness_revalidates(capsys):
    code, report, _ = run_json(capsys, PROBLEMS / "fit.toml")
    res = report["result"]
    F4 = make_finite_field(2, [1, 1, 1])
    A = make_product([F4, F4])
    f, g = np.array(res["f"]), np.array(res["g"])
    frob = _matpow(frobenius_endomorphism(A), res["m"], 2)
    assert np.array_equal((f @ g) % 2, frob)


def test_lift_witness_revalidates(capsys):
    code, report, _ = run_json(capsys, PROBLEMS / "lift.toml")
    assert code == 0
    prob = cli.load_problem((PROBLEMS / "lift.toml").read_text())
    chi = cli.parse_character(prob["raw"]["character"], prob["group"], 4)
    top = witt_module(prob["algebra"], prob["action"], 2, chi)
    lifts = report["result"]["lifts"]
    assert len(lifts) == 4
    for item in lifts:
        assert is_cocycle(top, np.array(item["lift"]), 1)
        assert item["m"] <= item["algorithmic_m"] == item["m_A"]


def test_reports_are_deterministic(capsys):
    _, first, _ = run(capsys, "run", str(PROBLEMS / "kummer_identity.toml"), "--json")
    _, second, _ = run(capsys, "run", str(PROBLEMS / "kummer_identity.toml"), "--json")
    assert first == second


def test_seedless_blocks_randomness(capsys):
    code, _, _ = run(capsys, "run", str(PROBLEMS / "laurent.toml"), "--seedless")
    assert code == 0
    with cli._no_randomness():
        with pytest.raises(RuntimeError):
            random.random()
    random.random()


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "run", str(PROBLEMS / "laurent.toml"), "--output", str(target))
    assert code == 0
    assert json.loads(target.read_text())["result"]["order"] == 8
    assert "verdict: true" in out


def test_task_override(capsys):
    code, report, _ = run_json(capsys, PROBLEMS / "lift.toml", "--task", "fit")
    assert report["task"] == "fit" and report["result"]["m"] == 1


@pytest.mark.parametrize("text,needle", [
    ('task = "fit"\n[group]\nkind = "cyclic"\nn = \n', "line 4"),
    ('task = "fit"\n[group]\nkind = "table"\ntable = [[0, 1], [1, 1]]\n', "group"),
    ('task = "nope"\n', "task"),
    ('task = "fit"\n[group]\nkind = "cyclic"\nn = 2\n', "algebra"),
    ('task = "fit"\n[group]\nkind = "cyclic"\nn = 2\n[algebra]\nkind = "finite_field"\np = 2\n'
     'poly = [1, 0, 1]\n', "algebra"),
    ('task = "cohomology"\n[group]\nkind = "cyclic"\nn = 2\n[character]\nmodulus = 4\n'
     'values = [1, 2]\n[params]\nq = 4\n', "character"),
    ('task = "lift"\n[group]\nkind = "cyclic"\nn = 2\n[algebra]\nkind = "prime_field"\np = 2\n'
     '[character]\nmodulus = 4\nvalues = [1, 3]\n[params]\np = 2\ne = 1\nr = 2\n', "params.r"),
])
def test_input_errors_exit_two(capsys, tmp_path, text, needle):
    path = tmp_path / "bad.toml"
    path.write_text(text)
    code, out, err = run(capsys, "run", str(path))
    assert code == 2
    assert err.startswith("input error") and needle in err


def test_bound_error_names_the_bound(capsys):
    code, _, err = run(capsys, "run", str(PROBLEMS / "cyclotomic_fail.toml"), "--bound", "2")
    assert code == 2 and "bound exceeded" in err and "group order" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "run", "/nonexistent/problem.toml")
    assert code == 2


def test_corpus_filter(capsys):
    code, out, _ = run(capsys, "corpus", "--filter", "witt", "--json")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert [r["name"] for r in report["results"]] == ["witt-ring-iso", "witt-polynomials",
                                                      "witt-structure"]
    code, out, _ = run(capsys, "corpus", "--filter", "b2")
    assert "PASS  b2-smooth" in out and "1/1 checks passed" in out
