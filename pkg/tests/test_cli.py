import csv
import io
import json

import pytest

from turnsearch.cli import main

WORKED = '{"family":"Explicit","steps":[[6,0],[3,1],[2,0],[4,1],[5,1],[3,0]],"params":{"lambda":1}}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_strategy_table(capsys):
    code, out, _ = run(capsys, "strategy", "--spec", '{"family":"Lemma1","params":{"lambda":1,"t":0}}',
                       "-n", "3", "--csv")
    assert code == 0
    assert rows(out) == [["i", "x", "ray"], ["1", "4", "0"], ["2", "12", "1"], ["3", "32", "0"]]


def test_strategy_explicit_echo(capsys):
    code, out, _ = run(capsys, "strategy", "--spec", WORKED, "--csv", "-n", "50")
    assert code == 0
    assert len(rows(out)) == 7
    assert rows(out)[5] == ["5", "5", "1"]


def test_strategy_family_flag(capsys):
    code, out, _ = run(capsys, "strategy", "--family", "theorem4", "--param", "lambda=1", "--param", "t=4",
                       "-n", "1", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "strategy"
    assert doc["result"]["steps"][0]["x"] == pytest.approx(2.5)
    assert doc["result"]["claimed"]["value"] == pytest.approx(10)


def test_spec_from_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(WORKED, encoding="utf-8")
    code, out, _ = run(capsys, "strategy", "--spec", str(path), "--csv")
    assert code == 0 and len(rows(out)) == 7


@pytest.mark.parametrize("spec", ["{bad", '{"family":"Lemma1","params":{"lambda":1,"t":3}}'])
def test_strategy_bad_spec(capsys, spec):
    code, _, err = run(capsys, "strategy", "--spec", spec)
    assert code == 2 and err.startswith("error:")


def test_evaluate_doubling(capsys):
    code, out, _ = run(capsys, "evaluate", "--family", "doubling", "--param", "lambda=1", "--plain", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["supremum"] == pytest.approx(9, abs=1e-9)
    assert set(doc) == {"command", "params", "result"}


def test_evaluate_m_ray(capsys):
    code, out, _ = run(capsys, "evaluate", "--spec", '{"family":"Theorem6","params":{"m":3,"lambda":1,"t":0}}',
                       "--horizon", "200", "--json")
    assert code == 0 and json.loads(out)["result"]["supremum"] == pytest.approx(14.5, rel=1e-9)


def test_evaluate_short_horizon(capsys):
    code, _, _ = run(capsys, "evaluate", "--family", "doubling", "--param", "lambda=1", "--horizon", "1")
    assert code == 2


def test_evaluate_cost_flags(capsys):
    code, out, _ = run(capsys, "evaluate", "--family", "doubling", "--param", "lambda=1", "--turn-cost", "2", "--json")
    assert json.loads(out)["params"]["cost"] == [1, 0, 1, 2]
    code, out, _ = run(capsys, "evaluate", "--family", "doubling", "--param", "lambda=1", "--alpha2", "0", "--json")
    assert json.loads(out)["params"]["cost"] == [1, 0, 0, 0]


def test_evaluate_unbounded_is_valid_json(capsys):
    code, out, _ = run(capsys, "evaluate", "--family", "DemaineTurnCost", "--param", "t=1", "--json")
    assert code == 0 and json.loads(out)["result"]["supremum"] == "inf"


def test_evaluate_csv(capsys):
    code, out, _ = run(capsys, "evaluate", "--spec", WORKED, "--horizon", "6", "--csv")
    assert rows(out)[3] == ["3", "0", "1", ""]


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "Lemma1", "--param", "lambda=1", "--param", "t=0",
                       "--ray", "1", "--distance", "3")
    assert code == 0 and rows(out)[1][2] == "11"


def test_simulate_adversarial_envelope(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "DemaineTurnCost", "--param", "t=2", "--adversarial", "20")
    table = rows(out)[1:]
    assert len(table) == 22
    assert all(float(r[2]) <= float(r[4]) + 1e-6 for r in table)


def test_transform(capsys):
    code, out, _ = run(capsys, "transform", "--spec", WORKED)
    assert json.loads(out)["steps"] == [[3, 0], [4, 1], [5, 0], [6, 1]]
    code, out, _ = run(capsys, "transform", "--spec", WORKED, "--to", "monotonic")
    assert json.loads(out)["steps"] == [[6, 0], [3, 1], [4, 1], [5, 1]]


def test_tradeoff_defaults(capsys):
    code, out, _ = run(capsys, "tradeoff")
    table = rows(out)
    assert table[0] == ["gamma", "phi_over_t"]
    assert table[1] == ["9", "2"]
    assert len(table) == 102
    assert ["10", "1.5"] in table
    vals = [float(r[1]) for r in table[1:]]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_tradeoff_far_point(capsys):
    code, out, _ = run(capsys, "tradeoff", "--gamma-min", "1e6", "--gamma-max", "1e6", "--points", "1")
    assert abs(float(rows(out)[1][1]) - 1) < 1e-2


def test_tradeoff_domain(capsys):
    assert run(capsys, "tradeoff", "--gamma-min", "8")[0] == 2


def test_optcost(capsys):
    code, out, _ = run(capsys, "optcost", "--ratio-min", "0.5", "--ratio-max", "2", "--points", "4")
    assert rows(out) == [["t_over_2lambda", "CR"], ["0.5", "9"], ["1", "9"], ["1.5", "9.33333333333"], ["2", "10"]]
    assert run(capsys, "optcost", "--ratio-min", "0")[0] == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--suite", "lp", "--phi-shift", "-0.1", "--json")
    assert code == 1 and json.loads(out)["result"]["ok"] is False
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--m", "2", "3", "--points", "4", "--rho-max", "3")
    table = rows(out)
    assert table[0] == ["m", "rho", "regime", "claimed_cr", "evaluated_cr"]
    assert len(table) == 9
    for r in table[1:]:
        assert float(r[4]) == pytest.approx(float(r[3]), rel=1e-6)


def test_usage_error_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["evaluate", "--horizon", "x"])
    assert exc.value.code == 2


def test_csv_bytes_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["tradeoff", "--log", "--gamma-max", "1e4", "-o", str(a)])
    main(["tradeoff", "--log", "--gamma-max", "1e4", "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()
