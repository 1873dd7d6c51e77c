import io
import json
import subprocess
import sys

import pytest

from classchain.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_sample_json_lines_and_determinism():
    args = ("sample", "--flavor", "sp", "--q", "3", "--u", "1/2", "--count", "5", "--seed", "7")
    code, out, _ = run(*args)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6
    header = json.loads(lines[0])["config"]
    assert header["seed"] == 7 and header["u"] == "1/2"
    for line in lines[1:]:
        assert isinstance(json.loads(line)["parts"], list)
    assert run(*args)[1] == out


@pytest.mark.parametrize("bad", [["--u", "3/2"], ["--u", "0.5x"], ["--q", "1"]])
def test_sample_validation(bad):
    base = {"--q": "3", "--u": "1/2"}
    base.update(dict(zip(bad[::2], bad[1::2])))
    argv = ["sample", "--flavor", "o"] + [x for kv in base.items() for x in kv]
    code, _, err = run(*argv)
    assert code == 2
    assert "error" in err


def test_usage_error_exit_code():
    assert run("sample")[0] == 2
    assert run("bogus")[0] == 2
    assert run("sample", "--flavor", "sp", "--q", "3", "--u", "1/2", "--seed", "-1")[0] == 2


def test_pmf_parts_table():
    code, out, _ = run("pmf", "--flavor", "sp", "--q", "3", "--u", "1/2", "--max-parts", "6")
    assert code == 0
    doc = json.loads(out)
    assert [r["k"] for r in doc["rows"]] == list(range(7))
    assert "tail_bound" in doc
    from fractions import Fraction as F

    from classchain.measures import MeasureParams, prefactor_enclosure

    pref = prefactor_enclosure(MeasureParams(F(1, 2), F(3)), F(1, 10**15))
    row0 = doc["rows"][0]
    assert F(row0["lo"]) <= pref.hi and pref.lo <= F(row0["hi"])


def test_pmf_size_table_csv():
    code, out, _ = run("pmf", "--flavor", "o", "--q", "3", "--u", "1/2", "--max-size", "8", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config ")
    assert json.loads(lines[0][len("# config "):])["max_size"] == 8
    assert any(line.startswith("partition,size,rational") for line in lines)


def test_pmf_needs_one_bound():
    assert run("pmf", "--flavor", "sp", "--q", "3", "--u", "1/2")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["--suite", "rowsums", "--q", "9", "--u", "1", "--a-max", "40"],
        ["--suite", "chainproduct", "--q", "3", "--u", "1/2", "--size-max", "12"],
        ["--suite", "recurrence", "--q", "5", "--u", "1/10"],
        ["--suite", "cauchy"],
        ["--suite", "recur-lemma"],
        ["--suite", "rr", "--q", "5"],
        ["--suite", "exponents"],
    ],
)
def test_verify_suites_pass(argv):
    code, out, err = run("verify", *argv)
    assert code == 0, err
    assert json.loads(out)["passed"]


def test_verify_lumping_warns():
    code, out, err = run("verify", "--suite", "lumping", "--q", "3", "--u", "1/2")
    assert code == 0
    assert "WARN" in err
    doc = json.loads(out)
    assert doc["warnings"] and all(w["flavor"] == "O" for w in doc["warnings"])


def test_verify_counterexample_exit_code(monkeypatch):
    import classchain.cli as cli
    from classchain.verify import SuiteReport

    def broken(name, params, **kw):
        rep = SuiteReport(name, checked=1)
        rep.fail(reason="injected")
        return rep

    monkeypatch.setattr(cli, "run_suite", broken)
    assert run("verify", "--suite", "rowsums")[0] == 1


def test_oracle_sp():
    code, out, _ = run("oracle", "--group", "sp", "--n", "1", "--p", "3", "--compare")
    assert code == 0
    doc = json.loads(out)
    assert doc["unipotent"] == 9 and doc["order"] == 24
    assert doc["fixed_dim"] == {"0": 15, "1": 8, "2": 1}
    assert all(c["ok"] or c.get("informational") for c in doc["compare"].values())


def test_oracle_unitary():
    code, out, _ = run("oracle", "--group", "u", "--n", "2", "--p", "3", "--compare")
    assert code == 0
    assert json.loads(out)["compare"]["isometry"]["ok"]


def test_oracle_orthogonal_needs_sign():
    assert run("oracle", "--group", "o", "--n", "2", "--p", "3")[0] == 2
    assert run("oracle", "--group", "o", "--n", "2", "--p", "3", "--sign", "-")[0] == 0


def test_oracle_budget(monkeypatch):
    monkeypatch.setenv("CLASSCHAIN_BUDGET", "1000")
    code, _, err = run("oracle", "--group", "sp", "--n", "2", "--p", "3")
    assert code == 2 and "budget" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "classchain", "sample", "--flavor", "o", "--q", "3", "--u", "1/2", "--count", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 3
