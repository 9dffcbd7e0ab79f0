import json
import logging

import pytest

from tracealg import positivity
from tracealg.cli import EXIT_ERROR, EXIT_HOLDS, EXIT_REFUTED, main
from tracealg.config import TERM_BUDGET_ENV
from tracealg.exprParser import parseTrace
from tracealg.identities import newtonFm


@pytest.fixture(autouse=True)
def restore_logging():
    # main() reconfigures the root logger against the captured stderr
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)

@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return write

@pytest.fixture
def free_constraints(write_json):
    return write_json("constraints.json", {"generators": [], "n": 2})


# --------- expressions ---------
def test_canon(capsys):
    assert main(["canon", "x2*x1 + x1*x2 - x2*x1"]) == EXIT_HOLDS
    assert capsys.readouterr().out.strip() == "x1*x2"

def test_canon_json(capsys):
    assert main(["--json", "canon", "Tr(x1) + Tr(x1)"]) == EXIT_HOLDS
    doc = json.loads(capsys.readouterr().out)
    assert doc["holds"] is True
    assert parseTrace(doc["canonical"]) == parseTrace("2*Tr(x1)")

def test_syntax_error_exits_two(capsys):
    assert main(["canon", "Tr(x1"]) == EXIT_ERROR
    assert "tracealg: error" in capsys.readouterr().err

def test_usage(capsys):
    assert main(["--help"]) == EXIT_HOLDS
    assert "canon" in capsys.readouterr().out
    assert main([]) == EXIT_ERROR

def test_eval(capsys, write_json):
    path = write_json("m.json", {"n": 2, "g": 1, "matrices": [[["1", "2"], ["2", "1"]]]})
    assert main(["eval", "x1*x1'", "--matrices", path]) == EXIT_HOLDS
    assert capsys.readouterr().out.split("\n")[:2] == ["[5, 4]", "[4, 5]"]

@pytest.mark.parametrize("doc", [
    {"n": 1, "g": 1, "matrices": [5]},
    {"n": 2, "g": 1, "matrices": [[["1", "0"], ["0"]]]},
    {"n": 1, "g": 1, "matrices": "x"},
    {"n": 1, "g": 1, "matrices": [[["1.5"]]]},
])
def test_malformed_matrices_exit_two(write_json, doc):
    path = write_json("m.json", doc)
    assert main(["eval", "x1", "--matrices", path]) == EXIT_ERROR

def test_identity_exit_codes():
    assert main(["identity", "x1*x2 - x2*x1", "--n", "1"]) == EXIT_HOLDS
    assert main(["identity", "x1*x2 - x2*x1", "--n", "2"]) == EXIT_REFUTED

def test_bad_term_budget_env(monkeypatch, capsys):
    monkeypatch.setenv(TERM_BUDGET_ENV, "lots")
    assert main(["canon", "x1"]) == EXIT_ERROR
    assert TERM_BUDGET_ENV in capsys.readouterr().err


# --------- matrices and certificates ---------
def test_psd_witness(capsys, write_json):
    path = write_json("m.json", {"n": 2, "g": 1, "matrices": [[["1", "2"], ["2", "1"]]]})
    assert main(["psd", "--matrix", path]) == EXIT_REFUTED
    assert "w = (-2, 1), w^t M w = -3" in capsys.readouterr().out
    ident = write_json("i.json", {"n": 2, "g": 1, "matrices": [[["1", "0"], ["0", "1"]]]})
    assert main(["psd", "--strict", "--matrix", ident]) == EXIT_HOLDS

def test_missing_file_exits_two(tmp_path):
    assert main(["psd", "--matrix", str(tmp_path / "absent.json")]) == EXIT_ERROR

def test_verify_cert(write_json, free_constraints):
    cert = write_json("cert.json", {"mode": "psd", "k": 1, "t2": [],
        "t1": [{"kind": "omega", "omega": [{"weight": "1", "factors": []},
            {"weight": "1", "factors": ["x1"]}]}]})
    args = ["verify-cert", "--cert", cert, "--constraints", free_constraints]
    assert main(args + ["--a", "1 + Tr(x1*x1')"]) == EXIT_HOLDS
    assert main(args + ["--a", "2 + Tr(x1*x1')"]) == EXIT_REFUTED

def test_malformed_certificate_files_exit_two(write_json, free_constraints):
    cert = write_json("cert.json", {"mode": "pd", "t1": [5], "t2": []})
    args = ["verify-cert", "--a", "1", "--cert", cert]
    assert main(args + ["--constraints", free_constraints]) == EXIT_ERROR
    good = write_json("good.json", {"mode": "pd", "t1": [], "t2": []})
    listed = write_json("list.json", ["1 - x1*x1'"])
    assert main(["verify-cert", "--a", "1", "--cert", good, "--constraints", listed]) \
        == EXIT_ERROR

def test_refute_writes_witness(tmp_path, free_constraints):
    out = tmp_path / "witness.json"
    code = main(["refute", "-x1*x1'", "--constraints", free_constraints, "--trials", "5",
        "--witness-out", str(out)])
    assert code == EXIT_REFUTED
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["refuted"] and doc["trial"] == 0
    assert len(doc["matrices"]["matrices"]) == 1

def test_refute_without_witness(free_constraints):
    code = main(["refute", "x1*x1'", "--constraints", free_constraints, "--trials", "5"])
    assert code == EXIT_HOLDS


def test_refute_samples_uniformly_by_default(free_constraints, mocker):
    spy = mocker.spy(positivity, "sampleRefute")
    main(["refute", "x1*x1'", "--constraints", free_constraints, "--trials", "2"])
    assert spy.call_args.args[-1] == "uniform"
    main(["refute", "x1*x1'", "--constraints", free_constraints, "--trials", "2",
        "--strategy", "mixed"])
    assert spy.call_args.args[-1] == "mixed"

# --------- identities ---------
def test_capelli(capsys):
    assert main(["capelli", "--m", "2"]) == EXIT_HOLDS
    assert capsys.readouterr().out.strip() == "x1*x3*x2 - x2*x3*x1"

def test_cayley_hamilton():
    assert main(["cayley-hamilton", "--n", "2"]) == EXIT_HOLDS
    assert main(["cayley-hamilton", "--n", "2", "--perturb"]) == EXIT_REFUTED

def test_fm(capsys):
    assert main(["fm", "--m", "1"]) == EXIT_HOLDS
    assert parseTrace(capsys.readouterr().out) == newtonFm(1).value
    assert main(["fm", "--m", "1", "--check"]) == EXIT_HOLDS
    assert main(["fm", "--m", "1", "--check", "--n", "3"]) == EXIT_REFUTED
    assert main(["fm", "--m", "1", "--witness", "1", "1"]) == EXIT_HOLDS
    assert main(["fm", "--m", "1", "--witness", "1", "2"]) == EXIT_ERROR

def test_central_reduce(capsys):
    assert main(["central-reduce", "x1 + x1'", "--n", "2"]) == EXIT_HOLDS
    lines = capsys.readouterr().out.strip().split("\n")
    name, _, text = lines[0].partition(" = ")
    assert name == "sigma1"
    assert parseTrace(text) == parseTrace("Tr(x1 + x1')")
    assert len(lines) == 2

def test_reynolds_json(capsys):
    assert main(["--json", "reynolds", "x1", "--n", "2"]) == EXIT_HOLDS
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["reports"]) == 4
    assert len(doc["value"]) == 2

def test_psi(capsys):
    assert main(["psi", "--trials", "2"]) == EXIT_HOLDS
    assert capsys.readouterr().out.count("PASS") == 6


# --------- positivity examples ---------
def test_negativity(capsys):
    assert main(["negativity", "1,-1"]) == EXIT_REFUTED
    assert "sum f(l)^2 l = -4" in capsys.readouterr().out
    assert main(["negativity", "1,2"]) == EXIT_HOLDS

def test_gram():
    assert main(["gram", "--alpha=-7/2"]) == EXIT_HOLDS
    assert main(["gram", "--alpha=0"]) == EXIT_REFUTED

def test_ps3_cubic(capsys):
    assert main(["ps3", "verify", "--only", "cubic"]) == EXIT_HOLDS
    assert capsys.readouterr().out.startswith("PASS")


# --------- settings ---------
def test_config_init_then_show(tmp_path, capsys):
    path = str(tmp_path / "tracealg.yaml")
    assert main(["config", "--init", path]) == EXIT_HOLDS
    capsys.readouterr()
    assert main(["--config", path, "--json", "config", "--show"]) == EXIT_HOLDS
    doc = json.loads(capsys.readouterr().out)
    assert doc["settings"]["termBudget"] == 1_000_000
    assert doc["settings"]["logLevel"] == "INFO"
