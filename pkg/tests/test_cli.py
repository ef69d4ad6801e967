from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from drgtriples.cli import run_command
from drgtriples.serialize import dumps


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params_json(capsys):
    code, out, _ = run(capsys, "params", "{55,54,2;1,1,54}", "--json")
    assert code == 0
    doc = json.loads(out)
    assert dumps(doc) == out
    assert doc["k"] == [1, 55, 2970, 110]
    assert doc["p"][1][2][2] == 2808
    assert doc["p"][2][2][2] == 2811
    assert doc["p"][3][2][2] == 2862


def test_params_text(capsys):
    code, out, _ = run(capsys, "params", "3,2;1,1")
    assert code == 0
    assert "10" in out


def test_non_integral_exit_code(capsys):
    code, out, _ = run(capsys, "params", "{55,54,2;1,1,53}", "--json")
    assert code == 2
    doc = json.loads(out)
    assert doc["verdict"] == "INFEASIBLE"
    assert doc["certificate"]["kind"] == "intersection-number"


def test_invalid_array_exit_code(capsys):
    code, _, err = run(capsys, "params", "{3,2;2,1}")
    assert code == 1
    assert "error" in err


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "{55,54,2;1,1,54}", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["Q"][1] == [1, "1029/5", -2, "-1024/5"]


def test_krein_negative_exit_code(capsys):
    code, out, _ = run(capsys, "krein", "{9,8;1,4}", "--json")
    assert code == 2
    assert json.loads(out)["certificate"]["kind"] == "krein"


def test_triples_211(capsys):
    code, out, _ = run(capsys, "triples", "{55,54,2;1,1,54}", "--config", "2,1,1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["points"]) == 3


def test_unrealizable_config_exit_code(capsys):
    code, _, _ = run(capsys, "triples", "{55,54,2;1,1,54}", "--config", "1,1,1")
    assert code == 1


def test_symmetrize_with_rules(capsys):
    code, out, _ = run(capsys, "symmetrize", "{55,54,2;1,1,54}", "--config", "2,2,3", "--rules", "builtin", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["group"] == ["uvw", "uwv"]
    assert len(doc["points"]) == 18
    assert doc["relations"]


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "petersen", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["p_table_match"] is True
    assert doc["violations"] == 0


def test_unknown_graph_exit_code(capsys):
    code, _, err = run(capsys, "oracle-check", "clebsch")
    assert code == 1
    assert "unknown graph" in err


def test_help_documents_grammar(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "array grammar" in out
    assert "exit codes" in out


def test_missing_config_is_usage_error(capsys):
    code, _, _ = run(capsys, "triples", "{3,2;1,1}")
    assert code == 1


def test_prove_moore_small(capsys):
    code, out, _ = run(capsys, "prove-moore", "{3,2;1,1}", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "FEASIBLE_UNRESOLVED"
    assert dumps(doc) == out


@pytest.mark.skipif(shutil.which("drgtriples") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["drgtriples", "params", "{3,2;1,1}", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["k"] == [1, 3, 6]
