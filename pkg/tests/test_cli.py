import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from thickideals.cli import render_report, run

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
D = "tests/data/"

# Inputs are given relative to the repository root.
CASES = {
    "ann_koszul": ["ann", "--ring", "Z", "--koszul", "2"],
    "supp_mixed": ["supp", "--complex", D + "z_mixed.cx"],
    "homology_mixed": ["homology", "--complex", D + "z_mixed.cx"],
    "homology_small_formal": ["homology", "--formal", D + "small.formal"],
    "koszul_f2t": ["koszul", "--ring", "GF(2)[t]", "--koszul", "t,t^2+1"],
    "tensor_koszul": ["tensor", "--ring", "Z", "--koszul", "4", "--complex", D + "z10.cx"],
    "tensor_formal": ["tensor", "--formal", D + "g3.formal", "--formal", D + "small.formal", "--window", "6"],
    "member_no": ["member", "--ring", "Z", "--ideal", "compact{(2)}", "--complex", D + "z10.cx"],
    "member_tame": ["member", "--ring", "Z", "--ideal", "tame{cofinmax{}}", "--complex", D + "z_mixed.cx"],
    "member_lc": ["member", "--ideal", "L2", "--formal", D + "g3.formal"],
    "lattice": ["lattice", "--ring", "Z", "--ideal", "compact{(2),(3)}", "--ideal", "compact{(3),(5)}"],
    "classify_z12": ["classify-artinian", "--ring", "Z/12", "--samples", "5"],
    "spc_z30": ["spc-report", "--ring", "Z/30"],
    "minimal_c_g3": ["minimal-c", "--formal", D + "g3.formal", "--window", "6"],
    "minimal_c_e": ["minimal-c", "--formal", D + "e.formal", "--window", "6"],
    "nilpotence_z4": ["nilpotence", "--map", D + "z4_two.map"],
    "nilpotence_z6": ["nilpotence", "--map", D + "z6_two.map"],
    "fiber_report": ["fiber-report", "--cmax", "3"],
    "verify_thm39": ["verify", "thm3.9"],
    "verify_list": ["verify", "list"],
    "s_of_supp_prime": ["s-of-supp", "--ring", "Z", "--spcl", "cofinmax{(7)}"],
    "s_of_supp_not_prime": ["s-of-supp", "--ring", "Z/30", "--spcl", "{(2)}"],
}


@pytest.fixture(autouse=True)
def at_root(monkeypatch):
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("TT_SIZE_BUDGET", raising=False)


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_text(name):
    code, out, err = invoke(CASES[name])
    assert code == 0, err
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


@pytest.mark.parametrize("name", sorted(CASES))
def test_json_and_text_carry_the_same_data(name):
    _, text, _ = invoke(CASES[name])
    code, js, _ = invoke(CASES[name] + ["--format", "json"])
    assert code == 0
    data = json.loads(js)
    assert "result" in data
    assert render_report(data, "text") == text


def test_expect_mismatch_exits_one():
    argv = CASES["member_no"]
    assert invoke(argv + ["--expect", "no"])[0] == 0
    code, _, err = invoke(argv + ["--expect", "yes"])
    assert code == 1 and "expected yes" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["ann", "--ring", "Q", "--koszul", "2"],
        ["ann", "--koszul", "2"],
        ["supp", "--complex", "tests/data/missing.cx"],
        ["member", "--ring", "Z", "--ideal", "compact{(4)}", "--complex", D + "z10.cx"],
        ["lattice", "--ring", "Z", "--ideal", "tame{(2)}", "--ideal", "compact{(3)}"],
        ["verify", "nope"],
        ["frobnicate"],
        ["tensor", "--complex", D + "z10.cx", "--formal", D + "g3.formal"],
        ["ann", "--ring", "Z/6", "--complex", D + "z10.cx"],
    ],
)
def test_usage_errors_exit_two(argv):
    code, out, err = invoke(argv)
    assert code == 2
    assert out == ""


def test_budget_flag_exceeded_exits_three():
    code, out, _ = invoke(["tensor", "--ring", "Z", "--koszul", "2,3,5", "--complex", D + "z_mixed.cx", "--budget", "10"])
    assert code == 3 and "BudgetExceeded" in out


def test_env_budget_exceeded_exits_three(monkeypatch):
    monkeypatch.setenv("TT_SIZE_BUDGET", "10")
    code, out, _ = invoke(["tensor", "--ring", "Z", "--koszul", "2,3,5", "--complex", D + "z_mixed.cx"])
    assert code == 3 and "BudgetExceeded" in out
    monkeypatch.setenv("TT_SIZE_BUDGET", "lots")
    assert invoke(["tensor", "--ring", "Z", "--koszul", "2", "--complex", D + "z10.cx"])[0] == 2


def test_nilpotence_t_max_exhausted_exits_three():
    code, out, _ = invoke(["nilpotence", "--map", D + "z4_two.map", "--budget", "1"])
    assert code == 3 and "BudgetExhausted(1)" in out


def test_unknown_window_exits_three(tmp_path):
    out_file = tmp_path / "t.formal"
    assert invoke(["tensor", "--formal", D + "g3.formal", "--formal", D + "e.formal", "--window", "5", "--out", str(out_file)])[0] == 0
    code, out, _ = invoke(["minimal-c", "--formal", str(out_file)])
    assert code == 3 and "UnknownWindow" in out
    code, out, _ = invoke(["ann", "--formal", str(out_file)])
    assert code == 3 and "Unknown" in out
    code, out, _ = invoke(["member", "--ideal", "L1", "--formal", str(out_file)])
    assert code == 3


def test_witness_file_written(tmp_path):
    w = tmp_path / "w.txt"
    code, out, _ = invoke(["nilpotence", "--map", D + "z8_k4_two.map", "--witness-out", str(w)])
    assert code == 0 and "result: Vanishes(2)" in out
    text = w.read_text()
    assert text.startswith("ring Z/8\nsource\n")
    assert "\ns 1\n" in text and "\ns 2\n" in text


def test_koszul_out_round_trips(tmp_path):
    path = tmp_path / "k.cx"
    assert invoke(["koszul", "--ring", "Z", "--koszul", "10", "--out", str(path)])[0] == 0
    assert path.read_text() == (ROOT / D / "z10.cx").read_text()


def test_member_with_generator_files():
    code, out, _ = invoke(["member", "--ring", "Z", "--ideal", f"gen[{D}z10.cx]", "--koszul", "20"])
    assert code == 0 and "result: Yes" in out


def test_verify_suite_passes():
    code, out, _ = invoke(["verify", "lemma7.20", "--window", "16"])
    assert code == 0 and out.rstrip().endswith("result: pass")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "thickideals", "ann", "--ring", "Z", "--koszul", "6"],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0
    assert "result: (6)" in proc.stdout
