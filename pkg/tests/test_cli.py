import io
import json
import subprocess
import sys


from buchiprov.cli import run

import games

LOOP_GAME = str(games.DATA / "loop_or_leave.game")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_solve_text():
    assert call("solve", LOOP_GAME, "-p", "v") == (0, "b*c^inf\n", "")


def test_solve_all_positions():
    code, out, _ = call("solve", LOOP_GAME)
    assert out == "v: b*c^inf\nw: c^inf\n"


def test_solve_json():
    code, out, _ = call("solve", LOOP_GAME, "-p", "v", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["polynomial"] == "b*c^inf"
    assert data["winner"] is True
    assert len(data["monomials"]) == 1
    assert data["monomials"][0]["profile"] == {"b": 1, "c": "inf"}
    assert data["counts"] == {"monomials": 1, "positional": 1, "nonpositional": 0}


def test_solve_report_table():
    code, out, _ = call("solve", LOOP_GAME, "-p", "v", "--report")
    assert out.splitlines()[0] == "b*c^inf"
    assert "b*c^inf  positional" in out


def test_solve_trace_goes_to_stderr():
    code, out, err = call("solve", LOOP_GAME, "-p", "v", "--trace")
    assert out == "b*c^inf\n"
    lines = err.splitlines()
    assert lines[:4] == ["Y0 = (1, 1)", "  Z0 = (0, 0)", "  Z1 = (0, c)", "  Z2 = (b*c, c)"]
    outer = [ln for ln in lines if ln.startswith("Y")]
    assert outer[:3] == ["Y0 = (1, 1)", "Y1 = (b*c, c)", "Y2 = (b*c^2, c^2)"]


def test_solve_tracking_and_modes():
    assert call("solve", LOOP_GAME, "-p", "v", "--track", "b")[1] == "b\n"
    assert call("solve", LOOP_GAME, "-p", "v", "--track", "a,c")[1] == "c^inf\n"
    assert call("solve", LOOP_GAME, "-p", "v", "--gfp-mode", "saturating")[1] == "b*c^inf\n"
    code, _, err = call("solve", LOOP_GAME, "-p", "v", "--track", "zz")
    assert code == 2 and "--track" in err


def test_losing_position_is_still_success():
    code, out, _ = call("solve", str(games.DATA / "repair_demo.game"), "-p", "v")
    assert (code, out) == (0, "0\n")


def test_eval():
    assert call("eval", LOOP_GAME, "-p", "v", "--semiring", "tropical", "--assign", "a=1,b=2,c=0")[1] == "2\n"
    assert call("eval", LOOP_GAME, "-p", "v", "--semiring", "viterbi",
                "--assign", "a=1,b=0.9,c=1")[1] == "0.9\n"
    assert call("eval", LOOP_GAME, "-p", "v", "--semiring", "boolean",
                "--assign", "a=0,b=1,c=1")[1] == "1\n"
    assert call("eval", LOOP_GAME, "-p", "v", "--semiring", "minmax", "--levels", "low<mid<high",
                "--assign", "a=low,b=mid,c=high")[1] == "mid\n"


def test_eval_usage_errors():
    code, _, err = call("eval", LOOP_GAME, "-p", "v", "--semiring", "viterbi", "--assign", "a=1")
    assert code == 2 and "'b'" in err
    code, _, err = call("eval", LOOP_GAME, "-p", "v", "--semiring", "minmax", "--assign", "a=x")
    assert code == 2 and "--levels" in err
    code, _, err = call("eval", LOOP_GAME, "-p", "v", "--semiring", "viterbi", "--assign", "a=2,b=1,c=1")
    assert code == 2 and "--assign" in err


def test_strategies():
    code, out, _ = call("strategies", LOOP_GAME, "-p", "v")
    assert code == 0
    assert out.splitlines()[0] == "b*c^inf  positional  dominant  automata=1"
    assert "oracle: agree" in out
    data = json.loads(call("strategies", LOOP_GAME, "-p", "v", "--json")[1])
    assert data["agree"] and data["dominant_sum"] == "b*c^inf"


def test_strategies_budget_exhausted():
    code, _, err = call("strategies", LOOP_GAME, "-p", "v", "--budget", "1")
    assert code == 3 and "budget" in err


def test_repair():
    path = str(games.DATA / "repair_demo.game")
    code, out, _ = call("repair", path, "-p", "v", "--remove", "a")
    assert code == 0
    assert out.splitlines() == ["position v: winner no", "value: a~", "{a}  minimal"]
    data = json.loads(call("repair", path, "-p", "v", "--remove", "a", "--json")[1])
    assert data["repairs"] == [{"edges": ["a"], "minimal": True, "verified": True}]


def test_repair_add_flag():
    path = str(games.DATA / "repair_demo.game")
    code, out, _ = call("repair", path, "-p", "v", "--add", "w:v", "--remove", "a",
                        "--full-exponents")
    assert code == 0 and "{a}  minimal" in out
    code, _, err = call("repair", path, "-p", "v", "--add", "wv")
    assert code == 2 and "--add" in err
    code, _, err = call("repair", path, "-p", "v", "--add", "v:w")
    assert code == 2 and "already an edge" in err


def test_export_dot():
    code, out, _ = call("export-dot", LOOP_GAME)
    assert out.startswith("digraph game {")
    code, out, _ = call("export-dot", LOOP_GAME, "--strategy", "-p", "v")
    assert "style=dashed" in out
    code, _, err = call("export-dot", LOOP_GAME, "--strategy", "-p", "v", "--index", "3")
    assert code == 2 and "--index" in err


def test_check(tmp_path):
    assert call("check", LOOP_GAME)[1].startswith("ok: 2 positions, 3 edges")
    bad = tmp_path / "bad.game"
    bad.write_text("position v 0\nposition w 0\nedge a v w\n")
    code, _, err = call("check", str(bad))
    assert code == 1 and "vE empty" in err and str(bad) in err
    broken = tmp_path / "broken.game"
    broken.write_text("position v 0\nedge a v nowhere\n")
    code, _, err = call("check", str(broken))
    assert code == 1 and "line 2" in err


def test_missing_file_and_bad_position():
    code, _, err = call("solve", "no/such.game", "-p", "v")
    assert code == 1 and "no/such.game" in err
    code, _, err = call("solve", LOOP_GAME, "-p", "zz")
    assert code == 2 and "-p/--position" in err
    code, _, err = call("repair", LOOP_GAME)
    assert code == 2 and "-p/--position" in err


def test_argparse_usage_errors():
    assert call()[0] == 2
    assert call("solve", LOOP_GAME, "--gfp-mode", "fast")[0] == 2
    assert call("solve", LOOP_GAME, "--max-steps", "0")[0] == 2


def test_step_budget_exit_code():
    code, _, err = call("solve", LOOP_GAME, "-p", "v", "--max-steps", "1")
    assert code == 3


def test_deterministic_output():
    a = call("solve", LOOP_GAME, "--json")
    b = call("solve", LOOP_GAME, "--json")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "buchiprov", "solve", LOOP_GAME, "-p", "v"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "b*c^inf\n"
