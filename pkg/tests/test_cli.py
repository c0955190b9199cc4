import io
import json
import pathlib
import subprocess
import sys

import pytest

from weakvote.cli import main

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def config(text):
    first = text.splitlines()[0]
    assert first.startswith("# config: ")
    return json.loads(first[len("# config: "):])


def test_tally():
    code, out = run("tally", DATA / "fig1.wvp", "--rule", "split-irv")
    assert code == 0 and "winners: b" in out
    assert config(out)["semantics"] == "parallel-universe"
    code, out = run("tally", DATA / "fig1.wvp", "--rule", "approval-irv", "--trace",
                    "--tiebreak", "lexicographic", "--json")
    assert code == 0 and "eliminate c" in out and "winner: a" in out
    record = json.loads(out.strip().splitlines()[-1])
    assert [r["eliminated"] for r in record["trace"]] == ["c", "d", "b"]


def test_tally_usage_errors(capsys):
    assert run("tally", DATA / "fig1.wvp", "--rule", "split-irv", "--trace")[0] == 2
    assert run("tally", DATA / "fig1.wvp", "--rule", "nope")[0] == 2
    assert run()[0] == 2


def test_data_errors(tmp_path):
    bad = tmp_path / "bad.wvp"
    bad.write_text("candidates: a,b\n1: a > a\n")
    assert run("tally", bad, "--rule", "split-irv")[0] == 1
    assert run("tally", tmp_path / "missing.wvp", "--rule", "split-irv")[0] == 1
    assert run("stv", DATA / "fig1.wvp", "--rule", "approval-stv", "-k", "9")[0] == 1


def test_stv():
    code, out = run("stv", DATA / "stv.wvp", "--rule", "approval-stv", "-k", "2", "--json")
    assert code == 0
    assert "quota: 2 (droop)" in out and "elected: a (round 1), b (round 2" in out
    assert config(out)["payment"] == "gregory"
    code, out = run("stv", DATA / "fig10.wvp", "--rule", "split-stv", "--quota", "hare")
    assert code == 0 and "elect d" in out


def test_check():
    code, out = run("check", DATA / "fig8.wvp", "--rule", "split-irv", "--axiom", "clones",
                    "--clones", "c,c'", "--keep", "c")
    assert code == 0 and "verdict: violation" in out
    code, out = run("check", DATA / "fig8.wvp", "--rule", "approval-irv", "--axiom", "clones",
                    "--clones", "c,c'", "--keep", "c")
    assert "verdict: pass" in out
    code, out = run("check", DATA / "fig10.wvp", "--rule", "split-irv",
                    "--axiom", "cohesive-majorities", "--json")
    assert code == 0 and "verdict: violation" in out and "common: a" in out
    code, out = run("check", DATA / "fig10.wvp", "--rule", "approval-stv",
                    "--axiom", "gpsc", "--quota", "hare")
    assert code == 0 and "verdict:" in out
    code, out = run("check", DATA / "fig9.wvp", "--rule", "approval-irv",
                    "--axiom", "majority-alternative")
    assert "verdict: violation" in out
    assert run("check", DATA / "fig8.wvp", "--rule", "split-irv", "--axiom", "clones")[0] == 2
    code, out = run("check", DATA / "fig9.wvp", "--rule", "split-irv", "--axiom", "indiff-mono",
                    "--candidate", "a", "--hovers", "")
    assert code == 0 and "verdict: pass" in out


def test_search():
    code, out = run("search", "--rule", "split-irv", "--axiom", "indiff-mono", "--tries", "50")
    assert code == 0 and "counterexample at try" in out and "candidates:" in out
    code, out = run("search", "--rule", "approval-irv", "--axiom", "clones", "--tries", "20")
    assert code == 0 and "no counterexample in 20 tries" in out
    assert config(out)["seed"] == 0


def test_simulate(tmp_path):
    target = tmp_path / "rows.csv"
    code, _ = run("simulate", "--n", "20", "--m", "4", "--params", "0,0.5", "--samples", "3",
                  "--seed", "9", "--out", target)
    assert code == 0
    text = target.read_text()
    assert text.startswith("# config: ") and '"seed": 9' in text.splitlines()[0]
    code, out = run("simulate", "--n", "20", "--m", "4", "--params", "0", "--samples", "2",
                    "--summary")
    assert "0.0,approval-irv,2," in out
    assert run("simulate", "--params", "1.5")[0] == 2


def test_convert(tmp_path):
    code, out = run("convert", DATA / "fig8.wvp", "--to", "preflib")
    assert code == 0 and "9: {1,3,4},2" in out
    src = tmp_path / "fig8.toi"
    src.write_text(out)
    code, back = run("convert", src)
    assert back.splitlines()[1:] == ["9: {a,c,c'} > b", "4: b > a > {c,c'}", "2: {c,c'} > a > b"]
    code, out = run("convert", DATA / "marks.csv", "--marks", "--candidates", "a,b,c,d")
    lines = out.splitlines()[1:]
    assert lines[0].startswith("1: weak({a,b} > c > d; 1 indifference)")
    assert lines[1].startswith("2: invalid(duplicate-candidate-ranks)")
    assert lines[2].startswith("3: linear(a > b > c > d)")
    assert lines[3].startswith("4: invalid(empty)")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "weakvote", "tally", str(DATA / "fig9.wvp"),
                           "--rule", "approval-irv"], capture_output=True, text=True)
    assert proc.returncode == 0 and "winners: b" in proc.stdout
