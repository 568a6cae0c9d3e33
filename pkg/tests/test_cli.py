import json
import subprocess
import sys

import pytest

from filterlogic.cli import main
from filterlogic.semantics import eval_frame
from filterlogic.io import from_document
from filterlogic.syntax import parse_pair

M3 = {"version": "filterlogic-frame/1", "elements": ["0", "a", "b", "c", "1"],
      "leq_pairs": [["0", "a"], ["0", "b"], ["0", "c"], ["a", "1"], ["b", "1"], ["c", "1"]]}
CHAIN3 = {"elements": ["0", "1", "2"], "leq_pairs": [["0", "1"], ["1", "2"]]}
CHAIN2R = {"elements": ["0", "1"], "leq_pairs": [["0", "1"]], "R": [["0", "1"], ["1", "1"]],
           "valuation": {"p": ["1"]}}
DISTR = "p & (q|q2) <= (p&q)|(p&q2)"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, d in (("m3", M3), ("chain3", CHAIN3), ("chain2r", CHAIN2R)):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(d))
        out[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_validity_m3(files, capsys):
    code, out, _ = run(capsys, "validity", "--frame", files["m3"], "--pair", DISTR)
    assert code == 1
    assert "V(p) = {a, 1}" in out and "state a" in out


def test_validity_json_witness_rechecks(files, capsys):
    code, out, _ = run(capsys, "validity", "--frame", files["m3"], "--pair", DISTR, "--format", "json")
    assert code == 1
    w = json.loads(out)["witness"]
    lf = from_document(w["model"])
    pair = parse_pair(w["pair"])
    s = lf.sl.labels.index(w["state"])
    assert eval_frame(lf.sl, None, lf.valuation, pair.lhs) >> s & 1
    assert not eval_frame(lf.sl, None, lf.valuation, pair.rhs) >> s & 1


def test_validity_valid(files, capsys):
    assert run(capsys, "validity", "--frame", files["m3"], "--pair", "p <= p | q")[0] == 0


def test_correspond(capsys):
    code, out, _ = run(capsys, "correspond", "--pair", "p <= dia p")
    assert code == 0
    assert out.strip() == "forall x. exists y0. (r(x,y0) & leq(x,y0))"


def test_correspond_smt(capsys):
    code, out, _ = run(capsys, "correspond", "--pair", "box p <= p", "--format", "smt")
    assert code == 0 and "(declare-fun r (S S) Bool)" in out


def test_dualize_chain3(files, capsys):
    code, out, _ = run(capsys, "dualize", "--lattice", files["chain3"], "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["dual"]["elements"] == ["^2", "^1"]
    assert d["theta"] == {"0": [], "1": ["^1"], "2": ["^2", "^1"]}


def test_eval_and_check_frame(files, capsys):
    code, out, _ = run(capsys, "eval", "--frame", files["chain2r"], "--formula", "box p", "--state", "0")
    assert code == 0 and "[[box p]] = {0, 1}" in out
    code, out, _ = run(capsys, "check-frame", "--frame", files["chain2r"])
    assert code == 0 and "modal L-frame: True" in out


def test_translations(capsys):
    assert run(capsys, "translate-st", "--formula", "dia p")[1].strip() == "exists y0. (r(x,y0) & P_p(y0))"
    assert run(capsys, "translate-so", "--pair", "p <= p")[1].startswith("forall2 P_p.")


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "p & (q | r)")
    assert code == 0 and out.splitlines()[1] == "(and p (or q r))"


def test_prove_and_countermodel(capsys):
    assert run(capsys, "prove", "--pair", "(p & q) | (p & r) <= p & (q | r)")[0] == 0
    code, out, _ = run(capsys, "prove", "--pair", "p & (q | r) <= (p & q) | (p & r)")
    assert code == 1 and "countermodel on 4 elements" in out
    code, out, _ = run(capsys, "countermodel", "--pair", "box p <= p", "--max-n", "2")
    assert code == 1 and '"R": [["0", "1"], ["1", "1"]]' in out
    assert run(capsys, "countermodel", "--pair", "p <= p | q", "--max-n", "3")[0] == 0


def test_prove_checks_derivation_file(tmp_path, capsys):
    from filterlogic.prover import some_val_derivations
    p = tmp_path / "d.json"
    p.write_text(some_val_derivations()[3].dumps())
    assert run(capsys, "prove", "--derivation", str(p))[0] == 0
    d = json.loads(p.read_text())
    d["rule"] = "magic"
    p.write_text(json.dumps(d))
    assert run(capsys, "prove", "--derivation", str(p))[0] == 1


def test_enumerate_and_complete(files, capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "5", "--kind", "lattice", "--iso")
    assert code == 0 and out.startswith("5 lattice frames")
    code, out, _ = run(capsys, "complete", "--lattice", files["m3"], "--format", "json")
    assert code == 0 and len(json.loads(out)["embed"]) == 5


@pytest.mark.parametrize("argv", [
    ["parse", "p &"],
    ["validity", "--frame", "BAD", "--pair", "p <= q"],
    ["validity", "--frame", "MISSING", "--pair", "p <= q"],
    ["correspond", "--pair", "box (p | q) <= p"],
    ["enumerate", "--n", "9", "--kind", "modal"],
])
def test_malformed_exit_2(files, capsys, argv):
    argv = [files["bad"] if a == "BAD" else "/nonexistent.json" if a == "MISSING" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_entry_point_subprocess():
    r = subprocess.run([sys.executable, "-m", "filterlogic.cli", "correspond", "--pair", "box p <= p"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.strip() == "forall x. exists v0. (r(x,v0) & leq(v0,x))"
