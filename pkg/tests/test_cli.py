import json
import subprocess
import sys

import pytest

from poslog.cli import main

CHAIN2 = "elements: 0 1\nle: 0 1\n"


@pytest.fixture
def chain2(tmp_path):
    p = tmp_path / "chain2.poset"
    p.write_text(CHAIN2)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_posetify_pow_on_chain(capsys, chain2):
    code, out, _ = run(capsys, "posetify", "Pow", chain2)
    assert code == 0
    assert "elements: {} {0} {0,1} {1}" in out
    assert "le: {0} {0,1}" in out and "le: {0,1} {1}" in out
    assert out.count("le:") == 2


def test_posetify_json(capsys):
    code, out, _ = run(capsys, "--json", "posetify", "Pow", "chain:2")
    data = json.loads(out)
    assert code == 0 and len(data["elements"]) == 4 and len(data["covers"]) == 2


def test_translate(capsys):
    assert run(capsys, "translate", "<>p") == (0, "~[]~p\n", "")
    assert run(capsys, "translate", "--nnf", "~[]p")[1] == "<>~p\n"


def test_translate_rejects_negation(capsys):
    code, _, err = run(capsys, "translate", "~p")
    assert code == 2 and "negation" in err


def test_repro(capsys):
    code, out, _ = run(capsys, "repro", "dunn-counterexample")
    assert code == 0
    assert "4 vs 2 — not surjective" in out


def test_check_wpb(capsys):
    assert run(capsys, "check-wpb", "Pow")[0] == 0
    code, out, _ = run(capsys, "check-wpb", "Nbhd")
    assert code == 1 and "WITNESS" in out


def test_check_exact(capsys):
    assert run(capsys, "check-exact", "Pow", "--bound", "2")[0] == 0


def test_duality(capsys):
    code, out, _ = run(capsys, "duality", "--bound", "2", "--dl-size", "4")
    assert code == 0 and "PASS" in out


def test_beta(capsys):
    code, out, _ = run(capsys, "beta", "Pow", "--algebra", "free:1")
    assert code == 0 and "verdict: iso" in out
    code, out, _ = run(capsys, "beta", "Id", "--algebra", "free:1", "--pos-functor", "DC")
    assert code == 1 and "not surjective" in out


def test_eval_with_liftings(capsys, tmp_path):
    model = tmp_path / "m.model"
    model.write_text("states: x y\nxi: x -> {x,y}\nxi: y -> {}\nval: p = {y}\n")
    table = tmp_path / "l.lift"
    table.write_text("dia = {{1},{0,1}} : Pow @ 1\n")
    assert run(capsys, "eval", "[]p", str(model))[1] == "{y}\n"
    assert run(capsys, "eval", "lift dia(p)", str(model), "--liftings", str(table))[1] == "{x}\n"


def test_liftings(capsys):
    code, out, _ = run(capsys, "liftings", "Id", "--arity", "1", "--monotone")
    assert code == 0 and out.startswith("3 liftings of Id at arity 1")
    code, out, _ = run(capsys, "liftings", "Pow", "--bijection")
    assert code == 0 and "monotone liftings: 8" in out


def test_nstep(capsys):
    code, out, _ = run(capsys, "nstep", "Pow", "--n", "2")
    assert code == 0 and "PASS" in out


def test_exit_codes(capsys):
    assert run(capsys, "posetify", "Pow", "/missing/file")[0] == 2
    assert run(capsys, "liftings", "Pow", "--arity", "3")[0] == 3
    assert run(capsys, "beta", "Frob")[0] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "poslog", "translate", "[]p & <>q"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "[]p & ~[]~q\n"
