import json

import pytest

from polyinfix.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_length(capsys):
    code, out, _ = run(capsys, "parse", "2+2+2+2+2")
    assert code == 0
    assert out.splitlines() == ["2 + 2 + 2 + 2 + 2", "PolyApp +, length 5"]
    code, out, _ = run(capsys, "parse", "x")
    assert out.splitlines()[-1] == "atom, length 1"


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "parse", "2+*3")
    assert code == 2
    assert "BadToken" in err


def test_parse_json(capsys):
    code, out, _ = run(capsys, "--json", "parse", "a+b+c")
    d = json.loads(out)
    assert d["kind"] == "PolyApp" and d["length"] == 3 and d["kernel"] == "+"
    code, out, _ = run(capsys, "parse", "--json", "a+")
    assert code == 2 and json.loads(out)["error"] == "BadToken"


def test_print_and_flatten(capsys):
    assert run(capsys, "print", "a+(b+c)")[1].strip() == "a + (b + c)"
    assert run(capsys, "flatten", "a+(b+c)+((d+e))")[1].strip() == "a + b + c + d + e"


@pytest.mark.parametrize("left,right,code,word", [
    ("x1+(x2+x3)+x4+x5", "x1+x2+x3+x4+x5", 0, "EQUIV"),
    ("x+y", "y+x", 1, "DISTINCT"),
    ("(a+b)+c", "a+(b+c)", 0, "EQUIV"),
])
def test_equiv(capsys, left, right, code, word):
    c, out, _ = run(capsys, "equiv", left, right)
    assert (c, out.strip()) == (code, word)


def test_equiv_parse_failure(capsys):
    assert run(capsys, "equiv", "a+", "b")[0] == 2


def test_check(capsys, tmp_path):
    from importlib.resources import files

    for name in ("sum331", "sum332"):
        path = files("polyinfix") / "proofs" / f"{name}.proof"
        code, out, _ = run(capsys, "check", str(path))
        assert code == 0 and out.strip().endswith("Proved")
    text = (files("polyinfix") / "proofs" / "sum331.proof").read_text(encoding="utf-8")
    bad = tmp_path / "bad.proof"
    bad.write_text(text.replace("span 0 1", "span 1 2"), encoding="utf-8")
    code, out, err = run(capsys, "check", str(bad))
    assert code == 1 and "NoMatch" in err
    code, out, _ = run(capsys, "check", "--json", str(bad))
    d = json.loads(out)
    assert d["verdict"] == "Failed" and d["failed_step"] == 1
    assert d["trace"][0]["error"]["kind"] == "NoMatch"
    broken = tmp_path / "broken.proof"
    broken.write_text("goal : 1 = \n", encoding="utf-8")
    assert run(capsys, "check", str(broken))[0] == 2


def test_eval(capsys):
    assert run(capsys, "eval", "7+7+7", "add")[1].strip() == "21"
    assert run(capsys, "eval", "5·5·5·5", "--model", "mul")[1].strip() == "625"
    code, out, _ = run(capsys, "eval", "u;v;w", "seq", "--env", "u=u", "--env", "v=v", "--env", "w=w")
    assert out.strip() == "Seq[u, v, w]"
    code, out, _ = run(capsys, "eval", "1-2-3", "sub")
    assert out.split() == ["left:", "-4", "right:", "2"]
    code, out, _ = run(capsys, "--json", "eval", "A@B", "matmul", "--env", "A=[[1,2],[3,4]]",
                       "--env", "B=[[0,1],[1,0]]")
    assert json.loads(out)["value"] == {"matrix": [[2, 1], [4, 3]]}


def test_eval_errors(capsys):
    assert run(capsys, "eval", "x+1", "add")[0] == 1
    assert run(capsys, "eval", "x+1", "add", "--env", "x")[0] == 2
    assert run(capsys, "eval", "x+1", "add", "--env", "x=q")[0] == 2
    assert run(capsys, "eval", "a @ b", "matmul", "--env", "a=[[1]]", "--env", "b=[[1]]")[0] == 1
    assert run(capsys, "eval", "1+", "add")[0] == 2
    assert run(capsys, "eval", "1", "nosuch")[0] == 2


def test_brackets(capsys):
    code, out, _ = run(capsys, "brackets", "a+b+c+d+e")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 15 and lines[-1] == "count 14"
    assert run(capsys, "brackets", "a+(b+c)")[0] == 1


def test_lemma(capsys, tmp_path):
    code, out, _ = run(capsys, "lemma", "5")
    assert code == 0 and out.startswith("theory induction-left-5")
    p = tmp_path / "l.proof"
    p.write_text(out, encoding="utf-8")
    assert run(capsys, "check", str(p))[0] == 0
    code, out, _ = run(capsys, "--json", "lemma", "3", "--mirror")
    assert json.loads(out)["verdict"] == "Proved"
    assert run(capsys, "lemma", "11")[0] == 2


def test_table_flag(capsys, tmp_path):
    t = tmp_path / "t.json"
    t.write_text('{"sort": "P", "kernels": [{"symbol": "||"}], "fixed_ops": {}, "constants": []}')
    assert run(capsys, "--table", str(t), "parse", "p || q || r")[1].splitlines()[-1] == "PolyApp ||, length 3"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "--table", str(bad), "parse", "x")[0] == 2


def test_gen_is_seed_deterministic(capsys):
    a = run(capsys, "--json", "--seed", "5", "gen", "--count", "4")[1]
    b = run(capsys, "--json", "--seed", "5", "gen", "--count", "4")[1]
    c = run(capsys, "--json", "--seed", "6", "gen", "--count", "4")[1]
    assert a == b != c
    assert len(json.loads(a)["terms"]) == 4
