import random

import pytest

from polyinfix import gen
from polyinfix.eqlogic import (
    FAILED,
    L2R,
    PROVED,
    R2L,
    ApplyHyp,
    AttContract,
    AttExpand,
    Flatten,
    Group,
    Hypothesis,
    ProofScript,
    Ungroup,
    apply_hyp,
    builtin_script,
    check_script,
    derive_induction_lemma,
    format_script,
    load_script,
    parse_script,
    parse_step,
)
from polyinfix.errors import BadPath, BadSpan, NoMatch, NotPoly, ScriptError, TermError
from polyinfix.models import ASSOCIATIVE_MODELS, eval_term, get_model
from polyinfix.rewrite import LEFT, RIGHT, Span
from polyinfix.syntax import parse
from polyinfix.terms import PolyApp, Var, default_table, psi_length

H = Hypothesis("h1", parse("2+2"), parse("4"))


def test_apply_hyp_examples():
    assert apply_hyp(parse("2+2+3"), H, L2R, (), Span(0, 1)) == parse("4+3")
    assert apply_hyp(parse("2+2+2+2+2"), H, L2R, (), Span(2, 3)) == parse("2+2+4+2")
    assert apply_hyp(parse("4+3"), H, R2L, (), Span(0, 0)) == parse("2+2+3")


def test_apply_hyp_no_match():
    with pytest.raises(NoMatch):
        apply_hyp(parse("2+2+3"), H, L2R, (), Span(1, 2))
    with pytest.raises(NoMatch):
        apply_hyp(parse("(2+2)+3"), H, L2R, (), Span(0, 1))


def test_apply_hyp_bad_span_and_path():
    with pytest.raises(BadSpan):
        apply_hyp(parse("2+2+3"), H, L2R, (), Span(2, 3))
    with pytest.raises(BadPath):
        apply_hyp(parse("2+2+3"), H, L2R, (5,), Span(0, 1))
    with pytest.raises(NotPoly):
        apply_hyp(parse("2+2+3"), H, L2R, (0,), Span(0, 0))


def test_apply_hyp_whole_chain_collapses():
    assert apply_hyp(parse("2+2"), H, L2R, (), Span(0, 1)) == parse("4")


def test_apply_hyp_inside_bracket_and_spanless():
    t = parse("1 + (2 + 2) + 3")
    assert apply_hyp(t, H, L2R, (1,), None) == parse("1 + 4 + 3")
    assert apply_hyp(t, H, L2R, (1,), Span(0, 1)) == parse("1 + 4 + 3")
    t = parse("5 * (2 + 2)")
    assert apply_hyp(t, H, L2R, (1,)) == parse("5 * 4")


def test_apply_hyp_other_kernel_target_is_single_argument():
    h = Hypothesis("m", parse("6"), parse("2*3"))
    assert apply_hyp(parse("1+6+1"), h, L2R, (), Span(1, 1)) == parse("1 + (2*3) + 1")


def test_hypotheses_must_be_ground():
    with pytest.raises(TermError):
        Hypothesis("bad", parse("x + 2"), parse("2 + x"))


def test_length_law_for_hyp_steps():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(2, 6)
        args = [parse(str(rng.randint(1, 3))) for _ in range(n)]
        lo = rng.randint(0, n - 1)
        hi = rng.randint(lo, n - 1)
        seg = args[lo:hi + 1]
        src = seg[0] if len(seg) == 1 else PolyApp("+", tuple(seg))
        tgt = rng.choice([parse("9"), parse("4+5"), parse("1+1+1+1")])
        t = PolyApp("+", tuple(args))
        r = apply_hyp(t, Hypothesis("h", src, tgt), L2R, (), Span(lo, hi))
        assert psi_length(r, "+") - psi_length(t, "+") == psi_length(tgt, "+") - psi_length(src, "+")


# ---------------------------------------------------------------------------
# scripts

def test_shipped_scripts_prove():
    for name in ("sum331", "sum332"):
        report = check_script(builtin_script(name))
        assert report.verdict == PROVED, report.format()
        assert len(report.trace) == 1


def test_wrong_span_fails_at_step_one():
    sc = builtin_script("sum331")
    sc.steps = [parse_step("hyp h1 at root span 1 2")]
    report = check_script(sc)
    assert report.verdict == FAILED
    assert report.failed_step == 1
    assert report.error_kind == "NoMatch"


def test_wrong_final_term_fails_without_step_error():
    sc = builtin_script("sum331")
    sc.goal_rhs = parse("7")
    report = check_script(sc)
    assert report.verdict == FAILED and report.failed_step is None
    assert report.final == parse("4+3")


def test_failure_keeps_prefix_trace():
    sc = ProofScript("t", default_table(), [H], parse("2+2+3"), parse("4+3"), [
        Group((), Span(0, 1)),
        Ungroup((), 0),
        ApplyHyp("h1", L2R, (), Span(1, 2)),
        ApplyHyp("h1", L2R, (), Span(0, 1)),
    ])
    report = check_script(sc)
    assert report.failed_step == 3
    assert [e.ok for e in report.trace] == [True, True, False]
    assert report.trace[1].after == parse("2+2+3")


def test_unknown_hypothesis_fails():
    sc = ProofScript("t", default_table(), [], parse("2+2"), parse("4"), [ApplyHyp("nope")])
    assert check_script(sc).error_kind == "UnknownHypothesis"


def test_check_is_deterministic():
    sc = builtin_script("sum332")
    assert check_script(sc).to_dict() == check_script(sc).to_dict()


def test_duplicate_hypothesis_names():
    with pytest.raises(ScriptError):
        ProofScript("t", default_table(), [H, H], parse("1"), parse("1"))


def test_all_step_kinds():
    sc = ProofScript("t", default_table(), [H], parse("2+2+3+5"), parse("4+(3+5)"), [
        AttContract((), LEFT),       # (2+2)+3+5
        AttExpand((), LEFT),         # 2+2+3+5
        Group((), Span(2, 3)),       # 2+2+(3+5)
        ApplyHyp("h1", L2R, (), Span(0, 1)),  # 4+(3+5)
        Ungroup((), 1),              # 4+3+5
        AttContract((), RIGHT),      # 4+(3+5)
        AttExpand((), RIGHT),        # 4+3+5
        Group((), Span(1, 2)),       # 4+(3+5)
        Flatten((1,)),
    ])
    report = check_script(sc)
    assert report.proved, report.format()


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("mirror", [False, True])
def test_induction_lemmas(n, mirror):
    sc = derive_induction_lemma(n, mirror=mirror)
    xs = tuple(Var(f"x{i}") for i in range(1, n + 2))
    assert sc.goal_lhs == PolyApp("+", xs)
    if mirror:
        assert sc.goal_rhs == PolyApp("+", (xs[0], PolyApp("+", xs[1:])))
    else:
        assert sc.goal_rhs == PolyApp("+", (PolyApp("+", xs[:n]), xs[n]))
    assert all(isinstance(s, (Group, AttContract, AttExpand)) for s in sc.steps)
    assert not sc.hypotheses
    assert check_script(sc).proved


def test_induction_lemma_range():
    for n in (1, 11):
        with pytest.raises(ValueError):
            derive_induction_lemma(n)


def test_induction_lemma_other_kernel():
    sc = derive_induction_lemma(4, kernel=";", mirror=True)
    assert check_script(sc).proved
    again = parse_script(format_script(sc))
    assert check_script(again).proved


# ---------------------------------------------------------------------------
# script files

SCRIPT = """\
theory demo   # comment
hyp h1 : 2 + 2 = 4
hyp h2 : 3 = 1 + 2
goal : 2 + 2 + 3 = 4 + 1 + 2
proof
  hyp h1 at root span 0 1
  hyp h2 at root span 1 1
qed
"""


def test_parse_script():
    sc = parse_script(SCRIPT)
    assert sc.theory == "demo"
    assert [h.name for h in sc.hypotheses] == ["h1", "h2"]
    assert sc.steps == [ApplyHyp("h1", L2R, (), Span(0, 1)), ApplyHyp("h2", L2R, (), Span(1, 1))]
    assert check_script(sc).proved


def test_script_format_round_trip():
    sc = parse_script(SCRIPT)
    again = parse_script(format_script(sc))
    assert again.steps == sc.steps and again.hypotheses == sc.hypotheses
    assert (again.goal_lhs, again.goal_rhs) == (sc.goal_lhs, sc.goal_rhs)


@pytest.mark.parametrize("line,step", [
    ("hyp h rev at root.1", ApplyHyp("h", R2L, (1,), None)),
    ("flatten at root.0", Flatten((0,))),
    ("group 1 2 at root", Group((), Span(1, 2))),
    ("ungroup 3 at 0.1", Ungroup((0, 1), 3)),
    ("attl at root", AttContract((), LEFT)),
    ("attr at root", AttContract((), RIGHT)),
    ("unattl at root", AttExpand((), LEFT)),
    ("unattr at root.2", AttExpand((2,), RIGHT)),
])
def test_parse_steps(line, step):
    assert parse_step(line) == step


@pytest.mark.parametrize("text", [
    "goal : 1 = 1\nproof\n  frobnicate at root\nqed\n",
    "goal : 1 = 1\nproof\n  attl root\nqed\n",
    "goal : 1 = 1\nproof\n  group 1 at root\nqed\n",
    "goal : 1 = 1\nproof\n",
    "hyp h : 1 = 1\nproof\nqed\n",
    "goal : 1 + = 1\nproof\nqed\n",
    "goal : 1 = 1 = 1\nproof\nqed\n",
    "hyp h : x = 1\ngoal : 1 = 1\nproof\nqed\n",
    "goal : 1 = 1\nproof\nqed\nmore\n",
    "bogus line\n",
])
def test_script_errors(text):
    with pytest.raises(ScriptError):
        parse_script(text)


def test_script_with_table(tmp_path):
    (tmp_path / "seq.json").write_text(
        '{"sort": "P", "kernels": [{"symbol": ";"}], "fixed_ops": {}, "constants": ["skip", "halt"]}',
        encoding="utf-8",
    )
    (tmp_path / "s.proof").write_text(
        "theory seq\ntable seq.json\nhyp h : skip ; skip = skip\n"
        "goal : halt ; skip ; skip = halt ; skip\nproof\n  hyp h at root span 1 2\nqed\n",
        encoding="utf-8",
    )
    sc = load_script(tmp_path / "s.proof")
    assert sc.table_path == "seq.json"
    assert check_script(sc).proved


def test_load_script_missing(tmp_path):
    with pytest.raises(ScriptError):
        load_script(tmp_path / "none.proof")


# ---------------------------------------------------------------------------
# soundness sample (the acceptance suite runs the full count)

@pytest.mark.parametrize("name", ASSOCIATIVE_MODELS)
def test_soundness_sample(name):
    m = get_model(name)
    rng = random.Random(name)
    for _ in range(60):
        sc = gen.random_derivation(rng, m)
        assert check_script(sc).proved
        for h in sc.hypotheses:
            assert eval_term(h.lhs, m) == eval_term(h.rhs, m)
        env = {v: gen.random_value(rng, m) for v in gen.VAR_POOL}
        assert eval_term(sc.goal_lhs, m, env) == eval_term(sc.goal_rhs, m, env)
