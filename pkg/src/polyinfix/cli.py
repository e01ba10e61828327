"""Command-line interface.

Exit codes: 0 success or proved, 1 semantic failure (distinct terms, failed
proof, evaluation error), 2 syntax or configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from polyinfix import eqlogic, gen, models, rewrite
from polyinfix.errors import EvalError, PolyInfixError, ScriptError, TableError
from polyinfix.syntax import ParseError, parse, print_term, to_json
from polyinfix.terms import FixedApp, OperatorTable, PolyApp, default_table

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

ENV_HELP = """\
value literals for --env NAME=VALUE, by model:
  add, mul, sub   integers                       x=7
  seq             comma-separated atoms          u=load,store
  merge           comma-separated atoms          p=a,b,a
  frame           nodes and src:label:dst edges  f=a,b,a:knows:b
  matmul          row-major bracketed integers   A=[[1,2],[3,4]]
"""


class UsageError(Exception):
    pass


def _out(args, text: str = "", data=None):
    if args.json:
        print(json.dumps(data, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


def _err(args, kind: str, message: str, extra: Optional[dict] = None):
    if args.json:
        payload = {"error": kind, "message": message}
        payload.update(extra or {})
        print(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        print(f"error: {kind}: {message}", file=sys.stderr)


def _table(args) -> OperatorTable:
    if args.table:
        return OperatorTable.load(args.table)
    return default_table()


def _describe(t) -> dict:
    if isinstance(t, PolyApp):
        return {"kind": "PolyApp", "kernel": t.kernel, "length": len(t.args)}
    if isinstance(t, FixedApp):
        return {"kind": "FixedApp", "symbol": t.symbol, "length": 1}
    return {"kind": "atom", "length": 1}


def _describe_text(t) -> str:
    d = _describe(t)
    if d["kind"] == "PolyApp":
        return f"PolyApp {d['kernel']}, length {d['length']}"
    if d["kind"] == "FixedApp":
        return f"FixedApp {d['symbol']}, length 1"
    return "atom, length 1"


# ---------------------------------------------------------------------------
# subcommands

def cmd_parse(args) -> int:
    t = parse(args.term, _table(args))
    desc = _describe(t)
    _out(args, f"{print_term(t)}\n{_describe_text(t)}",
         dict(desc, term=print_term(t), tree=to_json(t)))
    return EXIT_OK


def cmd_print(args) -> int:
    t = parse(args.term, _table(args))
    _out(args, print_term(t), {"term": print_term(t)})
    return EXIT_OK


def cmd_flatten(args) -> int:
    t = rewrite.flatten(parse(args.term, _table(args)))
    _out(args, print_term(t), dict(_describe(t), term=print_term(t)))
    return EXIT_OK


def cmd_equiv(args) -> int:
    table = _table(args)
    s, t = parse(args.left, table), parse(args.right, table)
    same = rewrite.equiv_pure(s, t)
    verdict = "EQUIV" if same else "DISTINCT"
    _out(args, verdict, {
        "verdict": verdict,
        "left": print_term(rewrite.flatten(s)),
        "right": print_term(rewrite.flatten(t)),
    })
    return EXIT_OK if same else EXIT_FAIL


def cmd_check(args) -> int:
    sc = eqlogic.load_script(args.script)
    report = eqlogic.check_script(sc)
    if args.json:
        _out(args, data=dict(report.to_dict(), theory=sc.theory))
    elif report.proved:
        print(report.format())
    else:
        print(report.format(), file=sys.stderr)
    return EXIT_OK if report.proved else EXIT_FAIL


def _parse_env(pairs, model) -> dict:
    env = {}
    for pair in pairs or ():
        name, eq, value = pair.partition("=")
        if not eq or not name.strip():
            raise UsageError(f"--env expects NAME=VALUE, got {pair!r}")
        env[name.strip()] = model.parse_value(value.strip())
    return env


def cmd_eval(args) -> int:
    kwargs = {"k": args.dim} if args.model == "matmul" else {}
    try:
        m = models.get_model(args.model, **kwargs)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    table = OperatorTable.load(args.table) if args.table else m.table
    t = parse(args.term, table)
    try:
        env = _parse_env(args.env, m)
    except EvalError as exc:
        raise UsageError(str(exc)) from None
    if m.associative and not args.fold:
        v = models.eval_term(t, m, env)
        _out(args, models.format_value(v), {"model": m.name, "value": models.value_to_json(v)})
        return EXIT_OK
    sides = [args.fold] if args.fold else [rewrite.LEFT, rewrite.RIGHT]
    vals = {side: models.eval_fold(t, m, side, env) for side in sides}
    _out(
        args,
        "\n".join(f"{side}: {models.format_value(v)}" for side, v in vals.items()),
        {"model": m.name, "folds": {s: models.value_to_json(v) for s, v in vals.items()}},
    )
    return EXIT_OK


def cmd_brackets(args) -> int:
    t = parse(args.term, _table(args))
    bs = rewrite.enumerate_bracketings(t)
    texts = [print_term(b) for b in bs]
    _out(args, "\n".join(texts + [f"count {len(bs)}"]), {"bracketings": texts, "count": len(bs)})
    return EXIT_OK


def cmd_lemma(args) -> int:
    try:
        sc = eqlogic.derive_induction_lemma(args.n, args.kernel, mirror=args.mirror)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        report = eqlogic.check_script(sc)
        _out(args, data=dict(eqlogic.script_to_json(sc), verdict=report.verdict))
    else:
        sys.stdout.write(eqlogic.format_script(sc))
    return EXIT_OK


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    table = _table(args)
    terms = [print_term(gen.random_term(rng, table, args.depth)) for _ in range(args.count)]
    _out(args, "\n".join(terms), {"seed": args.seed, "terms": terms})
    return EXIT_OK


def cmd_repl(args) -> int:
    from polyinfix.repl import Repl

    table = _table(args)
    repl = Repl(table)
    if args.script:
        repl.load_script(eqlogic.load_script(args.script))
    repl.run(sys.stdin, sys.stdout, interactive=sys.stdin.isatty())
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands accept the flags too, without overriding values given earlier
        g = argparse.ArgumentParser(add_help=False)
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        g.add_argument("--table", metavar="PATH", help="operator table (JSON)",
                       **(kw or {"default": None}))
        g.add_argument("--json", action="store_true", help="machine-readable output",
                       **(kw or {"default": False}))
        g.add_argument("--seed", type=int, help=f"random seed (default {gen.DEFAULT_SEED})",
                       **(kw or {"default": gen.DEFAULT_SEED}))
        return g

    common = global_flags(suppress=True)

    p = argparse.ArgumentParser(
        prog="polyinfix",
        description="Parse, rewrite, check and evaluate poly-infix terms.",
        parents=[global_flags(suppress=False)],
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=func)
        return sp

    add("parse", cmd_parse, "parse a term; report its root and length").add_argument("term")
    add("print", cmd_print, "print a term in canonical form").add_argument("term")
    add("flatten", cmd_flatten, "bracket-free normal form").add_argument("term")
    sp = add("equiv", cmd_equiv, "equal under the association schemes alone?")
    sp.add_argument("left")
    sp.add_argument("right")
    add("check", cmd_check, "check a proof script").add_argument("script")
    sp = sub.add_parser(
        "eval", help="evaluate a term in a model", parents=[common],
        epilog=ENV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sp.set_defaults(func=cmd_eval)
    sp.add_argument("term")
    sp.add_argument("model_pos", nargs="?", metavar="MODEL", help="same as --model")
    sp.add_argument("--model", choices=sorted(models.MODEL_FACTORIES))
    sp.add_argument("--env", action="append", metavar="NAME=VALUE", default=[])
    sp.add_argument("--fold", choices=[rewrite.LEFT, rewrite.RIGHT],
                    help="fold strictly in one direction (any model)")
    sp.add_argument("--dim", type=int, default=2, help="matrix dimension for matmul")
    add("brackets", cmd_brackets, "all binary bracketings of a flat chain").add_argument("term")
    sp = add("lemma", cmd_lemma, "emit the induction-lemma script for n")
    sp.add_argument("n", type=int)
    sp.add_argument("--kernel", default="+")
    sp.add_argument("--mirror", action="store_true", help="right-hand identity")
    sp = add("gen", cmd_gen, "random well-formed terms (seeded)")
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--depth", type=int, default=3)
    sp = add("repl", cmd_repl, "interactive step-by-step derivations")
    sp.add_argument("script", nargs="?", help="preload hypotheses and goal from a script")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "eval":
        if args.model is None:
            args.model = args.model_pos
        if args.model is None:
            parser.error("eval needs a model (positional or --model)")
    try:
        return args.func(args)
    except ParseError as exc:
        d = exc.diagnostic
        _err(args, d.kind, f"{d.line}:{d.column}: {d.message}", {"diagnostic": d.to_dict()})
        return EXIT_USAGE
    except (ScriptError, TableError, UsageError) as exc:
        _err(args, getattr(exc, "kind", "UsageError"), str(exc))
        return EXIT_USAGE
    except PolyInfixError as exc:
        _err(args, exc.kind, str(exc))
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
