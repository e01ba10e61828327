"""Checking chain derivations over poly-infix terms.

A proof is a forward chain from the goal's left side to its right side.
Each step is one of:

* ``ApplyHyp`` -- replace an occurrence of one side of a ground hypothesis
  by the other.  With a span the occurrence is a segment of a chain and the
  replacement is spliced in bracket-free; without a span it is an ordinary
  subterm replacement.
* ``Flatten``, ``Group``, ``Ungroup`` -- normal form and bracketing moves.
* ``AttContract``, ``AttExpand`` -- the left/right association schemes.

Script files look like (``table <path>`` or ``kernel <symbol>`` lines may
precede the hypotheses to change the operator table)::

    theory sum331
    hyp h1 : 2 + 2 = 4
    goal : 2 + 2 + 3 = 4 + 3
    proof
      hyp h1 at root span 0 1
    qed
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Callable, Optional, Union

from polyinfix import rewrite
from polyinfix.errors import (
    NoMatch,
    NotPoly,
    PolyInfixError,
    ScriptError,
    TermError,
    UnknownHypothesis,
)
from polyinfix.rewrite import LEFT, RIGHT, Span, format_path, parse_path, replace_at, subterm_at
from polyinfix.syntax import ParseError, parse, print_term, to_json
from polyinfix.terms import (
    KernelSpec,
    OperatorTable,
    PolyApp,
    Term,
    Var,
    _splice,
    default_table,
    kernel_table,
    subterms,
)

L2R = "l2r"
R2L = "r2l"

PROVED = "Proved"
FAILED = "Failed"


@dataclass(frozen=True)
class Hypothesis:
    name: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        for side in (self.lhs, self.rhs):
            for _, u in subterms(side):
                if isinstance(u, Var):
                    raise TermError(f"hypothesis {self.name!r} mentions variable {u.name!r}; "
                                    "hypotheses must be ground")

    def sides(self, direction: str):
        if direction == L2R:
            return self.lhs, self.rhs
        if direction == R2L:
            return self.rhs, self.lhs
        raise ValueError(f"direction must be {L2R!r} or {R2L!r}, not {direction!r}")


# ---------------------------------------------------------------------------
# steps

@dataclass(frozen=True)
class ApplyHyp:
    name: str
    direction: str = L2R
    path: tuple = ()
    span: Optional[Span] = None


@dataclass(frozen=True)
class Flatten:
    path: tuple = ()


@dataclass(frozen=True)
class Group:
    path: tuple
    span: Span


@dataclass(frozen=True)
class Ungroup:
    path: tuple
    index: int


@dataclass(frozen=True)
class AttContract:
    path: tuple
    side: str


@dataclass(frozen=True)
class AttExpand:
    path: tuple
    side: str


ProofStep = Union[ApplyHyp, Flatten, Group, Ungroup, AttContract, AttExpand]


def format_step(step: ProofStep) -> str:
    """Render a step in script syntax."""
    at = f"at {format_path(step.path)}"
    if isinstance(step, ApplyHyp):
        rev = " rev" if step.direction == R2L else ""
        span = f" span {step.span.lo} {step.span.hi}" if step.span is not None else ""
        return f"hyp {step.name}{rev} {at}{span}"
    if isinstance(step, Flatten):
        return f"flatten {at}"
    if isinstance(step, Group):
        return f"group {step.span.lo} {step.span.hi} {at}"
    if isinstance(step, Ungroup):
        return f"ungroup {step.index} {at}"
    if isinstance(step, AttContract):
        return f"att{'l' if step.side == LEFT else 'r'} {at}"
    if isinstance(step, AttExpand):
        return f"unatt{'l' if step.side == LEFT else 'r'} {at}"
    raise TypeError(f"not a proof step: {step!r}")


@dataclass
class ProofScript:
    theory: str
    table: OperatorTable
    hypotheses: list
    goal_lhs: Term
    goal_rhs: Term
    steps: list = field(default_factory=list)
    table_path: Optional[str] = None

    def __post_init__(self):
        names = [h.name for h in self.hypotheses]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ScriptError(f"duplicate hypothesis names: {', '.join(dupes)}")
        for h in self.hypotheses:
            self.table.check(h.lhs)
            self.table.check(h.rhs)
        self.table.check(self.goal_lhs)
        self.table.check(self.goal_rhs)

    def hypothesis(self, name: str) -> Hypothesis:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise UnknownHypothesis(f"no hypothesis named {name!r}")


# ---------------------------------------------------------------------------
# applying steps

def apply_hyp(t: Term, h: Hypothesis, direction: str, path=(), span: Optional[Span] = None) -> Term:
    """Rewrite one occurrence of a hypothesis side inside ``t``.

    With ``span`` the arguments ``span.lo..span.hi`` of the chain at ``path``,
    read as one chain (or as the single argument when the span has length
    one), must equal the source side.  They are replaced by the target side,
    spliced when it is a chain of the same kernel.
    """
    source, target = h.sides(direction)
    if span is None:
        u = subterm_at(t, path)
        if u != source:
            raise NoMatch(
                f"subterm at {format_path(path)} is {print_term(u)}, "
                f"not {print_term(source)}"
            )
        return replace_at(t, path, target)

    u = subterm_at(t, path)
    if not isinstance(u, PolyApp):
        raise NotPoly(f"subterm at {format_path(path)} is not a poly-infix application")
    span.check(len(u.args))
    segment_args = u.args[span.lo:span.hi + 1]
    if len(segment_args) == 1:
        segment = segment_args[0]
    else:
        segment = PolyApp(u.kernel, segment_args)
    if segment != source:
        raise NoMatch(
            f"segment {span.lo}..{span.hi} at {format_path(path)} is {print_term(segment)}, "
            f"not {print_term(source)}"
        )
    new = _splice(u.kernel, u.args[:span.lo], u.args[span.hi + 1:], target)
    return replace_at(t, path, new)


def apply_step(t: Term, step: ProofStep, hypotheses: Callable[[str], Hypothesis]) -> Term:
    if isinstance(step, ApplyHyp):
        return apply_hyp(t, hypotheses(step.name), step.direction, step.path, step.span)
    if isinstance(step, Flatten):
        return replace_at(t, step.path, rewrite.flatten(subterm_at(t, step.path)))
    if isinstance(step, Group):
        return rewrite.group(t, step.path, step.span)
    if isinstance(step, Ungroup):
        return rewrite.ungroup(t, step.path, step.index)
    if isinstance(step, AttContract):
        return rewrite.att_contract(t, step.path, step.side)
    if isinstance(step, AttExpand):
        return rewrite.att_expand(t, step.path, step.side)
    raise TypeError(f"not a proof step: {step!r}")


# ---------------------------------------------------------------------------
# checking

@dataclass(frozen=True)
class TraceEntry:
    step: ProofStep
    before: Term
    after: Optional[Term] = None
    error: Optional[PolyInfixError] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class CheckReport:
    verdict: str
    trace: list
    failed_step: Optional[int] = None  # 1-based step number
    message: str = ""
    final: Optional[Term] = None

    @property
    def proved(self) -> bool:
        return self.verdict == PROVED

    @property
    def error_kind(self) -> Optional[str]:
        if self.failed_step is None:
            return None
        err = self.trace[self.failed_step - 1].error
        return err.kind if err is not None else None

    def to_dict(self) -> dict:
        entries = []
        for i, e in enumerate(self.trace, 1):
            d = {
                "index": i,
                "step": format_step(e.step),
                "before": print_term(e.before),
            }
            if e.ok:
                d["after"] = print_term(e.after)
            else:
                d["error"] = {"kind": e.error.kind, "message": str(e.error)}
            entries.append(d)
        return {
            "verdict": self.verdict,
            "failed_step": self.failed_step,
            "message": self.message,
            "final": print_term(self.final) if self.final is not None else None,
            "trace": entries,
        }

    def format(self) -> str:
        lines = []
        for i, e in enumerate(self.trace, 1):
            if e.ok:
                lines.append(f"{i:>3}. {format_step(e.step):<28} {print_term(e.before)}  ==>  "
                             f"{print_term(e.after)}")
            else:
                lines.append(f"{i:>3}. {format_step(e.step):<28} {e.error.kind}: {e.error}")
        lines.append(f"{self.verdict}" + (f": {self.message}" if self.message else ""))
        return "\n".join(lines)


def check_script(sc: ProofScript) -> CheckReport:
    t = sc.goal_lhs
    trace = []
    for i, step in enumerate(sc.steps, 1):
        try:
            after = apply_step(t, step, sc.hypothesis)
        except PolyInfixError as exc:
            trace.append(TraceEntry(step, t, error=exc))
            return CheckReport(FAILED, trace, i, f"{exc.kind} at step {i}", final=t)
        trace.append(TraceEntry(step, t, after))
        t = after
    if t != sc.goal_rhs:
        return CheckReport(
            FAILED, trace, None,
            f"derivation ends in {print_term(t)}, goal is {print_term(sc.goal_rhs)}",
            final=t,
        )
    return CheckReport(PROVED, trace, None, "", final=t)


# ---------------------------------------------------------------------------
# induction lemmas

def derive_induction_lemma(n: int, kernel: str = "+", mirror: bool = False,
                           table: Optional[OperatorTable] = None) -> ProofScript:
    """Script proving the chain of arity n+1 equals a binary application whose
    left argument is the chain of the first n (``mirror``: right argument is
    the chain of the last n).

    Uses only the association schemes: n-1 contractions at the root, then
    n-2 expansions one level down.
    """
    if not 2 <= n <= 10:
        raise ValueError(f"n must be in 2..10, got {n}")
    table = table or kernel_table(kernel)
    xs = tuple(Var(f"x{i}") for i in range(1, n + 2))
    lhs = PolyApp(kernel, xs)
    if not mirror:
        rhs = PolyApp(kernel, (PolyApp(kernel, xs[:n]), xs[n]))
        steps = [AttContract((), LEFT)] * (n - 1) + [AttExpand((0,), LEFT)] * (n - 2)
    else:
        rhs = PolyApp(kernel, (xs[0], PolyApp(kernel, xs[1:])))
        steps = [AttContract((), RIGHT)] * (n - 1) + [AttExpand((1,), RIGHT)] * (n - 2)
    name = f"induction-{'right' if mirror else 'left'}-{n}"
    return ProofScript(name, table, [], lhs, rhs, list(steps))


# ---------------------------------------------------------------------------
# script files

def _step_from_words(words: list, lineno: int) -> ProofStep:
    def at_path(rest):
        if len(rest) < 2 or rest[0] != "at":
            raise ScriptError("expected 'at <path>'", lineno)
        return parse_path(rest[1]), rest[2:]

    def num(w):
        try:
            return int(w)
        except ValueError:
            raise ScriptError(f"expected an integer, got {w!r}", lineno) from None

    if not words:
        raise ScriptError("empty step", lineno)
    head, rest = words[0], words[1:]
    try:
        if head == "hyp":
            if not rest:
                raise ScriptError("hyp step needs a hypothesis name", lineno)
            name, rest = rest[0], rest[1:]
            direction = L2R
            if rest and rest[0] == "rev":
                direction, rest = R2L, rest[1:]
            path, rest = at_path(rest)
            span = None
            if rest:
                if rest[0] != "span" or len(rest) != 3:
                    raise ScriptError("expected 'span <lo> <hi>'", lineno)
                span = Span(num(rest[1]), num(rest[2]))
            return ApplyHyp(name, direction, path, span)
        if head == "flatten":
            path, rest = at_path(rest)
            step = Flatten(path)
        elif head == "group":
            if len(rest) < 2:
                raise ScriptError("expected 'group <lo> <hi> at <path>'", lineno)
            span = Span(num(rest[0]), num(rest[1]))
            path, rest = at_path(rest[2:])
            step = Group(path, span)
        elif head == "ungroup":
            if not rest:
                raise ScriptError("expected 'ungroup <k> at <path>'", lineno)
            k = num(rest[0])
            path, rest = at_path(rest[1:])
            step = Ungroup(path, k)
        elif head in ("attl", "attr"):
            path, rest = at_path(rest)
            step = AttContract(path, LEFT if head == "attl" else RIGHT)
        elif head in ("unattl", "unattr"):
            path, rest = at_path(rest)
            step = AttExpand(path, LEFT if head == "unattl" else RIGHT)
        else:
            raise ScriptError(f"unknown step {head!r}", lineno)
    except PolyInfixError as exc:
        if isinstance(exc, ScriptError):
            raise
        raise ScriptError(str(exc), lineno) from exc
    if rest:
        raise ScriptError(f"unexpected trailing text {' '.join(rest)!r}", lineno)
    return step


def parse_step(text: str) -> ProofStep:
    return _step_from_words(text.split(), None)


def _parse_equation(text: str, table: OperatorTable, lineno: int):
    if text.count("=") != 1:
        raise ScriptError("expected exactly one '=' in equation", lineno)
    left, right = text.split("=")
    try:
        return parse(left, table), parse(right, table)
    except ParseError as exc:
        raise ScriptError(f"{exc.diagnostic.kind}: {exc.diagnostic.message}", lineno) from exc


def parse_script(text: str, base_dir: Optional[str] = None,
                 table: Optional[OperatorTable] = None) -> ProofScript:
    """Read a proof script.  A ``table`` line is resolved relative to ``base_dir``."""
    theory = None
    table_path = None
    hyps = []
    goal = None
    steps = []
    state = "header"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if state == "done":
            raise ScriptError("text after 'qed'", lineno)
        if state == "proof":
            if line == "qed":
                state = "done"
            else:
                steps.append(_step_from_words(line.split(), lineno))
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "theory":
            if not rest:
                raise ScriptError("theory needs a name", lineno)
            theory = rest
        elif head == "table":
            if hyps or goal is not None:
                raise ScriptError("'table' must precede hypotheses and goal", lineno)
            table_path = shlex.split(rest)[0] if rest else ""
            if not table_path:
                raise ScriptError("table needs a path", lineno)
            full = FsPath(base_dir or ".") / table_path
            try:
                table = OperatorTable.load(full)
            except PolyInfixError as exc:
                raise ScriptError(str(exc), lineno) from exc
        elif head == "kernel":
            if hyps or goal is not None:
                raise ScriptError("'kernel' must precede hypotheses and goal", lineno)
            base = table or default_table()
            try:
                if base.canonical_kernel(rest) is None:
                    table = base.with_kernels([KernelSpec(rest)])
            except PolyInfixError as exc:
                raise ScriptError(str(exc), lineno) from exc
        elif head == "hyp":
            name, colon, eq = rest.partition(":")
            name = name.strip()
            if not colon or not name:
                raise ScriptError("expected 'hyp <id> : <term> = <term>'", lineno)
            lhs, rhs = _parse_equation(eq, table or default_table(), lineno)
            try:
                hyps.append(Hypothesis(name, lhs, rhs))
            except TermError as exc:
                raise ScriptError(str(exc), lineno) from exc
        elif head == "goal" or line.startswith("goal:"):
            eq = line[len("goal"):].strip()
            if not eq.startswith(":"):
                raise ScriptError("expected 'goal : <term> = <term>'", lineno)
            goal = _parse_equation(eq[1:], table or default_table(), lineno)
        elif line == "proof":
            state = "proof"
        else:
            raise ScriptError(f"unexpected line {line!r}", lineno)
    if goal is None:
        raise ScriptError("script has no goal")
    if state != "done":
        raise ScriptError("script is missing 'proof' ... 'qed'")
    try:
        return ProofScript(theory or "untitled", table or default_table(), hyps,
                           goal[0], goal[1], steps, table_path)
    except TermError as exc:
        raise ScriptError(str(exc)) from exc


def load_script(path) -> ProofScript:
    path = FsPath(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScriptError(f"cannot read {str(path)!r}: {exc}") from exc
    return parse_script(text, base_dir=str(path.parent))


def format_script(sc: ProofScript, table_path: Optional[str] = None) -> str:
    lines = [f"theory {sc.theory}"]
    table_path = table_path or sc.table_path
    if table_path:
        lines.append(f"table {table_path}")
    else:
        known = default_table()
        for k in sc.table.kernels:
            if known.canonical_kernel(k.symbol) is None:
                lines.append(f"kernel {k.symbol}")
    for h in sc.hypotheses:
        lines.append(f"hyp {h.name} : {print_term(h.lhs)} = {print_term(h.rhs)}")
    lines.append(f"goal : {print_term(sc.goal_lhs)} = {print_term(sc.goal_rhs)}")
    lines.append("proof")
    lines.extend(f"  {format_step(s)}" for s in sc.steps)
    lines.append("qed")
    return "\n".join(lines) + "\n"


def script_to_json(sc: ProofScript) -> dict:
    return {
        "theory": sc.theory,
        "table": sc.table.to_dict(),
        "hypotheses": [
            {"name": h.name, "lhs": print_term(h.lhs), "rhs": print_term(h.rhs)}
            for h in sc.hypotheses
        ],
        "goal": {"lhs": print_term(sc.goal_lhs), "rhs": print_term(sc.goal_rhs)},
        "goal_json": {"lhs": to_json(sc.goal_lhs), "rhs": to_json(sc.goal_rhs)},
        "steps": [format_step(s) for s in sc.steps],
    }


def builtin_script(name: str) -> ProofScript:
    """Load one of the scripts shipped with the package, e.g. ``"sum331"``."""
    from importlib.resources import files

    res = files("polyinfix") / "proofs" / f"{name}.proof"
    return parse_script(res.read_text(encoding="utf-8"))
