"""Teletype loop for stepwise derivations.

Commands::

    load <term>                  start from a term (clears history)
    hyp <id> : <term> = <term>   declare a ground hypothesis
    goal <term>                  term to reach; reported when the current term equals it
    <step>                       any proof-script step, e.g. ``hyp h1 at root span 0 1``
    undo                         drop the last step
    history                      steps taken so far
    show | hyps | help | quit
"""

from __future__ import annotations

from typing import Optional

from polyinfix import eqlogic
from polyinfix.errors import PolyInfixError, TermError, UnknownHypothesis
from polyinfix.syntax import ParseError, parse, print_term
from polyinfix.terms import OperatorTable, default_table

HELP = __doc__.split("Commands::", 1)[1].rstrip()


class Repl:
    def __init__(self, table: Optional[OperatorTable] = None):
        self.table = table or default_table()
        self.hypotheses = {}
        self.goal = None
        self.start = None
        self.history = []  # (step, term after)

    @property
    def current(self):
        if self.history:
            return self.history[-1][1]
        return self.start

    def load_script(self, sc: eqlogic.ProofScript) -> None:
        self.table = sc.table
        self.hypotheses = {h.name: h for h in sc.hypotheses}
        self.start, self.goal = sc.goal_lhs, sc.goal_rhs
        self.history = []

    def _hyp(self, name: str) -> eqlogic.Hypothesis:
        try:
            return self.hypotheses[name]
        except KeyError:
            raise UnknownHypothesis(f"no hypothesis named {name!r}") from None

    def _show(self) -> str:
        if self.current is None:
            return "no term loaded"
        s = print_term(self.current)
        if self.goal is not None and self.current == self.goal:
            s += "\ngoal reached"
        return s

    def execute(self, line: str) -> Optional[str]:
        """Run one command and return the text to print; ``None`` means quit."""
        line = line.split("#", 1)[0].strip()
        if not line:
            return ""
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head in ("quit", "exit"):
                return None
            if head == "help":
                return HELP
            if head == "load":
                self.start = parse(rest, self.table)
                self.table.check(self.start)
                self.history = []
                return self._show()
            if head == "goal":
                self.goal = parse(rest, self.table)
                return f"goal {print_term(self.goal)}"
            if head == "hyp" and ":" in rest:
                name, _, eq = rest.partition(":")
                left, sep, right = eq.partition("=")
                if not sep or not name.strip():
                    return "error: expected 'hyp <id> : <term> = <term>'"
                h = eqlogic.Hypothesis(name.strip(), parse(left, self.table), parse(right, self.table))
                self.hypotheses[h.name] = h
                return f"{h.name} : {print_term(h.lhs)} = {print_term(h.rhs)}"
            if head == "hyps":
                return "\n".join(
                    f"{h.name} : {print_term(h.lhs)} = {print_term(h.rhs)}"
                    for h in self.hypotheses.values()
                ) or "no hypotheses"
            if head == "show":
                return self._show()
            if head == "history":
                if self.start is None:
                    return "no term loaded"
                lines = [f"  0. {print_term(self.start)}"]
                for i, (step, t) in enumerate(self.history, 1):
                    lines.append(f"{i:>3}. {eqlogic.format_step(step):<28} {print_term(t)}")
                return "\n".join(lines)
            if head == "undo":
                if not self.history:
                    return "error: nothing to undo"
                self.history.pop()
                return self._show()
            if self.current is None:
                return "error: no term loaded (use 'load <term>')"
            step = eqlogic.parse_step(line)
            after = eqlogic.apply_step(self.current, step, self._hyp)
            self.history.append((step, after))
            return self._show()
        except ParseError as exc:
            return f"error: {exc.diagnostic.kind}: {exc.diagnostic.message}"
        except (PolyInfixError, TermError) as exc:
            return f"error: {exc.kind}: {exc}"

    def run(self, stdin, stdout, interactive: bool = False) -> None:
        if interactive:
            stdout.write("polyinfix repl; 'help' for commands\n")
        while True:
            if interactive:
                stdout.write("> ")
                stdout.flush()
            line = stdin.readline()
            if not line:
                break
            out = self.execute(line)
            if out is None:
                break
            if out:
                stdout.write(out + "\n")
