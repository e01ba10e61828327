"""Seed-deterministic random terms, contexts and derivations.

Everything here takes an explicit :class:`random.Random`, so a fixed seed
reproduces the same sample on every run.
"""

from __future__ import annotations

import random
from typing import Optional

from polyinfix import rewrite
from polyinfix.eqlogic import (
    ApplyHyp,
    AttContract,
    AttExpand,
    Flatten,
    Group,
    Hypothesis,
    L2R,
    ProofScript,
    R2L,
    Ungroup,
    apply_step,
)
from polyinfix.errors import PolyInfixError
from polyinfix.models import Bag, Graph, Matrix, Model, Seq, eval_term
from polyinfix.rewrite import LEFT, RIGHT, Span
from polyinfix.terms import (
    Const,
    FixedApp,
    KernelSpec,
    OperatorTable,
    PolyApp,
    PsiContext,
    Term,
    Var,
    subterms,
)

DEFAULT_SEED = 20151028

VAR_POOL = ("x", "y", "z", "u", "v", "w", "p1", "q_2")


def mixed_table() -> OperatorTable:
    """Table exercising every syntactic feature: precedences, units, aliases, fixed ops."""
    return OperatorTable(
        sort="S",
        kernels=(
            KernelSpec("+", unit="0", precedence=1),
            KernelSpec("*", unit="1", precedence=2, aliases=("·",)),
            KernelSpec(";", unit="skip"),
            KernelSpec("||"),
            KernelSpec("⊕", precedence=1),
        ),
        fixed_ops={"f": 1, "g": 2, "h": 3},
        constants=("c", "d", "skip"),
    )


def random_atom(rng: random.Random, table: OperatorTable) -> Term:
    r = rng.random()
    if r < 0.55:
        return Var(rng.choice(VAR_POOL))
    if r < 0.8 or not table.constants:
        return Const(str(rng.randint(0, 12)))
    return Const(rng.choice(sorted(table.constants)))


def random_term(rng: random.Random, table: OperatorTable, max_depth: int = 5,
                kernels: Optional[list] = None) -> Term:
    """A random well-formed term of depth at most ``max_depth``."""
    kernels = kernels or [k.symbol for k in table.kernels]
    fixed = sorted(table.fixed_ops.items())

    def build(d: int) -> Term:
        if d == 0:
            return random_atom(rng, table)
        r = rng.random()
        if r < 0.25:
            return random_atom(rng, table)
        if r < 0.4 and fixed:
            name, arity = rng.choice(fixed)
            return FixedApp(name, tuple(build(d - 1) for _ in range(arity)))
        k = rng.choice(kernels)
        lo = table.min_arity(k)
        n = rng.choice([2, 2, 3, 3, 4, 5]) if lo == 2 or rng.random() < 0.85 else rng.randint(0, 1)
        return PolyApp(k, tuple(build(d - 1) for _ in range(n)))

    return build(max_depth)


def random_non_psi(rng: random.Random, table: OperatorTable, kernel: str, max_depth: int = 3) -> Term:
    """A random term whose root is not a ``kernel`` application."""
    others = [k.symbol for k in table.kernels if k.symbol != kernel]
    while True:
        t = random_term(rng, table, max_depth, others or None)
        if not (isinstance(t, PolyApp) and t.kernel == kernel):
            return t


def random_context(rng: random.Random, table: OperatorTable, kernel: str,
                   max_slots: int = 6) -> PsiContext:
    n_pre = rng.randint(0, max_slots)
    n_suf = rng.randint(0, max_slots)
    return PsiContext(
        kernel,
        tuple(random_non_psi(rng, table, kernel) for _ in range(n_pre)),
        tuple(random_non_psi(rng, table, kernel) for _ in range(n_suf)),
    )


def random_filler(rng: random.Random, table: OperatorTable, kernel: str) -> Term:
    """Either a non-Ψ term or a ``kernel`` chain (possibly with bracketed arguments)."""
    if rng.random() < 0.35:
        return random_non_psi(rng, table, kernel)
    n = rng.randint(table.min_arity(kernel), 6)
    return PolyApp(kernel, tuple(
        random_term(rng, table, 2) if rng.random() < 0.2 else random_non_psi(rng, table, kernel, 2)
        for _ in range(n)
    ))


# ---------------------------------------------------------------------------
# derivations for soundness testing

def random_value(rng: random.Random, m: Model):
    atoms = ("a", "b", "c", "d", "e")
    if m.name in ("add", "sub"):
        return rng.randint(-20, 20)
    if m.name == "mul":
        return rng.randint(-4, 4)
    if m.name == "seq":
        return Seq(tuple(rng.choice(atoms) for _ in range(rng.randint(0, 3))))
    if m.name == "merge":
        return Bag(tuple(rng.choice(atoms) for _ in range(rng.randint(0, 3))))
    if m.name == "frame":
        nodes = set(rng.sample(atoms, rng.randint(0, 3)))
        edges = set()
        if nodes:
            for _ in range(rng.randint(0, 2)):
                edges.add((rng.choice(sorted(nodes)), rng.choice(("l", "m")), rng.choice(sorted(nodes))))
        return Graph(nodes, edges)
    if m.name == "matmul":
        k = m.constant("I").dim
        return Matrix(tuple(tuple(rng.randint(-3, 3) for _ in range(k)) for _ in range(k)))
    raise KeyError(m.name)


def _ground_chain(rng: random.Random, m: Model) -> list:
    if m.numerals:
        return [Const(str(rng.randint(0, 6))) for _ in range(rng.randint(2, 3))]
    return [Const(m.unit)] * rng.randint(2, 3)


def random_hypothesis(rng: random.Random, m: Model, name: str) -> Hypothesis:
    """A ground equation that holds in ``m``."""
    chain = PolyApp(m.kernel, tuple(_ground_chain(rng, m)))
    r = rng.random()
    if r < 0.3 and len(chain.args) >= 3:
        rhs = rng.choice(rewrite.enumerate_bracketings(chain))
    elif m.numerals:
        v = eval_term(chain, m)
        rhs = Const(str(v)) if v >= 0 else chain
    else:
        rhs = Const(m.unit)
    lhs, rhs = (chain, rhs) if rng.random() < 0.5 else (rhs, chain)
    if lhs == rhs:
        rhs = Const(str(eval_term(chain, m))) if m.numerals else Const(m.unit)
    return Hypothesis(name, lhs, rhs)


def candidate_steps(t: Term, hyps: list) -> list:
    steps = []
    for p in rewrite.positions(t):
        u = rewrite.subterm_at(t, p)
        n = len(u.args)
        for side in (LEFT, RIGHT):
            steps.append(AttContract(p, side))
            steps.append(AttExpand(p, side))
        steps.append(Flatten(p))
        for lo in range(n):
            for hi in range(lo + 1, n):
                steps.append(Group(p, Span(lo, hi)))
            steps.append(Ungroup(p, lo))
        for h in hyps:
            for direction in (L2R, R2L):
                for lo in range(n):
                    for hi in range(lo, n):
                        steps.append(ApplyHyp(h.name, direction, p, Span(lo, hi)))
    for p, _ in subterms(t):
        for h in hyps:
            for direction in (L2R, R2L):
                steps.append(ApplyHyp(h.name, direction, p, None))
    return steps


def random_derivation(rng: random.Random, m: Model, n_steps: int = 6,
                      max_hyps: int = 2) -> ProofScript:
    """A script that checks as Proved: a random walk of valid steps from a random start."""
    table = m.table
    hyps = [random_hypothesis(rng, m, f"h{i}") for i in range(rng.randint(0, max_hyps))]
    by_name = {h.name: h for h in hyps}

    args = []
    for _ in range(rng.randint(2, 5)):
        if rng.random() < 0.7:
            args.append(Var(rng.choice(VAR_POOL[:5])))
        elif m.numerals:
            args.append(Const(str(rng.randint(0, 6))))
        else:
            args.append(Const(m.unit))
    if hyps:
        # plant one hypothesis side so that rule applications are available
        h = rng.choice(hyps)
        side = h.lhs if rng.random() < 0.5 else h.rhs
        at = rng.randint(0, len(args))
        planted = side.args if isinstance(side, PolyApp) and side.kernel == m.kernel else (side,)
        args[at:at] = list(planted)
    start = PolyApp(m.kernel, tuple(args))
    if rng.random() < 0.5:
        start = rng.choice(rewrite.enumerate_bracketings(rewrite.flatten(start))) \
            if len(rewrite.flatten(start).args) <= 7 else start

    t = start
    steps = []
    for _ in range(n_steps):
        cands = candidate_steps(t, hyps)
        rng.shuffle(cands)
        for step in cands:
            try:
                nxt = apply_step(t, step, by_name.__getitem__)
            except PolyInfixError:
                continue
            if not table.is_well_formed(nxt):
                continue
            steps.append(step)
            t = nxt
            break
    return ProofScript(f"random-{m.name}", table, hyps, start, t, steps)
