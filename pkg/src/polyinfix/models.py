"""Executable semantics for kernels.

Each :class:`Model` interprets one kernel symbol by a binary operation on a
carrier.  Built-in models::

    merge   ||   multisets of atoms (bag union)          associative, commutative
    seq     ;    sequences of atoms (concatenation)      associative
    frame   ⊕    labelled graphs (node and edge union)   associative, commutative, idempotent
    add     +    integers                                associative
    mul     *    integers                                associative
    matmul  @    k x k integer matrices (k = 2 default)  associative
    sub     -    integers, subtraction                   NOT associative

``eval`` refuses non-associative models; ``eval_fold`` folds in a chosen
direction and accepts any model.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Mapping, Optional

from polyinfix.errors import (
    DimensionMismatch,
    EvalError,
    KernelMismatch,
    NotAssociative,
    NotNumeral,
    UnboundVariable,
)
from polyinfix.rewrite import LEFT, RIGHT
from polyinfix.terms import (
    Const,
    FixedApp,
    KernelSpec,
    OperatorTable,
    PolyApp,
    Term,
    Var,
    is_ident,
    is_numeral,
)

# ---------------------------------------------------------------------------
# carriers


@dataclass(frozen=True)
class Seq:
    atoms: tuple = ()

    def __str__(self):
        return "Seq[" + ", ".join(self.atoms) + "]"


@dataclass(frozen=True)
class Bag:
    """Multiset of atom names; ``atoms`` is kept sorted so equality is multiset equality."""

    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms)))

    def __str__(self):
        return "Bag{" + ", ".join(self.atoms) + "}"

    def counts(self) -> Counter:
        return Counter(self.atoms)


@dataclass(frozen=True)
class Graph:
    nodes: frozenset = frozenset()
    edges: frozenset = frozenset()  # (source, label, target)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for src, _, dst in self.edges:
            if src not in self.nodes or dst not in self.nodes:
                raise EvalError(f"edge {src}-{dst} refers to a node outside the frame")

    def __str__(self):
        parts = sorted(self.nodes) + [f"{s}:{l}:{d}" for s, l, d in sorted(self.edges)]
        return "Frame{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class Matrix:
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, k: int) -> "Matrix":
        return cls(tuple(tuple(int(i == j) for j in range(k)) for i in range(k)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.dim != other.dim:
            raise DimensionMismatch(f"cannot multiply {self.dim}x{self.dim} by {other.dim}x{other.dim}")
        cols = list(zip(*other.rows))
        return Matrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows
        ))

    def __str__(self):
        return json.dumps([list(r) for r in self.rows])


def format_value(v) -> str:
    return str(v)


def value_to_json(v):
    if isinstance(v, int):
        return v
    if isinstance(v, Seq):
        return {"seq": list(v.atoms)}
    if isinstance(v, Bag):
        return {"bag": list(v.atoms)}
    if isinstance(v, Graph):
        return {"nodes": sorted(v.nodes), "edges": [list(e) for e in sorted(v.edges)]}
    if isinstance(v, Matrix):
        return {"matrix": [list(r) for r in v.rows]}
    raise TypeError(v)


# ---------------------------------------------------------------------------
# value literals (CLI --env)

def _atoms(text: str) -> list:
    atoms = [a.strip() for a in text.split(",") if a.strip()]
    for a in atoms:
        if not is_ident(a):
            raise EvalError(f"bad atom name {a!r}")
    return atoms


def parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise EvalError(f"not an integer: {text!r}") from None


def parse_seq(text: str) -> Seq:
    return Seq(tuple(_atoms(text)))


def parse_bag(text: str) -> Bag:
    return Bag(tuple(_atoms(text)))


def parse_frame(text: str) -> Graph:
    """``a, b, a:likes:b`` -- node labels and ``source:label:target`` edges.

    Edge endpoints are added to the node set.
    """
    nodes, edges = set(), set()
    for item in (i.strip() for i in text.split(",")):
        if not item:
            continue
        parts = item.split(":")
        if len(parts) == 1:
            nodes.add(_atoms(item)[0])
        elif len(parts) == 3:
            src, label, dst = (p.strip() for p in parts)
            for p in (src, label, dst):
                _atoms(p)
            nodes.update((src, dst))
            edges.add((src, label, dst))
        else:
            raise EvalError(f"bad frame item {item!r}; expected a node or src:label:dst")
    return Graph(nodes, edges)


def parse_matrix(text: str) -> Matrix:
    """Row-major bracketed integers, e.g. ``[[1,2],[3,4]]``."""
    try:
        rows = json.loads(text)
    except ValueError:
        raise EvalError(f"bad matrix literal {text!r}") from None
    if not isinstance(rows, list) or not all(
        isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r)
        for r in rows
    ):
        raise EvalError(f"bad matrix literal {text!r}; expected [[int, ...], ...]")
    return Matrix(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class Model:
    name: str
    kernel: str
    combine: Callable
    associative: bool
    constants: Mapping[str, object] = field(default_factory=dict)
    numerals: bool = False  # numeric literals denote integers
    unit: Optional[str] = None  # constant literal denoting the unit
    parse_value: Callable[[str], object] = parse_int
    check_value: Optional[Callable[[object], None]] = None
    aliases: tuple = ()
    description: str = ""

    def constant(self, literal: str):
        if literal in self.constants:
            return self.constants[literal]
        if self.numerals and is_numeral(literal):
            return int(literal)
        raise UnboundVariable(f"constant {literal!r} has no denotation in model {self.name}")

    @property
    def table(self) -> OperatorTable:
        """Operator table in which this model's terms are written."""
        names = [c for c in self.constants if not is_numeral(c)]
        return OperatorTable(
            sort=self.name,
            kernels=(KernelSpec(self.kernel, unit=self.unit, aliases=self.aliases),),
            constants=names,
        )


def _check_dim(k: int):
    def check(v):
        if not isinstance(v, Matrix) or v.dim != k:
            raise DimensionMismatch(f"expected a {k}x{k} matrix, got {v}")
    return check


def _frame_union(f: Graph, g: Graph) -> Graph:
    return Graph(f.nodes | g.nodes, f.edges | g.edges)


def merge_model() -> Model:
    return Model(
        "merge", "||", lambda a, b: Bag(a.atoms + b.atoms), True,
        constants={"nil": Bag()}, unit="nil", parse_value=parse_bag,
        description="parallel composition: multiset union of atoms",
    )


def seq_model() -> Model:
    return Model(
        "seq", ";", lambda a, b: Seq(a.atoms + b.atoms), True,
        constants={"skip": Seq()}, unit="skip", parse_value=parse_seq,
        description="sequential composition: concatenation of instruction sequences",
    )


def frame_model() -> Model:
    return Model(
        "frame", "⊕", _frame_union, True,
        constants={"empty": Graph()}, unit="empty", parse_value=parse_frame,
        aliases=("<+>",),
        description="frame composition: union of labelled nodes and labelled edges",
    )


def add_model() -> Model:
    return Model(
        "add", "+", lambda a, b: a + b, True, numerals=True, unit="0",
        description="integer addition",
    )


def mul_model() -> Model:
    return Model(
        "mul", "*", lambda a, b: a * b, True, numerals=True, unit="1", aliases=("·",),
        description="integer multiplication",
    )


def matmul_model(k: int = 2) -> Model:
    if k < 1:
        raise ValueError("matrix dimension must be positive")
    return Model(
        "matmul", "@", lambda a, b: a @ b, True,
        constants={"I": Matrix.identity(k)}, unit="I", parse_value=parse_matrix,
        check_value=_check_dim(k),
        description=f"multiplication of {k}x{k} integer matrices",
    )


def sub_model() -> Model:
    return Model(
        "sub", "-", lambda a, b: a - b, False, numerals=True,
        description="integer subtraction (non-associative counterexample)",
    )


MODEL_FACTORIES = {
    "merge": merge_model,
    "seq": seq_model,
    "frame": frame_model,
    "add": add_model,
    "mul": mul_model,
    "matmul": matmul_model,
    "sub": sub_model,
}

ASSOCIATIVE_MODELS = ("merge", "seq", "frame", "add", "mul", "matmul")


def get_model(name: str, **kwargs) -> Model:
    try:
        factory = MODEL_FACTORIES[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; choose from {', '.join(MODEL_FACTORIES)}") from None
    return factory(**kwargs)


# ---------------------------------------------------------------------------
# evaluation

def _eval(t: Term, m: Model, env: Mapping[str, object], side: str):
    if isinstance(t, Var):
        try:
            v = env[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} is unbound") from None
        if m.check_value is not None:
            m.check_value(v)
        return v
    if isinstance(t, Const):
        return m.constant(t.literal)
    if isinstance(t, FixedApp):
        raise KernelMismatch(f"model {m.name} has no interpretation for {t.symbol!r}")
    if t.kernel != m.kernel:
        raise KernelMismatch(f"model {m.name} interprets {m.kernel!r}, not {t.kernel!r}")
    vals = [_eval(a, m, env, side) for a in t.args]
    if not vals:
        if m.unit is None:
            raise EvalError(f"model {m.name} has no unit for an empty application")
        return m.constant(m.unit)
    if side == LEFT:
        return reduce(m.combine, vals)
    return reduce(lambda acc, v: m.combine(v, acc), reversed(vals))


def eval_term(t: Term, m: Model, env: Optional[Mapping[str, object]] = None):
    """Value of ``t`` in an associative model (folded from the left)."""
    if not m.associative:
        raise NotAssociative(f"model {m.name} is not associative; use eval_fold")
    return _eval(t, m, env or {}, LEFT)


def eval_fold(t: Term, m: Model, side: str, env: Optional[Mapping[str, object]] = None):
    """Value of ``t`` with every chain folded strictly to the ``side``."""
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return _eval(t, m, env or {}, side)


# ---------------------------------------------------------------------------
# unit numerals

UNIT = Const("1")


def leibniz_numeral(n: int) -> Term:
    """``n`` written as ``1 + 1 + ... + 1`` (the bare ``1`` for n = 1)."""
    if n < 1:
        raise ValueError(f"unit numerals start at 1, got {n}")
    if n == 1:
        return UNIT
    return PolyApp("+", (UNIT,) * n)


def is_unit_numeral(t: Term) -> bool:
    if t == UNIT:
        return True
    return (
        isinstance(t, PolyApp) and t.kernel == "+" and len(t.args) >= 2
        and all(a == UNIT for a in t.args)
    )


def numeral_args(t: Term) -> tuple:
    if not is_unit_numeral(t):
        raise NotNumeral(f"{t!r} is not a unit numeral")
    return (t,) if t == UNIT else t.args


def leibniz_add(s: Term, t: Term) -> Term:
    """Addition of unit numerals: the two chains of units become one chain."""
    return PolyApp("+", numeral_args(s) + numeral_args(t))
