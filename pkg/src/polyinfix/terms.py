"""Terms, operator tables, Psi-lengths and Psi-contexts.

A term is built from four node types::

    Var(name)                      variable of the single sort
    Const(literal)                 declared constant or unsigned numeral
    FixedApp(symbol, args)         ordinary prefix operator of fixed arity
    PolyApp(kernel, args)          one application of a poly-infix family member

``PolyApp("+", (a, b, c))`` is the single three-place application written
``a + b + c``.  A bracketed argument is a nested ``PolyApp`` of the same
kernel, so ``a + (b + c)`` is ``PolyApp("+", (a, PolyApp("+", (b, c))))``.

All node types are frozen dataclasses; structural equality is ``==``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence, Union

from polyinfix.errors import TableError, TermError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
NUMBER_RE = re.compile(r"[0-9]+")
_FORBIDDEN_IN_SYMBOL = re.compile(r"[\s(),]")


def is_ident(text: str) -> bool:
    return IDENT_RE.fullmatch(text) is not None


def is_numeral(text: str) -> bool:
    return NUMBER_RE.fullmatch(text) is not None


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Const:
    literal: str

    def __repr__(self):
        return f"Const({self.literal!r})"


@dataclass(frozen=True)
class FixedApp:
    symbol: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class PolyApp:
    kernel: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Union[Var, Const, FixedApp, PolyApp]


def poly(kernel: str, *args: Term) -> PolyApp:
    return PolyApp(kernel, args)


def is_poly(t: Term, kernel: Optional[str] = None) -> bool:
    return isinstance(t, PolyApp) and (kernel is None or t.kernel == kernel)


def equal_syntactic(s: Term, t: Term) -> bool:
    """Structural equality; ``a+b+c`` and ``(a+b)+c`` are different terms."""
    return s == t


def psi_length(t: Term, kernel: str) -> int:
    """Number of arguments of the leading ``kernel`` application, 1 for anything else."""
    if isinstance(t, PolyApp) and t.kernel == kernel:
        return len(t.args)
    return 1


def subterms(t: Term):
    """Yield ``(path, subterm)`` pairs in pre-order; paths are tuples of 0-based indices."""
    stack = [((), t)]
    while stack:
        path, u = stack.pop()
        yield path, u
        if isinstance(u, (FixedApp, PolyApp)):
            for i in range(len(u.args) - 1, -1, -1):
                stack.append((path + (i,), u.args[i]))


def leaves(t: Term) -> list:
    if isinstance(t, (FixedApp, PolyApp)):
        out = []
        for a in t.args:
            out.extend(leaves(a))
        return out
    return [t]


def size(t: Term) -> int:
    if isinstance(t, (FixedApp, PolyApp)):
        return 1 + sum(size(a) for a in t.args)
    return 1


def depth(t: Term) -> int:
    if isinstance(t, (FixedApp, PolyApp)) and t.args:
        return 1 + max(depth(a) for a in t.args)
    return 0


# ---------------------------------------------------------------------------
# contexts

def _splice(kernel: str, prefix: Sequence[Term], suffix: Sequence[Term], t: Term) -> Term:
    if isinstance(t, PolyApp) and t.kernel == kernel:
        middle = t.args
    else:
        middle = (t,)
    args = tuple(prefix) + tuple(middle) + tuple(suffix)
    # a lone same-kernel chain keeps its one-place wrapper, or its length would change
    if len(args) == 1 and not (isinstance(args[0], PolyApp) and args[0].kernel == kernel):
        return args[0]
    return PolyApp(kernel, args)


@dataclass(frozen=True)
class PsiContext:
    """A flat ``kernel`` chain with one hole: ``prefix Ψ [−] Ψ suffix``."""

    kernel: str
    prefix: tuple = ()
    suffix: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "suffix", tuple(self.suffix))
        for a in self.prefix + self.suffix:
            if isinstance(a, PolyApp) and a.kernel == self.kernel:
                raise TermError(
                    f"context slot {a!r} is a {self.kernel}-expression; "
                    "context arguments must be non-Ψ expressions"
                )

    def __len__(self):
        return len(self.prefix) + len(self.suffix) + 1


def context_length(c: PsiContext) -> int:
    return len(c.prefix) + len(c.suffix) + 1


def subst_context(c: PsiContext, t: Term) -> Term:
    """Fill the hole with ``t``.

    A ``t`` of the context's kernel is spliced (its brackets vanish), so the
    result has length ``context_length(c) + psi_length(t) - 1``.  A length-1
    result is returned as the bare argument unless that argument is itself a
    chain of the context's kernel.
    """
    return _splice(c.kernel, c.prefix, c.suffix, t)


# ---------------------------------------------------------------------------
# operator tables

@dataclass(frozen=True)
class KernelSpec:
    symbol: str
    unit: Optional[str] = None
    precedence: Optional[int] = None
    aliases: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "aliases", tuple(self.aliases))
        for s in (self.symbol,) + self.aliases:
            if not s or _FORBIDDEN_IN_SYMBOL.search(s):
                raise TableError(
                    f"bad kernel symbol {s!r}: must be non-empty without "
                    "whitespace, parentheses or commas"
                )
            if is_numeral(s) or s[0].isdigit():
                raise TableError(f"bad kernel symbol {s!r}: must not start with a digit")


@dataclass(frozen=True)
class OperatorTable:
    """Declares the kernels, fixed-arity operators and constants of one sort."""

    sort: str = "S"
    kernels: tuple = ()
    fixed_ops: Mapping[str, int] = field(default_factory=dict)
    constants: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "kernels", tuple(self.kernels))
        object.__setattr__(self, "fixed_ops", MappingProxyType(dict(self.fixed_ops)))
        object.__setattr__(self, "constants", frozenset(self.constants))

        symbols = {}
        for k in self.kernels:
            for s in (k.symbol,) + k.aliases:
                if s in symbols:
                    raise TableError(f"kernel symbol {s!r} declared twice")
                symbols[s] = k.symbol
        object.__setattr__(self, "_by_symbol", symbols)

        for name, arity in self.fixed_ops.items():
            if not is_ident(name):
                raise TableError(f"fixed operator name {name!r} is not an identifier")
            if not isinstance(arity, int) or arity < 1:
                raise TableError(f"fixed operator {name!r} needs arity >= 1, got {arity!r}")
        for c in self.constants:
            if not (is_ident(c) or is_numeral(c)):
                raise TableError(f"constant {c!r} is neither an identifier nor a numeral")

        kset, fset, cset = set(symbols), set(self.fixed_ops), set(self.constants)
        clash = (kset & fset) | (kset & cset) | (fset & cset)
        if clash:
            raise TableError(f"symbols declared in more than one role: {sorted(clash)}")

        for k in self.kernels:
            if k.unit is not None and not (is_numeral(k.unit) or k.unit in cset):
                raise TableError(
                    f"unit {k.unit!r} of kernel {k.symbol!r} is not a declared constant"
                )

    def kernel(self, symbol: str) -> KernelSpec:
        canon = self._by_symbol.get(symbol)
        if canon is None:
            raise KeyError(symbol)
        for k in self.kernels:
            if k.symbol == canon:
                return k
        raise KeyError(symbol)  # pragma: no cover

    def canonical_kernel(self, symbol: str) -> Optional[str]:
        """Map a kernel symbol or alias to its canonical symbol, ``None`` if undeclared."""
        return self._by_symbol.get(symbol)

    @property
    def kernel_symbols(self) -> list:
        """All kernel spellings, longest first (the lexer's matching order)."""
        return sorted(self._by_symbol, key=lambda s: (-len(s), s))

    def has_constant(self, literal: str) -> bool:
        return is_numeral(literal) or literal in self.constants

    def min_arity(self, kernel: str) -> int:
        return 0 if self.kernel(kernel).unit is not None else 2

    # validation

    def check(self, t: Term) -> None:
        """Raise :class:`TermError` unless ``t`` is well-formed against this table."""
        if isinstance(t, Var):
            if not is_ident(t.name):
                raise TermError(f"variable name {t.name!r} is not an identifier")
            if t.name in self.constants or t.name in self.fixed_ops or t.name in self._by_symbol:
                raise TermError(f"variable {t.name!r} clashes with a declared symbol")
        elif isinstance(t, Const):
            if not self.has_constant(t.literal):
                raise TermError(f"undeclared constant {t.literal!r}")
        elif isinstance(t, FixedApp):
            arity = self.fixed_ops.get(t.symbol)
            if arity is None:
                raise TermError(f"undeclared fixed operator {t.symbol!r}")
            if len(t.args) != arity:
                raise TermError(f"{t.symbol} takes {arity} arguments, got {len(t.args)}")
            for a in t.args:
                self.check(a)
        elif isinstance(t, PolyApp):
            if t.kernel not in self._by_symbol or self._by_symbol[t.kernel] != t.kernel:
                raise TermError(f"undeclared kernel {t.kernel!r}")
            lo = self.min_arity(t.kernel)
            if len(t.args) < lo:
                raise TermError(
                    f"{t.kernel}-application of arity {len(t.args)} needs a declared unit"
                    if lo == 2 else f"bad arity {len(t.args)}"
                )
            for a in t.args:
                self.check(a)
        else:
            raise TermError(f"not a term: {t!r}")

    def is_well_formed(self, t: Term) -> bool:
        try:
            self.check(t)
        except TermError:
            return False
        return True

    # serialization

    def to_dict(self) -> dict:
        kernels = []
        for k in self.kernels:
            d = {"symbol": k.symbol}
            if k.unit is not None:
                d["unit"] = k.unit
            if k.precedence is not None:
                d["precedence"] = k.precedence
            if k.aliases:
                d["aliases"] = list(k.aliases)
            kernels.append(d)
        return {
            "sort": self.sort,
            "kernels": kernels,
            "fixed_ops": dict(self.fixed_ops),
            "constants": sorted(self.constants),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "OperatorTable":
        try:
            kernels = [
                KernelSpec(
                    symbol=k["symbol"],
                    unit=k.get("unit"),
                    precedence=k.get("precedence"),
                    aliases=tuple(k.get("aliases", ())),
                )
                for k in d.get("kernels", [])
            ]
            return cls(
                sort=d.get("sort", "S"),
                kernels=kernels,
                fixed_ops=d.get("fixed_ops", {}),
                constants=d.get("constants", []),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise TableError(f"malformed operator table: {exc}") from exc

    @classmethod
    def load(cls, path: Union[str, Path]) -> "OperatorTable":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise TableError(f"cannot read operator table {str(path)!r}: {exc}") from exc
        if not isinstance(data, dict):
            raise TableError("operator table must be a JSON object")
        return cls.from_dict(data)

    def with_kernels(self, extra: Iterable[KernelSpec]) -> "OperatorTable":
        return OperatorTable(self.sort, self.kernels + tuple(extra), self.fixed_ops, self.constants)


def default_table() -> OperatorTable:
    """Arithmetic table: ``+`` (unit 0) and ``*`` (unit 1, alias ``·``), ``*`` binds tighter."""
    return OperatorTable(
        sort="N",
        kernels=(
            KernelSpec("+", unit="0", precedence=1),
            KernelSpec("*", unit="1", precedence=2, aliases=("·",)),
        ),
    )


def kernel_table(symbol: str, unit: Optional[str] = None) -> OperatorTable:
    """Minimal table with one kernel and nothing else."""
    constants = [unit] if unit is not None and not is_numeral(unit) else []
    return OperatorTable(kernels=(KernelSpec(symbol, unit=unit),), constants=constants)
