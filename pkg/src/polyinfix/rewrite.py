"""Association steps, flattening and bracketings.

Steps address a subterm by a path (tuple of 0-based argument indices from
the root) and, where needed, an inclusive span of its arguments.

``att_contract``/``att_expand`` act only at the two ends of a chain, exactly
as the left and right association schemes do.  Grouping in the middle of a
chain is :func:`group`; :func:`flatten` is the normal-form direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from polyinfix.errors import (
    ArityTooSmall,
    BadPath,
    BadSpan,
    NoRedex,
    NotFlat,
    NotPoly,
    SpanFull,
    SpanTooSmall,
    TooLarge,
)
from polyinfix.terms import FixedApp, PolyApp, Term

LEFT = "left"
RIGHT = "right"
SIDES = (LEFT, RIGHT)

MAX_BRACKETING_ARITY = 12

Path = tuple


@dataclass(frozen=True)
class Span:
    """Inclusive argument range ``lo..hi``."""

    lo: int
    hi: int

    def __len__(self):
        return self.hi - self.lo + 1

    def check(self, arity: int) -> None:
        if not (0 <= self.lo <= self.hi < arity):
            raise BadSpan(f"span {self.lo}..{self.hi} does not fit {arity} arguments")


def parse_path(text: str) -> Path:
    """``"root"`` or ``"root.0.2"`` (the ``root`` prefix is optional)."""
    parts = [p for p in text.strip().split(".") if p != ""]
    if parts and parts[0] == "root":
        parts = parts[1:]
    try:
        path = tuple(int(p) for p in parts)
    except ValueError:
        raise BadPath(f"malformed path {text!r}") from None
    if any(i < 0 for i in path):
        raise BadPath(f"malformed path {text!r}")
    return path


def format_path(path: Sequence[int]) -> str:
    return ".".join(["root"] + [str(i) for i in path])


def subterm_at(t: Term, path: Sequence[int]) -> Term:
    u = t
    for depth, i in enumerate(path):
        if not isinstance(u, (FixedApp, PolyApp)) or not 0 <= i < len(u.args):
            raise BadPath(f"path {format_path(path)} does not exist (fails at step {depth})")
        u = u.args[i]
    return u


def replace_at(t: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    if not isinstance(t, (FixedApp, PolyApp)) or not 0 <= path[0] < len(t.args):
        raise BadPath(f"path does not exist at index {path[0]}")
    i = path[0]
    args = t.args[:i] + (replace_at(t.args[i], path[1:], new),) + t.args[i + 1:]
    return type(t)(t.symbol if isinstance(t, FixedApp) else t.kernel, args)


def _poly_at(t: Term, path: Sequence[int]) -> PolyApp:
    u = subterm_at(t, path)
    if not isinstance(u, PolyApp):
        raise NotPoly(f"subterm at {format_path(path)} is not a poly-infix application")
    return u


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")


# ---------------------------------------------------------------------------
# the two schemes

def att_contract(t: Term, path: Sequence[int], side: str) -> Term:
    """Associate the first two (left) or last two (right) arguments into a binary subterm."""
    _check_side(side)
    u = _poly_at(t, path)
    if len(u.args) < 3:
        raise ArityTooSmall(
            f"association needs arity >= 3, subterm at {format_path(path)} has {len(u.args)}"
        )
    k, a = u.kernel, u.args
    if side == LEFT:
        new = PolyApp(k, (PolyApp(k, a[:2]),) + a[2:])
    else:
        new = PolyApp(k, a[:-2] + (PolyApp(k, a[-2:]),))
    return replace_at(t, path, new)


def att_expand(t: Term, path: Sequence[int], side: str) -> Term:
    """Inverse of :func:`att_contract`: dissolve a binary first/last argument of the same kernel."""
    _check_side(side)
    u = _poly_at(t, path)
    if len(u.args) < 2:
        raise NoRedex(f"subterm at {format_path(path)} has arity {len(u.args)}")
    k, a = u.kernel, u.args
    end = a[0] if side == LEFT else a[-1]
    if not (isinstance(end, PolyApp) and end.kernel == k and len(end.args) == 2):
        raise NoRedex(
            f"{side}most argument at {format_path(path)} is not a binary {k}-application"
        )
    if side == LEFT:
        new = PolyApp(k, end.args + a[1:])
    else:
        new = PolyApp(k, a[:-1] + end.args)
    return replace_at(t, path, new)


# ---------------------------------------------------------------------------
# normal form and bracketing

def _spliceable(a: Term, kernel: str) -> bool:
    # short forms are left alone: splicing them needs the unit laws
    return isinstance(a, PolyApp) and a.kernel == kernel and len(a.args) >= 2


def flatten(t: Term) -> Term:
    """Splice every same-kernel argument into its parent, bottom-up."""
    if isinstance(t, FixedApp):
        return FixedApp(t.symbol, tuple(flatten(a) for a in t.args))
    if not isinstance(t, PolyApp):
        return t
    args = []
    for a in t.args:
        a = flatten(a)
        if _spliceable(a, t.kernel):
            args.extend(a.args)
        else:
            args.append(a)
    return PolyApp(t.kernel, tuple(args))


def is_flat(t: Term) -> bool:
    return flatten(t) == t


def group(t: Term, path: Sequence[int], span: Span) -> Term:
    """Bracket arguments ``span.lo..span.hi`` of the chain at ``path``."""
    u = _poly_at(t, path)
    n = len(u.args)
    span.check(n)
    if len(span) < 2:
        raise SpanTooSmall(f"span {span.lo}..{span.hi} covers fewer than two arguments")
    if len(span) == n:
        raise SpanFull(f"span {span.lo}..{span.hi} covers the whole chain")
    a = u.args
    inner = PolyApp(u.kernel, a[span.lo:span.hi + 1])
    return replace_at(t, path, PolyApp(u.kernel, a[:span.lo] + (inner,) + a[span.hi + 1:]))


def ungroup(t: Term, path: Sequence[int], k: int) -> Term:
    """Remove the brackets around argument ``k`` of the chain at ``path``."""
    u = _poly_at(t, path)
    if not 0 <= k < len(u.args):
        raise BadPath(f"argument index {k} out of range for arity {len(u.args)}")
    a = u.args[k]
    if not _spliceable(a, u.kernel):
        raise NoRedex(f"argument {k} at {format_path(path)} is not a bracketed {u.kernel}-chain")
    return replace_at(t, path, PolyApp(u.kernel, u.args[:k] + a.args + u.args[k + 1:]))


def _fold(t: Term, side: str) -> Term:
    if isinstance(t, FixedApp):
        return FixedApp(t.symbol, tuple(_fold(a, side) for a in t.args))
    if not isinstance(t, PolyApp):
        return t
    args = [_fold(a, side) for a in t.args]
    if len(args) <= 2:
        return PolyApp(t.kernel, tuple(args))
    k = t.kernel
    if side == LEFT:
        acc = args[0]
        for a in args[1:]:
            acc = PolyApp(k, (acc, a))
    else:
        acc = args[-1]
        for a in reversed(args[:-1]):
            acc = PolyApp(k, (a, acc))
    return acc


def fold_left(t: Term) -> Term:
    """Replace every chain of arity > 2 by nested binary applications associated to the left."""
    return _fold(t, LEFT)


def fold_right(t: Term) -> Term:
    return _fold(t, RIGHT)


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def enumerate_bracketings(t: Term) -> list:
    """All fully binary bracketings of a flat chain, in a fixed order.

    A chain of arity n has ``catalan(n - 1)`` of them.  Arity is capped at
    :data:`MAX_BRACKETING_ARITY`.
    """
    if not isinstance(t, PolyApp) or len(t.args) < 2:
        raise NotFlat("bracketings need a poly-infix application of arity >= 2")
    if any(isinstance(a, PolyApp) and a.kernel == t.kernel for a in t.args):
        raise NotFlat("chain has bracketed same-kernel arguments; flatten it first")
    n = len(t.args)
    if n > MAX_BRACKETING_ARITY:
        raise TooLarge(
            f"arity {n} exceeds {MAX_BRACKETING_ARITY} "
            f"({catalan(n - 1)} bracketings)"
        )
    k, args = t.kernel, t.args

    @lru_cache(maxsize=None)
    def trees(lo: int, hi: int) -> tuple:
        if lo == hi:
            return (args[lo],)
        out = []
        for mid in range(lo, hi):
            for left in trees(lo, mid):
                for right in trees(mid + 1, hi):
                    out.append(PolyApp(k, (left, right)))
        return tuple(out)

    return list(trees(0, n - 1))


def equiv_pure(s: Term, t: Term) -> bool:
    """Equality in the theory of the association schemes alone."""
    return flatten(s) == flatten(t)


def positions(t: Term) -> Iterable[tuple]:
    """Paths of every ``PolyApp`` in ``t``."""
    stack = [((), t)]
    while stack:
        path, u = stack.pop()
        if isinstance(u, PolyApp):
            yield path
        if isinstance(u, (FixedApp, PolyApp)):
            for i, a in enumerate(u.args):
                stack.append((path + (i,), a))


def att_neighbours(t: Term) -> set:
    """Every term one ``att_contract``/``att_expand`` step away from ``t``."""
    out = set()
    for p in positions(t):
        for side in SIDES:
            for step in (att_contract, att_expand):
                try:
                    out.add(step(t, p, side))
                except (ArityTooSmall, NoRedex):
                    pass
    return out
