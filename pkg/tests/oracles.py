"""Brute-force oracles, kept independent of the code paths they check."""

import itertools
from collections import deque

from polyinfix.rewrite import att_neighbours
from polyinfix.terms import PolyApp


def dyck_words(pairs):
    """All balanced strings of ``pairs`` bracket pairs, by filtering every binary string."""
    out = []
    for bits in itertools.product("()", repeat=2 * pairs):
        depth = 0
        for b in bits:
            depth += 1 if b == "(" else -1
            if depth < 0:
                break
        else:
            if depth == 0:
                out.append("".join(bits))
    return out


def tree_from_dyck(word, leaves, kernel):
    """Standard bijection: ``w = ( L ) R`` gives the node (tree(L), tree(R)).

    A word with ``n - 1`` pairs yields a binary tree with ``n`` leaves.
    """
    it = iter(leaves)

    def build(w):
        if not w:
            return next(it)
        depth = 0
        for i, ch in enumerate(w):
            depth += 1 if ch == "(" else -1
            if depth == 0:
                break
        left = build(w[1:i])
        right = build(w[i + 1:])
        return PolyApp(kernel, (left, right))

    t = build(word)
    assert next(it, None) is None
    return t


def splice_all(t, kernel):
    """Flat argument list by collecting leaves left to right (trees over atoms only)."""
    if isinstance(t, PolyApp) and t.kernel == kernel and len(t.args) >= 2:
        out = []
        for a in t.args:
            out.extend(splice_all(a, kernel))
        return out
    return [t]


def ordered_trees(n_leaves):
    """Shapes of ordered trees with ``n_leaves`` leaves, internal nodes of arity >= 2.

    Shapes are nested tuples; a leaf is ``None``.
    """
    if n_leaves == 1:
        return [None]
    shapes = []
    for parts in compositions(n_leaves):
        if len(parts) < 2:
            continue
        for kids in itertools.product(*(ordered_trees(p) for p in parts)):
            shapes.append(tuple(kids))
    return shapes


def compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def fill(shape, leaves, kernel):
    it = iter(leaves)

    def build(s):
        if s is None:
            return next(it)
        return PolyApp(kernel, tuple(build(k) for k in s))

    return build(shape)


def term_universe(atoms, max_leaves, kernel):
    """Every term over ``atoms`` with at most ``max_leaves`` leaves and one kernel."""
    out = []
    for n in range(1, max_leaves + 1):
        shapes = ordered_trees(n)
        for labels in itertools.product(atoms, repeat=n):
            for s in shapes:
                out.append(fill(s, labels, kernel))
    return out


def bfs_components(universe):
    """Connected components of the association-step graph, by breadth-first search.

    Returns ``{term: component id}``.  Steps that leave ``universe`` are an error.
    """
    members = set(universe)
    comp = {}
    cid = 0
    for root in universe:
        if root in comp:
            continue
        comp[root] = cid
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for u in att_neighbours(t):
                if u not in members:
                    raise AssertionError(f"step left the universe: {u!r}")
                if u not in comp:
                    comp[u] = cid
                    queue.append(u)
        cid += 1
    return comp


def reachable(s, limit=100000):
    seen = {s}
    queue = deque([s])
    while queue:
        t = queue.popleft()
        for u in att_neighbours(t):
            if u not in seen:
                seen.add(u)
                queue.append(u)
                if len(seen) > limit:
                    raise AssertionError("closure too large")
    return seen
