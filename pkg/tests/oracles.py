"""Naive reference implementations used only to cross-check the fast paths.

Everything here enumerates without pruning, so keep inputs tiny (about 14
vertices).  These oracles deliberately share no code with the solver.
"""

from __future__ import annotations

from itertools import product

from indtrans.graph import MultipartiteGraph, VertexRef


def naive_independent(g: MultipartiteGraph, picks) -> bool:
    picks = list(picks)
    for i in range(len(picks)):
        for j in range(i + 1, len(picks)):
            if g.has_edge(picks[i], picks[j]):
                return False
    return True


def naive_max_partial_it(g: MultipartiteGraph) -> tuple[int, tuple[VertexRef, ...]]:
    """Maximum size and the lexicographically least optimal pick list."""
    choices = [[None] + list(g.class_vertices(c)) for c in range(g.parts)]
    best = -1
    best_witness: tuple[VertexRef, ...] = ()
    for combo in product(*choices):
        picks = tuple(sorted(p for p in combo if p is not None))
        if not naive_independent(g, picks):
            continue
        if len(picks) > best or (len(picks) == best and picks < best_witness):
            best = len(picks)
            best_witness = picks
    return best, best_witness


def naive_dominates(g: MultipartiteGraph, s, target) -> bool:
    s = set(s)
    for x in target:
        if x in s:
            continue
        if not any(g.has_edge(x, y) for y in s):
            return False
    return True
