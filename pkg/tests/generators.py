"""Deterministic instance generators shared by the test modules."""

from __future__ import annotations

from functools import lru_cache
from random import Random

from indtrans.graph import MultipartiteGraph, VertexRef
from indtrans.solver import max_partial_it


def complete_bipartite(a: int, b: int) -> MultipartiteGraph:
    return MultipartiteGraph(
        [a, b], [(VertexRef(0, i), VertexRef(1, j)) for i in range(a) for j in range(b)]
    )


def kdd(delta: int) -> MultipartiteGraph:
    return complete_bipartite(delta, delta)


def disjoint_blocks(block_sizes: list[int]) -> MultipartiteGraph:
    """One complete bipartite block per entry, classes laid out pairwise."""
    sizes = []
    edges = []
    for b, s in enumerate(block_sizes):
        sizes.extend([s, s])
        edges.extend(
            (VertexRef(2 * b, i), VertexRef(2 * b + 1, j)) for i in range(s) for j in range(s)
        )
    return MultipartiteGraph(sizes, edges)


def blowup(m: int, s: int) -> MultipartiteGraph:
    edges = [
        (VertexRef(a, i), VertexRef(b, j))
        for a in range(m)
        for b in range(a + 1, m)
        for i in range(s)
        for j in range(s)
    ]
    return MultipartiteGraph([s] * m, edges)


def random_graph(rng: Random, sizes, max_degree: int, density: float = 0.5) -> MultipartiteGraph:
    """Random proper multipartite graph with a hard per-vertex degree cap."""
    sizes = list(sizes)
    pairs = [
        (VertexRef(a, i), VertexRef(b, j))
        for a in range(len(sizes))
        for b in range(a + 1, len(sizes))
        for i in range(sizes[a])
        for j in range(sizes[b])
    ]
    rng.shuffle(pairs)
    degree: dict[VertexRef, int] = {}
    edges = []
    for u, v in pairs:
        if degree.get(u, 0) < max_degree and degree.get(v, 0) < max_degree:
            if rng.random() < density:
                edges.append((u, v))
                degree[u] = degree.get(u, 0) + 1
                degree[v] = degree.get(v, 0) + 1
    return MultipartiteGraph(sizes, edges)


@lru_cache(maxsize=1)
def corpus_no_full_it() -> tuple[MultipartiteGraph, ...]:
    """At least 50 distinct instances with nonempty classes, at most 16 vertices,
    and no full transversal.  Mixes structured extremal families with filtered
    random graphs; fully deterministic."""
    out: list[MultipartiteGraph] = []
    seen: set[MultipartiteGraph] = set()

    def add(g: MultipartiteGraph) -> None:
        if g.n_vertices > 16 or g.min_class_size == 0 or g in seen:
            return
        if max_partial_it(g).size < g.parts:
            seen.add(g)
            out.append(g)

    for a in range(1, 5):
        for b in range(a, 5):
            add(complete_bipartite(a, b))
    add(disjoint_blocks([2, 2]))
    add(disjoint_blocks([3, 3]))
    add(disjoint_blocks([4, 4]))
    add(disjoint_blocks([2, 3]))
    add(disjoint_blocks([2, 2, 2]))
    add(disjoint_blocks([1, 2, 2]))
    add(disjoint_blocks([1, 1, 1]))
    for m in range(3, 7):
        for s in range(1, 4):
            add(blowup(m, s))
    rng = Random(20240811)
    attempts = 0
    while len(out) < 56 and attempts < 4000:
        attempts += 1
        r = rng.choice([2, 3, 4])
        sizes = [rng.randint(1, 3) for _ in range(r)]
        cap = rng.randint(1, 3)
        add(random_graph(rng, sizes, cap, density=rng.choice([0.5, 0.8, 1.0])))
    return tuple(out)
