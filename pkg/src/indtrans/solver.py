"""Exact solvers for maximum partial independent transversals.

All searches are complete and deterministic: identical inputs give identical
answers and witnesses.  Every operation takes an optional node budget;
exceeding it raises :class:`BudgetExhausted` rather than returning a possibly
wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .errors import BudgetExhausted, GraphError, InvariantError, PreconditionError
from .graph import Edge, MultipartiteGraph, VertexRef, _as_ref


class Budget:
    """Mutable node counter shared across nested searches."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(f"search budget exhausted after {self.used} nodes (limit {self.limit})")

    @classmethod
    def coerce(cls, value) -> "Budget":
        if isinstance(value, Budget):
            return value
        return cls(value)


class Transversal:
    """An independent set with at most one vertex per class.

    Picks are kept sorted, so two transversals over the same graph compare
    and render identically.  Independence is checked where a graph is in
    scope, not here.
    """

    __slots__ = ("_picks",)

    def __init__(self, picks: Iterable[VertexRef] = ()):
        ps = sorted(_as_ref(p) for p in picks)
        seen = set()
        for p in ps:
            if p.part in seen:
                raise GraphError(f"two picks in class {p.part}")
            seen.add(p.part)
        self._picks = tuple(ps)

    @property
    def picks(self) -> tuple[VertexRef, ...]:
        return self._picks

    @property
    def size(self) -> int:
        return len(self._picks)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(p.part for p in self._picks)

    @property
    def vertices(self) -> frozenset[VertexRef]:
        return frozenset(self._picks)

    def pick_in(self, part: int) -> Optional[VertexRef]:
        for p in self._picks:
            if p.part == part:
                return p
        return None

    def without(self, ref: VertexRef) -> "Transversal":
        ref = _as_ref(ref)
        return Transversal(p for p in self._picks if p != ref)

    def __iter__(self):
        return iter(self._picks)

    def __len__(self) -> int:
        return len(self._picks)

    def __contains__(self, ref) -> bool:
        return _as_ref(ref) in self._picks

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transversal):
            return NotImplemented
        return self._picks == other._picks

    def __hash__(self) -> int:
        return hash(self._picks)

    def __repr__(self) -> str:
        return "Transversal(" + ", ".join(str(p) for p in self._picks) + ")"


@dataclass(frozen=True)
class SolveResult:
    size: int
    witness: Transversal
    exhaustive: bool
    nodes: int


def _optimal_size(g: MultipartiteGraph, budget: Budget) -> int:
    """Branch and bound for the maximum partial transversal size.

    Branches on the open class with the fewest surviving candidates, trying
    each candidate vertex then the skip branch.  The bound `picks + number of
    classes that still have a candidate` is admissible because blocking only
    shrinks candidate sets.
    """
    masks = [g.class_mask(c) for c in range(g.parts)]
    adj = g.adjacency_masks()
    best = 0

    def walk(active: list[int], blocked: int, count: int) -> None:
        nonlocal best
        budget.charge()
        if count > best:
            best = count
        open_classes = []
        for c in active:
            m = masks[c] & ~blocked
            if m:
                open_classes.append((m.bit_count(), c, m))
        if not open_classes or count + len(open_classes) <= best:
            return
        open_classes.sort()
        _, _, m = open_classes[0]
        rest = [c for _, c, _ in open_classes[1:]]
        while m:
            low = m & -m
            m ^= low
            walk(rest, blocked | adj[low.bit_length() - 1], count + 1)
        walk(rest, blocked, count)

    walk(list(range(g.parts)), 0, 0)
    return best


def _first_witness(g: MultipartiteGraph, size: int, budget: Budget) -> Optional[tuple[int, ...]]:
    """Lexicographically least independent pick list of exactly `size` picks.

    Classes are scanned in natural order, vertices in index order, with the
    pick branches before the skip branch, so the first complete assignment is
    the least one under sorted-pick-list comparison.
    """
    if size <= 0:
        return ()
    r = g.parts
    masks = [g.class_mask(c) for c in range(r)]
    adj = g.adjacency_masks()
    found: Optional[tuple[int, ...]] = None

    def walk(c: int, blocked: int, picks: list[int]) -> bool:
        nonlocal found
        budget.charge()
        if len(picks) == size:
            found = tuple(picks)
            return True
        if c == r:
            return False
        open_count = 0
        for cc in range(c, r):
            if masks[cc] & ~blocked:
                open_count += 1
        if len(picks) + open_count < size:
            return False
        m = masks[c] & ~blocked
        while m:
            low = m & -m
            m ^= low
            vid = low.bit_length() - 1
            picks.append(vid)
            if walk(c + 1, blocked | adj[vid], picks):
                return True
            picks.pop()
        return walk(c + 1, blocked, picks)

    walk(0, 0, [])
    return found


def _class_components(g: MultipartiteGraph) -> list[list[int]]:
    """Classes grouped by edge connectivity; isolated classes are singletons."""
    parent = list(range(g.parts))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ra, rb = find(u.part), find(v.part)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for c in range(g.parts):
        groups.setdefault(find(c), []).append(c)
    return sorted(groups.values())


def max_partial_it(g: MultipartiteGraph, budget=None) -> SolveResult:
    """Exact maximum partial independent transversal with its least witness.

    The witness is the lexicographically least optimum by sorted pick list.
    Class-connected components are solved independently: the optima add up and
    the lex-least witness is the union of the per-component lex-least
    witnesses, because the feasible assignments factorize over components.
    """
    budget = Budget.coerce(budget)
    components = _class_components(g)
    if len(components) > 1:
        total = 0
        picks: list[VertexRef] = []
        for classes in components:
            sub = g.induced_on_classes(classes)
            res = max_partial_it(sub, budget)
            total += res.size
            picks.extend(VertexRef(classes[p.part], p.index) for p in res.witness)
        witness = Transversal(picks)
        if not g.is_independent(witness.vertices):
            raise InvariantError("solver witness failed independence recheck")
        return SolveResult(size=total, witness=witness, exhaustive=True, nodes=budget.used)
    best = _optimal_size(g, budget)
    vids = _first_witness(g, best, budget)
    if vids is None:
        raise InvariantError("optimal size has no witness; solver bug")
    witness = Transversal(g.ref_of(v) for v in vids)
    if witness.size != best or not g.is_independent(witness.vertices):
        raise InvariantError("solver witness failed independence recheck")
    return SolveResult(size=best, witness=witness, exhaustive=True, nodes=budget.used)


def has_it_of_size(g: MultipartiteGraph, size: int, budget=None) -> Optional[Transversal]:
    """Witness of a partial transversal with at least `size` picks, or None.

    Stops at the first witness; absence is decided by a complete search.  On a
    graph with several class-connected components, absence is decided through
    the per-component optima instead of one joint search.
    """
    budget = Budget.coerce(budget)
    if size <= 0:
        return Transversal()
    if size > g.parts:
        return None
    if len(_class_components(g)) > 1:
        res = max_partial_it(g, budget)
        if res.size < size:
            return None
        return Transversal(res.witness.picks[:size])
    vids = _first_witness(g, size, budget)
    if vids is None:
        return None
    witness = Transversal(g.ref_of(v) for v in vids)
    if not g.is_independent(witness.vertices):
        raise InvariantError("solver witness failed independence recheck")
    return witness


def avoidance_it(
    g: MultipartiteGraph,
    parts: Iterable[int],
    forbidden: Iterable[VertexRef] = (),
    budget=None,
) -> Optional[Transversal]:
    """Full transversal of the given classes avoiding the forbidden vertices.

    The caller folds any neighborhood constraints into ``forbidden``.  Returns
    None only after an exhaustive search.
    """
    budget = Budget.coerce(budget)
    cls = sorted(set(int(c) for c in parts))
    masks = [g.class_mask(c) for c in cls]
    adj = g.adjacency_masks()
    forb = g.mask_of(forbidden)
    k = len(cls)

    def walk(i: int, blocked: int) -> Optional[list[int]]:
        budget.charge()
        if i == k:
            return []
        for j in range(i, k):
            if not masks[j] & ~blocked:
                return None
        m = masks[i] & ~blocked
        while m:
            low = m & -m
            m ^= low
            vid = low.bit_length() - 1
            sub = walk(i + 1, blocked | adj[vid])
            if sub is not None:
                return [vid] + sub
        return None

    vids = walk(0, forb)
    if vids is None:
        return None
    witness = Transversal(g.ref_of(v) for v in vids)
    if not g.is_independent(witness.vertices):
        raise InvariantError("solver witness failed independence recheck")
    return witness


def enumerate_full_its(g: MultipartiteGraph, limit: Optional[int] = None, budget=None) -> list[Transversal]:
    """Full transversals of all classes in lexicographic order, up to `limit`."""
    budget = Budget.coerce(budget)
    r = g.parts
    masks = [g.class_mask(c) for c in range(r)]
    adj = g.adjacency_masks()
    out: list[Transversal] = []

    def walk(c: int, blocked: int, picks: list[int]) -> bool:
        budget.charge()
        if c == r:
            out.append(Transversal(g.ref_of(v) for v in picks))
            return limit is not None and len(out) >= limit
        m = masks[c] & ~blocked
        while m:
            low = m & -m
            m ^= low
            vid = low.bit_length() - 1
            picks.append(vid)
            stop = walk(c + 1, blocked | adj[vid], picks)
            picks.pop()
            if stop:
                return True
        return False

    walk(0, 0, [])
    return out


Certificate = tuple[tuple[int, ...], tuple[Edge, ...]]


def no_it_certificate_brute(g: MultipartiteGraph, budget=None) -> Optional[Certificate]:
    """Smallest blocking certificate found by exhaustive search.

    Scans class subsets S by increasing size, then edge sets Z of the induced
    subgraph by increasing size with |Z| <= |S| - 1, returning the first pair
    where the endpoints of Z dominate every vertex of the chosen classes and
    meet each chosen class.  Raises if the graph has a full transversal.
    """
    budget = Budget.coerce(budget)
    res = max_partial_it(g, budget)
    if res.size == g.parts:
        raise PreconditionError("graph has a full transversal; no certificate exists")
    for s_size in range(1, g.parts + 1):
        for s_subset in combinations(range(g.parts), s_size):
            target = 0
            for c in s_subset:
                target |= g.class_mask(c)
            inner = [e for e in g.edges if e[0].part in s_subset and e[1].part in s_subset]
            if not inner:
                continue
            for z_size in range(1, min(s_size - 1, len(inner)) + 1):
                for z in combinations(inner, z_size):
                    budget.charge()
                    vz = 0
                    for u, v in z:
                        vz |= 1 << g.vertex_id(u)
                        vz |= 1 << g.vertex_id(v)
                    if any(not (vz & g.class_mask(c)) for c in s_subset):
                        continue
                    if target & ~vz & ~g.neighborhood_mask(vz):
                        continue
                    return tuple(s_subset), tuple(z)
    return None
