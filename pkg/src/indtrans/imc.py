"""Feasible-pair machinery and induced matching configurations.

A feasible pair ``(I, T)`` couples a maximum partial transversal ``T`` with a
dominating-set-in-progress ``I`` whose induced graph is a star forest centered
outside ``T``, whose class contraction is a forest, and which admits no local
improvement of ``T`` around a single center.  The augmentation loop grows
``I`` until it dominates every class it touches plus every class the seed
transversal missed; under the right class-size thresholds the result is an
induced matching configuration (IMC): an induced perfect matching whose class
contraction is a forest.

Every augmentation step re-checks full feasibility at runtime; a violation is
an :class:`InvariantError`, never a silently wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from random import Random
from typing import Iterable, Optional

from .errors import InvariantError, PreconditionError
from .graph import Edge, MultipartiteGraph, VertexRef, _as_ref
from .solver import Budget, Transversal, has_it_of_size, max_partial_it


# -- feasible pairs ----------------------------------------------------------


@dataclass(frozen=True)
class FeasiblePair:
    """State ``(I, T)`` of the augmentation loop.

    ``members`` is I; ``transversal`` is T; the star centers W are I minus T.
    """

    members: frozenset[VertexRef]
    transversal: Transversal

    @property
    def centers(self) -> frozenset[VertexRef]:
        return self.members - self.transversal.vertices

    def support(self, g: MultipartiteGraph) -> frozenset[int]:
        return g.class_support(self.members)


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    failed: Optional[str]
    detail: str


def _fail(cond: str, detail: str) -> FeasibilityReport:
    return FeasibilityReport(ok=False, failed=cond, detail=f"({cond}) {detail}")


def _member_components(g: MultipartiteGraph, members: Iterable[VertexRef]) -> list[list[VertexRef]]:
    refs = sorted(members)
    mask = g.mask_of(refs)
    seen: set[VertexRef] = set()
    comps: list[list[VertexRef]] = []
    for v in refs:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        queue = [v]
        while queue:
            x = queue.pop()
            for w in g.refs_of_mask(g.adjacency_mask(g.vertex_id(x)) & mask):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def _class_edges(g: MultipartiteGraph, members: Iterable[VertexRef]) -> tuple[tuple[int, int], ...]:
    """Induced edges projected to class pairs; parallel projections kept."""
    return tuple(
        sorted((min(u.part, v.part), max(u.part, v.part)) for u, v in g.edges_within(members))
    )


def _forest_components(
    nodes: Iterable[int], edges: Iterable[tuple[int, int]]
) -> tuple[bool, tuple[tuple[int, ...], ...]]:
    """Union-find cycle test over a multigraph; returns (acyclic, components)."""
    parent = {c: c for c in nodes}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    acyclic = True
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            acyclic = False
        else:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for c in parent:
        groups.setdefault(find(c), []).append(c)
    comps = tuple(sorted(tuple(sorted(v)) for v in groups.values()))
    return acyclic, comps


@dataclass(frozen=True)
class ContractedMultigraph:
    """Induced edges of a vertex set projected onto its support classes.

    Every induced edge contributes one class-pair edge, so parallel edges
    survive; the set is an IMC-style forest only when none do and the simple
    projection is acyclic.
    """

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    acyclic: bool

    @classmethod
    def build(cls, g: MultipartiteGraph, members: Iterable[VertexRef]) -> "ContractedMultigraph":
        members = sorted(members)
        nodes = tuple(sorted(g.class_support(members)))
        edges = _class_edges(g, members)
        acyclic, _ = _forest_components(nodes, edges)
        return cls(nodes=nodes, edges=edges, acyclic=acyclic)


@dataclass(frozen=True)
class ExtendedForest:
    """Class contraction of I extended to the missed classes."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, ...], ...]
    acyclic: bool

    @classmethod
    def build(
        cls, g: MultipartiteGraph, members: Iterable[VertexRef], extra: Iterable[int]
    ) -> "ExtendedForest":
        members = sorted(members)
        nodes = tuple(sorted(set(g.class_support(members)) | set(extra)))
        edges = _class_edges(g, members)
        acyclic, comps = _forest_components(nodes, edges)
        return cls(nodes=nodes, edges=edges, components=comps, acyclic=acyclic)

    def component_of(self, part: int) -> tuple[int, ...]:
        for comp in self.components:
            if part in comp:
                return comp
        raise PreconditionError(f"class {part} is not a forest node")


# -- constrained transversal searches ----------------------------------------


def _complete_support(
    g: MultipartiteGraph,
    support: Iterable[int],
    fixed: dict[int, int],
    excluded: int,
    center: Optional[int],
    cost_cap: Optional[int],
    budget: Budget,
) -> Optional[tuple[int, ...]]:
    """Lexicographically first transversal on ``support`` meeting the constraints.

    ``fixed`` maps classes to mandated vertex ids; ``excluded`` is a bitmask of
    vertices that may not be chosen; picks in classes other than the fixed
    ones must be independent of everything chosen.  When ``center`` is given,
    the total adjacency of the picks to it must not exceed ``cost_cap``.
    Returns the sorted vertex ids or None when no completion exists.
    """
    adj = g.adjacency_masks()
    fmask = 0
    for c in sorted(fixed):
        vid = fixed[c]
        if adj[vid] & fmask:
            return None
        fmask |= 1 << vid
    center_adj = adj[center] if center is not None else 0
    cost = (center_adj & fmask).bit_count()
    if cost_cap is not None and cost > cost_cap:
        return None
    free = [c for c in sorted(set(support)) if c not in fixed]
    blocked0 = g.neighborhood_mask(fmask)
    out: Optional[tuple[int, ...]] = None

    def walk(i: int, blocked: int, cost: int, picks: list[int]) -> bool:
        nonlocal out
        budget.charge()
        if i == len(free):
            out = tuple(sorted(picks))
            return True
        m = g.class_mask(free[i]) & ~excluded & ~blocked & ~fmask
        while m:
            low = m & -m
            m ^= low
            vid = low.bit_length() - 1
            extra = (center_adj >> vid) & 1
            if cost_cap is not None and cost + extra > cost_cap:
                continue
            picks.append(vid)
            if walk(i + 1, blocked | adj[vid], cost + extra, picks):
                return True
            picks.pop()
        return False

    walk(0, blocked0, cost, _mask_bits(fmask))
    return out


def _mask_bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        mask ^= low
        out.append(low.bit_length() - 1)
    return out


def _center_constraints(
    g: MultipartiteGraph, pair: FeasiblePair, skip: Optional[VertexRef]
) -> tuple[dict[int, int], int]:
    """Fixed picks and exclusions that freeze every center's leaf set except ``skip``'s.

    A replacement transversal must keep N(w, T') = N(w, T) for every center w
    other than ``skip`` and may not use center vertices at all.
    """
    adj = g.adjacency_masks()
    t_mask = g.mask_of(pair.transversal)
    fixed: dict[int, int] = {}
    excluded = g.mask_of(pair.centers)
    for w in sorted(pair.centers):
        wvid = g.vertex_id(w)
        if skip is not None and w == skip:
            continue
        leaves = adj[wvid] & t_mask
        excluded |= adj[wvid] & ~leaves
        lm = leaves
        while lm:
            low = lm & -lm
            lm ^= low
            vid = low.bit_length() - 1
            fixed[g.ref_of(vid).part] = vid
    return fixed, excluded


def _improvement_for_center(
    g: MultipartiteGraph, pair: FeasiblePair, center: VertexRef, budget: Budget
) -> Optional[Transversal]:
    """A transversal on S(T) that strictly lowers the center's leaf count, if any."""
    adj = g.adjacency_masks()
    t_mask = g.mask_of(pair.transversal)
    cap = (adj[g.vertex_id(center)] & t_mask).bit_count() - 1
    if cap < 0:
        return None
    fixed, excluded = _center_constraints(g, pair, skip=center)
    vids = _complete_support(
        g, pair.transversal.support, fixed, excluded, g.vertex_id(center), cap, budget
    )
    if vids is None:
        return None
    return Transversal(g.ref_of(v) for v in vids)


def _min_degree_completion(
    g: MultipartiteGraph, pair: FeasiblePair, w_vid: int, budget: Budget
) -> tuple[tuple[int, ...], int]:
    """Replacement transversal minimizing adjacency to the new vertex.

    Scans target degrees 0, 1, ... and returns the lexicographically first
    member of the maintained transversal family attaining the minimum.  The
    current T always qualifies, so the scan terminates by its degree.
    """
    adj = g.adjacency_masks()
    t_mask = g.mask_of(pair.transversal)
    fixed, excluded = _center_constraints(g, pair, skip=None)
    upper = (adj[w_vid] & t_mask).bit_count()
    for cap in range(upper + 1):
        vids = _complete_support(g, pair.transversal.support, fixed, excluded, w_vid, cap, budget)
        if vids is not None:
            return vids, cap
    raise InvariantError("replacement search missed the current transversal; engine bug")


# -- feasibility -------------------------------------------------------------


def check_feasible(
    g: MultipartiteGraph,
    pair: FeasiblePair,
    *,
    budget=None,
    max_size: Optional[int] = None,
) -> FeasibilityReport:
    """Full check of the five feasibility conditions, naming the first violation.

    Condition (e) is decided by exhaustive constrained search over replacement
    transversals on the support of T, so it is budgeted.
    """
    budget = Budget.coerce(budget)
    members = frozenset(_as_ref(v) for v in pair.members)
    t = pair.transversal
    g.mask_of(members)  # range-validates every vertex of the pair
    g.mask_of(t.vertices)
    if not g.is_independent(t.vertices):
        return _fail("a", "transversal picks are not independent")
    if max_size is None:
        max_size = max_partial_it(g, budget).size
    if t.size != max_size:
        return _fail("a", f"transversal has size {t.size}, maximum is {max_size}")

    s_i = g.class_support(members)
    s_both = g.class_support(members & t.vertices)
    if s_both != (s_i & t.support):
        return _fail("b", "a transversal pick sits in an active class but outside the set")

    centers = members - t.vertices
    for comp in _member_components(g, members):
        if len(comp) < 2:
            return _fail("c", f"component {comp[0]} has no leaf")
        cmask = g.mask_of(comp)
        deg = {v: (g.adjacency_mask(g.vertex_id(v)) & cmask).bit_count() for v in comp}
        center = next(
            (v for v in comp if deg[v] == len(comp) - 1 and v in centers),
            None,
        )
        if center is None:
            return _fail("c", f"component of {comp[0]} has no center outside the transversal")
        if any(deg[v] != 1 for v in comp if v != center):
            return _fail("c", f"component of {comp[0]} is not a star")

    if not ContractedMultigraph.build(g, members).acyclic:
        return _fail("d", "class contraction of the set has a cycle")

    for v in sorted(centers):
        witness = _improvement_for_center(g, pair, v, budget)
        if witness is not None:
            return _fail("e", f"center {v} admits an improving transversal {witness}")
    return FeasibilityReport(ok=True, failed=None, detail="feasible")


def is_definition_member(g: MultipartiteGraph, t_ref: Transversal, candidate: Transversal) -> bool:
    """Candidate belongs to the replacement family of the feasibility definition:
    an independent transversal with support exactly S(T)."""
    return candidate.support == t_ref.support and g.is_independent(candidate.vertices)


def is_maintained_member(
    g: MultipartiteGraph, pair: FeasiblePair, candidate: Transversal
) -> bool:
    """Candidate belongs to the family the augmentation loop maintains:
    definition membership plus avoiding every center and freezing all leaf sets."""
    if not is_definition_member(g, pair.transversal, candidate):
        return False
    if pair.centers & candidate.vertices:
        return False
    adj = g.adjacency_masks()
    t_mask = g.mask_of(pair.transversal)
    c_mask = g.mask_of(candidate)
    for w in pair.centers:
        wvid = g.vertex_id(w)
        if (adj[wvid] & t_mask) != (adj[wvid] & c_mask):
            return False
    return True


# -- augmentation loop -------------------------------------------------------


def run_augmentation(
    g: MultipartiteGraph,
    seed: FeasiblePair,
    *,
    budget=None,
    max_size: Optional[int] = None,
) -> FeasiblePair:
    """Grow a feasible pair until I dominates its own classes plus the missed ones.

    Feasibility of the pair is asserted after every augmentation step; a
    failed assertion raises :class:`InvariantError` because the step argument
    guarantees it.  The set strictly grows each round, bounding the loop by
    the vertex count.
    """
    budget = Budget.coerce(budget)
    if max_size is None:
        max_size = max_partial_it(g, budget).size
    report = check_feasible(g, seed, budget=budget, max_size=max_size)
    if not report.ok:
        raise PreconditionError(f"seed pair is not feasible: {report.detail}")
    missed = frozenset(range(g.parts)) - seed.transversal.support
    adj = g.adjacency_masks()
    pair = seed
    for _ in range(g.n_vertices + 2):
        budget.charge()
        i_mask = g.mask_of(pair.members)
        support = g.class_support(pair.members)
        target_mask = 0
        for c in sorted(support | missed):
            target_mask |= g.class_mask(c)
        undominated = target_mask & ~i_mask & ~g.neighborhood_mask(i_mask)
        if not undominated:
            return pair
        active_mask = 0
        for c in sorted(support):
            active_mask |= g.class_mask(c)
        pool = undominated & active_mask
        if not pool:
            pool = undominated
        w_vid = (pool & -pool).bit_length() - 1
        w = g.ref_of(w_vid)
        vids, cost = _min_degree_completion(g, pair, w_vid, budget)
        if cost == 0:
            raise InvariantError(
                f"augmentation found no transversal neighbor for {w}; engine bug"
            )
        new_t = Transversal(g.ref_of(v) for v in vids)
        leaves = g.refs_of_mask(adj[w_vid] & g.mask_of(new_t))
        new_members = pair.members | {w} | set(leaves)
        if len(new_members) <= len(pair.members):
            raise InvariantError("augmentation did not grow the set; engine bug")
        new_pair = FeasiblePair(frozenset(new_members), new_t)
        report = check_feasible(g, new_pair, budget=budget, max_size=max_size)
        if not report.ok:
            raise InvariantError(f"augmentation broke feasibility: {report.detail}")
        pair = new_pair
    raise InvariantError("augmentation failed to terminate; engine bug")


# -- setup levels ------------------------------------------------------------


class SetupLevel(IntEnum):
    """Class-size thresholds, strict and exact, gating the structural guarantees.

    Each level includes the previous ones; n is the minimum class size, D the
    maximum degree, q = floor(r / (d+1)).

    SETUP_I      n > 2D(1 - (2d+3)/(2r))   induced perfect matching of full size
    SETUP_II     n > 2D(1 - (4d+5)/(4r))   private-set size guarantees
    ODD_SETUP_I  n > 2D(1 - 1/(q-1))       component class-count lower bound
    ODD_SETUP_II n > D(2 - (6d+7)/(3r))    complete-bipartite block structure
    """

    NONE = 0
    SETUP_I = 1
    SETUP_II = 2
    ODD_SETUP_I = 3
    ODD_SETUP_II = 4

    @property
    def label(self) -> str:
        return {
            SetupLevel.NONE: "none",
            SetupLevel.SETUP_I: "setup-i",
            SetupLevel.SETUP_II: "setup-ii",
            SetupLevel.ODD_SETUP_I: "odd-setup-i",
            SetupLevel.ODD_SETUP_II: "odd-setup-ii",
        }[self]


def setup_level(g: MultipartiteGraph, d: int) -> SetupLevel:
    """Highest threshold the instance clears, compared as exact rationals."""
    r = g.parts
    if r == 0 or not 0 <= d < r:
        return SetupLevel.NONE
    n = Fraction(g.min_class_size)
    dg = g.max_degree
    if not n > 2 * dg * (1 - Fraction(2 * d + 3, 2 * r)):
        return SetupLevel.NONE
    if not n > 2 * dg * (1 - Fraction(4 * d + 5, 4 * r)):
        return SetupLevel.SETUP_I
    q = r // (d + 1)
    if q < 2 or not n > 2 * dg * (1 - Fraction(1, q - 1)):
        return SetupLevel.SETUP_II
    if not n > dg * (2 - Fraction(6 * d + 7, 3 * r)):
        return SetupLevel.ODD_SETUP_I
    return SetupLevel.ODD_SETUP_II


# -- configuration records ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class IMCRecord:
    """Output of the extraction pipeline on one instance.

    ``members`` is the final dominating set I; when it induces a perfect
    matching and its class contraction is a forest it is an IMC.  ``private``
    maps each member to the vertices it alone dominates among the touched
    classes; ``shared`` is the set of vertices dominated at least twice.
    """

    graph: MultipartiteGraph
    defect: int
    pair: FeasiblePair
    missed_classes: frozenset[int]
    forest: ExtendedForest
    t: int
    members: frozenset[VertexRef]
    star_edges: tuple[Edge, ...]
    is_perfect_matching: bool
    matching: tuple[Edge, ...]
    private: dict[VertexRef, frozenset[VertexRef]]
    shared: frozenset[VertexRef]
    level: SetupLevel


def private_neighborhoods(
    g: MultipartiteGraph, members: Iterable[VertexRef], missed: Iterable[int]
) -> tuple[dict[VertexRef, frozenset[VertexRef]], frozenset[VertexRef]]:
    """Per-member privately dominated vertices, plus the multiply dominated set.

    Private sets live inside the touched classes (the member support plus the
    missed classes); the multiply dominated set is counted over the whole
    graph.
    """
    members = sorted(members)
    i_mask = g.mask_of(members)
    target = 0
    for c in sorted(set(g.class_support(members)) | set(missed)):
        target |= g.class_mask(c)
    private: dict[VertexRef, set[VertexRef]] = {v: set() for v in members}
    shared: list[VertexRef] = []
    for vid in range(g.n_vertices):
        hits = g.adjacency_mask(vid) & i_mask
        cnt = hits.bit_count()
        if cnt >= 2:
            shared.append(g.ref_of(vid))
        elif cnt == 1 and (target >> vid) & 1:
            private[g.ref_of(hits.bit_length() - 1)].add(g.ref_of(vid))
    return {v: frozenset(s) for v, s in private.items()}, frozenset(shared)


def extract_imc(
    g: MultipartiteGraph, d: int, seed: Optional[FeasiblePair] = None, *, budget=None
) -> IMCRecord:
    """Run the augmentation pipeline and assert its structural conclusions.

    Preconditions: the maximum partial transversal has exactly r - d - 1 picks
    and the seed (default: the empty set with the least maximum transversal)
    is feasible.  Asserted conclusions: the seed set survives inside I with
    its transversal picks intact on seeded classes; I dominates its classes
    plus the missed ones; the extended class forest has exactly d+1
    components, one missed class each; and I has at most 2(t - d - 1)
    vertices.  Above the SETUP_I threshold the induced perfect matching with
    exactly 2(t - d - 1) vertices is asserted as well.
    """
    budget = Budget.coerce(budget)
    solve = max_partial_it(g, budget)
    r = g.parts
    if solve.size != r - d - 1:
        raise PreconditionError(
            f"maximum partial transversal has {solve.size} picks; defect {d} needs {r - d - 1}"
        )
    if seed is None:
        seed = FeasiblePair(frozenset(), solve.witness)
    missed = frozenset(range(r)) - seed.transversal.support
    pair = run_augmentation(g, seed, budget=budget, max_size=solve.size)
    members, t_final = pair.members, pair.transversal

    if not seed.members <= members:
        raise InvariantError("seed members were dropped by augmentation")
    if t_final.support != seed.transversal.support:
        raise InvariantError("transversal support changed during augmentation")
    for c in sorted(g.class_support(seed.members)):
        if t_final.pick_in(c) != seed.transversal.pick_in(c):
            raise InvariantError(f"pick in seeded class {c} changed during augmentation")
    if members and len(g.class_support(members)) < 2:
        raise InvariantError("final set touches fewer than two classes")
    if not g.dominates_classes(members, sorted(g.class_support(members) | missed)):
        raise InvariantError("final set fails to dominate its target classes")

    forest = ExtendedForest.build(g, members, missed)
    if not forest.acyclic:
        raise InvariantError("extended class graph has a cycle")
    if len(forest.components) != d + 1:
        raise InvariantError(
            f"extended forest has {len(forest.components)} components; expected {d + 1}"
        )
    for comp in forest.components:
        if len(set(comp) & missed) != 1:
            raise InvariantError(f"component {comp} does not contain exactly one missed class")
    t = len(forest.nodes)
    if len(members) > 2 * (t - d - 1):
        raise InvariantError(f"set has {len(members)} vertices; bound is {2 * (t - d - 1)}")

    star_edges = g.edges_within(members)
    i_mask = g.mask_of(members)
    pm = bool(members) and all(
        (g.adjacency_mask(g.vertex_id(v)) & i_mask).bit_count() == 1 for v in members
    )
    level = setup_level(g, d)
    if level >= SetupLevel.SETUP_I:
        if not pm or len(members) != 2 * (t - d - 1):
            raise InvariantError(
                "class sizes clear the matching threshold but the matching guarantee failed"
            )
    private, shared = private_neighborhoods(g, members, missed)
    return IMCRecord(
        graph=g,
        defect=d,
        pair=pair,
        missed_classes=missed,
        forest=forest,
        t=t,
        members=members,
        star_edges=star_edges,
        is_perfect_matching=pm,
        matching=star_edges if pm else (),
        private=private,
        shared=shared,
        level=level,
    )


# -- transversals from configurations ----------------------------------------


def transversal_from_tree(
    record: IMCRecord,
    tree_classes: Iterable[int],
    omit: int,
    undominated: Optional[VertexRef] = None,
) -> Transversal:
    """Partial transversal covering a contraction tree except one chosen class.

    Roots the tree at ``omit``; every other class contributes the endpoint, in
    that class, of its matching edge toward the parent.  With ``undominated``
    given (a vertex of the omitted class with no neighbor in the restricted
    configuration), the omitted class is covered too.
    """
    if not record.is_perfect_matching:
        raise PreconditionError("tree extraction requires an induced perfect matching")
    g = record.graph
    tc = sorted(set(int(c) for c in tree_classes))
    if omit not in tc:
        raise PreconditionError(f"omitted class {omit} is not among the tree classes")
    tcs = set(tc)
    sub = [e for e in record.matching if e[0].part in tcs and e[1].part in tcs]
    if len(sub) != len(tc) - 1:
        raise PreconditionError("classes do not induce a tree in the class contraction")
    nbrs: dict[int, list[tuple[int, Edge]]] = {c: [] for c in tc}
    for u, v in sub:
        nbrs[u.part].append((v.part, (u, v)))
        nbrs[v.part].append((u.part, (u, v)))
    parent_edge: dict[int, Edge] = {}
    seen = {omit}
    queue = [omit]
    while queue:
        c = queue.pop()
        for other, e in sorted(nbrs[c], key=lambda p: p[0]):
            if other not in seen:
                seen.add(other)
                parent_edge[other] = e
                queue.append(other)
    if seen != tcs:
        raise PreconditionError("classes do not induce a tree in the class contraction")
    picks = []
    for c in tc:
        if c == omit:
            continue
        u, v = parent_edge[c]
        picks.append(u if u.part == c else v)
    if undominated is not None:
        x = _as_ref(undominated)
        if x.part != omit:
            raise PreconditionError("the extra vertex must lie in the omitted class")
        restricted = [v for v in sorted(record.members) if v.part in tcs]
        if any(g.has_edge(x, y) for y in restricted):
            raise PreconditionError("the extra vertex is dominated by the restricted configuration")
        picks.append(x)
    result = Transversal(picks)
    if not g.is_independent(result.vertices):
        raise InvariantError("tree extraction produced a dependent pick set")
    return result


# -- private-set auxiliary graph ---------------------------------------------


@dataclass(frozen=True, eq=False)
class AvAuxiliary:
    """Graph over the private sets, one class per configuration vertex.

    Classes follow matching order: for each matching edge (v, w) with v < w,
    the private set of v then the private set of w.  Edges inside one private
    set and between the private sets of matched pairs are removed; every full
    transversal of this graph is a configuration similar to the original.
    """

    graph: MultipartiteGraph
    owners: tuple[VertexRef, ...]
    class_members: tuple[tuple[VertexRef, ...], ...]

    def to_original(self, pick: VertexRef) -> VertexRef:
        return self.class_members[pick.part][pick.index]

    def to_original_set(self, picks: Iterable[VertexRef]) -> frozenset[VertexRef]:
        return frozenset(self.to_original(p) for p in picks)


def build_aux(record: IMCRecord) -> AvAuxiliary:
    if not record.is_perfect_matching:
        raise PreconditionError("auxiliary graph requires an induced perfect matching")
    g = record.graph
    owners: list[VertexRef] = []
    class_members: list[tuple[VertexRef, ...]] = []
    for u, v in record.matching:
        owners.append(u)
        class_members.append(tuple(sorted(record.private[u])))
        owners.append(v)
        class_members.append(tuple(sorted(record.private[v])))
    matched = {frozenset(e) for e in record.matching}
    edges = []
    for a in range(len(owners)):
        for b in range(a + 1, len(owners)):
            if frozenset((owners[a], owners[b])) in matched:
                continue
            for i, x in enumerate(class_members[a]):
                for j, y in enumerate(class_members[b]):
                    if g.has_edge(x, y):
                        edges.append((VertexRef(a, i), VertexRef(b, j)))
    aux = MultipartiteGraph([len(m) for m in class_members], edges)
    return AvAuxiliary(graph=aux, owners=tuple(owners), class_members=tuple(class_members))


def is_similar_configuration(record: IMCRecord, candidate: Iterable[VertexRef]) -> bool:
    """Same class support, same extended-forest components, dominates the same
    classes, and is itself an induced perfect matching with forest contraction."""
    g = record.graph
    cand = frozenset(_as_ref(v) for v in candidate)
    if not cand:
        return not record.members
    c_mask = g.mask_of(cand)
    if any((g.adjacency_mask(g.vertex_id(v)) & c_mask).bit_count() != 1 for v in cand):
        return False
    acyclic, _ = _forest_components(sorted(g.class_support(cand)), _class_edges(g, cand))
    if not acyclic:
        return False
    if g.class_support(cand) != g.class_support(record.members):
        return False
    target = sorted(g.class_support(record.members) | record.missed_classes)
    if not g.dominates_classes(cand, target):
        return False
    forest = ExtendedForest.build(g, cand, record.missed_classes)
    return forest.components == record.forest.components


# -- critical-edge seeding ----------------------------------------------------


def seed_from_critical_edge(
    g: MultipartiteGraph, d: int, edge: Edge, *, budget=None
) -> FeasiblePair:
    """Feasible pair forcing both endpoints of a critical edge into the set.

    The edge is critical when the graph has no (r-d)-transversal but deleting
    the edge creates one; such a transversal must use both endpoints, and
    dropping the smaller endpoint leaves a maximum partial transversal.
    """
    budget = Budget.coerce(budget)
    u, v = sorted((_as_ref(edge[0]), _as_ref(edge[1])))
    if not g.has_edge(u, v):
        raise PreconditionError(f"no such edge: {u} {v}")
    target = g.parts - d
    if has_it_of_size(g, target, budget) is not None:
        raise PreconditionError(f"graph already has a transversal of size {target}")
    witness = has_it_of_size(g.without_edge(u, v), target, budget)
    if witness is None:
        raise PreconditionError("edge is not critical: deleting it creates no larger transversal")
    if u not in witness or v not in witness:
        raise InvariantError("critical-edge witness misses an endpoint; engine bug")
    pair = FeasiblePair(frozenset({u, v}), witness.without(u))
    report = check_feasible(g, pair, budget=budget, max_size=target - 1)
    if not report.ok:
        raise InvariantError(f"critical-edge seed is not feasible: {report.detail}")
    return pair


def imc_through_edge(g: MultipartiteGraph, d: int, edge: Edge, *, budget=None) -> IMCRecord:
    """Extract a configuration guaranteed to contain the given critical edge."""
    pair = seed_from_critical_edge(g, d, edge, budget=budget)
    record = extract_imc(g, d, seed=pair, budget=budget)
    u, v = sorted((_as_ref(edge[0]), _as_ref(edge[1])))
    if u not in record.members or v not in record.members:
        raise InvariantError("extracted configuration does not contain the critical edge")
    return record


# -- blocking certificates ----------------------------------------------------


def verify_certificate(
    g: MultipartiteGraph, parts: Iterable[int], edges: Iterable[Edge]
) -> tuple[bool, str]:
    """Shared verifier for blocking certificates.

    Valid when the edge set is nonempty, lies inside the chosen classes, has
    at most |classes| - 1 edges, its endpoints meet every chosen class, and
    its endpoints dominate every vertex of the chosen classes.
    """
    s = sorted(set(int(c) for c in parts))
    z = [tuple(sorted((_as_ref(e[0]), _as_ref(e[1])))) for e in edges]
    if not z:
        return False, "empty edge set"
    sset = set(s)
    for a, b in z:
        if not g.has_edge(a, b):
            return False, f"{a} {b} is not an edge"
        if a.part not in sset or b.part not in sset:
            return False, f"edge {a} {b} leaves the chosen classes"
    if len(z) != len(set(z)):
        return False, "repeated edge"
    if len(z) > len(s) - 1:
        return False, f"{len(z)} edges exceed the bound {len(s) - 1}"
    endpoints = {a for a, _ in z} | {b for _, b in z}
    for c in s:
        if not any(x.part == c for x in endpoints):
            return False, f"class {c} not met by the edge set"
    target = [x for c in s for x in g.class_vertices(c)]
    if not g.dominates(endpoints, target):
        return False, "endpoints do not dominate the chosen classes"
    return True, "valid"


def no_transversal_certificate(
    g: MultipartiteGraph, budget=None
) -> tuple[tuple[int, ...], tuple[Edge, ...]]:
    """Blocking certificate extracted from the augmentation pipeline.

    Requires a graph with nonempty classes and no full transversal.  Returns
    the support classes of the final set and its induced edges; the result
    always passes :func:`verify_certificate`.
    """
    budget = Budget.coerce(budget)
    solve = max_partial_it(g, budget)
    if solve.size == g.parts:
        raise PreconditionError("graph has a full transversal; no certificate exists")
    if g.min_class_size == 0:
        raise PreconditionError("certificate extraction requires nonempty classes")
    pair = run_augmentation(
        g, FeasiblePair(frozenset(), solve.witness), budget=budget, max_size=solve.size
    )
    parts = tuple(sorted(g.class_support(pair.members)))
    edges = g.edges_within(pair.members)
    ok, why = verify_certificate(g, parts, edges)
    if not ok:
        raise InvariantError(f"extracted certificate failed verification: {why}")
    return parts, edges


# -- structural checks ---------------------------------------------------------


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIP = "skip"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: CheckStatus
    detail: str


def _subsets_for_union_checks(record: IMCRecord, rng: Random, cap: int) -> list[tuple[VertexRef, ...]]:
    members = sorted(record.members)
    n = len(members)
    if n <= 12 and 2**n <= cap:
        out = []
        for mask in range(2**n):
            out.append(tuple(members[i] for i in range(n) if (mask >> i) & 1))
        return out
    out = [(), tuple(members)]
    out.extend((v,) for v in members)
    out.extend(record.matching)
    while len(out) < cap:
        size = rng.randrange(2, n + 1)
        out.append(tuple(sorted(rng.sample(members, size))))
    return out


def _restrictions_for_transversal_check(
    record: IMCRecord, rng: Random, samples: int
) -> list[dict[VertexRef, tuple[VertexRef, ...]]]:
    """Deterministic private-set restrictions with total removal at most the max degree."""
    dg = record.graph.max_degree
    members = sorted(record.members)
    out = [{v: () for v in members}]
    for v in members:
        removable = sorted(record.private[v])[: max(len(record.private[v]) - 1, 0)]
        out.append({w: (tuple(removable[:dg]) if w == v else ()) for w in members})
    for _ in range(samples):
        removal: dict[VertexRef, tuple[VertexRef, ...]] = {}
        left = dg
        for v in members:
            room = min(left, len(record.private[v]) - 1)
            k = rng.randint(0, room) if room > 0 else 0
            removal[v] = tuple(rng.sample(sorted(record.private[v]), k))
            left -= k
        out.append(removal)
    return out


def check_structure(
    record: IMCRecord,
    *,
    budget=None,
    rng_seed: int = 0,
    subset_cap: int = 2048,
    transversal_cap: int = 200,
    swap_cap: int = 3,
) -> tuple[CheckResult, ...]:
    """Run every structural guarantee whose hypotheses the record satisfies.

    Guarantees below the record's setup level report SKIP; a FAIL would mean
    either an engine bug or a genuine counterexample, and is surfaced as a
    plain result for the caller to act on.
    """
    budget = Budget.coerce(budget)
    g = record.graph
    rng = Random(rng_seed)
    out: list[CheckResult] = []
    d, t = record.defect, record.t
    dg = g.max_degree
    n = g.min_class_size
    members = sorted(record.members)
    level = record.level
    pm = record.is_perfect_matching

    def emit(name: str, status: CheckStatus, detail: str = "") -> None:
        out.append(CheckResult(name, status, detail))

    def comp_of_class(part: int) -> tuple[int, ...]:
        return record.forest.component_of(part)

    if not members:
        for name in _CHECK_NAMES:
            emit(name, CheckStatus.SKIP, "empty configuration")
        return tuple(out)

    # Multiply dominated vertices are few: |shared| <= 2*D*(t-d-1) - t*n.
    bound = 2 * dg * (t - d - 1) - t * n
    if len(record.shared) <= bound:
        emit("twice-dominated-bound", CheckStatus.PASS, f"{len(record.shared)} <= {bound}")
    else:
        emit("twice-dominated-bound", CheckStatus.FAIL, f"{len(record.shared)} > {bound}")

    # Unions of private sets are large: counting bound, then the per-degree bound.
    subsets = _subsets_for_union_checks(record, rng, subset_cap)
    worst_lo: Optional[str] = None
    worst_deg: Optional[str] = None
    for sub in subsets:
        union = set()
        for v in sub:
            union |= record.private[v]
        lo = (len(sub) + 4 * d + 4 - 4 * t) * dg + 2 * t * n
        if len(union) < lo:
            worst_lo = f"|union({len(sub)} sets)| = {len(union)} < {lo}"
        if level >= SetupLevel.SETUP_II and not len(union) > (len(sub) - 1) * dg:
            worst_deg = f"|union({len(sub)} sets)| = {len(union)} <= {(len(sub) - 1) * dg}"
    emit(
        "private-union-lower",
        CheckStatus.FAIL if worst_lo else CheckStatus.PASS,
        worst_lo or f"{len(subsets)} subsets",
    )
    if level >= SetupLevel.SETUP_II:
        emit(
            "private-union-degree",
            CheckStatus.FAIL if worst_deg else CheckStatus.PASS,
            worst_deg or f"{len(subsets)} subsets",
        )
    else:
        emit("private-union-degree", CheckStatus.SKIP, f"needs setup-ii, have {level.label}")

    # Matched private sets sit in one component and are completely joined.
    if level >= SetupLevel.SETUP_I and pm:
        bad_comp = None
        bad_join = None
        for u, v in record.matching:
            comp = set(comp_of_class(u.part))
            for x in sorted(record.private[u] | record.private[v]):
                if x.part not in comp:
                    bad_comp = f"{x} escapes the component of {u}{v}"
            for a in sorted(record.private[u]):
                for b in sorted(record.private[v]):
                    if a != b and not g.has_edge(a, b):
                        bad_join = f"{a} and {b} not adjacent across {u}{v}"
        emit(
            "matched-private-same-component",
            CheckStatus.FAIL if bad_comp else CheckStatus.PASS,
            bad_comp or "",
        )
        emit(
            "matched-private-complete",
            CheckStatus.FAIL if bad_join else CheckStatus.PASS,
            bad_join or "",
        )
    else:
        why = "needs setup-i and a perfect matching"
        emit("matched-private-same-component", CheckStatus.SKIP, why)
        emit("matched-private-complete", CheckStatus.SKIP, why)

    # Swapping a matched pair for private partners yields a similar configuration.
    if level >= SetupLevel.SETUP_I and pm:
        bad = None
        tried = 0
        for u, v in record.matching:
            for a in sorted(record.private[u])[:swap_cap]:
                for b in sorted(record.private[v])[:swap_cap]:
                    tried += 1
                    candidate = (record.members - {u, v}) | {a, b}
                    if not is_similar_configuration(record, candidate):
                        bad = f"swap {u}{v} -> {a}{b} is not similar"
        emit("private-swap-similar", CheckStatus.FAIL if bad else CheckStatus.PASS, bad or f"{tried} swaps")
    else:
        emit("private-swap-similar", CheckStatus.SKIP, "needs setup-i and a perfect matching")

    # Every full transversal of the private-set auxiliary graph is similar.
    if level >= SetupLevel.SETUP_I and pm:
        from .solver import enumerate_full_its

        aux = build_aux(record)
        bad = None
        its = enumerate_full_its(aux.graph, limit=transversal_cap, budget=budget)
        for it in its:
            if not is_similar_configuration(record, aux.to_original_set(it)):
                bad = f"auxiliary transversal {it} is not similar"
        emit(
            "aux-transversals-similar",
            CheckStatus.FAIL if bad else CheckStatus.PASS,
            bad or f"{len(its)} transversals",
        )
    else:
        emit("aux-transversals-similar", CheckStatus.SKIP, "needs setup-i and a perfect matching")

    # Nonempty private restrictions with small total removal still admit a transversal.
    if level >= SetupLevel.SETUP_II and pm:
        from .solver import avoidance_it

        aux = build_aux(record)
        bad = None
        plans = _restrictions_for_transversal_check(record, rng, samples=8)
        for plan in plans:
            removed_total = sum(len(v) for v in plan.values())
            if removed_total > dg:
                continue
            if any(len(record.private[v]) - len(plan[v]) < 1 for v in members):
                continue
            forbidden = []
            for idx, owner in enumerate(aux.owners):
                gone = set(plan[owner])
                forbidden.extend(
                    VertexRef(idx, i)
                    for i, x in enumerate(aux.class_members[idx])
                    if x in gone
                )
            found = avoidance_it(aux.graph, range(aux.graph.parts), forbidden, budget=budget)
            if found is None:
                bad = f"restriction removing {removed_total} vertices blocks every transversal"
        emit(
            "private-restriction-transversal",
            CheckStatus.FAIL if bad else CheckStatus.PASS,
            bad or f"{len(plans)} restrictions",
        )
    else:
        emit("private-restriction-transversal", CheckStatus.SKIP, "needs setup-ii and a perfect matching")

    # Every touched vertex is completely joined to a private set of its component.
    # Joined-ness is strict: no vertex is joined to a set containing itself.
    if level >= SetupLevel.SETUP_II and pm:
        bad = None
        for c in sorted(g.class_support(record.members) | record.missed_classes):
            comp = set(comp_of_class(c))
            for x in g.class_vertices(c):
                ok = any(
                    v.part in comp
                    and record.private[v]
                    and all(g.has_edge(x, y) for y in record.private[v])
                    for v in members
                )
                if not ok:
                    bad = f"{x} is not completely joined to a private set in its component"
                    break
            if bad:
                break
        emit("full-join-in-component", CheckStatus.FAIL if bad else CheckStatus.PASS, bad or "")
    else:
        emit("full-join-in-component", CheckStatus.SKIP, "needs setup-ii and a perfect matching")

    # Component class counts: at least q classes per component.
    q = g.parts // (d + 1)
    if level >= SetupLevel.ODD_SETUP_I and pm and q >= 2:
        small = [comp for comp in record.forest.components if len(comp) < q]
        if small:
            emit("component-min-size", CheckStatus.FAIL, f"component {small[0]} has fewer than {q} classes")
        elif len(record.forest.nodes) < q * (d + 1):
            emit("component-min-size", CheckStatus.FAIL, "forest has fewer than q(d+1) classes")
        else:
            emit("component-min-size", CheckStatus.PASS, f"all components have >= {q} classes")
    else:
        emit("component-min-size", CheckStatus.SKIP, "needs odd-setup-i, a perfect matching, q >= 2")

    # Vertices joined to the private sets of a matched pair are adjacent.
    if level >= SetupLevel.ODD_SETUP_II and pm:
        bad = None
        touched = [
            x
            for c in sorted(g.class_support(record.members) | record.missed_classes)
            for x in g.class_vertices(c)
        ]
        for u, v in record.matching:
            joined_u = [x for x in touched if all(g.has_edge(x, y) for y in record.private[v])]
            joined_v = [x for x in touched if all(g.has_edge(x, y) for y in record.private[u])]
            for a in joined_u:
                for b in joined_v:
                    if a != b and not g.has_edge(a, b):
                        bad = f"{a} and {b} are joined to the {u}{v} private sets but not adjacent"
        emit("joined-pairs-adjacent", CheckStatus.FAIL if bad else CheckStatus.PASS, bad or "")
    else:
        emit("joined-pairs-adjacent", CheckStatus.SKIP, "needs odd-setup-ii and a perfect matching")

    # Block structure: the touched classes split into complete bipartite blocks.
    if level >= SetupLevel.ODD_SETUP_II and pm:
        r = g.parts
        target = r - d
        critical = True
        for e in g.edges:
            if has_it_of_size(g.without_edge(*e), target, budget=budget) is None:
                critical = False
                break
        if not critical:
            emit("bipartite-union", CheckStatus.SKIP, "instance is not edge-critical")
        else:
            bad = _check_bipartite_union(record)
            emit("bipartite-union", CheckStatus.FAIL if bad else CheckStatus.PASS, bad or "")
    else:
        emit("bipartite-union", CheckStatus.SKIP, "needs odd-setup-ii and a perfect matching")

    # Counting guard: 2(j-1) vertices cannot dominate j classes once j*n - 2*D*(j-1) > 0.
    if level >= SetupLevel.SETUP_II and pm:
        bad = None
        for comp in record.forest.components:
            j = len(comp)
            inside = [v for v in members if v.part in comp]
            if len(inside) != 2 * (j - 1):
                bad = f"component {comp} holds {len(inside)} vertices, expected {2 * (j - 1)}"
                break
            if j <= q and j * n - 2 * dg * (j - 1) > 0:
                target_set = [x for c in comp for x in g.class_vertices(c)]
                if g.dominates(inside, target_set):
                    bad = f"{2 * (j - 1)} vertices dominate component {comp} against the counting bound"
                    break
        emit("domination-counting", CheckStatus.FAIL if bad else CheckStatus.PASS, bad or "")
    else:
        emit("domination-counting", CheckStatus.SKIP, "needs setup-ii and a perfect matching")

    return tuple(out)


def _check_bipartite_union(record: IMCRecord) -> Optional[str]:
    """Touched classes must split into one complete bipartite block per matching edge."""
    g = record.graph
    members = sorted(record.members)
    touched = [
        x
        for c in sorted(g.class_support(record.members) | record.missed_classes)
        for x in g.class_vertices(c)
    ]
    side_of: dict[VertexRef, tuple[int, int]] = {}
    for x in touched:
        hosts = []
        for v in members:
            pv = record.private[v]
            if pv and all(g.has_edge(x, y) for y in pv):
                hosts.append(v)
        if len(hosts) != 1:
            return f"{x} is joined to {len(hosts)} private sets, expected exactly one"
        host = hosts[0]
        for idx, (u, v) in enumerate(record.matching):
            if host == u:
                side_of[x] = (idx, 1)
            elif host == v:
                side_of[x] = (idx, 0)
    for x in touched:
        for y in touched:
            if x >= y:
                continue
            bx, sx = side_of[x]
            by, sy = side_of[y]
            same_block_cross = bx == by and sx != sy
            if g.has_edge(x, y) != same_block_cross:
                if same_block_cross:
                    return f"missing block edge {x} {y}"
                return f"edge {x} {y} crosses blocks"
    return None


_CHECK_NAMES = (
    "twice-dominated-bound",
    "private-union-lower",
    "private-union-degree",
    "matched-private-same-component",
    "matched-private-complete",
    "private-swap-similar",
    "aux-transversals-similar",
    "private-restriction-transversal",
    "full-join-in-component",
    "component-min-size",
    "joined-pairs-adjacent",
    "bipartite-union",
    "domination-counting",
)


# -- canonical text renderings -------------------------------------------------


def format_certificate(
    g: MultipartiteGraph, parts: Iterable[int], edges: Iterable[Edge]
) -> str:
    ok, why = verify_certificate(g, parts, edges)
    lines = ["certificate no-full-transversal"]
    lines.append("classes " + " ".join(str(c) for c in sorted(set(int(c) for c in parts))))
    for a, b in sorted(tuple(sorted((_as_ref(e[0]), _as_ref(e[1])))) for e in edges):
        lines.append(f"edge {a.part} {a.index} {b.part} {b.index}")
    lines.append(f"verdict {'valid' if ok else 'invalid: ' + why}")
    return "\n".join(lines) + "\n"


def format_record(record: IMCRecord) -> str:
    lines = [
        "imc-record",
        f"classes {record.graph.parts}",
        f"defect {record.defect}",
        f"t {record.t}",
        f"size {len(record.members)}",
        f"setup-level {record.level.label}",
        f"perfect-matching {'true' if record.is_perfect_matching else 'false'}",
        "missed " + " ".join(str(c) for c in sorted(record.missed_classes)),
    ]
    for a, b in record.star_edges:
        lines.append(f"edge {a.part} {a.index} {b.part} {b.index}")
    for a, b in record.forest.edges:
        lines.append(f"forest-edge {a} {b}")
    for i, comp in enumerate(record.forest.components):
        lines.append(f"component {i} : " + " ".join(str(c) for c in comp))
    for v in sorted(record.private):
        lines.append(f"private {v.part} {v.index} : {len(record.private[v])}")
    lines.append(f"shared {len(record.shared)}")
    return "\n".join(lines) + "\n"
