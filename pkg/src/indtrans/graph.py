"""Multipartite graphs with exact class-addressed vertices and a canonical text format.

Vertices are addressed as ``(part, index)`` pairs.  Graphs are proper, meaning
no edge joins two vertices of the same class; classes may be empty.  Instances
are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

from .errors import GraphError, MpgFormatError


class VertexRef(NamedTuple):
    """A vertex addressed by class index and position within the class."""

    part: int
    index: int

    def __str__(self) -> str:
        return f"{self.part}:{self.index}"


Edge = tuple[VertexRef, VertexRef]


def _as_ref(v) -> VertexRef:
    if isinstance(v, VertexRef):
        return v
    return VertexRef(int(v[0]), int(v[1]))


class MultipartiteGraph:
    """Immutable r-partite graph over classes of fixed sizes.

    Adjacency is stored as one bitmask per vertex over a global class-major
    vertex numbering, which keeps independence, domination, and neighborhood
    queries exact and fast at desk scale.
    """

    __slots__ = ("_sizes", "_offsets", "_total", "_adj", "_edges", "_max_degree")

    def __init__(self, class_sizes: Iterable[int], edges: Iterable[Edge] = ()):
        sizes = tuple(int(s) for s in class_sizes)
        if any(s < 0 for s in sizes):
            raise GraphError("class sizes must be nonnegative")
        offsets = []
        total = 0
        for s in sizes:
            offsets.append(total)
            total += s
        self._sizes = sizes
        self._offsets = tuple(offsets)
        self._total = total
        adj = [0] * total
        canon: set[Edge] = set()
        for raw_u, raw_v in edges:
            u, v = _as_ref(raw_u), _as_ref(raw_v)
            self._check_ref(u)
            self._check_ref(v)
            if u.part == v.part:
                raise GraphError(f"intra-class edge {u} {v}")
            if v < u:
                u, v = v, u
            if (u, v) in canon:
                raise GraphError(f"duplicate edge {u} {v}")
            canon.add((u, v))
            ui, vi = self.vertex_id(u), self.vertex_id(v)
            adj[ui] |= 1 << vi
            adj[vi] |= 1 << ui
        self._adj = tuple(adj)
        self._edges = tuple(sorted(canon))
        self._max_degree = max((a.bit_count() for a in adj), default=0)

    # -- basic shape ---------------------------------------------------

    @property
    def parts(self) -> int:
        return len(self._sizes)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return self._sizes

    def class_size(self, part: int) -> int:
        self._check_part(part)
        return self._sizes[part]

    @property
    def n_vertices(self) -> int:
        return self._total

    @property
    def edges(self) -> tuple[Edge, ...]:
        """All edges in canonical order: sorted with part1 < part2."""
        return self._edges

    @property
    def max_degree(self) -> int:
        return self._max_degree

    @property
    def min_class_size(self) -> int:
        return min(self._sizes, default=0)

    # -- vertex addressing ---------------------------------------------

    def _check_part(self, part: int) -> None:
        if not 0 <= part < len(self._sizes):
            raise GraphError(f"vertex out of range: class {part}")

    def _check_ref(self, v: VertexRef) -> None:
        if not (0 <= v.part < len(self._sizes) and 0 <= v.index < self._sizes[v.part]):
            raise GraphError(f"vertex out of range: {v}")

    def vertex_id(self, v: VertexRef) -> int:
        return self._offsets[v.part] + v.index

    def ref_of(self, vid: int) -> VertexRef:
        if not 0 <= vid < self._total:
            raise GraphError(f"vertex out of range: id {vid}")
        lo, hi = 0, len(self._sizes) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._offsets[mid] <= vid:
                lo = mid
            else:
                hi = mid - 1
        return VertexRef(lo, vid - self._offsets[lo])

    def vertices(self) -> Iterator[VertexRef]:
        for part, size in enumerate(self._sizes):
            for index in range(size):
                yield VertexRef(part, index)

    def class_vertices(self, part: int) -> tuple[VertexRef, ...]:
        self._check_part(part)
        return tuple(VertexRef(part, i) for i in range(self._sizes[part]))

    # -- bitmask layer ---------------------------------------------------

    def adjacency_mask(self, vid: int) -> int:
        return self._adj[vid]

    def adjacency_masks(self) -> tuple[int, ...]:
        return self._adj

    def class_mask(self, part: int) -> int:
        self._check_part(part)
        size = self._sizes[part]
        return ((1 << size) - 1) << self._offsets[part]

    def mask_of(self, refs: Iterable[VertexRef]) -> int:
        m = 0
        for v in refs:
            v = _as_ref(v)
            self._check_ref(v)
            m |= 1 << self.vertex_id(v)
        return m

    def refs_of_mask(self, mask: int) -> tuple[VertexRef, ...]:
        out = []
        while mask:
            low = mask & -mask
            mask ^= low
            out.append(self.ref_of(low.bit_length() - 1))
        return tuple(out)

    def neighborhood_mask(self, mask: int) -> int:
        out = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            out |= self._adj[low.bit_length() - 1]
        return out

    # -- queries ----------------------------------------------------------

    def degree(self, v: VertexRef) -> int:
        v = _as_ref(v)
        self._check_ref(v)
        return self._adj[self.vertex_id(v)].bit_count()

    def neighbors(self, v: VertexRef) -> tuple[VertexRef, ...]:
        v = _as_ref(v)
        self._check_ref(v)
        return self.refs_of_mask(self._adj[self.vertex_id(v)])

    def has_edge(self, u: VertexRef, v: VertexRef) -> bool:
        u, v = _as_ref(u), _as_ref(v)
        self._check_ref(u)
        self._check_ref(v)
        return bool(self._adj[self.vertex_id(u)] >> self.vertex_id(v) & 1)

    def class_support(self, refs: Iterable[VertexRef]) -> frozenset[int]:
        """Classes intersected by the given vertex set."""
        out = set()
        for v in refs:
            v = _as_ref(v)
            self._check_ref(v)
            out.add(v.part)
        return frozenset(out)

    def is_independent(self, refs: Iterable[VertexRef]) -> bool:
        """True iff no edge joins two vertices of the set."""
        mask = self.mask_of(refs)
        m = mask
        while m:
            low = m & -m
            m ^= low
            if self._adj[low.bit_length() - 1] & mask:
                return False
        return True

    def dominates(self, s: Iterable[VertexRef], target: Iterable[VertexRef]) -> bool:
        """True iff every vertex of ``target`` outside ``s`` has a neighbor in ``s``."""
        s_mask = self.mask_of(s)
        t_mask = self.mask_of(target)
        return not (t_mask & ~s_mask & ~self.neighborhood_mask(s_mask))

    def dominates_classes(self, s: Iterable[VertexRef], parts: Iterable[int]) -> bool:
        s_mask = self.mask_of(s)
        t_mask = 0
        for c in parts:
            t_mask |= self.class_mask(c)
        return not (t_mask & ~s_mask & ~self.neighborhood_mask(s_mask))

    def edges_within(self, refs: Iterable[VertexRef]) -> tuple[Edge, ...]:
        """Induced edges among the given vertices, in canonical order."""
        mask = self.mask_of(refs)
        out = []
        m = mask
        while m:
            low = m & -m
            m ^= low
            vid = low.bit_length() - 1
            hits = self._adj[vid] & mask
            while hits:
                hlow = hits & -hits
                hits ^= hlow
                wid = hlow.bit_length() - 1
                if wid > vid:
                    out.append((self.ref_of(vid), self.ref_of(wid)))
        return tuple(sorted(out))

    # -- derived graphs ----------------------------------------------------

    def induced_on_classes(self, parts: Iterable[int]) -> "MultipartiteGraph":
        """Subgraph induced by the union of the given classes.

        Classes are renumbered in ascending order of their original index.
        """
        chosen = sorted(set(parts))
        for c in chosen:
            self._check_part(c)
        remap = {c: i for i, c in enumerate(chosen)}
        sizes = [self._sizes[c] for c in chosen]
        edges = [
            (VertexRef(remap[u.part], u.index), VertexRef(remap[v.part], v.index))
            for (u, v) in self._edges
            if u.part in remap and v.part in remap
        ]
        return MultipartiteGraph(sizes, edges)

    def without_edge(self, u: VertexRef, v: VertexRef) -> "MultipartiteGraph":
        u, v = _as_ref(u), _as_ref(v)
        if not self.has_edge(u, v):
            raise GraphError(f"no such edge: {u} {v}")
        if v < u:
            u, v = v, u
        return MultipartiteGraph(self._sizes, (e for e in self._edges if e != (u, v)))

    def with_extra_classes(self, sizes: Iterable[int]) -> "MultipartiteGraph":
        """Append isolated classes of the given sizes."""
        return MultipartiteGraph(self._sizes + tuple(int(s) for s in sizes), self._edges)

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultipartiteGraph):
            return NotImplemented
        return self._sizes == other._sizes and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._sizes, self._edges))

    def __repr__(self) -> str:
        return f"MultipartiteGraph(sizes={self._sizes}, edges={len(self._edges)})"


# -- MPG text format --------------------------------------------------------
#
# line 1: mpg 1
# line 2: parts <r>
# line 3: sizes <n1> ... <nr>
# then zero or more: edge <p1> <i1> <p2> <i2>
# Single spaces, LF endings, trailing newline required.  Canonical output
# sorts edges lexicographically with part1 < part2.


def serialize(g: MultipartiteGraph) -> str:
    lines = ["mpg 1", f"parts {g.parts}"]
    lines.append("sizes" + "".join(f" {s}" for s in g.class_sizes))
    for u, v in g.edges:
        lines.append(f"edge {u.part} {u.index} {v.part} {v.index}")
    return "\n".join(lines) + "\n"


def _ints(tokens: list[str], code: str, what: str) -> list[int]:
    out = []
    for t in tokens:
        if not (t.isdigit() or (t.startswith("-") and t[1:].isdigit())):
            raise MpgFormatError(code, f"{what}: expected integer, got {t!r}")
        out.append(int(t))
    return out


def parse(text: str) -> MultipartiteGraph:
    if not text.endswith("\n"):
        raise MpgFormatError("malformed-header", "trailing newline required")
    lines = text.split("\n")[:-1]
    if len(lines) < 3:
        raise MpgFormatError("malformed-header", "need version, parts, and sizes lines")
    if lines[0] != "mpg 1":
        raise MpgFormatError("malformed-header", f"bad version line {lines[0]!r}")
    head = lines[1].split(" ")
    if len(head) != 2 or head[0] != "parts":
        raise MpgFormatError("malformed-header", f"bad parts line {lines[1]!r}")
    (r,) = _ints(head[1:], "malformed-header", "parts")
    if r < 0:
        raise MpgFormatError("malformed-header", "parts must be nonnegative")
    stoks = lines[2].split(" ")
    if stoks[0] != "sizes" or len(stoks) != r + 1:
        raise MpgFormatError("malformed-header", f"sizes line must carry exactly {r} sizes")
    sizes = _ints(stoks[1:], "malformed-header", "sizes")
    if any(s < 0 for s in sizes):
        raise MpgFormatError("malformed-header", "sizes must be nonnegative")
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for line in lines[3:]:
        toks = line.split(" ")
        if toks[0] != "edge" or len(toks) != 5:
            raise MpgFormatError("malformed-line", f"bad edge line {line!r}")
        p1, i1, p2, i2 = _ints(toks[1:], "malformed-line", "edge")
        for p, i in ((p1, i1), (p2, i2)):
            if not (0 <= p < r and 0 <= i < sizes[p]):
                raise MpgFormatError("vertex-out-of-range", f"vertex {p}:{i}")
        if p1 == p2:
            raise MpgFormatError("intra-class-edge", f"edge {p1} {i1} {p2} {i2}")
        u, v = VertexRef(p1, i1), VertexRef(p2, i2)
        if v < u:
            u, v = v, u
        if (u, v) in seen:
            raise MpgFormatError("duplicate-edge", f"edge {p1} {i1} {p2} {i2}")
        seen.add((u, v))
        edges.append((u, v))
    return MultipartiteGraph(sizes, edges)
