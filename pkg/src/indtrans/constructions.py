"""Composable recipes for extremal multipartite constructions, with certification.

A recipe is a small expression tree.  ``claimed`` computes the (parts, defect,
class size, max degree) claim a recipe makes; ``build`` materializes the graph
with a deterministic layout; ``certify`` re-derives every claimed property
from the built graph, using the exact solver for the transversal bound.

Layout conventions shared by the row operators: row i of an m-row operator
occupies classes [i*r0, (i+1)*r0) where r0 is the child's class count, and any
added layer vertices are appended after the child's vertices within each
class, floor-many per class.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import ClaimRefuted, ConstructionError
from .graph import Edge, MultipartiteGraph, VertexRef, parse
from .solver import Budget, max_partial_it


@dataclass(frozen=True)
class Claim:
    """One feasible point of the blocking function: r classes of size >= class_size,
    max degree <= max_degree, and no transversal larger than parts - defect."""

    parts: int
    defect: int
    class_size: int
    max_degree: int
    trusted: bool = False

    def __post_init__(self):
        if self.parts < 1:
            raise ConstructionError("claim needs at least one class")
        if self.defect < 1:
            raise ConstructionError("claimed defect must stay >= 1")
        if self.class_size < 0 or self.max_degree < 0:
            raise ConstructionError("claimed sizes must be nonnegative")

    @property
    def max_transversal(self) -> int:
        return self.parts - self.defect


@dataclass(frozen=True)
class Kdd:
    """Complete bipartite block with classes of size delta; blocks any 2-transversal."""

    delta: int


@dataclass(frozen=True)
class Blowup:
    """Complete m-partite graph with s vertices per class."""

    m: int
    s: int


@dataclass(frozen=True)
class BipartiteBlocks:
    """floor(r/2) disjoint complete bipartite blocks plus an isolated class when r is odd."""

    parts: int
    delta: int


@dataclass(frozen=True)
class FromFile:
    """Externally supplied graph with a stated, initially trusted claim."""

    path: str
    parts: int
    defect: int
    class_size: int
    max_degree: int


@dataclass(frozen=True)
class AddKr:
    """Append a complete blowup layer to every class; trades one defect for size."""

    child: "Recipe"


@dataclass(frozen=True)
class DisjointCopies:
    """m disjoint copies of the child, rows laid out consecutively."""

    child: "Recipe"
    m: int


@dataclass(frozen=True)
class RowsPlusSpine:
    """m child rows plus a spine layer joining different rows completely.

    Spine vertices of a row are independent of everything in their own row and
    complete to the spine vertices of every other row.
    """

    child: "Recipe"
    m: int


@dataclass(frozen=True)
class ThreeLayer:
    """m = j*l child rows plus a grouped medium layer and a global small layer.

    Medium vertices join medium vertices of the other l-1 rows in their group
    of l consecutive rows; small vertices join small vertices of all other
    rows; the three layers are otherwise disjoint.
    """

    child: "Recipe"
    m: int
    j: int
    l: int


@dataclass(frozen=True)
class PadClasses:
    """Append k isolated classes of the claimed class size."""

    child: "Recipe"
    k: int


@dataclass(frozen=True)
class EvenQFamily:
    """Tight even-q family at r = q(d+i) + k.

    Claims class size floor(2*delta*(1-1/q)) + floor((i-1)*delta/((d+1)*q))
    with defect d+1.  Only the q = 2 member has a built-in base; larger even q
    needs a file-backed base recipe.
    """

    q: int
    i: int
    d: int
    k: int
    delta: int


Recipe = Union[
    Kdd,
    Blowup,
    BipartiteBlocks,
    FromFile,
    AddKr,
    DisjointCopies,
    RowsPlusSpine,
    ThreeLayer,
    PadClasses,
    EvenQFamily,
]


def _check_even_family(node: EvenQFamily) -> None:
    if node.d < 0:
        raise ConstructionError("even-q family needs d >= 0")
    if node.delta < 1:
        raise ConstructionError("even-q family needs delta >= 1")
    if node.q < 2 or node.q % 2 != 0:
        raise ConstructionError("even-q family requires even q >= 2")
    if not 1 <= node.i <= node.d + 2:
        raise ConstructionError("even-q family requires 1 <= i <= d+2")
    if not 0 <= node.k < node.d + node.i:
        raise ConstructionError("even-q family requires 0 <= k < d+i")
    if node.i > 1 and (node.d + node.i) % (node.i - 1) != 0:
        raise ConstructionError("even-q family requires i = 1 or i-1 dividing d+i")


def claimed(recipe: Recipe) -> Claim:
    """The claim a recipe makes, validating every operator hypothesis."""
    if isinstance(recipe, Kdd):
        if recipe.delta < 1:
            raise ConstructionError("complete bipartite block needs delta >= 1")
        return Claim(2, 1, recipe.delta, recipe.delta)
    if isinstance(recipe, Blowup):
        if recipe.m < 2 or recipe.s < 1:
            raise ConstructionError("blowup needs m >= 2 classes of s >= 1 vertices")
        return Claim(recipe.m, recipe.m - 1, recipe.s, (recipe.m - 1) * recipe.s)
    if isinstance(recipe, BipartiteBlocks):
        if recipe.parts < 2 or recipe.delta < 1:
            raise ConstructionError("bipartite blocks need r >= 2 and delta >= 1")
        return Claim(recipe.parts, recipe.parts // 2, recipe.delta, recipe.delta)
    if isinstance(recipe, FromFile):
        return Claim(recipe.parts, recipe.defect, recipe.class_size, recipe.max_degree, trusted=True)
    if isinstance(recipe, AddKr):
        c = claimed(recipe.child)
        if c.parts < 2:
            raise ConstructionError("blowup layer needs at least 2 classes")
        if c.defect < 2:
            raise ConstructionError("claimed defect must stay >= 1 after the blowup layer")
        s = c.max_degree // (c.parts - 1)
        return Claim(c.parts, c.defect - 1, c.class_size + s, c.max_degree, trusted=c.trusted)
    if isinstance(recipe, DisjointCopies):
        c = claimed(recipe.child)
        if recipe.m < 1:
            raise ConstructionError("disjoint copies need m >= 1")
        return Claim(recipe.m * c.parts, recipe.m * c.defect, c.class_size, c.max_degree, trusted=c.trusted)
    if isinstance(recipe, RowsPlusSpine):
        c = claimed(recipe.child)
        if recipe.m < 2:
            raise ConstructionError("spine operator needs m >= 2 rows")
        s = c.max_degree // ((recipe.m - 1) * c.parts)
        return Claim(
            recipe.m * c.parts,
            (recipe.m - 1) * c.defect,
            c.class_size + s,
            c.max_degree,
            trusted=c.trusted,
        )
    if isinstance(recipe, ThreeLayer):
        c = claimed(recipe.child)
        if recipe.m != recipe.j * recipe.l:
            raise ConstructionError("three-layer operator requires m = j*l")
        if recipe.l < 2:
            raise ConstructionError("three-layer operator needs group size l >= 2")
        if recipe.m - recipe.j - 1 < 1:
            raise ConstructionError("claimed defect multiplier m-j-1 must stay >= 1")
        s_med = c.max_degree // ((recipe.l - 1) * c.parts)
        s_small = c.max_degree // ((recipe.m - 1) * c.parts)
        return Claim(
            recipe.m * c.parts,
            (recipe.m - recipe.j - 1) * c.defect,
            c.class_size + s_med + s_small,
            c.max_degree,
            trusted=c.trusted,
        )
    if isinstance(recipe, PadClasses):
        c = claimed(recipe.child)
        if recipe.k < 0:
            raise ConstructionError("padding needs k >= 0")
        return Claim(c.parts + recipe.k, c.defect, c.class_size, c.max_degree, trusted=c.trusted)
    if isinstance(recipe, EvenQFamily):
        _check_even_family(recipe)
        value = (2 * recipe.delta * (recipe.q - 1)) // recipe.q + (
            (recipe.i - 1) * recipe.delta
        ) // ((recipe.d + 1) * recipe.q)
        return Claim(recipe.q * (recipe.d + recipe.i) + recipe.k, recipe.d + 1, value, recipe.delta)
    raise ConstructionError(f"unknown recipe node {recipe!r}")


def lower_bound_value(recipe: Recipe) -> int:
    """The class size the recipe certifiably realizes; exact integer."""
    return claimed(recipe).class_size


def _even_family_desugar(node: EvenQFamily) -> Recipe:
    if node.q != 2:
        raise ConstructionError(
            "no built-in tight base for even q >= 4; supply a file-backed base recipe"
        )
    base = Kdd(node.delta)
    if node.i == 1:
        inner: Recipe = DisjointCopies(base, node.d + 1)
    else:
        l = (node.d + node.i) // (node.i - 1)
        inner = DisjointCopies(RowsPlusSpine(base, l), node.i - 1)
    return PadClasses(inner, node.k)


def build(recipe: Recipe) -> tuple[MultipartiteGraph, Claim]:
    """Materialize a recipe with its deterministic row-major layout."""
    claim = claimed(recipe)
    if isinstance(recipe, Kdd):
        d = recipe.delta
        g = MultipartiteGraph(
            [d, d], [(VertexRef(0, i), VertexRef(1, j)) for i in range(d) for j in range(d)]
        )
        return g, claim
    if isinstance(recipe, Blowup):
        edges = [
            (VertexRef(a, i), VertexRef(b, j))
            for a in range(recipe.m)
            for b in range(a + 1, recipe.m)
            for i in range(recipe.s)
            for j in range(recipe.s)
        ]
        return MultipartiteGraph([recipe.s] * recipe.m, edges), claim
    if isinstance(recipe, BipartiteBlocks):
        r, d = recipe.parts, recipe.delta
        edges = []
        for b in range(r // 2):
            edges.extend(
                (VertexRef(2 * b, i), VertexRef(2 * b + 1, j)) for i in range(d) for j in range(d)
            )
        return MultipartiteGraph([d] * r, edges), claim
    if isinstance(recipe, FromFile):
        text = Path(recipe.path).read_text(encoding="utf-8")
        return parse(text), claim
    if isinstance(recipe, AddKr):
        child_g, child_c = build(recipe.child)
        s = child_c.max_degree // (child_g.parts - 1) if child_g.parts > 1 else 0
        base = list(child_g.class_sizes)
        sizes = [n + s for n in base]
        edges: list[Edge] = list(child_g.edges)
        for a in range(child_g.parts):
            for b in range(a + 1, child_g.parts):
                edges.extend(
                    (VertexRef(a, base[a] + i), VertexRef(b, base[b] + j))
                    for i in range(s)
                    for j in range(s)
                )
        return MultipartiteGraph(sizes, edges), claim
    if isinstance(recipe, DisjointCopies):
        child_g, _ = build(recipe.child)
        r0 = child_g.parts
        sizes = list(child_g.class_sizes) * recipe.m
        edges = []
        for row in range(recipe.m):
            off = row * r0
            edges.extend(
                (VertexRef(off + u.part, u.index), VertexRef(off + v.part, v.index))
                for u, v in child_g.edges
            )
        return MultipartiteGraph(sizes, edges), claim
    if isinstance(recipe, RowsPlusSpine):
        child_g, child_c = build(recipe.child)
        r0, m = child_g.parts, recipe.m
        s = child_c.max_degree // ((m - 1) * r0)
        base = list(child_g.class_sizes)
        sizes = [base[c] + s for _ in range(m) for c in range(r0)]
        edges = []
        spine: list[list[VertexRef]] = []
        for row in range(m):
            off = row * r0
            edges.extend(
                (VertexRef(off + u.part, u.index), VertexRef(off + v.part, v.index))
                for u, v in child_g.edges
            )
            spine.append(
                [VertexRef(off + c, base[c] + t) for c in range(r0) for t in range(s)]
            )
        for a in range(m):
            for b in range(a + 1, m):
                edges.extend((u, v) for u in spine[a] for v in spine[b])
        return MultipartiteGraph(sizes, edges), claim
    if isinstance(recipe, ThreeLayer):
        child_g, child_c = build(recipe.child)
        r0, m, j, l = child_g.parts, recipe.m, recipe.j, recipe.l
        s_med = child_c.max_degree // ((l - 1) * r0)
        s_small = child_c.max_degree // ((m - 1) * r0)
        base = list(child_g.class_sizes)
        sizes = [base[c] + s_med + s_small for _ in range(m) for c in range(r0)]
        edges = []
        medium: list[list[VertexRef]] = []
        small: list[list[VertexRef]] = []
        for row in range(m):
            off = row * r0
            edges.extend(
                (VertexRef(off + u.part, u.index), VertexRef(off + v.part, v.index))
                for u, v in child_g.edges
            )
            medium.append(
                [VertexRef(off + c, base[c] + t) for c in range(r0) for t in range(s_med)]
            )
            small.append(
                [
                    VertexRef(off + c, base[c] + s_med + t)
                    for c in range(r0)
                    for t in range(s_small)
                ]
            )
        for group in range(j):
            rows = range(group * l, (group + 1) * l)
            for a in rows:
                for b in rows:
                    if a < b:
                        edges.extend((u, v) for u in medium[a] for v in medium[b])
        for a in range(m):
            for b in range(a + 1, m):
                edges.extend((u, v) for u in small[a] for v in small[b])
        return MultipartiteGraph(sizes, edges), claim
    if isinstance(recipe, PadClasses):
        child_g, child_c = build(recipe.child)
        return child_g.with_extra_classes([child_c.class_size] * recipe.k), claim
    if isinstance(recipe, EvenQFamily):
        g, inner_claim = build(_even_family_desugar(recipe))
        if (inner_claim.parts, inner_claim.defect, inner_claim.class_size) != (
            claim.parts,
            claim.defect,
            claim.class_size,
        ):
            raise ConstructionError(
                f"even-q family desugaring mismatch: {inner_claim} vs {claim}"
            )
        return g, claim
    raise ConstructionError(f"unknown recipe node {recipe!r}")


@dataclass(frozen=True)
class CertifiedClaim:
    claim: Claim
    measured_max_it: int
    certified: bool
    trusted_inputs: bool


def verify_claim(g: MultipartiteGraph, claim: Claim, budget=None) -> int:
    """Check a built graph against a claim; returns the measured maximum transversal.

    Raises :class:`ClaimRefuted` carrying the offending witness on any failure.
    """
    budget = Budget.coerce(budget)
    if g.parts != claim.parts:
        raise ClaimRefuted(f"class count is {g.parts}, claimed {claim.parts}")
    for c in range(g.parts):
        if g.class_size(c) < claim.class_size:
            raise ClaimRefuted(
                f"class {c} has {g.class_size(c)} vertices, claimed at least {claim.class_size}",
                witness=c,
            )
    if g.max_degree > claim.max_degree:
        offender = next(v for v in g.vertices() if g.degree(v) == g.max_degree)
        raise ClaimRefuted(
            f"max degree {g.max_degree} exceeds claimed {claim.max_degree}", witness=offender
        )
    res = max_partial_it(g, budget)
    if res.size > claim.max_transversal:
        raise ClaimRefuted(
            f"found a transversal of size {res.size}, claimed at most {claim.max_transversal}",
            witness=res.witness,
        )
    return res.size


def certify(recipe: Recipe, budget=None) -> CertifiedClaim:
    """Build a recipe and re-derive every claimed property from the graph."""
    g, claim = build(recipe)
    measured = verify_claim(g, claim, budget)
    return CertifiedClaim(
        claim=claim, measured_max_it=measured, certified=True, trusted_inputs=claim.trusted
    )


# -- recipe text format -------------------------------------------------------
#
# Header line `recipe 1`, then one node per line: `<id> <op> <args...>` with
# ids counting up from 0 and child references given as earlier ids.  The last
# node is the root.  `file` takes the claim first and the path as the line
# tail.  Inline text may use `;` instead of newlines.

_OPS = {
    "kdd": (Kdd, 1, ()),
    "blowup": (Blowup, 2, ()),
    "blocks": (BipartiteBlocks, 2, ()),
    "addkr": (AddKr, 0, ("child",)),
    "copies": (DisjointCopies, 1, ("child",)),
    "spine": (RowsPlusSpine, 1, ("child",)),
    "threelayer": (ThreeLayer, 3, ("child",)),
    "pad": (PadClasses, 1, ("child",)),
    "evenq": (EvenQFamily, 5, ()),
}


def parse_recipe(text: str) -> Recipe:
    lines = [ln.strip() for chunk in text.split("\n") for ln in chunk.split(";")]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "recipe 1":
        raise ConstructionError("recipe text must start with 'recipe 1'")
    nodes: list[Recipe] = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) < 2:
            raise ConstructionError(f"bad recipe line {ln!r}")
        try:
            ident = int(toks[0])
        except ValueError as exc:
            raise ConstructionError(f"bad node id in {ln!r}") from exc
        if ident != len(nodes):
            raise ConstructionError(f"node ids must count up from 0; got {ident}")
        op = toks[1]
        if op == "file":
            if len(toks) < 7:
                raise ConstructionError(f"file node needs r D n delta path; got {ln!r}")
            r, defect, n, delta = (int(t) for t in toks[2:6])
            path = " ".join(toks[6:])
            nodes.append(FromFile(path, r, defect, n, delta))
            continue
        if op not in _OPS:
            raise ConstructionError(f"unknown recipe operator {op!r}")
        cls, n_ints, flags = _OPS[op]
        args = toks[2:]
        expected = n_ints + (1 if "child" in flags else 0)
        if len(args) != expected:
            raise ConstructionError(f"operator {op} takes {expected} arguments; got {len(args)}")
        try:
            ints = [int(a) for a in args]
        except ValueError as exc:
            raise ConstructionError(f"operator arguments must be integers in {ln!r}") from exc
        if "child" in flags:
            ref = ints[0]
            if not 0 <= ref < len(nodes):
                raise ConstructionError(f"child reference {ref} out of range in {ln!r}")
            nodes.append(cls(nodes[ref], *ints[1:]))
        else:
            nodes.append(cls(*ints))
    if not nodes:
        raise ConstructionError("recipe has no nodes")
    return nodes[-1]


def serialize_recipe(recipe: Recipe) -> str:
    lines = ["recipe 1"]
    ids: dict[int, int] = {}

    def emit(node: Recipe) -> int:
        key = id(node)
        if key in ids:
            return ids[key]
        if isinstance(node, FromFile):
            body = f"file {node.parts} {node.defect} {node.class_size} {node.max_degree} {node.path}"
        elif isinstance(node, Kdd):
            body = f"kdd {node.delta}"
        elif isinstance(node, Blowup):
            body = f"blowup {node.m} {node.s}"
        elif isinstance(node, BipartiteBlocks):
            body = f"blocks {node.parts} {node.delta}"
        elif isinstance(node, AddKr):
            body = f"addkr {emit(node.child)}"
        elif isinstance(node, DisjointCopies):
            body = f"copies {emit(node.child)} {node.m}"
        elif isinstance(node, RowsPlusSpine):
            body = f"spine {emit(node.child)} {node.m}"
        elif isinstance(node, ThreeLayer):
            body = f"threelayer {emit(node.child)} {node.m} {node.j} {node.l}"
        elif isinstance(node, PadClasses):
            body = f"pad {emit(node.child)} {node.k}"
        elif isinstance(node, EvenQFamily):
            body = f"evenq {node.q} {node.i} {node.d} {node.k} {node.delta}"
        else:
            raise ConstructionError(f"unknown recipe node {node!r}")
        ident = len(ids)
        ids[key] = ident
        lines.append(f"{ident} {body}")
        return ident

    emit(recipe)
    return "\n".join(lines) + "\n"
