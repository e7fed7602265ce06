"""Graph core: addressing, queries, induced subgraphs, and the MPG format."""

from __future__ import annotations

from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indtrans.errors import GraphError, MpgFormatError
from indtrans.graph import MultipartiteGraph, VertexRef, parse, serialize

from generators import complete_bipartite, kdd, random_graph
from oracles import naive_dominates


@st.composite
def small_graphs(draw):
    r = draw(st.integers(min_value=1, max_value=5))
    sizes = draw(
        st.lists(st.integers(min_value=0, max_value=3), min_size=r, max_size=r).filter(
            lambda s: 0 < sum(s) <= 12
        )
    )
    pairs = [
        (VertexRef(a, i), VertexRef(b, j))
        for a in range(r)
        for b in range(a + 1, r)
        for i in range(sizes[a])
        for j in range(sizes[b])
    ]
    if pairs:
        edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs)))
    else:
        edges = set()
    return MultipartiteGraph(sizes, edges)


class TestDegree:
    def test_complete_bipartite(self):
        g = kdd(2)
        assert all(g.degree(v) == 2 for v in g.vertices())

    def test_edgeless(self):
        g = MultipartiteGraph([2, 3])
        assert all(g.degree(v) == 0 for v in g.vertices())

    def test_extremal_construction_degrees(self):
        from indtrans.constructions import Kdd, RowsPlusSpine, build

        g, _ = build(RowsPlusSpine(Kdd(4), 3))
        assert all(g.degree(v) <= 4 for v in g.vertices())

    def test_out_of_range(self):
        g = kdd(2)
        with pytest.raises(GraphError, match="out of range"):
            g.degree(VertexRef(0, 2))
        with pytest.raises(GraphError, match="out of range"):
            g.degree(VertexRef(2, 0))


class TestClassSupport:
    def test_empty(self):
        assert kdd(2).class_support([]) == frozenset()

    def test_single_class(self):
        assert kdd(2).class_support([(0, 0), (0, 1)]) == frozenset({0})

    def test_two_classes(self):
        g = MultipartiteGraph([1, 1, 1, 3])
        assert g.class_support([(0, 0), (3, 2)]) == frozenset({0, 3})


class TestInducedOnClasses:
    def test_identity(self):
        g = kdd(3)
        assert serialize(g.induced_on_classes(range(2))) == serialize(g)

    def test_empty_selection(self):
        h = kdd(3).induced_on_classes([])
        assert h.parts == 0 and h.n_vertices == 0

    def test_disjoint_union_restriction(self):
        from generators import disjoint_blocks

        g = disjoint_blocks([3, 3])
        assert g.induced_on_classes([0, 1]) == kdd(3)

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_induced_degree_never_grows(self, g):
        for mask in range(2 ** g.parts):
            chosen = [c for c in range(g.parts) if (mask >> c) & 1]
            assert g.induced_on_classes(chosen).max_degree <= g.max_degree


class TestIndependentAndDominates:
    def test_singleton_independent(self):
        g = kdd(2)
        assert g.is_independent([(0, 0)])

    def test_edge_dependent(self):
        g = kdd(2)
        assert not g.is_independent([(0, 0), (1, 0)])

    def test_target_subset_is_dominated(self):
        g = kdd(2)
        assert g.dominates([(0, 0)], [(0, 0)])

    def test_empty_set_dominates_nothing(self):
        g = kdd(2)
        assert not g.dominates([], [(0, 0)])

    def test_matching_edge_dominates_both_classes(self):
        g = kdd(4)
        assert g.dominates_classes([(0, 0), (1, 0)], [0, 1])

    @given(small_graphs(), st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_dominates_matches_oracle_and_is_monotone(self, g, rnd):
        verts = list(g.vertices())
        s = [v for v in verts if rnd.random() < 0.4]
        target = [v for v in verts if rnd.random() < 0.5]
        assert g.dominates(s, target) == naive_dominates(g, s, target)
        if g.dominates(s, target):
            bigger = s + [v for v in verts if rnd.random() < 0.3]
            assert g.dominates(bigger, target)


class TestMpgFormat:
    def test_smallest_bipartite(self):
        g = MultipartiteGraph([1, 1], [((0, 0), (1, 0))])
        assert serialize(g) == "mpg 1\nparts 2\nsizes 1 1\nedge 0 0 1 0\n"

    def test_single_class(self):
        g = parse("mpg 1\nparts 1\nsizes 3\n")
        assert g.parts == 1 and g.n_vertices == 3 and not g.edges

    def test_intra_class_edge_rejected(self):
        with pytest.raises(MpgFormatError) as err:
            parse("mpg 1\nparts 2\nsizes 2 2\nedge 0 0 0 1\n")
        assert err.value.code == "intra-class-edge"

    def test_duplicate_edge_rejected(self):
        text = "mpg 1\nparts 2\nsizes 1 1\nedge 0 0 1 0\nedge 1 0 0 0\n"
        with pytest.raises(MpgFormatError) as err:
            parse(text)
        assert err.value.code == "duplicate-edge"

    def test_out_of_range_rejected(self):
        with pytest.raises(MpgFormatError) as err:
            parse("mpg 1\nparts 2\nsizes 1 1\nedge 0 0 1 5\n")
        assert err.value.code == "vertex-out-of-range"

    def test_malformed_header(self):
        for text in ("mpg 2\nparts 1\nsizes 1\n", "parts 1\nsizes 1\n", "mpg 1\nparts 1\nsizes 1"):
            with pytest.raises(MpgFormatError) as err:
                parse(text)
            assert err.value.code == "malformed-header"

    def test_malformed_edge_line(self):
        with pytest.raises(MpgFormatError) as err:
            parse("mpg 1\nparts 2\nsizes 1 1\nedge 0 0 1\n")
        assert err.value.code == "malformed-line"

    def test_zero_parts(self):
        g = parse("mpg 1\nparts 0\nsizes\n")
        assert g.parts == 0
        assert serialize(g) == "mpg 1\nparts 0\nsizes\n"

    @given(small_graphs())
    @settings(max_examples=120, deadline=None)
    def test_round_trip(self, g):
        text = serialize(g)
        again = parse(text)
        assert again == g
        assert serialize(again) == text

    def test_unsorted_edges_are_canonicalized(self):
        text = "mpg 1\nparts 3\nsizes 1 1 1\nedge 1 0 2 0\nedge 0 0 1 0\n"
        g = parse(text)
        assert serialize(g) == "mpg 1\nparts 3\nsizes 1 1 1\nedge 0 0 1 0\nedge 1 0 2 0\n"


class TestConstructionValidation:
    def test_intra_class_edge(self):
        with pytest.raises(GraphError, match="intra-class"):
            MultipartiteGraph([2, 2], [((0, 0), (0, 1))])

    def test_duplicate_edge(self):
        with pytest.raises(GraphError, match="duplicate"):
            MultipartiteGraph([1, 1], [((0, 0), (1, 0)), ((1, 0), (0, 0))])

    def test_empty_classes_allowed(self):
        g = MultipartiteGraph([2, 0, 1])
        assert g.class_sizes == (2, 0, 1)
        assert g.min_class_size == 0

    def test_without_edge(self):
        g = complete_bipartite(2, 2)
        h = g.without_edge((0, 0), (1, 0))
        assert len(h.edges) == 3 and not h.has_edge((0, 0), (1, 0))

    def test_random_generator_obeys_cap(self):
        rng = Random(7)
        g = random_graph(rng, [3, 3, 3], 2, density=1.0)
        assert g.max_degree <= 2
