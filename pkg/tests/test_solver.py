"""Solver: exact optimum, witnesses, avoidance searches, brute certificates."""

from __future__ import annotations

from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indtrans.errors import BudgetExhausted, PreconditionError
from indtrans.graph import MultipartiteGraph, VertexRef
from indtrans.solver import (
    Budget,
    Transversal,
    avoidance_it,
    enumerate_full_its,
    has_it_of_size,
    max_partial_it,
    no_it_certificate_brute,
)

from generators import complete_bipartite, disjoint_blocks, kdd, random_graph
from oracles import naive_max_partial_it
from test_graph import small_graphs


class TestMaxPartialIT:
    @pytest.mark.parametrize("delta", range(1, 7))
    def test_complete_bipartite_blocks_all_pairs(self, delta):
        res = max_partial_it(kdd(delta))
        assert res.size == 1 and res.exhaustive

    def test_edgeless_takes_every_class(self):
        g = MultipartiteGraph([2, 1, 3, 1])
        res = max_partial_it(g)
        assert res.size == 4
        assert res.witness.picks == (
            VertexRef(0, 0),
            VertexRef(1, 0),
            VertexRef(2, 0),
            VertexRef(3, 0),
        )

    def test_extremal_six_class_instance(self):
        from indtrans.constructions import Kdd, RowsPlusSpine, build

        g, _ = build(RowsPlusSpine(Kdd(4), 3))
        res = max_partial_it(g)
        assert res.size == 4
        assert g.is_independent(res.witness.vertices)

    def test_empty_graph(self):
        assert max_partial_it(MultipartiteGraph([])).size == 0

    @given(small_graphs())
    @settings(max_examples=100, deadline=None)
    def test_oracle_agreement(self, g):
        size, witness = naive_max_partial_it(g)
        res = max_partial_it(g)
        assert res.size == size
        assert res.witness.picks == witness

    def test_oracle_agreement_seeded_sweep(self):
        rng = Random(99)
        for _ in range(150):
            r = rng.choice([2, 3, 4, 5])
            sizes = [rng.randint(0, 3) for _ in range(r)]
            if not 0 < sum(sizes) <= 12:
                continue
            g = random_graph(rng, sizes, rng.randint(1, 3), rng.random())
            size, witness = naive_max_partial_it(g)
            res = max_partial_it(g)
            assert (res.size, res.witness.picks) == (size, witness)

    def test_determinism(self):
        rng = Random(5)
        g = random_graph(rng, [3, 3, 3, 3], 3, 0.6)
        a = max_partial_it(g)
        b = max_partial_it(g)
        assert a.size == b.size and a.witness == b.witness

    def test_budget_exhaustion_is_an_error(self):
        g = disjoint_blocks([3, 3, 3])
        with pytest.raises(BudgetExhausted):
            max_partial_it(g, budget=Budget(5))


class TestHasITofSize:
    def test_zero_is_always_present(self):
        assert has_it_of_size(kdd(2), 0) == Transversal()

    def test_complete_bipartite_has_no_pair(self):
        assert has_it_of_size(kdd(2), 2) is None

    def test_extremal_instance_has_no_five(self):
        from indtrans.constructions import Kdd, RowsPlusSpine, build

        g, _ = build(RowsPlusSpine(Kdd(4), 3))
        assert has_it_of_size(g, 5) is None
        assert has_it_of_size(g, 4) is not None

    def test_witness_is_sound(self):
        g = disjoint_blocks([2, 2])
        w = has_it_of_size(g, 2)
        assert w is not None and w.size == 2 and g.is_independent(w.vertices)


class TestAvoidance:
    def test_empty_class_set(self):
        got = avoidance_it(kdd(2), [])
        assert got == Transversal()

    def test_fully_forbidden_class(self):
        assert avoidance_it(kdd(2), [0], [(0, 0), (0, 1)]) is None

    def _blocked_pair_instance(self, rng: Random):
        """Two classes holding a complete bipartite block minus a perfect
        matching (degree 3, size 4), plus two free classes with sparse random
        edges.  A single block edge dominates both block classes."""
        sizes = [4, 4, 4, 4]
        edges = [
            (VertexRef(0, i), VertexRef(1, j)) for i in range(4) for j in range(4) if i != j
        ]
        free = random_graph(rng, [4, 4], 3, 0.5)
        edges.extend(
            (VertexRef(u.part + 2, u.index), VertexRef(v.part + 2, v.index)) for u, v in free.edges
        )
        return MultipartiteGraph(sizes, edges)

    def test_avoidance_guarantee_under_threshold(self):
        # With classes above delta*(2 - (2d+3)/r), a dominating pair leaves an
        # avoiding transversal of the untouched classes for any extra vertex.
        # The matched (non-adjacent) pair dominates both block classes.
        rng = Random(13)
        for trial in range(12):
            g = self._blocked_pair_instance(rng)
            members = [VertexRef(0, 0), VertexRef(1, 0)]
            assert g.dominates_classes(members, [0, 1])
            for x in g.vertices():
                forbidden = set()
                for y in members + [x]:
                    forbidden.update(g.neighbors(y))
                got = avoidance_it(g, [2, 3], forbidden)
                assert got is not None, f"trial {trial}: no avoiding transversal for {x}"
                assert got.support == frozenset({2, 3})
                assert not forbidden & got.vertices

    def test_enumerate_full_its_lex_order(self):
        g = MultipartiteGraph([2, 2])
        its = enumerate_full_its(g)
        assert [t.picks for t in its] == [
            (VertexRef(0, 0), VertexRef(1, 0)),
            (VertexRef(0, 0), VertexRef(1, 1)),
            (VertexRef(0, 1), VertexRef(1, 0)),
            (VertexRef(0, 1), VertexRef(1, 1)),
        ]
        assert len(enumerate_full_its(g, limit=2)) == 2


class TestBruteCertificates:
    def test_smallest_bipartite(self):
        g = MultipartiteGraph([1, 1], [((0, 0), (1, 0))])
        parts, edges = no_it_certificate_brute(g)
        assert parts == (0, 1)
        assert edges == ((VertexRef(0, 0), VertexRef(1, 0)),)

    def test_complete_bipartite_single_edge(self):
        parts, edges = no_it_certificate_brute(kdd(2))
        assert parts == (0, 1) and len(edges) == 1

    def test_two_blocks_pick_one(self):
        parts, edges = no_it_certificate_brute(disjoint_blocks([2, 2]))
        assert parts == (0, 1) and len(edges) == 1

    def test_full_transversal_is_an_error(self):
        with pytest.raises(PreconditionError):
            no_it_certificate_brute(MultipartiteGraph([1, 1]))


class TestThresholdSoundness:
    @pytest.mark.parametrize(
        "r,d,min_size",
        [(4, 1, 4), (5, 1, 4), (6, 1, 5), (6, 2, 4)],
    )
    def test_threshold_random_instances_have_transversal(self, r, d, min_size):
        # Above max{2*3*(1-(4d+5)/(4r)), 2*3*(1-1/q)} every instance with
        # degree cap 3 admits an (r-d)-transversal; spot check 25 per shape.
        rng = Random(1000 * r + d)
        for _ in range(25):
            g = random_graph(rng, [min_size] * r, 3, rng.choice([0.4, 0.7, 1.0]))
            assert max_partial_it(g).size >= r - d
