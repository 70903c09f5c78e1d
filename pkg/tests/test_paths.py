import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_force_hop_distances, random_instance
from lbmcf.model import Commodity, Edge, Instance, Network
from lbmcf.paths import (
    hop_shortest_path_tree,
    prune_unreachable_pairs,
    truncated_bellman_ford,
)


class TestTruncatedBellmanFord:
    def test_hop_bound_cuts_off_chain(self):
        net = Network(4, (Edge(0, 1, 1.0), Edge(1, 2, 1.0), Edge(2, 3, 1.0)))
        tree = truncated_bellman_ford(net, np.ones(3), 0, 2)
        assert math.isinf(tree.dist[3])
        assert tree.dist[2] == 2.0

    def test_single_edge_length(self):
        net = Network(2, (Edge(0, 1, 5.0),))
        tree = truncated_bellman_ford(net, np.array([0.125]), 0, 1)
        assert tree.dist[1] == 0.125

    def test_detour_beats_direct_only_with_enough_hops(self):
        # 0->1->2 costs 0.3+0.3, direct 0->2 costs 0.7
        net = Network(3, (Edge(0, 1, 1.0), Edge(1, 2, 1.0), Edge(0, 2, 1.0)))
        lengths = np.array([0.3, 0.3, 0.7])
        assert truncated_bellman_ford(net, lengths, 0, 1).dist[2] == 0.7
        assert truncated_bellman_ford(net, lengths, 0, 2).dist[2] == pytest.approx(0.6)

    def test_source_labels(self):
        net = Network(3, (Edge(0, 1, 1.0),))
        tree = truncated_bellman_ford(net, np.ones(1), 0, 2)
        assert tree.dist[0] == 0.0
        assert tree.hops[0] == 0
        assert tree.path_to(0) == ((0,), ())

    def test_recorded_path_realizes_dist(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            inst = random_instance(rng)
            net = inst.network
            lengths = rng.uniform(0.01, 1.0, net.edge_count)
            src = int(rng.integers(net.vertex_count))
            tree = truncated_bellman_ford(net, lengths, src, inst.hop_bound)
            for v in range(net.vertex_count):
                got = tree.path_to(v)
                if got is None:
                    assert math.isinf(tree.dist[v])
                    continue
                verts, edges = got
                assert len(edges) <= inst.hop_bound
                assert len(verts) == len(edges) + 1
                total = sum(lengths[e] for e in edges)
                assert total == pytest.approx(tree.dist[v], rel=1e-12)
                assert len(edges) == tree.hops[v]
                for pos, e in enumerate(edges):
                    assert net.edges[e].tail == verts[pos]
                    assert net.edges[e].head == verts[pos + 1]

    @given(seed=st.integers(min_value=0, max_value=100_000))
    @settings(max_examples=80, deadline=None)
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng, max_n=6, max_m=12, max_hops=4)
        net = inst.network
        lengths = rng.uniform(0.01, 1.0, net.edge_count)
        src = int(rng.integers(net.vertex_count))
        tree = truncated_bellman_ford(net, lengths, src, inst.hop_bound)
        expected = brute_force_hop_distances(net, lengths, src, inst.hop_bound)
        for v in range(net.vertex_count):
            if math.isinf(expected[v]):
                assert math.isinf(tree.dist[v])
            else:
                assert tree.dist[v] == pytest.approx(expected[v], rel=1e-12)

    @given(seed=st.integers(min_value=0, max_value=100_000))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_hop_limit(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng, max_n=6, max_m=12)
        net = inst.network
        lengths = rng.uniform(0.01, 1.0, net.edge_count)
        src = int(rng.integers(net.vertex_count))
        prev = truncated_bellman_ford(net, lengths, src, 1).dist
        for limit in range(2, 6):
            cur = truncated_bellman_ford(net, lengths, src, limit).dist
            assert np.all(cur <= prev + 1e-15)
            prev = cur

    def test_infinite_length_excludes_edge(self):
        net = Network(2, (Edge(0, 1, 1.0),))
        tree = truncated_bellman_ford(net, np.array([np.inf]), 0, 3)
        assert math.isinf(tree.dist[1])


class TestHopShortestPathTree:
    def test_star(self):
        net = Network(4, (Edge(0, 1, 1.0), Edge(0, 2, 1.0), Edge(0, 3, 1.0)))
        tree = hop_shortest_path_tree(net, 0, 1)
        assert tree.dist[1] == tree.dist[2] == tree.dist[3] == 1.0
        assert list(tree.hops[1:]) == [1, 1, 1]

    def test_chain_truncated(self):
        edges = tuple(Edge(i, i + 1, 1.0) for i in range(5))
        net = Network(6, edges)
        tree = hop_shortest_path_tree(net, 0, 3)
        assert tree.reachable(3)
        assert not tree.reachable(4)

    def test_bfs_minimality(self):
        # a 2-hop and a 4-hop route to vertex 5
        net = Network(
            6,
            (
                Edge(0, 1, 1.0), Edge(1, 5, 1.0),
                Edge(0, 2, 1.0), Edge(2, 3, 1.0), Edge(3, 4, 1.0), Edge(4, 5, 1.0),
            ),
        )
        tree = hop_shortest_path_tree(net, 0, 9)
        assert tree.hops[5] == 2

    @given(seed=st.integers(min_value=0, max_value=100_000))
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_bellman_ford_under_unit_lengths(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        net = inst.network
        src = int(rng.integers(net.vertex_count))
        bfs = hop_shortest_path_tree(net, src, inst.hop_bound)
        bf = truncated_bellman_ford(net, np.ones(net.edge_count), src, inst.hop_bound)
        assert np.array_equal(bfs.dist, bf.dist)
        assert np.array_equal(bfs.hops, bf.hops)


class TestPruneUnreachablePairs:
    def test_disconnected_commodity_removed(self):
        net = Network(4, (Edge(0, 1, 1.0), Edge(2, 3, 1.0)))
        inst = Instance(net, (Commodity(0, 3), Commodity(0, 1)), 3)
        pruned, removed = prune_unreachable_pairs(inst)
        assert removed == [0]
        assert pruned.commodity_count == 1
        assert pruned.commodities[0].destination == 1

    def test_hop_bound_matters(self):
        net = Network(4, (Edge(0, 1, 1.0), Edge(1, 2, 1.0), Edge(2, 3, 1.0)))
        three_hop = Instance(net, (Commodity(0, 3),), 3)
        two_hop = Instance(net, (Commodity(0, 3),), 2)
        assert prune_unreachable_pairs(three_hop)[1] == []
        assert prune_unreachable_pairs(two_hop)[1] == [0]

    def test_identity_when_all_reachable(self, diamond):
        pruned, removed = prune_unreachable_pairs(diamond)
        assert removed == []
        assert pruned is diamond
