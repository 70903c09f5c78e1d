import numpy as np
import pytest

from lbmcf.errors import ParameterError
from lbmcf.instgen import (
    GRID_CAPACITY,
    GridGenConfig,
    assign_demands_mode1,
    generate_grid_network,
    generate_instance,
    generate_instance_text,
)
from lbmcf.io import parse_instance
from lbmcf.model import Edge, Network, validate_solution
from lbmcf.paths import hop_shortest_path_tree
from lbmcf.model import FlowSolution, PathFlow


def config(**overrides):
    base = dict(a=6, b=2, k=15, congestion=0.6, hop_bound=9, seed=1)
    base.update(overrides)
    return GridGenConfig(**base)


class TestGridNetwork:
    @pytest.mark.parametrize(
        "b,edges,vertices",
        [(2, 276, 72), (4, 588, 144), (6, 900, 216), (8, 1212, 288)],
    )
    def test_reference_sizes(self, b, edges, vertices):
        net = generate_grid_network(config(b=b))
        assert net.edge_count == edges
        assert net.vertex_count == vertices

    def test_capacity_structure(self):
        cfg = config(b=3)
        net = generate_grid_network(cfg)
        a, b = cfg.a, cfg.b
        intra = [e for e in net.edges if e.capacity == GRID_CAPACITY]
        inter = [e for e in net.edges if e.capacity != GRID_CAPACITY]
        assert len(intra) == 4 * a * (a - 1) * b
        assert len(inter) == a * a * (b - 1)
        for e in inter:
            assert 1 <= e.capacity <= 100
            assert e.capacity == int(e.capacity)
            assert e.head // (a * a) == e.tail // (a * a) + 1  # forward only

    def test_inter_grid_is_permutation(self):
        cfg = config(b=2)
        net = generate_grid_network(cfg)
        inter = [e for e in net.edges if e.capacity != GRID_CAPACITY]
        targets = sorted(e.head for e in inter)
        assert targets == list(range(36, 72))

    def test_deterministic_in_seed(self):
        assert generate_grid_network(config()) == generate_grid_network(config())
        other = generate_grid_network(config(seed=2))
        assert other != generate_grid_network(config())

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            config(a=1)
        with pytest.raises(ParameterError):
            config(congestion=0.0)
        with pytest.raises(ParameterError):
            config(congestion=1.5)
        with pytest.raises(ParameterError):
            config(k=0)


class TestDemandsMode1:
    def test_single_pair_scaling(self):
        net = Network(2, (Edge(0, 1, 10.0),))
        coms = assign_demands_mode1(net, 1, 0.6, 1, seed=0)
        assert len(coms) == 1
        assert coms[0].demand == 6.0  # c = 1/10, d = 0.6/0.1

    def test_witness_congestion_equals_target(self):
        cfg = config(b=2, k=12)
        net = generate_grid_network(cfg)
        for lam in (0.6, 1.0):
            coms = assign_demands_mode1(net, 12, lam, 9, seed=3)
            load = np.zeros(net.edge_count)
            for com in coms:
                tree = hop_shortest_path_tree(net, com.origin, 9)
                _, edges = tree.path_to(com.destination)
                for e in edges:
                    load[e] += com.demand
            congestion = load / net.capacities
            assert congestion.max() == pytest.approx(lam, rel=1e-12)

    def test_witness_flow_is_feasible(self):
        cfg = config(b=2, k=10)
        inst = generate_instance(cfg)
        net = inst.network
        flows = []
        for ci, com in enumerate(inst.commodities):
            tree = hop_shortest_path_tree(net, com.origin, inst.hop_bound)
            verts, edges = tree.path_to(com.destination)
            flows.append(PathFlow(ci, verts, edges, com.demand))
        report = validate_solution(inst, FlowSolution.from_path_flows(flows))
        assert report.feasible

    def test_deterministic_commodities(self):
        net = generate_grid_network(config())
        a = assign_demands_mode1(net, 5, 0.6, 9, seed=11)
        b = assign_demands_mode1(net, 5, 0.6, 9, seed=11)
        assert a == b

    def test_distinct_pairs(self):
        net = generate_grid_network(config())
        coms = assign_demands_mode1(net, 25, 1.0, 9, seed=5)
        pairs = {(c.origin, c.destination) for c in coms}
        assert len(pairs) == 25

    def test_unreachable_budget_exhausted(self):
        net = Network(2, (Edge(0, 1, 1.0),))
        with pytest.raises(ParameterError, match="retry budget"):
            assign_demands_mode1(net, 2, 0.5, 1, seed=0, max_attempts_per_pair=5)

    def test_too_many_pairs_requested(self):
        net = Network(2, (Edge(0, 1, 1.0),))
        with pytest.raises(ParameterError, match="distinct pairs"):
            assign_demands_mode1(net, 3, 0.5, 1, seed=0)


class TestInstanceEmission:
    def test_text_parses_back(self):
        text = generate_instance_text(config(k=4))
        inst = parse_instance(text)
        assert inst.commodity_count == 4
        assert inst.network.edge_count == 276
        assert text.splitlines()[0].startswith("# generator: grid")
        assert "seed=1" in text.splitlines()[1]

    def test_full_pipeline_deterministic(self):
        assert generate_instance_text(config()) == generate_instance_text(config())
