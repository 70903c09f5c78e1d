import io

import numpy as np
import pytest

from helpers import random_instance
from lbmcf.errors import ParameterError
from lbmcf.lpmodel import (
    build_time_expanded,
    expected_model_sizes,
    export_edge_flow_lp,
    export_time_expanded_lp,
    lp_text,
    parse_lp_text,
    solve_lp_model_exact,
    write_lp_file,
)
from lbmcf.model import Commodity, Edge, Instance, Network
from lbmcf.oracle import exact_optimum


class TestBuildTimeExpanded:
    def test_counts_four_vertices_five_edges_three_layers(self):
        net = Network(4, tuple(Edge(i % 4, (i + 1) % 4, 1.0) for i in range(5)))
        texp = build_time_expanded(net, 3)
        assert texp.vertex_count == 12
        assert texp.edge_count == (3 - 1) * (5 + 4)

    def test_two_layer_minimal(self):
        net = Network(2, (Edge(0, 1, 1.0),))
        texp = build_time_expanded(net, 2)
        assert texp.vertex_count == 4
        assert texp.edge_count == 3  # 1 movement + 2 holdover
        movement = [e for e in texp.edges if e.original_edge >= 0]
        assert len(movement) == 1

    def test_movement_tags_round_trip(self):
        rng = np.random.default_rng(4)
        inst = random_instance(rng, max_n=5, max_m=8)
        net = inst.network
        texp = build_time_expanded(net, 4)
        n = net.vertex_count
        for ee in texp.edges:
            if ee.original_edge < 0:
                assert ee.head - ee.tail == n  # holdover stays on the vertex
                continue
            orig = net.edges[ee.original_edge]
            assert ee.tail % n == orig.tail
            assert ee.head % n == orig.head
            assert ee.head // n == ee.tail // n + 1

    def test_layer_count_validation(self):
        net = Network(2, (Edge(0, 1, 1.0),))
        with pytest.raises(ParameterError):
            build_time_expanded(net, 0)


class TestEdgeFlowLp:
    def test_single_edge_demand_limited(self, single_edge):
        model = export_edge_flow_lp(single_edge)
        names = [row.name for row in model.rows]
        assert names == ["dem_0", "cap_0"]
        assert solve_lp_model_exact(model).value == 4

    def test_row_count_formula(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            inst = random_instance(rng)
            model = export_edge_flow_lp(inst)
            vars_expected, rows_expected = expected_model_sizes(inst, "edge")
            assert model.variable_count == vars_expected
            assert model.row_count == rows_expected

    def test_zero_commodities_well_formed(self):
        inst = Instance(Network(2, (Edge(0, 1, 1.0),)), (), 1)
        model = export_edge_flow_lp(inst)
        assert model.objective == ()
        assert model.row_count == 1  # the capacity row
        assert solve_lp_model_exact(model).value == 0

    def test_unbounded_demand_omits_row(self):
        inst = Instance(Network(2, (Edge(0, 1, 1.0),)), (Commodity(0, 1),), 1)
        model = export_edge_flow_lp(inst)
        assert [row.name for row in model.rows] == ["cap_0"]


class TestTimeExpandedLp:
    def test_single_edge_l2(self):
        net = Network(2, (Edge(0, 1, 10.0),))
        inst = Instance(net, (Commodity(0, 1, 4.0),), 2)
        assert solve_lp_model_exact(export_time_expanded_lp(inst)).value == 4

    def test_route_longer_than_bound_gives_zero(self):
        net = Network(4, (Edge(0, 1, 5.0), Edge(1, 2, 5.0), Edge(2, 3, 5.0)))
        inst = Instance(net, (Commodity(0, 3, 5.0),), 2)
        assert solve_lp_model_exact(export_time_expanded_lp(inst)).value == 0

    def test_diamond_matches_path_optimum(self, diamond):
        assert solve_lp_model_exact(export_time_expanded_lp(diamond)).value == 5

    def test_hop1_special_case(self, single_edge):
        model = export_time_expanded_lp(single_edge)
        assert model.variable_count == 1
        assert solve_lp_model_exact(model).value == 4

    def test_hop1_no_direct_edge(self):
        net = Network(3, (Edge(0, 1, 1.0), Edge(1, 2, 1.0)))
        inst = Instance(net, (Commodity(0, 2, 1.0),), 1)
        model = export_time_expanded_lp(inst)
        assert model.variable_count == 0
        assert solve_lp_model_exact(model).value == 0

    def test_size_formulas(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            inst = random_instance(rng)
            if inst.hop_bound < 2:
                continue
            model = export_time_expanded_lp(inst)
            vars_expected, rows_expected = expected_model_sizes(inst, "texp")
            assert model.variable_count == vars_expected
            assert model.row_count == rows_expected

    def test_matches_oracle_on_randoms(self):
        rng = np.random.default_rng(8)
        checked = 0
        for _ in range(15):
            inst = random_instance(rng, max_n=5, max_m=8, max_k=2, max_hops=3)
            lp_value = solve_lp_model_exact(export_time_expanded_lp(inst)).value
            assert lp_value == exact_optimum(inst).optimum
            checked += 1
        assert checked == 15

    def test_edge_flow_dominates(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            inst = random_instance(rng, max_n=5, max_m=8, max_k=2, max_hops=3)
            texp = solve_lp_model_exact(export_time_expanded_lp(inst)).value
            edge = solve_lp_model_exact(export_edge_flow_lp(inst)).value
            assert edge >= texp


class TestLpFileFormat:
    def test_round_trip_diamond_models(self, diamond):
        for model in (export_edge_flow_lp(diamond), export_time_expanded_lp(diamond)):
            parsed = parse_lp_text(lp_text(model))
            assert parsed.canonical() == model.canonical()
            assert parsed.variable_count == model.variable_count
            assert parsed.row_count == model.row_count

    def test_round_trip_randoms(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            inst = random_instance(rng, max_n=5, max_m=6, max_k=2, max_hops=3)
            model = export_edge_flow_lp(inst)
            assert parse_lp_text(lp_text(model)).canonical() == model.canonical()

    def test_single_variable_document(self):
        inst = Instance(Network(2, (Edge(0, 1, 2.0),)), (Commodity(0, 1, 1.0),), 1)
        model = export_time_expanded_lp(inst)
        text = lp_text(model)
        assert text.count("x_0_0") >= 2  # objective + at least one row
        assert "Maximize" in text and "Subject To" in text and text.rstrip().endswith("End")

    def test_write_lp_file(self, tmp_path, diamond):
        out = tmp_path / "model.lp"
        text = write_lp_file(export_edge_flow_lp(diamond), out)
        assert out.read_text() == text

    def test_write_to_stream(self, diamond):
        buf = io.StringIO()
        write_lp_file(export_edge_flow_lp(diamond), buf)
        assert buf.getvalue().startswith("\\")
