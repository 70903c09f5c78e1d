import pytest

from lbmcf.model import Commodity, Edge, Instance, Network


@pytest.fixture
def diamond() -> Instance:
    """Two 2-hop routes 0->1->3 (caps 3, 5) and 0->2->3 (caps 4, 2), d=10."""
    net = Network(4, (Edge(0, 1, 3.0), Edge(1, 3, 5.0), Edge(0, 2, 4.0), Edge(2, 3, 2.0)))
    return Instance(net, (Commodity(0, 3, 10.0),), 2)


@pytest.fixture
def single_edge() -> Instance:
    net = Network(2, (Edge(0, 1, 10.0),))
    return Instance(net, (Commodity(0, 1, 4.0),), 1)
