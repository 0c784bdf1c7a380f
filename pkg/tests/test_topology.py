import random

import pytest

from immunet.topology import (DisconnectedGraph, DuplicateLink, SelfLoop,
                              TopologyError, UnknownNode, betweenness,
                              build_network, compute_routing, diameter,
                              erdos_renyi, line_network, ring_network,
                              star_network, top_betweenness)


def bfs_reachable(adj, start):
    """Independent connectivity oracle."""
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for nbr in adj[node]:
            if nbr not in seen:
                seen.add(nbr)
                frontier.append(nbr)
    return seen


def bellman_ford(nodes, links, source):
    """Independent distance oracle: relax every edge |V|-1 times."""
    inf = float("inf")
    dist = {n: inf for n in nodes}
    dist[source] = 0
    edges = []
    for u, v, _bw in links:
        edges.append((u, v))
        edges.append((v, u))
    for _ in range(len(nodes) - 1):
        changed = False
        for u, v in edges:
            if dist[u] + 1 < dist[v]:
                dist[v] = dist[u] + 1
                changed = True
        if not changed:
            break
    return dist


def random_connected(rng, max_nodes=8):
    n = rng.randint(2, max_nodes)
    while True:
        links = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    links.append((i, j))
        try:
            return build_network(range(n), links)
        except TopologyError:
            continue


class TestBuild:

    def test_line_graph(self):
        net = build_network([0, 1, 2], [(0, 1), (1, 2)])
        assert len(net) == 3
        assert len(net.links) == 2
        assert net.neighbors(1) == (0, 2)

    def test_isolated_node_rejected(self):
        with pytest.raises(DisconnectedGraph):
            build_network([0, 1, 2], [(0, 1)])

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoop):
            build_network([0, 1], [(0, 0), (0, 1)])

    def test_duplicate_link_rejected(self):
        with pytest.raises(DuplicateLink):
            build_network([0, 1], [(0, 1), (1, 0)])

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(UnknownNode):
            build_network([0, 1], [(0, 5)])

    def test_bad_bandwidth_rejected(self):
        with pytest.raises(TopologyError):
            build_network([0, 1], [(0, 1, 0)])

    def test_single_node_rejected(self):
        with pytest.raises(TopologyError):
            build_network([0], [])

    def test_erdos_renyi_connected(self):
        """50-node G(n,p) retried until connected; BFS oracle confirms."""
        net = erdos_renyi(50, 0.08, random.Random(99))
        assert len(net) == 50
        assert bfs_reachable(net.adjacency, 0) == set(net.nodes)

    def test_generators(self):
        assert len(line_network(5).links) == 4
        assert len(ring_network(5).links) == 5
        assert len(star_network(5).links) == 4


class TestRouting:

    def test_line_next_hop(self):
        net = line_network(3)
        table = compute_routing(net)
        assert table[(0, 2)] == 1

    def test_cycle_tie_break(self):
        # 4-cycle: both 1 and 3 reach node 2 in two hops; smaller id wins
        net = ring_network(4)
        table = compute_routing(net)
        assert table[(0, 2)] == 1

    def test_bellman_ford_oracle_200_graphs(self):
        """Following next-hops reaches the target in exactly the oracle distance."""
        rng = random.Random(4242)
        for _ in range(200):
            net = random_connected(rng)
            table = compute_routing(net)
            for s in net.nodes:
                oracle = bellman_ford(net.nodes, net.links, s)
                for d in net.nodes:
                    if s == d:
                        continue
                    hops = 0
                    here = s
                    while here != d:
                        here = table[(here, d)]
                        hops += 1
                        assert hops <= len(net)
                    assert hops == oracle[d]

    def test_next_hop_on_shortest_path(self):
        rng = random.Random(7)
        net = random_connected(rng, max_nodes=8)
        table = compute_routing(net)
        for (s, d), nh in table.items():
            oracle_s = bellman_ford(net.nodes, net.links, s)
            oracle_nh = bellman_ford(net.nodes, net.links, nh)
            assert oracle_nh[d] == oracle_s[d] - 1


class TestGraphStats:

    def test_diameter_line(self):
        assert diameter(line_network(6)) == 5

    def test_star_betweenness(self):
        net = star_network(6)
        cb = betweenness(net)
        assert cb[0] > max(cb[n] for n in net.nodes if n != 0)
        assert top_betweenness(net, 1) == [0]

    def test_top_betweenness_tie_break(self):
        net = ring_network(4)  # symmetric: all nodes tie, smaller ids first
        assert top_betweenness(net, 2) == [0, 1]
