"""Network topology: validated undirected graphs and precomputed next-hop routing.

Links are unit cost (hop count); routing tables come from Dijkstra per
source with ties broken toward the smallest next-hop node id so every
run is reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from random import Random


class TopologyError(ValueError):
    pass


class SelfLoop(TopologyError):
    pass


class DuplicateLink(TopologyError):
    pass


class DisconnectedGraph(TopologyError):
    pass


class UnknownNode(KeyError):
    pass


@dataclass(frozen=True)
class Network:
    """Undirected connected graph with per-link bandwidth (packets per step)."""

    nodes: tuple[int, ...]
    links: tuple[tuple[int, int, int], ...]  # (u, v, bandwidth), u < v
    adjacency: dict[int, tuple[int, ...]] = field(hash=False, compare=False)
    bandwidth: dict[tuple[int, int], int] = field(hash=False, compare=False)

    def neighbors(self, node: int) -> tuple[int, ...]:
        try:
            return self.adjacency[node]
        except KeyError:
            raise UnknownNode(node) from None

    def link_bandwidth(self, u: int, v: int) -> int:
        return self.bandwidth[(u, v) if u < v else (v, u)]

    def has_node(self, node: int) -> bool:
        return node in self.adjacency

    def __len__(self) -> int:
        return len(self.nodes)


def build_network(nodes, links) -> Network:
    """Validate nodes/links and assemble a Network.

    links: iterable of (u, v) or (u, v, bandwidth); bandwidth defaults to 1.
    Rejects self-loops, duplicate links, unknown endpoints, bandwidth < 1,
    and disconnected graphs.
    """
    node_list = sorted(set(int(n) for n in nodes))
    if len(node_list) < 2:
        raise TopologyError("need at least 2 nodes")
    node_set = set(node_list)

    seen: set[tuple[int, int]] = set()
    canon: list[tuple[int, int, int]] = []
    for link in links:
        if len(link) == 2:
            u, v = link
            bw = 1
        else:
            u, v, bw = link
        u, v, bw = int(u), int(v), int(bw)
        if u == v:
            raise SelfLoop(f"self-loop at node {u}")
        if u not in node_set or v not in node_set:
            raise UnknownNode(u if u not in node_set else v)
        if bw < 1:
            raise TopologyError(f"bandwidth must be >= 1 on link ({u},{v})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateLink(f"duplicate link ({key[0]},{key[1]})")
        seen.add(key)
        canon.append((key[0], key[1], bw))
    canon.sort()

    adj: dict[int, list[int]] = {n: [] for n in node_list}
    bw_map: dict[tuple[int, int], int] = {}
    for u, v, bw in canon:
        adj[u].append(v)
        adj[v].append(u)
        bw_map[(u, v)] = bw

    net = Network(
        nodes=tuple(node_list),
        links=tuple(canon),
        adjacency={n: tuple(sorted(adj[n])) for n in node_list},
        bandwidth=bw_map,
    )
    unreachable = node_set - set(bfs_distances(net, node_list[0]))
    if unreachable:
        raise DisconnectedGraph(f"unreachable nodes: {sorted(unreachable)}")
    return net


def erdos_renyi(n: int, p: float, rng: Random, bandwidth: int = 1, max_tries: int = 1000) -> Network:
    """Sample G(n, p) repeatedly until connected."""
    for _ in range(max_tries):
        links = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    links.append((u, v, bandwidth))
        try:
            return build_network(range(n), links)
        except DisconnectedGraph:
            continue
        except TopologyError:
            continue
    raise TopologyError(f"no connected G({n},{p}) sample in {max_tries} tries")


def line_network(n: int, bandwidth: int = 1) -> Network:
    return build_network(range(n), [(i, i + 1, bandwidth) for i in range(n - 1)])


def ring_network(n: int, bandwidth: int = 1) -> Network:
    links = [(i, (i + 1) % n, bandwidth) for i in range(n)]
    return build_network(range(n), links)


def star_network(n: int, bandwidth: int = 1) -> Network:
    return build_network(range(n), [(0, i, bandwidth) for i in range(1, n)])


def bfs_distances(net: Network, source: int) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in net.adjacency[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def dijkstra_distances(net: Network, source: int) -> dict[int, int]:
    """Unit-cost Dijkstra from one source."""
    dist: dict[int, int] = {}
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in dist:
            continue
        dist[u] = d
        for v in net.adjacency[u]:
            if v not in dist:
                heapq.heappush(heap, (d + 1, v))
    return dist


def compute_routing(net: Network) -> dict[tuple[int, int], int]:
    """Next-hop table for every ordered (src, dst) pair, src != dst.

    The chosen next hop lies on a minimum-hop path; among equal-length
    options the smallest neighbor id wins.
    """
    dist_from = {n: dijkstra_distances(net, n) for n in net.nodes}
    table: dict[tuple[int, int], int] = {}
    for s in net.nodes:
        for d in net.nodes:
            if s == d:
                continue
            want = dist_from[s][d] - 1
            # adjacency is sorted, so the first qualifying neighbor is the tie-break winner
            for nbr in net.adjacency[s]:
                if dist_from[nbr][d] == want:
                    table[(s, d)] = nbr
                    break
    return table


def diameter(net: Network) -> int:
    return max(max(bfs_distances(net, n).values()) for n in net.nodes)


def betweenness(net: Network) -> dict[int, float]:
    """Brandes betweenness centrality on the unweighted graph."""
    cb = {n: 0.0 for n in net.nodes}
    for s in net.nodes:
        stack: list[int] = []
        pred: dict[int, list[int]] = {n: [] for n in net.nodes}
        sigma = {n: 0.0 for n in net.nodes}
        sigma[s] = 1.0
        dist = {n: -1 for n in net.nodes}
        dist[s] = 0
        queue = [s]
        while queue:
            v = queue.pop(0)
            stack.append(v)
            for w in net.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    pred[w].append(v)
        delta = {n: 0.0 for n in net.nodes}
        while stack:
            w = stack.pop()
            for v in pred[w]:
                delta[v] += sigma[v] / sigma[w] * (1 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return cb


def top_betweenness(net: Network, count: int) -> list[int]:
    """Highest-betweenness nodes, ties broken by smaller id."""
    cb = betweenness(net)
    ranked = sorted(net.nodes, key=lambda n: (-cb[n], n))
    return ranked[:count]
