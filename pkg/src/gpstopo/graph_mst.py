"""Weighted undirected graphs and minimum spanning trees.

``prim_mst`` follows the textbook heap-based formulation: every vertex
carries a tentative distance D[v] (0 for the start, infinity otherwise) and
a parent edge, and the vertex with the smallest D is removed from the queue
and attached to the tree.  Decrease-key is done lazily: a cheaper distance
pushes a fresh heap entry and stale entries are skipped on removal.  Heap
entries are ``(distance, node_id)`` so equal distances pop the lower id.

``kruskal_mst`` is kept as an independent cross-check.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ConnectivityError, EmptyGraphError
from .geodesy import UtmCoordinate


@dataclass(frozen=True)
class Node:
    id: int
    name: str
    position: UtmCoordinate | None = None


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    weight_m: float

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"self-loop on node {self.a}")
        if not (math.isfinite(self.weight_m) and self.weight_m > 0):
            raise ValueError(f"edge weight must be finite and positive, got {self.weight_m!r}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)

    def opposite(self, node: int) -> int:
        return self.b if node == self.a else self.a


@dataclass(frozen=True)
class CollapsedEdge:
    """Record of a parallel edge folded into an existing one."""

    names: tuple[str, str]
    kept_m: float
    dropped_m: float


class WeightedGraph:
    """Undirected graph of named nodes with positive edge weights.

    Parallel edges are collapsed to the lighter weight; each collapse is
    recorded in ``collapsed``.
    """

    def __init__(self) -> None:
        self.nodes: list[Node] = []
        self._index: dict[str, int] = {}
        self._edges: dict[tuple[int, int], Edge] = {}
        self._adjacency: list[list[Edge]] = []
        self.collapsed: list[CollapsedEdge] = []

    @classmethod
    def from_edges(
        cls,
        names: Iterable[str],
        edges: Iterable[tuple[str, str, float]],
        positions: Mapping[str, UtmCoordinate] | None = None,
    ) -> "WeightedGraph":
        graph = cls()
        positions = positions or {}
        for name in names:
            graph.add_node(name, positions.get(name))
        for a, b, w in edges:
            graph.add_edge(a, b, w)
        return graph

    def add_node(self, name: str, position: UtmCoordinate | None = None) -> int:
        if name in self._index:
            raise ValueError(f"duplicate node name {name!r}")
        node = Node(len(self.nodes), name, position)
        self.nodes.append(node)
        self._index[name] = node.id
        self._adjacency.append([])
        return node.id

    def node_id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    def add_edge(self, a: str | int, b: str | int, weight_m: float) -> Edge:
        ia = a if isinstance(a, int) else self.node_id(a)
        ib = b if isinstance(b, int) else self.node_id(b)
        for i in (ia, ib):
            if not 0 <= i < len(self.nodes):
                raise ValueError(f"node id {i} out of range")
        edge = Edge(min(ia, ib), max(ia, ib), weight_m)
        existing = self._edges.get(edge.key)
        if existing is not None:
            kept, dropped = sorted((existing, edge), key=lambda e: e.weight_m)
            self.collapsed.append(
                CollapsedEdge(self.pair_names(edge), kept.weight_m, dropped.weight_m)
            )
            if kept is existing:
                return existing
            for i in edge.key:
                self._adjacency[i].remove(existing)
        self._edges[edge.key] = edge
        self._adjacency[ia].append(edge)
        self._adjacency[ib].append(edge)
        return edge

    @property
    def edges(self) -> list[Edge]:
        return sorted(self._edges.values(), key=lambda e: e.key)

    def incident(self, node: int) -> list[Edge]:
        return list(self._adjacency[node])

    def pair_names(self, edge: Edge) -> tuple[str, str]:
        return (self.nodes[edge.a].name, self.nodes[edge.b].name)

    def components(self) -> list[list[int]]:
        seen = [False] * len(self.nodes)
        out = []
        for start in range(len(self.nodes)):
            if seen[start]:
                continue
            seen[start] = True
            comp, queue = [], deque([start])
            while queue:
                u = queue.popleft()
                comp.append(u)
                for e in self._adjacency[u]:
                    v = e.opposite(u)
                    if not seen[v]:
                        seen[v] = True
                        queue.append(v)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class SpanningTree:
    root: int
    parent_edges: Mapping[int, Edge]
    total_weight_m: float
    node_names: tuple[str, ...] = field(default=())

    @property
    def edges(self) -> list[Edge]:
        return [self.parent_edges[v] for v in sorted(self.parent_edges)]

    def named_edges(self) -> list[tuple[str, str, float]]:
        names = self.node_names
        return [(names[e.a], names[e.b], e.weight_m) for e in self.edges]

    def edge_keys(self) -> set[frozenset[str]]:
        return {frozenset((a, b)) for a, b, _ in self.named_edges()}


def _check_graph(graph: WeightedGraph) -> None:
    if len(graph) == 0:
        raise EmptyGraphError("graph has no nodes")
    comps = graph.components()
    if len(comps) > 1:
        names = [[graph.nodes[i].name for i in c] for c in comps]
        raise ConnectivityError(names)


def prim_mst(graph: WeightedGraph, start: int = 0) -> SpanningTree:
    _check_graph(graph)
    n = len(graph)
    if not (isinstance(start, int) and 0 <= start < n):
        raise ValueError(f"start node id {start!r} is not in 0..{n - 1}")

    distance = [math.inf] * n
    parent: list[Edge | None] = [None] * n
    in_queue = [True] * n
    distance[start] = 0.0
    queue = [(0.0, start)]

    while queue:
        d, u = heapq.heappop(queue)
        if not in_queue[u] or d > distance[u]:
            continue
        in_queue[u] = False
        for e in graph.incident(u):
            z = e.opposite(u)
            if in_queue[z] and e.weight_m < distance[z]:
                distance[z] = e.weight_m
                parent[z] = e
                heapq.heappush(queue, (e.weight_m, z))

    chosen = {v: e for v, e in enumerate(parent) if e is not None}
    total = math.fsum(e.weight_m for e in chosen.values())
    names = tuple(node.name for node in graph.nodes)
    return SpanningTree(start, chosen, total, names)


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return True


def orient_tree(edges: Sequence[Edge], n: int, root: int = 0) -> dict[int, Edge]:
    """Map every non-root node to the edge leading towards ``root``."""
    adjacency: list[list[Edge]] = [[] for _ in range(n)]
    for e in edges:
        adjacency[e.a].append(e)
        adjacency[e.b].append(e)
    parent: dict[int, Edge] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for e in adjacency[u]:
            v = e.opposite(u)
            if v not in seen:
                seen.add(v)
                parent[v] = e
                queue.append(v)
    return parent


def kruskal_mst(graph: WeightedGraph) -> SpanningTree:
    _check_graph(graph)
    n = len(graph)
    sets = _DisjointSet(n)
    chosen = []
    for e in sorted(graph.edges, key=lambda e: (e.weight_m, e.key)):
        if sets.union(e.a, e.b):
            chosen.append(e)
            if len(chosen) == n - 1:
                break
    total = math.fsum(e.weight_m for e in chosen)
    names = tuple(node.name for node in graph.nodes)
    return SpanningTree(0, orient_tree(chosen, n), total, names)


def total_length(tree: SpanningTree) -> float:
    return math.fsum(e.weight_m for e in tree.parent_edges.values())


@dataclass(frozen=True)
class TopologyDiff:
    only_in_a: list[tuple[str, str, float]]
    only_in_b: list[tuple[str, str, float]]
    shared: int
    weight_delta_m: float

    @property
    def changed(self) -> bool:
        return bool(self.only_in_a or self.only_in_b)


def compare_topologies(a: SpanningTree, b: SpanningTree) -> TopologyDiff:
    """Edge-set difference between two trees over the same node names.

    Edges are matched by their unordered pair of names.
    """
    names_a, names_b = set(a.node_names), set(b.node_names)
    if names_a != names_b:
        unmatched = sorted(names_a ^ names_b)
        raise ValueError(f"trees span different nodes; unmatched: {', '.join(unmatched)}")

    def by_pair(tree: SpanningTree) -> dict[frozenset[str], tuple[str, str, float]]:
        return {frozenset((x, y)): (x, y, w) for x, y, w in tree.named_edges()}

    ea, eb = by_pair(a), by_pair(b)
    only_a = sorted(ea[k] for k in ea.keys() - eb.keys())
    only_b = sorted(eb[k] for k in eb.keys() - ea.keys())
    return TopologyDiff(
        only_in_a=only_a,
        only_in_b=only_b,
        shared=len(ea.keys() & eb.keys()),
        weight_delta_m=a.total_weight_m - b.total_weight_m,
    )
