"""Connectivity graphs, shortest paths, and the merge-based Steiner-tree approximation.

The Steiner heuristic keeps a forest of subgraphs (initially one per terminal) and
repeatedly joins the two closest ones along a shortest path, then takes a spanning
tree and prunes non-terminal leaves. All choices are deterministic:

* pair selection: smallest (distance, normalized endpoint pair);
* path between the chosen endpoints: parent walk in a BFS tree grown from the
  smaller endpoint with neighbors expanded in descending index order;
* spanning tree: Kruskal over the accumulated edges in ascending lexicographic order.

The resulting tree is within 2(1 - 1/l) of the optimum, l being the leaf count of
an optimal tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import deque
from typing import Iterable, Sequence


class NoPathError(ValueError):
    """Two vertices that must be connected are not reachable from each other."""


class DisconnectedTerminalsError(NoPathError):
    """A terminal set cannot be spanned inside the allowed vertex subset."""


class UnknownPresetError(ValueError):
    pass


@dataclass(frozen=True)
class ConnectivityGraph:
    """Simple undirected unit-weight graph on vertices 1..num_vertices."""

    num_vertices: int
    edges: frozenset[tuple[int, int]]  # normalized (u, v) with u < v

    @staticmethod
    def from_edges(num_vertices: int, edges: Iterable[tuple[int, int]]) -> "ConnectivityGraph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise ValueError(f"edge ({u},{v}) outside vertex range 1..{num_vertices}")
            norm.add((min(u, v), max(u, v)))
        return ConnectivityGraph(num_vertices, frozenset(norm))

    @property
    def vertices(self) -> range:
        return range(1, self.num_vertices + 1)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency()[v]

    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        cache = self.__dict__.get("_adj")
        if cache is None:
            adj: dict[int, list[int]] = {v: [] for v in self.vertices}
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            cache = {v: tuple(sorted(ns)) for v, ns in adj.items()}
            object.__setattr__(self, "_adj", cache)
        return cache

    def is_connected(self, active: frozenset[int] | None = None) -> bool:
        verts = set(self.vertices) if active is None else set(active)
        if not verts:
            return True
        seen = {min(verts)}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for w in self.neighbors(u):
                if w in verts and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen == verts


def parse_graph(text: str) -> ConnectivityGraph:
    """Parse the graph file format: ``vertices <n>`` then ``edge <u> <v>`` lines."""
    num = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if num is None:
            if tokens[0] != "vertices" or len(tokens) != 2:
                raise ValueError(f"line {line_no}: expected header 'vertices <n>'")
            num = int(tokens[1])
            continue
        if tokens[0] != "edge" or len(tokens) != 3:
            raise ValueError(f"line {line_no}: expected 'edge <u> <v>'")
        edges.append((int(tokens[1]), int(tokens[2])))
    if num is None:
        raise ValueError("missing 'vertices <n>' header")
    return ConnectivityGraph.from_edges(num, edges)


def write_graph(g: ConnectivityGraph) -> str:
    lines = [f"vertices {g.num_vertices}"]
    lines += [f"edge {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def grid_graph(rows: int, cols: int) -> ConnectivityGraph:
    """Square-grid coupling graph, vertices numbered row-major starting at 1."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return ConnectivityGraph.from_edges(rows * cols, edges)


def _appendix_2x3() -> ConnectivityGraph:
    return ConnectivityGraph.from_edges(
        6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (2, 5)]
    )


def _rigetti_16q_aspen() -> ConnectivityGraph:
    # Two octagonal rings joined by a pair of bridges.
    ring1 = [(i, i + 1) for i in range(1, 8)] + [(8, 1)]
    ring2 = [(i, i + 1) for i in range(9, 16)] + [(16, 9)]
    return ConnectivityGraph.from_edges(16, ring1 + ring2 + [(1, 16), (8, 9)])


def _ibm_qx5() -> ConnectivityGraph:
    # ibmqx5 ladder, direction of the physical CNOTs dropped.
    edges0 = [
        (1, 0), (1, 2), (2, 3), (3, 4), (3, 14), (5, 4), (6, 5), (6, 7), (6, 11),
        (7, 10), (8, 7), (9, 8), (9, 10), (11, 10), (12, 5), (12, 11), (12, 13),
        (13, 4), (13, 14), (15, 0), (15, 2), (15, 14),
    ]
    return ConnectivityGraph.from_edges(16, [(u + 1, v + 1) for u, v in edges0])


def _ibm_q20_tokyo() -> ConnectivityGraph:
    rows = [
        (0, 1), (1, 2), (2, 3), (3, 4), (5, 6), (6, 7), (7, 8), (8, 9),
        (10, 11), (11, 12), (12, 13), (13, 14), (15, 16), (16, 17), (17, 18), (18, 19),
    ]
    cols = [
        (0, 5), (5, 10), (10, 15), (1, 6), (6, 11), (11, 16), (2, 7), (7, 12),
        (12, 17), (3, 8), (8, 13), (13, 18), (4, 9), (9, 14), (14, 19),
    ]
    crossings = [
        (1, 7), (2, 6), (3, 9), (4, 8), (5, 11), (6, 10),
        (8, 12), (7, 13), (11, 17), (12, 16), (13, 19), (14, 18),
    ]
    edges0 = rows + cols + crossings
    return ConnectivityGraph.from_edges(20, [(u + 1, v + 1) for u, v in edges0])


PRESET_NAMES = (
    "9q-square",
    "16q-square",
    "rigetti-16q-aspen",
    "ibm-qx5",
    "ibm-q20-tokyo",
    "appendix-2x3",
)


def preset_graph(name: str) -> ConnectivityGraph:
    """Return a named coupling graph (see :data:`PRESET_NAMES`)."""
    if name == "9q-square":
        return grid_graph(3, 3)
    if name == "16q-square":
        return grid_graph(4, 4)
    if name == "rigetti-16q-aspen":
        return _rigetti_16q_aspen()
    if name == "ibm-qx5":
        return _ibm_qx5()
    if name == "ibm-q20-tokyo":
        return _ibm_q20_tokyo()
    if name == "appendix-2x3":
        return _appendix_2x3()
    raise UnknownPresetError(f"unknown preset {name!r}; valid: {', '.join(PRESET_NAMES)}")


def _bfs_dist(g: ConnectivityGraph, sources: Sequence[int], active: frozenset[int]) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w in active and w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path(
    g: ConnectivityGraph, u: int, v: int, active: frozenset[int] | None = None
) -> list[int]:
    """Minimal-hop path from ``u`` to ``v`` using only ``active`` vertices.

    Deterministic: the walk from ``u`` greedily takes the smallest-index neighbor
    that still lies on a shortest path, which yields the lexicographically
    smallest shortest path.
    """
    if active is None:
        active = frozenset(g.vertices)
    if u not in active or v not in active:
        raise NoPathError(f"endpoint outside the active vertex set: {u} or {v}")
    if u == v:
        return [u]
    dist_v = _bfs_dist(g, [v], active)
    if u not in dist_v:
        raise NoPathError(f"no path from {u} to {v} in the active subgraph")
    path = [u]
    cur = u
    while cur != v:
        cur = min(w for w in g.neighbors(cur) if w in active and dist_v.get(w, -1) == dist_v[cur] - 1)
        path.append(cur)
    return path


def _merge_path(
    g: ConnectivityGraph, u: int, v: int, active: frozenset[int]
) -> list[int]:
    # Path convention used only inside the Steiner merge: parent walk in a BFS
    # tree grown from min(u, v) expanding neighbors in descending index order.
    a, b = (u, v) if u < v else (v, u)
    parent: dict[int, int | None] = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        if x == b:
            break
        for w in sorted(g.neighbors(x), reverse=True):
            if w in active and w not in parent:
                parent[w] = x
                queue.append(w)
    path = [b]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()  # now a -> b
    return path if path[0] == u else path[::-1]


@dataclass(frozen=True)
class SteinerTree:
    """A rooted tree over graph edges spanning a terminal set.

    ``parent`` maps every non-root node to its parent; ``children`` lists each
    node's children in ascending order; ``layer`` is the depth from the root.
    Every leaf is a terminal.
    """

    root: int
    terminals: frozenset[int]
    parent: dict[int, int] = field(hash=False)
    children: dict[int, tuple[int, ...]] = field(hash=False)
    layer: dict[int, int] = field(hash=False)

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self.layer)

    @property
    def edge_count(self) -> int:
        return len(self.parent)

    def tree_edges(self) -> list[tuple[int, int]]:
        """(parent, child) pairs ordered by (child layer, child index)."""
        return sorted(
            ((p, c) for c, p in self.parent.items()),
            key=lambda pc: (self.layer[pc[1]], pc[1]),
        )

    def leaves(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.layer if not self.children[v]))


def _root_tree(edges: set[tuple[int, int]], root: int, terminals: frozenset[int]) -> SteinerTree:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    adj.setdefault(root, [])
    parent: dict[int, int] = {}
    layer = {root: 0}
    children: dict[int, list[int]] = {v: [] for v in adj}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for w in sorted(adj[x]):
            if w not in layer:
                layer[w] = layer[x] + 1
                parent[w] = x
                children[x].append(w)
                queue.append(w)
    return SteinerTree(
        root=root,
        terminals=terminals,
        parent=parent,
        children={v: tuple(sorted(cs)) for v, cs in children.items()},
        layer=layer,
    )


def steiner_tree(
    g: ConnectivityGraph,
    terminals: Iterable[int],
    root: int,
    active: frozenset[int] | None = None,
) -> SteinerTree:
    """Approximate minimum Steiner tree over ``terminals``, rooted at ``root``.

    ``root`` must itself be a terminal. Only vertices in ``active`` may be used.
    Raises :class:`DisconnectedTerminalsError` if the terminals do not all lie in
    one component of the induced subgraph.
    """
    if active is None:
        active = frozenset(g.vertices)
    term_set = frozenset(terminals)
    if root not in term_set:
        raise ValueError(f"root {root} must be a terminal")
    if not term_set <= active:
        raise ValueError("terminals must lie inside the active vertex set")
    if len(term_set) == 1:
        return _root_tree(set(), root, term_set)

    all_dist = {u: _bfs_dist(g, [u], active) for u in active}

    # Forest of subgraphs, each a (vertex list in insertion order, edge set).
    forest: list[tuple[list[int], set[tuple[int, int]]]] = [([t], set()) for t in sorted(term_set)]
    while len(forest) > 1:
        best = None  # (dist, normalized endpoint pair, i, j)
        for i in range(len(forest)):
            set_i = set(forest[i][0])
            for j in range(i + 1, len(forest)):
                set_j = set(forest[j][0])
                shared = set_i & set_j
                if shared:
                    key = (0, (min(shared), min(shared)), i, j)
                else:
                    cand = [
                        (all_dist[u][v], (min(u, v), max(u, v)))
                        for u in forest[i][0]
                        for v in forest[j][0]
                        if v in all_dist[u]
                    ]
                    if not cand:
                        continue
                    key = min(cand) + (i, j)
                if best is None or key[:2] < best[:2]:
                    best = key
        if best is None:
            raise DisconnectedTerminalsError(
                f"terminals {sorted(term_set)} are not connected within the active subgraph"
            )
        dist, (u, v), i, j = best
        path = [] if dist == 0 else _merge_path(g, u, v, active)
        new_edges = forest[i][1] | forest[j][1]
        for a, b in zip(path, path[1:]):
            new_edges.add((min(a, b), max(a, b)))
        new_verts = list(dict.fromkeys(forest[i][0] + forest[j][0] + path))
        forest = [f for k, f in enumerate(forest) if k not in (i, j)]
        forest.append((new_verts, new_edges))

    _, edges = forest[0]
    edges = _kruskal(edges)
    edges = _prune_nonterminal_leaves(edges, term_set)
    return _root_tree(edges, root, term_set)


def _kruskal(edges: set[tuple[int, int]]) -> set[tuple[int, int]]:
    # All weights are 1, so the spanning tree is built in lexicographic edge order.
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = set()
    for a, b in sorted(edges):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            kept.add((a, b))
    return kept


def _prune_nonterminal_leaves(
    edges: set[tuple[int, int]], terminals: frozenset[int]
) -> set[tuple[int, int]]:
    edges = set(edges)
    while True:
        degree: dict[int, int] = {}
        for a, b in edges:
            degree[a] = degree.get(a, 0) + 1
            degree[b] = degree.get(b, 0) + 1
        drop = [v for v, d in degree.items() if d == 1 and v not in terminals]
        if not drop:
            return edges
        dead = set(drop)
        edges = {e for e in edges if e[0] not in dead and e[1] not in dead}
