"""
Small multigraphs: blocks, block shapes, cycle matroids and a brute-force
K4/e minor test.

Edge i of a MultiGraph is element i of its cycle matroid.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations

import networkx as nx

from clutterforge.config import Budget, resolve
from clutterforge.errors import BadIndex, BudgetExceeded, TooLarge
from clutterforge.matroid import CircuitMatroid

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class MultiGraph:
    vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise BadIndex(f"edge ({u}, {v}) leaves the {self.vertices} vertices")

    @classmethod
    def from_edges(cls, edges: Iterable[Edge]) -> MultiGraph:
        edge_list = tuple((int(u), int(v)) for u, v in edges)
        top = max((max(e) for e in edge_list), default=-1)
        return cls(top + 1, edge_list)

    def subgraph(self, edges: Iterable[int]) -> MultiGraph:
        return MultiGraph(self.vertices, tuple(self.edges[i] for i in sorted(edges)))

    def degree(self) -> Counter[int]:
        deg: Counter[int] = Counter()
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def to_networkx(self) -> nx.MultiGraph:
        H = nx.MultiGraph()
        H.add_nodes_from(range(self.vertices))
        for i, (u, v) in enumerate(self.edges):
            H.add_edge(u, v, key=i)
        return H

    def __str__(self) -> str:
        return "\n".join(f"{u} {v}" for u, v in self.edges)


def builtin(name: str) -> MultiGraph:
    if name == "K4":
        return MultiGraph.from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    if name == "K4e":
        return MultiGraph.from_edges([(0, 1), (0, 2), (0, 2), (1, 2), (1, 2)])
    if name.startswith("A") and name[1:].isdigit():
        return MultiGraph.from_edges([(0, 1)] * int(name[1:]))
    raise ValueError(f"unknown graph {name!r}")


def _is_connected(G: MultiGraph, edges: Iterable[int] | None = None) -> bool:
    chosen = range(len(G.edges)) if edges is None else edges
    H = nx.Graph()
    for i in chosen:
        u, v = G.edges[i]
        H.add_edge(u, v)
    return H.number_of_nodes() > 0 and nx.is_connected(H)


def blocks(G: MultiGraph) -> list[frozenset[int]]:
    """
    Edge sets of the blocks. A loop is a block of its own; parallel edges go
    with the biconnected component holding both endpoints.
    """
    simple = nx.Graph()
    for u, v in G.edges:
        if u != v:
            simple.add_edge(u, v)
    home: dict[frozenset[int], int] = {}
    for index, comp in enumerate(nx.biconnected_component_edges(simple)):
        for u, v in comp:
            home[frozenset((u, v))] = index

    grouped: dict[int, set[int]] = {}
    loops = []
    for i, (u, v) in enumerate(G.edges):
        if u == v:
            loops.append(frozenset({i}))
        else:
            grouped.setdefault(home[frozenset((u, v))], set()).add(i)
    out = [frozenset(g) for g in grouped.values()] + loops
    return sorted(out, key=min)


def is_subdivision_of_At(G: MultiGraph) -> int | None:
    """
    t when G is t >= 3 internally disjoint paths between two vertices, else None.
    Cycles are not reported here.
    """
    if any(u == v for u, v in G.edges) or not _is_connected(G):
        return None
    deg = G.degree()
    branch = [x for x, d in deg.items() if d != 2]
    if len(branch) != 2 or deg[branch[0]] != deg[branch[1]] or deg[branch[0]] < 3:
        return None
    u, v = branch
    incident: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(G.edges):
        incident.setdefault(a, []).append(i)
        incident.setdefault(b, []).append(i)
    for start in incident[u]:
        here, edge = u, start
        while True:
            a, b = G.edges[edge]
            nxt = b if a == here else a
            if nxt in (u, v):
                break
            edge = next(e for e in incident[nxt] if e != edge)
            here = nxt
        if nxt != v:
            return None
    return deg[u]


def block_kind(G: MultiGraph, block: Iterable[int]) -> str | tuple[str, int]:
    sub = G.subgraph(block)
    if len(sub.edges) == 1 and sub.edges[0][0] != sub.edges[0][1]:
        return "bridge"
    if all(d == 2 for d in sub.degree().values()):
        return "circuit"
    t = is_subdivision_of_At(sub)
    if t is not None:
        return ("subdivision", t)
    return "other"


def is_block_structured(G: MultiGraph) -> bool:
    return all(block_kind(G, b) != "other" for b in blocks(G))


def cycle_matroid(G: MultiGraph, budget: Budget | None = None) -> CircuitMatroid:
    m = len(G.edges)
    cap = resolve(budget).max_matroid_ground
    if m > cap:
        raise TooLarge("cycle matroid", m, cap)
    circuits = []
    for mask in range(1, 1 << m):
        chosen = [i for i in range(m) if mask >> i & 1]
        deg: Counter[int] = Counter()
        for i in chosen:
            u, v = G.edges[i]
            deg[u] += 1
            deg[v] += 1
        if all(d == 2 for d in deg.values()) and _is_connected(G, chosen):
            circuits.append(chosen)
    return CircuitMatroid.from_circuits(m, circuits, validate=False)


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _is_k4e(pairs: list[tuple[int, int]]) -> bool:
    if any(a == b for a, b in pairs):
        return False
    counts = Counter(frozenset(p) for p in pairs)
    ends = set().union(*counts)
    return len(ends) == 3 and sorted(counts.values()) == [1, 2, 2]


def has_K4e_graph_minor(G: MultiGraph, budget: Budget | None = None) -> bool:
    """Exhaustive: keep five edges, contract some of the others, delete the rest."""
    m = len(G.edges)
    cap = resolve(budget).max_graph_minor_edges
    if m > cap:
        raise BudgetExceeded(f"K4/e minor search on {m} edges", cap)
    if m < 5:
        return False
    for kept in combinations(range(m), 5):
        rest = [i for i in range(m) if i not in kept and G.edges[i][0] != G.edges[i][1]]
        for mask in range(1 << len(rest)):
            parent = list(range(G.vertices))
            for j, i in enumerate(rest):
                if mask >> j & 1:
                    u, v = G.edges[i]
                    parent[_find(parent, u)] = _find(parent, v)
            pairs = [(_find(parent, G.edges[i][0]), _find(parent, G.edges[i][1])) for i in kept]
            if _is_k4e(pairs):
                logger.debug("K4/e minor keeping edges %s", kept)
                return True
    return False


def _canonical(edges: Iterable[Edge]) -> tuple[Edge, ...]:
    used = sorted({x for e in edges for x in e})
    compact = {x: i for i, x in enumerate(used)}
    relabelled = [(compact[u], compact[v]) for u, v in edges]
    best: tuple[Edge, ...] | None = None
    for perm in permutations(range(len(used))):
        image = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in relabelled))
        if best is None or image < best:
            best = image
    return best or ()


def enumerate_multigraphs(max_vertices: int, max_edges: int) -> Iterator[MultiGraph]:
    """
    Loopless multigraphs with 1..max_edges edges on at most max_vertices
    vertices, connected on their non-isolated vertices, one per isomorphism
    class.
    """
    pairs = list(combinations(range(max_vertices), 2))
    seen: set[tuple[Edge, ...]] = set()
    for count in range(1, max_edges + 1):
        for chosen in combinations_with_replacement(pairs, count):
            key = _canonical(chosen)
            if key in seen:
                continue
            seen.add(key)
            G = MultiGraph.from_edges(key)
            if _is_connected(G):
                yield G
