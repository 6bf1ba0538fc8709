"""Immutable simple graphs with stable edge indexing.

Vertices are dense integers ``0..n-1``. Edges are normalized to ``(u, v)``
with ``u < v`` and kept in lexicographic order, so edge ``i`` means the same
pair for the lifetime of a :class:`Graph`. Edge subsets are plain integer
bitmasks (bit ``i`` set means edge ``i`` is kept).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MASK_EDGE_CAP = 30


class GraphError(ValueError):
    """Invalid graph construction input."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    _nbr: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nbr = [0] * self.n
        for u, v in self.edges:
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        object.__setattr__(self, "_nbr", tuple(nbr))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def neighbor_bits(self) -> tuple[int, ...]:
        """Adjacency of each vertex as an integer bitset."""
        return self._nbr

    def neighbors(self, v: int) -> list[int]:
        bits = self._nbr[v]
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def degree(self, v: int) -> int:
        return self._nbr[v].bit_count()

    def degrees(self) -> list[int]:
        return [b.bit_count() for b in self._nbr]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._nbr[u] >> v & 1)

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def without_edge(self, i: int) -> "Graph":
        return Graph(self.n, self.edges[:i] + self.edges[i + 1:])

    def with_edges(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        return from_edge_list(self.n, list(self.edges) + list(pairs))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        pairs = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return from_edge_list(len(vertices), pairs)

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> Graph:
    """Build a graph, normalizing pairs to ``u < v`` and sorting them.

    Raises :class:`GraphError` naming the offending pair on self-loops,
    out-of-range vertices or duplicate edges.
    """
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    seen = set()
    for pair in pairs:
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise GraphError(f"self-loop at vertex {u}: ({pair[0]}, {pair[1]})")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex out of range 0..{n - 1}: ({pair[0]}, {pair[1]})")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise GraphError(f"duplicate edge ({pair[0]}, {pair[1]})")
        seen.add(e)
    return Graph(n, tuple(sorted(seen)))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def check_mask(g: Graph, mask: int, cap: int | None = DEFAULT_MASK_EDGE_CAP) -> None:
    if cap is not None and g.m > cap:
        raise GraphError(f"graph has {g.m} edges, above the mask edge cap {cap}")
    if mask < 0 or mask >> g.m:
        raise GraphError(f"mask does not fit in {g.m} edge bits")


def mask_from_bits(bits: Sequence[int | bool]) -> int:
    """Pack a per-edge 0/1 sequence (edge 0 first) into an integer mask."""
    mask = 0
    for i, b in enumerate(bits):
        if b:
            mask |= 1 << i
    return mask


def mask_to_bits(mask: int, m: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(m)]


def subgraph_by_mask(g: Graph, mask: int | Sequence[int | bool], m: int | None = None) -> Graph:
    """Spanning subgraph keeping exactly the masked edges, in inherited order.

    ``mask`` is an integer bitmask or a per-edge 0/1 sequence whose length
    must equal the edge count.
    """
    if not isinstance(mask, (int, np.integer)):
        if len(mask) != g.m:
            raise GraphError(f"mask length {len(mask)} != edge count {g.m}")
        mask = mask_from_bits(mask)
    mask = int(mask)
    if mask < 0 or mask >> g.m:
        raise GraphError(f"mask does not fit in {g.m} edge bits")
    kept = tuple(e for i, e in enumerate(g.edges) if mask >> i & 1)
    return Graph(g.n, kept)


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def count_triangles(g: Graph) -> tuple[int, list[tuple[int, int, int]]]:
    """Number of 3-cliques and their sorted vertex triples."""
    nbr = g.neighbor_bits
    triangles = []
    for u, v in g.edges:
        common = nbr[u] & nbr[v] & ~((1 << (v + 1)) - 1)
        while common:
            low = common & -common
            triangles.append((u, v, low.bit_length() - 1))
            common ^= low
    triangles.sort()
    return len(triangles), triangles


def count_triangles_brute(g: Graph) -> int:
    return sum(
        1 for a, b, c in combinations(range(g.n), 3)
        if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
    )


def adjacency_matrix(g: Graph, dtype=float) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=dtype)
    if g.m:
        idx = np.asarray(g.edges)
        a[idx[:, 0], idx[:, 1]] = 1
        a[idx[:, 1], idx[:, 0]] = 1
    return a


def connected_components(g: Graph, mask: int | None = None) -> list[int]:
    """Vertex bitsets of connected components (restricted to ``mask`` vertices)."""
    remaining = (1 << g.n) - 1 if mask is None else mask
    nbr = g.neighbor_bits
    comps = []
    while remaining:
        frontier = remaining & -remaining
        comp = frontier
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = nbr[low.bit_length() - 1] & remaining & ~comp
            comp |= new
            frontier |= new
        remaining &= ~comp
        comps.append(comp)
    return comps
