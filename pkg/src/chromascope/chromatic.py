"""Exact chromatic number, independence number and edge-criticality."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Graph, GraphError

DEFAULT_NODE_BUDGET = 10**8


class BudgetExhausted(RuntimeError):
    """The branch-and-bound search hit its node budget before finishing."""

    def __init__(self, limit: int, what: str = "search"):
        super().__init__(f"budget exhausted: {what} exceeded {limit} branch nodes")
        self.limit = limit


@dataclass(frozen=True)
class ColoringResult:
    chi: int
    witness: tuple[int, ...]

    def is_proper(self, g: Graph) -> bool:
        return all(self.witness[u] != self.witness[v] for u, v in g.edges)


class _Counter:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit):
        self.nodes = 0
        self.limit = limit

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise BudgetExhausted(self.limit, "coloring")


def _iter_bits(bits):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def _components(nbr, verts):
    comps = []
    remaining = verts
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


def _two_color(nbr, comp, colors):
    """BFS 2-colouring of one component; returns False on an odd cycle."""
    start = (comp & -comp).bit_length() - 1
    colors[start] = 0
    sides = [1 << start, 0]
    frontier = 1 << start
    seen = frontier
    side = 0
    while frontier:
        nxt = 0
        for v in _iter_bits(frontier):
            nxt |= nbr[v]
        if nxt & sides[side]:
            return False
        nxt &= ~seen
        side ^= 1
        sides[side] |= nxt
        for v in _iter_bits(nxt):
            colors[v] = side
        seen |= nxt
        frontier = nxt
    return True


def _greedy_clique(nbr, comp):
    best = 0
    for start in _iter_bits(comp):
        size = 1
        cand = nbr[start] & comp
        while cand:
            v = max(_iter_bits(cand), key=lambda u: (nbr[u] & cand).bit_count())
            size += 1
            cand &= nbr[v]
        best = max(best, size)
    return best


def _dsatur_greedy(nbr, comp, colors):
    """Greedy DSATUR colouring of ``comp``; writes into ``colors``, returns colours used."""
    verts = list(_iter_bits(comp))
    deg = {v: (nbr[v] & comp).bit_count() for v in verts}
    sat = dict.fromkeys(verts, 0)
    used = 0
    uncolored = set(verts)
    while uncolored:
        v = max(uncolored, key=lambda u: (sat[u].bit_count(), deg[u], -u))
        forb = sat[v]
        c = 0
        while forb >> c & 1:
            c += 1
        colors[v] = c
        used = max(used, c + 1)
        uncolored.discard(v)
        bit = 1 << c
        for u in _iter_bits(nbr[v] & comp):
            sat[u] |= bit
    return used


def _peel(nbr, verts, k):
    """Strip vertices of degree < k; returns (core, peel order)."""
    deg = {v: (nbr[v] & verts).bit_count() for v in _iter_bits(verts)}
    stack = [v for v, d in deg.items() if d < k]
    core = verts
    order = []
    while stack:
        v = stack.pop()
        if not core >> v & 1:
            continue
        core &= ~(1 << v)
        order.append(v)
        for u in _iter_bits(nbr[v] & core):
            deg[u] -= 1
            if deg[u] == k - 1:
                stack.append(u)
    return core, order


def _k_color_core(nbr, comp, k, colors, counter):
    """Exact DSATUR backtracking: can ``comp`` be coloured with ``k`` colours?"""
    verts = list(_iter_bits(comp))
    deg = {v: (nbr[v] & comp).bit_count() for v in verts}
    classes = [0] * k

    def search(uncolored, used):
        counter.tick()
        if not uncolored:
            return True
        best_key, v, forb = None, -1, 0
        for u in _iter_bits(uncolored):
            nu = nbr[u]
            f = 0
            for c in range(used):
                if nu & classes[c]:
                    f |= 1 << c
            key = (f.bit_count(), deg[u], -u)
            if best_key is None or key > best_key:
                best_key, v, forb = key, u, f
        if best_key[0] >= k:
            return False
        bit = 1 << v
        rest = uncolored & ~bit
        for c in range(min(used + 1, k)):
            if forb >> c & 1:
                continue
            classes[c] |= bit
            colors[v] = c
            if search(rest, max(used, c + 1)):
                return True
            classes[c] &= ~bit
        return False

    return search(comp, 0)


def _k_colorable(nbr, verts, k, colors, counter):
    core, order = _peel(nbr, verts, k)
    for comp in _components(nbr, core):
        if not _k_color_core(nbr, comp, k, colors, counter):
            return False
    # reverse peel order: each vertex then sees fewer than k coloured neighbours
    pending = 0
    for v in order:
        pending |= 1 << v
    for v in reversed(order):
        pending &= ~(1 << v)
        forb = {colors[u] for u in _iter_bits(nbr[v] & verts & ~pending)}
        colors[v] = next(c for c in range(k) if c not in forb)
    return True


def _chi_component(nbr, comp, colors, counter):
    if comp & (comp - 1) == 0:
        colors[(comp.bit_length() - 1)] = 0
        return 1
    if _two_color(nbr, comp, colors):
        return 2
    attempt = {}
    if _k_colorable(nbr, comp, 3, attempt, counter):
        colors.update(attempt)
        return 3
    trial = {}
    ub = _dsatur_greedy(nbr, comp, trial)
    colors.update(trial)
    lb = max(4, _greedy_clique(nbr, comp))
    for k in range(lb, ub):
        attempt = {}
        if _k_colorable(nbr, comp, k, attempt, counter):
            colors.update(attempt)
            return k
    return ub


def chromatic_from_bits(n: int, nbr: Sequence[int], node_budget: int = DEFAULT_NODE_BUDGET):
    """χ and a witness for the graph given by per-vertex neighbour bitsets."""
    if n == 0:
        return 0, []
    counter = _Counter(node_budget)
    colors: dict[int, int] = {}
    chi = 1
    for comp in _components(nbr, (1 << n) - 1):
        chi = max(chi, _chi_component(nbr, comp, colors, counter))
    return chi, [colors[v] for v in range(n)]


def chromatic_number(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET) -> ColoringResult:
    """Exact chromatic number with a proper colouring using colours ``0..chi-1``.

    Each component is handled separately: bipartite components are settled by
    BFS, the rest by a greedy clique lower bound, a DSATUR upper bound and
    exact DSATUR branch-and-bound on k-colourability of the k-core.

    Raises :class:`BudgetExhausted` if more than ``node_budget`` search nodes
    are needed.
    """
    chi, colors = chromatic_from_bits(g.n, g.neighbor_bits, node_budget)
    return ColoringResult(chi, tuple(colors))


def chromatic_number_brute(g: Graph) -> int:
    """Exhaustive oracle: fewest blocks over all vertex partitions into independent sets.

    Partitions are enumerated as restricted growth strings (Bell(n) of them),
    so this is only for tiny graphs.
    """
    if g.n == 0:
        return 0
    nbr = g.neighbor_bits
    best = g.n

    def extend(v, blocks):
        nonlocal best
        if len(blocks) >= best:
            return
        if v == g.n:
            best = len(blocks)
            return
        for i, block in enumerate(blocks):
            if not nbr[v] & block:
                blocks[i] = block | (1 << v)
                extend(v + 1, blocks)
                blocks[i] = block
        blocks.append(1 << v)
        extend(v + 1, blocks)
        blocks.pop()

    extend(0, [])
    return best


def is_proper_coloring(g: Graph, colors: Sequence[int]) -> bool:
    return len(colors) == g.n and all(colors[u] != colors[v] for u, v in g.edges)


def independence_number(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, tuple[int, ...]]:
    """Maximum independent set size and a witness set, by branch-and-bound."""
    return max_independent_set(g.neighbor_bits, (1 << g.n) - 1, node_budget)


def max_independent_set(nbr: Sequence[int], verts: int, node_budget: int = DEFAULT_NODE_BUDGET):
    counter = _Counter(node_budget)
    best = [0, 0]

    def search(cand, chosen, size):
        counter.tick()
        # forced picks: vertices with at most one neighbour among the candidates
        while cand:
            for v in _iter_bits(cand):
                if (nbr[v] & cand).bit_count() <= 1:
                    chosen |= 1 << v
                    size += 1
                    cand &= ~(nbr[v] | (1 << v))
                    break
            else:
                break
        if size + cand.bit_count() <= best[0]:
            return
        if not cand:
            best[0], best[1] = size, chosen
            return
        v = max(_iter_bits(cand), key=lambda u: (nbr[u] & cand).bit_count())
        search(cand & ~(nbr[v] | (1 << v)), chosen | (1 << v), size + 1)
        search(cand & ~(1 << v), chosen, size)

    search(verts, 0, 0)
    return best[0], tuple(_iter_bits(best[1]))


def is_edge_critical(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[bool, tuple[int, int] | None]:
    """Whether every single-edge deletion lowers χ; else the first edge that does not."""
    if g.m == 0:
        raise GraphError("edge-criticality needs at least one edge")
    chi = chromatic_number(g, node_budget).chi
    for i, e in enumerate(g.edges):
        if chromatic_number(g.without_edge(i), node_budget).chi >= chi:
            return False, e
    return True, None


def aks_lower_bound(chi: int, n: int) -> Fraction | float:
    """χ / (2 log₂ n); exact as a Fraction when n is a power of two."""
    if n < 2:
        raise ValueError("AKS comparison bound needs n >= 2")
    if n & (n - 1) == 0:
        return Fraction(chi, 2 * (n.bit_length() - 1))
    return chi / (2 * math.log2(n))
