"""Graph families with closed-form certificates.

Complete graphs and cycles, Mycielskians, Kneser graphs, the polynomial
construction showing the product bound for edge-covering families is tight,
the four-triangle catalog used to single out K4 among planar graphs, and
edge-critical witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .graph import Graph, GraphError, from_edge_list

DEFAULT_VERTEX_BUDGET = 5000


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return from_edge_list(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return from_edge_list(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    pairs, offset = [], 0
    for g in graphs:
        pairs += [(u + offset, v + offset) for u, v in g.edges]
        offset += g.n
    return from_edge_list(offset, pairs)


def mycielskian(g: Graph) -> Graph:
    """Mycielski's construction.

    Layout: original copy ``[0, n)``, shadow copy ``[n, 2n)``, apex ``2n``.
    Keeps the original edges, joins each shadow ``v'`` to the original
    neighbours of ``v``, and joins every shadow vertex to the apex, so
    |E| = 3|E(g)| + n.
    """
    n = g.n
    pairs = list(g.edges)
    for u, v in g.edges:
        pairs.append((u, n + v))
        pairs.append((v, n + u))
    pairs += [(n + v, 2 * n) for v in range(n)]
    return from_edge_list(2 * n + 1, pairs)


def mycielski_sequence(k: int) -> Graph:
    """M_k with M_2 = K_2 and M_k = M(M_{k-1}); χ(M_k) = k."""
    if k < 2:
        raise GraphError(f"Mycielski sequence starts at k=2, got {k}")
    g = complete(2)
    for _ in range(k - 2):
        g = mycielskian(g)
    return g


def kneser_vertices(n: int, k: int) -> list[tuple[int, ...]]:
    """k-subsets of ``range(n)`` in colexicographic order."""
    return sorted(combinations(range(n), k), key=lambda s: s[::-1])


def kneser(n: int, k: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    if not n >= k >= 0:
        raise GraphError(f"Kneser graph needs n >= k >= 0, got ({n}, {k})")
    if comb(n, k) > vertex_budget:
        raise GraphError(f"KG({n},{k}) has {comb(n, k)} vertices, above budget {vertex_budget}")
    subsets = kneser_vertices(n, k)
    masks = [sum(1 << x for x in s) for s in subsets]
    pairs = [(i, j) for i, j in combinations(range(len(masks)), 2) if not masks[i] & masks[j]]
    return from_edge_list(len(masks), pairs)


def petersen() -> Graph:
    return kneser(5, 2)


@dataclass(frozen=True)
class KneserCertificates:
    lambda_max: int
    lambda_min: int
    alpha: int
    chi: int


def kneser_certificates(n: int, k: int) -> KneserCertificates:
    """Known spectrum extremes, Erdős–Ko–Rado α and Lovász χ of KG(n,k)."""
    if not (k >= 1 and n >= 2 * k):
        raise GraphError(f"certificates need n >= 2k >= 2, got ({n}, {k})")
    return KneserCertificates(comb(n - k, k), -comb(n - k - 1, k - 1), comb(n - 1, k - 1), n - 2 * k + 2)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q**0.5) + 1))


@dataclass(frozen=True)
class ZykovFamily:
    q: int
    n_subgraphs: int
    t: int
    base: Graph
    parts: tuple[Graph, ...]

    @property
    def vertex_count(self) -> int:
        return self.base.n

    def coefficients(self, vertex: int) -> list[int]:
        return [(vertex // self.q**j) % self.q for j in range(self.t + 1)]


def _poly_eval(coeffs, x, q):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def zykov_family(q: int, n: int, t: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> ZykovFamily:
    """Polynomials of degree <= t over GF(q) as vertices of K_{q^(t+1)}.

    Part ``i`` (for ``i = 1..n``) joins f and g iff f(0)+f(i) != g(0)+g(i),
    so it is complete q-partite, and each base edge is missed by at most
    ``t`` parts. Vertex id is ``sum(coeff_j * q**j)``.
    """
    if not is_prime(q):
        raise GraphError(f"q must be prime, got {q}")
    if q <= n:
        raise GraphError(f"need q > n, got q={q}, n={n}")
    if not 0 <= t < n:
        raise GraphError(f"need 0 <= t < n, got t={t}, n={n}")
    size = q ** (t + 1)
    if size > vertex_budget:
        raise GraphError(f"q^(t+1) = {size} vertices, above budget {vertex_budget}")
    coeffs = [[(v // q**j) % q for j in range(t + 1)] for v in range(size)]
    base = complete(size)
    parts = []
    for i in range(1, n + 1):
        label = [(c[0] + _poly_eval(c, i, q)) % q for c in coeffs]
        parts.append(Graph(size, tuple((u, v) for u, v in base.edges if label[u] != label[v])))
    return ZykovFamily(q, n, t, base, tuple(parts))


def zykov_part_classes(fam: ZykovFamily, i: int) -> list[int]:
    """Colour class of each vertex in part ``i`` (1-based): the value f(0)+f(i)."""
    return [(fam.coefficients(v)[0] + _poly_eval(fam.coefficients(v), i, fam.q)) % fam.q
            for v in range(fam.base.n)]


def edge_coverage_check(fam: ZykovFamily) -> tuple[int, tuple[int, int] | None]:
    """Minimum number of parts containing a base edge, with an edge attaining it."""
    if fam.base.m == 0:
        return len(fam.parts), None
    counts = np.zeros(fam.base.m, dtype=np.int64)
    index = fam.base.edge_index()
    for part in fam.parts:
        for e in part.edges:
            counts[index[e]] += 1
    i = int(np.argmin(counts))
    return int(counts[i]), fam.base.edges[i]


def _alpha_table(nbr: list[int], n: int) -> list[int]:
    """α of every induced subgraph, indexed by vertex bitset.

    α(S) = max(α(S - v), 1 + α(S - N[v])) for v the lowest vertex of S.
    """
    alpha = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        v = low.bit_length() - 1
        without = alpha[s ^ low]
        with_v = 1 + alpha[s & ~(nbr[v] | low)]
        alpha[s] = with_v if with_v > without else without
    return alpha


DEFAULT_SUBSET_CAP = 1 << 20


@dataclass(frozen=True)
class RatioCheck:
    s: int
    k: int
    max_ratio: Fraction
    witness: tuple[int, ...]
    subsets_checked: int
    exhaustive: bool


def shinkar_ratio_check(s: int, k: int, subset_cap: int = DEFAULT_SUBSET_CAP) -> RatioCheck:
    """Max of |V(H)|/α(H) over all nonempty induced subgraphs H of KG(sk, k).

    Ties go to the larger subset, then the smaller bitset.
    """
    g = kneser(s * k, k)
    if (1 << g.n) - 1 > subset_cap:
        raise GraphError(
            f"KG({s * k},{k}) has 2^{g.n} - 1 vertex subsets, above cap {subset_cap}; "
            "use shinkar_ratio_sample for a non-exhaustive check")
    nbr = list(g.neighbor_bits)
    alpha = _alpha_table(nbr, g.n)
    best, best_key = Fraction(0), None
    for subset in range(1, 1 << g.n):
        size = subset.bit_count()
        r = Fraction(size, alpha[subset])
        key = (r, size, -subset)
        if best_key is None or key > best_key:
            best, best_key = r, key
    witness = tuple(v for v in range(g.n) if -best_key[2] >> v & 1)
    return RatioCheck(s, k, best, witness, (1 << g.n) - 1, True)


def shinkar_ratio_sample(s: int, k: int, samples: int, seed: int) -> RatioCheck:
    """Same ratio over uniformly random nonempty vertex subsets; no completeness claim."""
    from .chromatic import max_independent_set

    g = kneser(s * k, k)
    rng = np.random.default_rng(seed)
    nbr = g.neighbor_bits
    best, witness = Fraction(0), ()
    for _ in range(samples):
        bits = rng.integers(0, 2, size=g.n)
        if not bits.any():
            continue
        verts = tuple(int(v) for v in np.flatnonzero(bits))
        sub = sum(1 << v for v in verts)
        a, _ = max_independent_set(nbr, sub)
        r = Fraction(len(verts), a)
        if r > best:
            best, witness = r, verts
    return RatioCheck(s, k, best, witness, samples, False)


def _tri(a, b, c):
    return [(a, b), (b, c), (a, c)]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str
    graph: Graph
    expected_value_at_half: Fraction


def triangle_catalog() -> list[CatalogEntry]:
    """The ten four-triangle configurations G1..G10 plus K4 with printed E[χ(G_{1/2})]."""
    # diamond on a,b,c,d: triangles abc and bcd sharing edge bc
    def diamond(a, b, c, d):
        return _tri(a, b, c) + [(b, d), (c, d)]

    entries = [
        ("G1", "four disjoint triangles", 12,
         _tri(0, 1, 2) + _tri(3, 4, 5) + _tri(6, 7, 8) + _tri(9, 10, 11), "2.4136"),
        ("G2", "diamond plus two disjoint triangles", 10,
         diamond(0, 1, 2, 3) + _tri(4, 5, 6) + _tri(7, 8, 9), "2.4014"),
        ("G3", "two disjoint diamonds", 8,
         diamond(0, 1, 2, 3) + diamond(4, 5, 6, 7), "2.3887"),
        ("G4", "strip of three triangles plus a disjoint triangle", 8,
         diamond(0, 1, 2, 3) + [(1, 4), (3, 4)] + _tri(5, 6, 7), "2.3975"),
        ("G5", "book of three triangles plus a disjoint triangle", 8,
         _tri(0, 1, 2) + [(1, 3), (2, 3), (1, 4), (2, 4)] + _tri(5, 6, 7), "2.3770"),
        ("G6", "strip of four triangles", 7,
         diamond(0, 1, 2, 3) + [(1, 4), (3, 4), (3, 5), (4, 5)], "2.3906"),
        ("G7", "book of three triangles with a triangle on an outer edge", 6,
         _tri(0, 1, 2) + [(1, 3), (2, 3), (1, 4), (2, 4), (0, 5), (1, 5)], "2.3809"),
        ("G8", "book of four triangles", 6,
         _tri(0, 1, 2) + [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)], "2.3398"),
        ("G9", "wheel: 4-cycle plus hub", 5,
         [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)], "2.3828"),
        ("G10", "triangle with a triangle glued on each edge", 6,
         _tri(0, 1, 2) + [(0, 3), (1, 3), (1, 4), (2, 4), (0, 5), (2, 5)], "2.3984"),
        ("K4", "complete graph on four vertices", 4, list(combinations(range(4), 2)), "2.3594"),
    ]
    return [CatalogEntry(name, desc, from_edge_list(n, pairs), Fraction(val))
            for name, desc, n, pairs, val in entries]


def catalog_graph(name: str) -> Graph:
    for entry in triangle_catalog():
        if entry.name.lower() == name.lower():
            return entry.graph
    raise GraphError(f"unknown catalog entry {name!r}")


def edge_critical_witness(chi_target: int, girth_seed: int,
                          vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """Iterated Mycielskian of the odd cycle C_{girth_seed}; χ = chi_target, edge-critical."""
    if chi_target < 3:
        raise GraphError(f"chi_target must be >= 3, got {chi_target}")
    if girth_seed < 3 or girth_seed % 2 == 0:
        raise GraphError(f"girth_seed must be odd and >= 3, got {girth_seed}")
    size = girth_seed
    for _ in range(chi_target - 3):
        size = 2 * size + 1
    if size > vertex_budget:
        raise GraphError(f"witness would have {size} vertices, above budget {vertex_budget}")
    g = cycle(girth_seed)
    for _ in range(chi_target - 3):
        g = mycielskian(g)
    return g
