"""Exact and Monte Carlo E[χ(G_p)].

Exact values come from the joint count table ``counts[k][j]``: the number of
k-edge subsets whose spanning subgraph has chromatic number j. Then

    E[χ(G_p)] = Σ_k Σ_j counts[k][j] · j · p^k (1-p)^(m-k).

Two engines fill the table. ``"masks"`` solves χ of every edge subset with
the exact solver. ``"cuts"`` marks, for each k < χ(G), the edge sets crossing
some k-partition of the vertices and takes their down-closure over the
subset lattice: a subset is k-colourable iff it lies under such a cut. The
second is vectorized and far faster when k^(n-1) is small.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .chromatic import DEFAULT_NODE_BUDGET, BudgetExhausted, chromatic_from_bits, chromatic_number
from .graph import Graph, GraphError

DEFAULT_ENUMERATION_CAP = 24
CUTS_COLORING_LIMIT = 1 << 22
MC_TABLE_EDGE_LIMIT = 22

Probability = float | Fraction


class EnumerationCapExceeded(GraphError):
    def __init__(self, m: int, cap: int):
        super().__init__(f"{m} edges exceeds the exact enumeration cap of {cap} "
                         f"(2^{m} subsets); use Monte Carlo mode instead")
        self.m = m
        self.cap = cap


def worker_count() -> int:
    env = os.environ.get("CHROMASCOPE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def check_probability(p) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class ChiExpectationPolynomial:
    n: int
    m: int
    counts: tuple[tuple[int, ...], ...]  # counts[k][j]

    @property
    def chi(self) -> int:
        """χ of the full graph (the only nonzero column of the last row)."""
        row = self.counts[self.m]
        return max(j for j, c in enumerate(row) if c)

    def evaluate(self, p: Probability):
        return evaluate(self, p)

    def coefficients(self) -> list[Fraction]:
        """Coefficients of E[χ(G_p)] in the monomial basis, constant term first."""
        coeffs = [0] * (self.m + 1)
        for k, row in enumerate(self.counts):
            weight = sum(j * c for j, c in enumerate(row))
            if not weight:
                continue
            # p^k (1-p)^(m-k) = Σ_i C(m-k, i) (-1)^i p^(k+i)
            for i in range(self.m - k + 1):
                coeffs[k + i] += weight * comb(self.m - k, i) * (-1) ** i
        return [Fraction(c) for c in coeffs]

    def to_json(self) -> dict:
        rows = [[k, j, str(c)] for k, row in enumerate(self.counts) for j, c in enumerate(row) if c]
        return {"n": self.n, "m": self.m, "counts": rows}

    @classmethod
    def from_json(cls, data: dict) -> "ChiExpectationPolynomial":
        m = int(data["m"])
        width = 1 + max((int(j) for _, j, _ in data["counts"]), default=0)
        table = [[0] * width for _ in range(m + 1)]
        for k, j, c in data["counts"]:
            table[int(k)][int(j)] = int(c)
        return cls(int(data["n"]), m, tuple(tuple(r) for r in table))


def evaluate(poly: ChiExpectationPolynomial, p: Probability):
    """Exact Fraction when ``p`` is rational (int/Fraction), float otherwise."""
    check_probability(p)
    exact = isinstance(p, Rational)
    if exact:
        p = Fraction(p)
        q = 1 - p
    else:
        p = float(p)
        q = 1.0 - p
    total = Fraction(0) if exact else 0.0
    m = poly.m
    for k, row in enumerate(poly.counts):
        weight = sum(j * c for j, c in enumerate(row))
        if weight:
            total += weight * p**k * q ** (m - k)
    return total


def odd_cycle_closed_form(k: int, p: Probability):
    """E[χ] for the odd cycle C_{2k+1}: 2 + p^(2k+1) - (1-p)^(2k+1)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    check_probability(p)
    if isinstance(p, Rational):
        p = Fraction(p)
    return 2 + p ** (2 * k + 1) - (1 - p) ** (2 * k + 1)


# ---------------------------------------------------------------- enumeration

def _popcounts(m: int) -> np.ndarray:
    pc = np.zeros(1, dtype=np.uint8)
    for _ in range(m):
        pc = np.concatenate([pc, pc + 1])
    return pc


def _down_close(f: np.ndarray, m: int) -> None:
    """In place: f[x] |= f[y] for every superset y of x."""
    for i in range(m):
        view = f.reshape(-1, 2, 1 << i)
        view[:, 0, :] |= view[:, 1, :]


def _colorable_masks(g: Graph, k: int) -> np.ndarray:
    """Boolean table over all edge masks: is the masked subgraph k-colourable?"""
    size = 1 << g.m
    f = np.zeros(size, dtype=bool)
    if g.n == 0:
        f[:] = True
        return f
    count = k ** (g.n - 1)
    idx = np.arange(count, dtype=np.int64)
    colors = np.zeros((count, g.n), dtype=np.int8)
    for v in range(1, g.n):
        colors[:, v] = idx % k
        idx //= k
    cut = np.zeros(count, dtype=np.int64)
    for i, (u, v) in enumerate(g.edges):
        cut |= (colors[:, u] != colors[:, v]).astype(np.int64) << i
    f[np.unique(cut)] = True
    _down_close(f, g.m)
    return f


def chi_table(g: Graph, chi: int | None = None) -> np.ndarray:
    """χ of every spanning subgraph, indexed by edge mask (cuts engine)."""
    if chi is None:
        chi = chromatic_number(g).chi
    table = np.full(1 << g.m, chi, dtype=np.uint8)
    for k in range(chi - 1, 0, -1):
        table[_colorable_masks(g, k)] = k
    if g.n == 0:
        table[:] = 0
    return table


def _cuts_cost(g: Graph, chi: int) -> int:
    return sum(k ** max(g.n - 1, 0) for k in range(1, chi))


def _mask_neighbors(edges, n, mask):
    nbr = [0] * n
    i = 0
    while mask:
        if mask & 1:
            u, v = edges[i]
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        mask >>= 1
        i += 1
    return nbr


def _count_range(args):
    edges, n, m, start, stop, budget = args
    width = n + 1
    table = [[0] * width for _ in range(m + 1)]
    for mask in range(start, stop):
        k = mask.bit_count()
        if k <= 1:
            table[k][min(1 + k, n) if n else 0] += 1
            continue
        chi, _ = chromatic_from_bits(n, _mask_neighbors(edges, n, mask), budget)
        table[k][chi] += 1
    return table


def _merge_tables(tables):
    out = [list(r) for r in tables[0]]
    for t in tables[1:]:
        for k, row in enumerate(t):
            for j, c in enumerate(row):
                out[k][j] += c
    return out


def _trim(table, m):
    width = 1 + max((j for row in table for j, c in enumerate(row) if c), default=0)
    return tuple(tuple(row[:width]) for row in table[: m + 1])


def _counts_by_masks(g: Graph, workers: int, node_budget: int):
    total = 1 << g.m
    chunks = max(1, min(workers * 8, total // 4096)) if workers > 1 else 1
    bounds = [total * i // chunks for i in range(chunks + 1)]
    jobs = [(g.edges, g.n, g.m, bounds[i], bounds[i + 1], node_budget) for i in range(chunks)]
    if workers > 1 and chunks > 1:
        with ProcessPoolExecutor(workers) as pool:
            tables = list(pool.map(_count_range, jobs))
    else:
        tables = [_count_range(job) for job in jobs]
    return _trim(_merge_tables(tables), g.m)


def _counts_by_cuts(g: Graph, chi: int):
    table = chi_table(g, chi)
    pc = _popcounts(g.m)
    joint = np.bincount(pc.astype(np.int64) * (chi + 1) + table, minlength=(g.m + 1) * (chi + 1))
    joint = joint.reshape(g.m + 1, chi + 1)
    return tuple(tuple(int(c) for c in row) for row in joint)


def exact_expectation_polynomial(g: Graph, edge_cap: int = DEFAULT_ENUMERATION_CAP,
                                 method: str = "auto", workers: int | None = None,
                                 node_budget: int = DEFAULT_NODE_BUDGET) -> ChiExpectationPolynomial:
    """Enumerate all 2^m edge subsets and tabulate χ by subset size.

    ``method`` is ``"masks"``, ``"cuts"`` or ``"auto"`` (cuts when the number
    of vertex colourings to scan is at most ``CUTS_COLORING_LIMIT``). Both
    produce identical tables.
    """
    if g.m > edge_cap:
        raise EnumerationCapExceeded(g.m, edge_cap)
    chi = chromatic_number(g, node_budget).chi
    if method == "auto":
        method = "cuts" if _cuts_cost(g, chi) <= CUTS_COLORING_LIMIT else "masks"
    if method == "cuts":
        counts = _counts_by_cuts(g, chi)
    elif method == "masks":
        counts = _counts_by_masks(g, workers or worker_count(), node_budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ChiExpectationPolynomial(g.n, g.m, counts)


# ---------------------------------------------------------------- sampling

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def random_bits53(seed: int, sample_indices: np.ndarray, m: int) -> np.ndarray:
    """Counter-based 53-bit draws, shape (len(sample_indices), m).

    Entry (s, e) is SplitMix64 output number ``(s << 32) | e`` of the stream
    keyed by ``seed``, so every (seed, sample, edge) triple has its own fixed
    draw independent of batching or worker layout.
    """
    key = np.uint64(seed % (1 << 64))
    s = np.asarray(sample_indices, dtype=np.uint64)[:, None]
    e = np.arange(m, dtype=np.uint64)[None, :]
    counter = (s << np.uint64(32)) | e
    with np.errstate(over="ignore"):
        z = key + (counter + np.uint64(1)) * _GOLDEN
        return _mix64(z) >> np.uint64(11)


def _threshold(p: Probability) -> int:
    """Keep an edge iff its 53-bit draw is below ceil(p * 2^53)."""
    frac = Fraction(p) if isinstance(p, Rational) else Fraction(float(p))
    num = frac.numerator << 53
    return -(-num // frac.denominator)


def sample_masks(g: Graph, p: Probability, seed: int, sample_indices) -> np.ndarray:
    """Boolean keep-matrix, one row per sample index."""
    check_probability(p)
    bits = random_bits53(seed, np.asarray(sample_indices), g.m)
    return bits < np.uint64(_threshold(p))


def sample_subgraph(g: Graph, p: Probability, seed: int, index: int = 0) -> int:
    """One draw of G_p as an integer edge mask (sample ``index`` of stream ``seed``)."""
    keep = sample_masks(g, p, seed, [index])[0]
    return sum(1 << int(i) for i in np.flatnonzero(keep))


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int
    base_seed: int
    p: float
    histogram: tuple[int, ...]  # histogram[j] = samples with χ = j

    @property
    def exact_mean(self) -> Fraction:
        return Fraction(sum(j * c for j, c in enumerate(self.histogram)), self.samples)


def _histogram_range(args):
    g, p, seed, start, stop, batch, table, budget = args
    hist: dict[int, int] = {}
    memo: dict[bytes, int] = {}
    weights = (np.uint64(1) << np.arange(g.m, dtype=np.uint64)) if table is not None else None
    for lo in range(start, stop, batch):
        hi = min(stop, lo + batch)
        keep = sample_masks(g, p, seed, np.arange(lo, hi))
        if table is not None:
            masks = (keep.astype(np.uint64) * weights).sum(axis=1) if g.m else np.zeros(hi - lo, np.uint64)
            chis = table[masks.astype(np.int64)]
            for j, c in zip(*np.unique(chis, return_counts=True)):
                hist[int(j)] = hist.get(int(j), 0) + int(c)
            continue
        packed = np.packbits(keep, axis=1)
        for row, packed_row in zip(keep, packed):
            key = packed_row.tobytes()
            chi = memo.get(key)
            if chi is None:
                kept = np.flatnonzero(row)
                nbr = [0] * g.n
                for i in kept:
                    u, v = g.edges[i]
                    nbr[u] |= 1 << v
                    nbr[v] |= 1 << u
                chi, _ = chromatic_from_bits(g.n, nbr, budget)
                if len(memo) < 200_000:
                    memo[key] = chi
            hist[chi] = hist.get(chi, 0) + 1
    return hist


def expected_chi_montecarlo(g: Graph, p: Probability, samples: int, base_seed: int,
                            workers: int | None = None, node_budget: int = DEFAULT_NODE_BUDGET,
                            batch: int = 4096) -> MonteCarloEstimate:
    """Estimate E[χ(G_p)] from ``samples`` independent draws.

    Sample ``i`` uses counter block ``(base_seed, i)``, so the estimate does
    not depend on batching or on the number of workers.
    """
    if samples < 2:
        raise ValueError("Monte Carlo needs at least 2 samples")
    check_probability(p)
    table = None
    if g.m <= MC_TABLE_EDGE_LIMIT:
        chi = chromatic_number(g, node_budget).chi
        if _cuts_cost(g, chi) <= CUTS_COLORING_LIMIT:
            table = chi_table(g, chi)
    workers = workers or worker_count()
    chunks = workers if workers > 1 and samples >= 4 * batch else 1
    bounds = [samples * i // chunks for i in range(chunks + 1)]
    jobs = [(g, p, base_seed, bounds[i], bounds[i + 1], batch, table, node_budget)
            for i in range(chunks)]
    if chunks > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_histogram_range, jobs))
    else:
        parts = [_histogram_range(job) for job in jobs]
    merged: dict[int, int] = {}
    for part in parts:
        for j, c in part.items():
            merged[j] = merged.get(j, 0) + c
    hist = tuple(merged.get(j, 0) for j in range(max(merged) + 1))
    s1 = sum(j * c for j, c in enumerate(hist))
    s2 = sum(j * j * c for j, c in enumerate(hist))
    mean = Fraction(s1, samples)
    var = (s2 - s1 * mean) / (samples - 1)
    std_error = float(Fraction(var) / samples) ** 0.5
    return MonteCarloEstimate(float(mean), std_error, samples, base_seed, float(p), hist)


# ---------------------------------------------------------------- curves

@dataclass(frozen=True)
class CurvePoint:
    p: Probability
    value: float | Fraction
    std_error: float | None = None


def p_grid(p_min: float, p_max: float, steps: int) -> list[float]:
    if not 0 <= p_min <= p_max <= 1:
        raise ValueError(f"need 0 <= p_min <= p_max <= 1, got {p_min}, {p_max}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [p_min]
    return [round(p_min + (p_max - p_min) * i / (steps - 1), 12) for i in range(steps)]


def curve(g: Graph, grid: Iterable[Probability], mode: str = "exact", samples: int = 10_000,
          seed: int = 0, poly: ChiExpectationPolynomial | None = None,
          edge_cap: int = DEFAULT_ENUMERATION_CAP) -> list[CurvePoint]:
    """E[χ(G_p)] along a grid.

    Exact mode evaluates one shared polynomial. Monte Carlo mode reuses the
    same seed at every grid point (common random numbers), so sampled
    subgraphs are nested in p and the estimated curve is nondecreasing.
    """
    grid = list(grid)
    for p in grid:
        check_probability(p)
    if mode == "exact":
        poly = poly or exact_expectation_polynomial(g, edge_cap=edge_cap)
        return [CurvePoint(p, evaluate(poly, p)) for p in grid]
    if mode in ("mc", "montecarlo"):
        out = []
        for p in grid:
            est = expected_chi_montecarlo(g, p, samples, seed)
            out.append(CurvePoint(p, est.mean, est.std_error))
        return out
    raise ValueError(f"unknown mode {mode!r}")


__all__ = [
    "BudgetExhausted", "ChiExpectationPolynomial", "CurvePoint", "EnumerationCapExceeded",
    "MonteCarloEstimate", "chi_table", "curve", "evaluate", "exact_expectation_polynomial",
    "expected_chi_montecarlo", "odd_cycle_closed_form", "p_grid", "sample_masks",
    "sample_subgraph", "worker_count",
]
