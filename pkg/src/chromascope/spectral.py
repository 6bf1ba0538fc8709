"""Adjacency spectra, Hoffman's bound, the random-subgraph spectral bound,
and the deviation harness comparing A(G_p) with p·A(G)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .expectation import check_probability, sample_subgraph
from .graph import Graph, GraphError, adjacency_matrix, max_degree, subgraph_by_mask

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_SWEEPS = 100
ENVELOPE_C = 4.0


class ConvergenceError(RuntimeError):
    pass


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """n-1 rounds (n even) of n/2 disjoint index pairs covering every pair once."""
    ring = list(range(n))
    rounds = []
    for _ in range(n - 1):
        p = [ring[i] for i in range(n // 2)]
        q = [ring[n - 1 - i] for i in range(n // 2)]
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        ring = [ring[0], ring[-1]] + ring[1:-1]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigenvalues(matrix, tolerance: float = DEFAULT_TOLERANCE,
                       max_sweeps: int = DEFAULT_MAX_SWEEPS) -> tuple[np.ndarray, int]:
    """All eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi.

    Sweeps visit every off-diagonal pair once, in round-robin order so each
    round rotates n/2 disjoint pairs at once. Iteration stops when the
    off-diagonal Frobenius norm drops below ``tolerance``; by Weyl's
    inequality every eigenvalue is then within ``tolerance`` of the diagonal.
    Returns ``(eigenvalues, sweeps)``.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    asym = float(np.max(np.abs(a - a.T)))
    if asym > tolerance:
        raise ValueError(f"matrix not symmetric within {tolerance} (max deviation {asym:.3g})")
    a = (a + a.T) / 2
    if n % 2:
        a = np.pad(a, ((0, 1), (0, 1)))
    size = a.shape[0]
    rounds = _round_robin(size)
    sweeps = 0
    while _off_norm(a) >= tolerance:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps "
                                   f"(off-diagonal norm {_off_norm(a):.3g})")
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore", divide="ignore"):
                # subnormal apq gives theta = inf, t = 0: the identity rotation
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0] = 1.0
            c = 1 / np.sqrt(t * t + 1)
            s = t * c
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            a[p, q] = 0.0
            a[q, p] = 0.0
        sweeps += 1
    # a padding row/column starts decoupled and rotations keep it so
    return np.sort(np.diag(a)[:n]), sweeps


class Extremes(NamedTuple):
    lambda_max: float
    lambda_min: float


def extreme_eigenvalues(matrix, tolerance: float = DEFAULT_TOLERANCE) -> Extremes:
    eig, _ = jacobi_eigenvalues(matrix, tolerance)
    return Extremes(float(eig[-1]), float(eig[0]))


@dataclass(frozen=True)
class SpectrumSummary:
    lambda_max: float
    lambda_min: float
    n: int
    delta: int
    tolerance: float


def spectrum_summary(g: Graph, tolerance: float = DEFAULT_TOLERANCE) -> SpectrumSummary:
    if g.n == 0:
        raise GraphError("spectrum of the empty vertex set is undefined")
    ext = extreme_eigenvalues(adjacency_matrix(g), tolerance)
    return SpectrumSummary(ext.lambda_max, ext.lambda_min, g.n, max_degree(g), tolerance)


def hoffman_bound(g: Graph, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """1 + λ_max / (-λ_min); a lower bound on χ(g) and on n/α(g)."""
    if g.m == 0:
        raise GraphError("Hoffman bound undefined for edgeless graphs (χ >= 1 trivially)")
    s = spectrum_summary(g, tolerance)
    return 1 + s.lambda_max / -s.lambda_min


class SubgraphSpectralBound(NamedTuple):
    ratio_bound: float
    chi_bound: float


def spectral_shift(delta: int, n: int, p: float, c: float) -> float:
    """(c/p)(√Δ + √ln n), the perturbation allowance on eigenvalues of G_p."""
    return (c / p) * (math.sqrt(delta) + math.sqrt(math.log(n)))


def subgraph_spectral_bound(g: Graph, p: float, c: float, summary: SpectrumSummary | None = None) -> SubgraphSpectralBound:
    """Spectral lower bounds for a random subgraph G_p.

    ``ratio_bound`` = (λ_max - D) / (-λ_min + D) bounds λ_max(G_p)/(-λ_min(G_p));
    ``chi_bound`` = λ_max / (-λ_min + D) bounds χ(G_p); D = (c/p)(√Δ + √ln n).
    Either may be vacuous (<= 1).
    """
    if p == 0:
        raise ValueError("p must be positive")
    check_probability(p)
    if c <= 0:
        raise ValueError("c must be positive")
    if g.m == 0:
        raise GraphError("spectral bound needs at least one edge")
    s = summary or spectrum_summary(g)
    d = spectral_shift(s.delta, s.n, float(p), c)
    return SubgraphSpectralBound((s.lambda_max - d) / (-s.lambda_min + d), s.lambda_max / (-s.lambda_min + d))


def compact_bound(g: Graph, p: float, c: float, summary: SpectrumSummary | None = None) -> float:
    """(2|E|/n) / (-λ_min + (c/p)√Δ), the average-degree form (meaningful when Δ > ln n)."""
    if p == 0:
        raise ValueError("p must be positive")
    if g.m == 0:
        raise GraphError("spectral bound needs at least one edge")
    s = summary or spectrum_summary(g)
    return (2 * g.m / g.n) / (-s.lambda_min + (c / float(p)) * math.sqrt(s.delta))


@dataclass(frozen=True)
class DeviationTrial:
    p: float
    seed: int
    norm_x: float
    sigma_exact: float
    delta: int
    n: int
    perturb_slack_max: float
    perturb_slack_min: float

    def envelope(self, c: float) -> float:
        return c * (math.sqrt(self.delta) + math.sqrt(math.log(self.n)))

    def ratio(self) -> float:
        """‖X‖ / (√Δ + √ln n), the smallest constant whose envelope covers this trial."""
        return self.norm_x / self.envelope(1.0)


def deviation_trial(g: Graph, p: float, seed: int, base: Extremes | None = None,
                    tolerance: float = DEFAULT_TOLERANCE) -> DeviationTrial:
    """Sample G_p and measure ‖A(G_p) - p·A(G)‖ plus the eigenvalue-shift slacks.

    The slacks are ‖X‖ - |p·λ(G) - λ(G_p)| for the top and bottom
    eigenvalues; the Rayleigh-quotient argument makes both nonnegative.
    """
    check_probability(p)
    a_g = adjacency_matrix(g)
    if base is None:
        base = extreme_eigenvalues(a_g, tolerance)
    a_s = adjacency_matrix(subgraph_by_mask(g, sample_subgraph(g, p, seed)))
    x = a_s - float(p) * a_g
    ext_x = extreme_eigenvalues(x, tolerance)
    norm_x = max(abs(ext_x.lambda_max), abs(ext_x.lambda_min))
    ext_s = extreme_eigenvalues(a_s, tolerance)
    delta = max_degree(g)
    return DeviationTrial(
        p=float(p), seed=seed, norm_x=norm_x,
        sigma_exact=math.sqrt(delta * float(p) * (1 - float(p))), delta=delta, n=g.n,
        perturb_slack_max=norm_x - abs(float(p) * base.lambda_max - ext_s.lambda_max),
        perturb_slack_min=norm_x - abs(float(p) * base.lambda_min - ext_s.lambda_min),
    )


@dataclass(frozen=True)
class PerturbationReport:
    trial: DeviationTrial
    tolerance: float

    @property
    def ok(self) -> bool:
        return min(self.trial.perturb_slack_max, self.trial.perturb_slack_min) >= -self.tolerance


def perturbation_check(g: Graph, p: float, seed: int, tolerance: float = 1e-8) -> PerturbationReport:
    return PerturbationReport(deviation_trial(g, p, seed), tolerance)


@dataclass(frozen=True)
class DeviationBench:
    trials: tuple[DeviationTrial, ...]
    c_envelope: float

    @property
    def violations(self) -> int:
        return sum(t.norm_x > t.envelope(self.c_envelope) for t in self.trials)

    @property
    def max_ratio(self) -> float:
        return max(t.ratio() for t in self.trials)

    @property
    def min_slack(self) -> float:
        return min(min(t.perturb_slack_max, t.perturb_slack_min) for t in self.trials)


def deviation_bench(g: Graph, p: float, trials: int, base_seed: int,
                    c_envelope: float = ENVELOPE_C) -> DeviationBench:
    """``trials`` deviation trials with seeds ``base_seed, base_seed + 1, ...``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = extreme_eigenvalues(adjacency_matrix(g))
    return DeviationBench(tuple(deviation_trial(g, p, base_seed + i, base) for i in range(trials)),
                          c_envelope)
