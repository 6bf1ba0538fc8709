import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromascope import families as fam
from chromascope.chromatic import chromatic_number, independence_number
from chromascope.graph import GraphError, adjacency_matrix, empty_graph
from chromascope.spectral import (ConvergenceError, compact_bound, deviation_bench, deviation_trial,
                                  extreme_eigenvalues, hoffman_bound, jacobi_eigenvalues,
                                  perturbation_check, spectrum_summary, subgraph_spectral_bound)

from helpers import small_corpus


@pytest.mark.parametrize("n", [2, 3, 10, 57, 200])
def test_complete_spectrum(n):
    ext = extreme_eigenvalues(adjacency_matrix(fam.complete(n)))
    assert ext.lambda_max == pytest.approx(n - 1, abs=1e-8)
    assert ext.lambda_min == pytest.approx(-1, abs=1e-8)


@pytest.mark.parametrize("n", [3, 4, 9, 100, 199, 200])
def test_cycle_spectrum(n):
    eig, _ = jacobi_eigenvalues(adjacency_matrix(fam.cycle(n)))
    expected = np.sort(2 * np.cos(2 * np.pi * np.arange(n) / n))
    assert np.max(np.abs(eig - expected)) < 1e-8
    assert eig[-1] == pytest.approx(2, abs=1e-8)
    lo = -2 if n % 2 == 0 else 2 * math.cos(math.pi * (n - 1) / n)
    assert eig[0] == pytest.approx(lo, abs=1e-8)


@pytest.mark.parametrize("leaves", [1, 4, 199])
def test_star_spectrum(leaves):
    ext = extreme_eigenvalues(adjacency_matrix(fam.star(leaves)))
    assert ext.lambda_max == pytest.approx(math.sqrt(leaves), abs=1e-8)
    assert ext.lambda_min == pytest.approx(-math.sqrt(leaves), abs=1e-8)


def test_zero_matrix():
    assert extreme_eigenvalues(np.zeros((3, 3))) == (0.0, 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    a = a + a.T
    eig, _ = jacobi_eigenvalues(a)
    assert np.max(np.abs(eig - np.linalg.eigvalsh(a))) < 1e-8


def test_rejections():
    with pytest.raises(ValueError, match="symmetric"):
        jacobi_eigenvalues([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.zeros((2, 3)))
    with pytest.raises(ConvergenceError):
        jacobi_eigenvalues(np.ones((6, 6)) + np.eye(6) * np.arange(6), max_sweeps=0)


def test_hoffman_examples():
    assert hoffman_bound(fam.complete(7)) == pytest.approx(7)
    assert hoffman_bound(fam.petersen()) == pytest.approx(2.5)
    assert hoffman_bound(fam.cycle(6)) == pytest.approx(2)
    with pytest.raises(GraphError):
        hoffman_bound(empty_graph(3))


@pytest.mark.parametrize("name, g", sorted(small_corpus().items()))
def test_hoffman_below_chi_and_ratio(name, g):
    s = spectrum_summary(g)
    assert s.lambda_min < 0 < s.lambda_max
    assert abs(s.lambda_min) <= s.delta + 1e-9 and s.lambda_max <= s.delta + 1e-9
    h = hoffman_bound(g)
    assert h <= chromatic_number(g).chi + 1e-8
    if len(set(g.degrees())) == 1:  # the ratio form needs regularity
        assert h <= g.n / independence_number(g)[0] + 1e-8


def test_ratio_form_fails_off_regular_graphs():
    star = fam.star(4)
    assert hoffman_bound(star) == pytest.approx(2)
    assert star.n / independence_number(star)[0] == 1.25


def test_subgraph_bound_on_complete_graph():
    n, p, c = 9, 0.5, 1.0
    t2 = subgraph_spectral_bound(fam.complete(n), p, c)
    d = (c / p) * (math.sqrt(n - 1) + math.sqrt(math.log(n)))
    assert t2.chi_bound == pytest.approx((n - 1) / (1 + d))
    assert t2.ratio_bound == pytest.approx((n - 1 - d) / (1 + d))


def test_subgraph_bound_on_kneser():
    n, k, p, c = 7, 2, 0.3, 0.5
    t2 = subgraph_spectral_bound(fam.kneser(n, k), p, c)
    want = math.comb(n - k, k) / (math.comb(n - k - 1, k - 1)
                                  + (c / p) * (math.sqrt(math.comb(n - k, k)) + math.sqrt(math.log(math.comb(n, k)))))
    assert t2.chi_bound == pytest.approx(want, rel=1e-9)


@pytest.mark.parametrize("name", ["K6", "petersen", "M4", "C7"])
def test_subgraph_bound_monotone(name):
    g = small_corpus()[name]
    s = spectrum_summary(g)
    cs = [0.1, 0.5, 1, 4, 100, 1e6]
    by_c = [subgraph_spectral_bound(g, 0.5, c, s) for c in cs]
    for a, b in zip(by_c, by_c[1:]):
        assert b.chi_bound <= a.chi_bound and b.ratio_bound <= a.ratio_bound
    assert by_c[-1].chi_bound < 1e-5
    ps = [0.05, 0.2, 0.5, 0.9, 1]
    by_p = [subgraph_spectral_bound(g, p, 1.0, s) for p in ps]
    for a, b in zip(by_p, by_p[1:]):
        assert b.chi_bound >= a.chi_bound and b.ratio_bound >= a.ratio_bound
    with pytest.raises(ValueError):
        subgraph_spectral_bound(g, 0, 1.0)


def test_compact_bound_value():
    g = fam.petersen()
    assert compact_bound(g, 0.5, 1.0) == pytest.approx(3 / (2 + 2 * math.sqrt(3)))


def test_deviation_endpoints():
    g = fam.petersen()
    for p in (0, 1):
        tr = deviation_trial(g, p, 3)
        assert tr.norm_x == pytest.approx(0, abs=1e-12)
    assert deviation_trial(g, 1, 3).sigma_exact == 0


def test_deviation_trial_against_lapack():
    g = fam.mycielski_sequence(4)
    tr = deviation_trial(g, 0.4, 12)
    from chromascope.expectation import sample_subgraph
    from chromascope.graph import subgraph_by_mask
    x = adjacency_matrix(subgraph_by_mask(g, sample_subgraph(g, 0.4, 12))) - 0.4 * adjacency_matrix(g)
    assert tr.norm_x == pytest.approx(np.linalg.norm(x, 2), abs=1e-9)
    assert tr.sigma_exact <= math.sqrt(tr.delta)


def test_perturbation_checks():
    assert perturbation_check(fam.complete(4), 0.5, 8).ok
    for seed in range(50):
        assert perturbation_check(fam.petersen(), 0.3, seed).ok


def test_bench_seeds_and_envelope():
    bench = deviation_bench(fam.petersen(), 0.5, 30, 100)
    assert [t.seed for t in bench.trials] == list(range(100, 130))
    assert bench.violations == 0
    assert bench.min_slack >= -1e-9
    assert deviation_bench(fam.petersen(), 0.5, 30, 100, c_envelope=1e-3).violations > 0
