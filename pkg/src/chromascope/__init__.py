"""Exact and sampled expected chromatic numbers of random subgraphs, with spectral bounds."""

from .chromatic import (BudgetExhausted, ColoringResult, aks_lower_bound, chromatic_number,
                        independence_number, is_edge_critical)
from .expectation import (ChiExpectationPolynomial, EnumerationCapExceeded, MonteCarloEstimate, curve,
                          evaluate, exact_expectation_polynomial, expected_chi_montecarlo,
                          odd_cycle_closed_form, sample_subgraph)
from .families import (triangle_catalog, complete, cycle, edge_coverage_check, edge_critical_witness,
                       kneser, kneser_certificates, mycielski_sequence, mycielskian, petersen,
                       shinkar_ratio_check, zykov_family)
from .graph import (Graph, GraphError, adjacency_matrix, count_triangles, from_edge_list, max_degree,
                    subgraph_by_mask)
from .io import read_graph, write_graph
from .report import RunReport
from .spectral import (ConvergenceError, deviation_trial, extreme_eigenvalues, hoffman_bound,
                       perturbation_check, spectrum_summary, subgraph_spectral_bound)

__version__ = "0.1.0"
