"""Graph corpora shared by the test modules."""

import itertools

from chromascope import families as fam
from chromascope.graph import from_edge_list


def c5_plus_chord():
    return from_edge_list(5, list(fam.cycle(5).edges) + [(0, 2)])


def small_corpus():
    """Named graphs used across modules; all have at least one edge."""
    graphs = {f"K{n}": fam.complete(n) for n in range(2, 7)}
    graphs.update({f"C{n}": fam.cycle(n) for n in range(3, 10)})
    graphs.update({
        "P5": fam.path(5),
        "star4": fam.star(4),
        "petersen": fam.petersen(),
        "M4": fam.mycielski_sequence(4),
        "C5+chord": c5_plus_chord(),
        "K3+K2": fam.disjoint_union(fam.complete(3), fam.complete(2)),
    })
    return graphs


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield from_edge_list(n, [e for i, e in enumerate(pairs) if bits >> i & 1])
