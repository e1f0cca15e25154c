"""Shared builders for the test suite.

The random graphs here are built with the stdlib Random, independently of
the library's own generators, so generator bugs cannot mask solver bugs.
"""

import random
from fractions import Fraction

from bicliquelab.bigraph import BipartiteGraph
from bicliquelab.features import FeatureVector, Label


def complete_graph(m, n):
    return BipartiteGraph.from_edges(m, n, [(i, j) for i in range(m) for j in range(n)])


def random_graph(rng: random.Random, u_n: int, v_n: int, p: float) -> BipartiteGraph:
    """Uniform random bipartite graph, retrying empty samples."""
    while True:
        edges = [
            (i, j)
            for i in range(u_n)
            for j in range(v_n)
            if rng.random() < p
        ]
        if edges:
            return BipartiteGraph.from_edges(u_n, v_n, edges)


def neighbor_sets(graph):
    """Plain set-of-sets adjacency view, the independent gram oracle's input."""
    return [set(graph.neighbors_of_u(i)) for i in range(graph.u_count)]


def planted_feature_vector(rng: random.Random, *, flip=0.0) -> tuple[FeatureVector, Label]:
    """One synthetic vector labeled HARD iff zmax > 3 and |V| > 57.

    The other seven features are drawn independently so only zmax and
    v_card carry signal. Returns (vector-with-possibly-flipped-label,
    true label).
    """
    v_card = rng.randint(5, 110)
    u_card = rng.randint(5, 80)
    zmax = rng.randint(0, min(8, v_card))
    wmax = rng.randint(0, u_card) if zmax else 0
    e_card = rng.randint(max(1, zmax), u_card * v_card)
    truth = Label.HARD if (zmax > 3 and v_card > 57) else Label.EASY
    label = truth
    if flip and rng.random() < flip:
        label = Label.EASY if truth is Label.HARD else Label.HARD
    fv = FeatureVector(
        u_card=u_card,
        v_card=v_card,
        e_card=e_card,
        comb_estimate=rng.randint(0, 1000),
        social_degree=Fraction(u_card * v_card, e_card),
        weight_max=wmax,
        size_max=zmax,
        freq_weight2=rng.randint(0, 40),
        freq_size2=rng.randint(0, 40),
        label=label,
    )
    return fv, truth


def planted_dataset(count, seed, flip=0.0):
    """Synthetic labeled vectors plus their noise-free ground truth."""
    rng = random.Random(seed)
    pairs = [planted_feature_vector(rng, flip=flip) for _ in range(count)]
    return [fv for fv, _ in pairs], [truth for _, truth in pairs]
