"""Seeded random instances."""

from __future__ import annotations

import random

from .hypergraph import Dyperedge, Hyperedge, MixedHypergraph, RootBounds


def generate_instance(
    n_vertices: int,
    n_dyperedges: int,
    n_hyperedges: int,
    k: int,
    seed: int,
    max_tail: int = 3,
    max_hyperedge: int = 4,
    max_weight: int = 10,
) -> tuple:
    """Random ``(MixedHypergraph, RootBounds)``, identical for identical arguments.

    Tail sizes are uniform in ``[1, max_tail]`` and hyperedge sizes in
    ``[2, max_hyperedge]``, both capped by what the vertex count allows;
    edges that cannot exist (one vertex) are skipped.  Weights are uniform
    integers in ``[1, max_weight]``; ``g(v)`` is uniform in ``[0, k]`` and
    ``f(v)`` uniform in ``[0, g(v)]``.
    """
    if min(n_vertices, k, n_dyperedges, n_hyperedges) < 0 or n_vertices < 1:
        raise ValueError("counts must be nonnegative and n_vertices >= 1")
    rng = random.Random(seed)
    vertices = [f"v{i}" for i in range(n_vertices)]
    dyperedges = []
    hyperedges = []
    if n_vertices >= 2:
        for i in range(n_dyperedges):
            head = rng.choice(vertices)
            others = [v for v in vertices if v != head]
            size = rng.randint(1, min(max_tail, len(others)))
            tail = rng.sample(others, size)
            dyperedges.append(Dyperedge(f"a{i}", frozenset(tail), head, rng.randint(1, max_weight)))
        for i in range(n_hyperedges):
            size = rng.randint(2, min(max_hyperedge, n_vertices))
            members = rng.sample(vertices, size)
            hyperedges.append(Hyperedge(f"e{i}", frozenset(members), rng.randint(1, max_weight)))
    g = {v: rng.randint(0, k) for v in vertices}
    f = {v: rng.randint(0, g[v]) for v in vertices}
    return MixedHypergraph(tuple(vertices), tuple(dyperedges), tuple(hyperedges)), RootBounds(k, f, g)
