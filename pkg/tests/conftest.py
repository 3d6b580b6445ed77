import random

import pytest

from arbopack.generate import generate_instance
from arbopack.hypergraph import Dyperedge, Hyperedge, MixedHypergraph, RootBounds


def mixed(vertices, dyperedges=(), hyperedges=()):
    """Build a MixedHypergraph from tuples ``(id, tail, head[, w])`` and ``(id, vertices[, w])``."""
    A = tuple(Dyperedge(a[0], frozenset(a[1]), a[2], *a[3:]) for a in dyperedges)
    E = tuple(Hyperedge(e[0], frozenset(e[1]), *e[2:]) for e in hyperedges)
    return MixedHypergraph(tuple(vertices), A, E)


def biased_instance(seed, max_vertices=5, max_edges=7, max_k=3):
    """Random instance skewed so roughly half the corpus is feasible.

    More edges are drawn when ``k(|V|-1)`` is large, since fewer than that
    many edges can never carry a packing.
    """
    rng = random.Random(seed)
    k = rng.randint(1, max_k)
    n = rng.randint(1, min(max_vertices, 1 + 7 // k))
    need = k * (n - 1)
    m = rng.randint(min(max_edges, need), max_edges) if n > 1 else 0
    n_hyper = rng.randint(0, m)
    return generate_instance(n, m - n_hyper, n_hyper, k, rng.randrange(1 << 30))


def corpus(size, seed=0, **kw):
    return [biased_instance(seed * 100003 + i, **kw) for i in range(size)]


@pytest.fixture
def tmp_json(tmp_path):
    import json

    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
        return str(path)

    return write


__all__ = ["mixed", "biased_instance", "corpus", "RootBounds"]


def random_gpm(rng, max_size=7, max_classes=4):
    """A random generalized partition matroid satisfying both existence conditions."""
    from arbopack.matroid import gpm_build

    n = rng.randint(0, max_size)
    c = rng.randint(1, max_classes)
    classes = [[] for _ in range(c)]
    for x in range(n):
        classes[rng.randrange(c)].append(x)
    alpha, beta = [], []
    for S in classes:
        a = rng.randint(-2, len(S))
        alpha.append(a)
        beta.append(rng.randint(max(a, 0), len(S) + 1))
    low = sum(max(a, 0) for a in alpha)
    high = sum(min(b, len(S)) for S, b in zip(classes, beta))
    return gpm_build(classes, alpha, beta, rng.randint(low, high))


def subsets(n):
    return [frozenset(x for x in range(n) if mask >> x & 1) for mask in range(1 << n)]


def random_hypergraph(rng, max_vertices=7, max_edges=7, min_vertices=2):
    from arbopack.hypergraph import Hypergraph

    n = rng.randint(min_vertices, max_vertices)
    V = [f"v{i}" for i in range(n)]
    m = rng.randint(0, max_edges) if n >= 2 else 0
    edges = [frozenset(rng.sample(V, rng.randint(2, min(n, 4)))) for _ in range(m)]
    return Hypergraph(tuple(V), tuple(edges))


def random_extension(rng, max_vertices=5, max_edges=5):
    from arbopack.hypergraph import directed_extension

    n = rng.randint(2, max_vertices)
    V = [f"v{i}" for i in range(n)]
    A, E = [], []
    for i in range(rng.randint(0, max_edges)):
        if rng.random() < 0.5:
            head = rng.choice(V)
            tail = rng.sample([v for v in V if v != head], rng.randint(1, min(2, n - 1)))
            A.append((f"a{i}", tail, head))
        else:
            E.append((f"e{i}", rng.sample(V, rng.randint(2, min(3, n)))))
    return directed_extension(mixed(V, A, E))


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
