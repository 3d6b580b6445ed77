import random

import pytest

from conftest import mixed, random_gpm, subsets
from arbopack.hypergraph import RootBounds, directed_extension
from arbopack.matroid import (
    FreeMatroid,
    Gpc1Violated,
    Gpc2Violated,
    GpmConditionViolated,
    GpmMuOutOfRange,
    PartitionMatroid,
    UniformMatroid,
    build_root_bound_matroid,
    gpm_build,
    rank_via_oracle,
)

X1, X2, Y1 = 0, 1, 2


@pytest.fixture
def gpm():
    return gpm_build([[X1, X2], [Y1]], alpha=(0, 1), beta=(2, 1), mu=2)


def test_independence_examples(gpm):
    assert gpm.is_independent([])
    assert not gpm.is_independent([X1, X2])
    assert gpm.is_independent([X1, Y1])


def test_base_examples(gpm):
    assert gpm.is_base([X1, Y1])
    assert not gpm.is_base([X1, X2])
    assert not gpm.is_base([])


def test_rank_examples(gpm):
    assert gpm.rank([X1, X2]) == 1
    assert gpm.rank([]) == 0
    assert gpm.rank([X1, X2, Y1]) == 2
    assert rank_via_oracle(gpm, [X1, X2]) == 1


def test_condition_violated():
    with pytest.raises(GpmConditionViolated) as info:
        gpm_build([[0, 1, 2]], alpha=(3,), beta=(2,), mu=3)
    assert info.value.index == 0
    with pytest.raises(GpmMuOutOfRange):
        gpm_build([[0], [1]], alpha=(0, 0), beta=(0, 0), mu=1)


def test_classes_must_partition():
    with pytest.raises(ValueError):
        gpm_build([[0], [2]], (0, 0), (1, 1), 1)


def test_simple_oracles():
    assert rank_via_oracle(FreeMatroid(4), [3, 1, 0]) == 3
    assert rank_via_oracle(UniformMatroid(5, 2), range(5)) == 2
    pm = PartitionMatroid(block=(0, 0, 1), capacity=(1, 1))
    assert rank_via_oracle(pm, [0, 1, 2]) == 2
    zero = gpm_build([[0, 1], [2]], (0, 0), (0, 0), 0)
    assert rank_via_oracle(zero, range(3)) == 0


def test_root_bound_example():
    D = directed_extension(mixed("uv", [("a", "u", "v")]))
    m = build_root_bound_matroid(D, RootBounds(1, {}, {"u": 1, "v": 1}))
    assert (m.alpha, m.beta, m.mu) == ((0, 0), (1, 1), 1)
    assert m.classes == ((), (0,))
    assert m.rank([]) == 0


def test_root_bound_gpc2():
    D = directed_extension(mixed("uv", [("a", "u", "v")]))
    with pytest.raises(Gpc2Violated) as info:
        build_root_bound_matroid(D, RootBounds(1, {}, {"u": 0, "v": 0}))
    assert info.value.side == "lower"


def test_root_bound_gpc1():
    D = directed_extension(mixed("uv", [("a", "u", "v")]))
    with pytest.raises(Gpc1Violated) as info:
        build_root_bound_matroid(D, RootBounds(1, {"u": 2}, {"u": 1, "v": 1}))
    assert info.value.vertex == "u"


def brute_rank(m, Z):
    return max(len(Y) for Y in subsets(m.ground_size) if Y <= Z and m.is_independent(Y))


@pytest.mark.parametrize("seed", range(25))
def test_formula_rank_matches_exhaustive(seed):
    m = random_gpm(random.Random(seed), max_size=6)
    for Z in subsets(m.ground_size):
        assert m.rank(Z) == brute_rank(m, Z) == rank_via_oracle(m, sorted(Z))


@pytest.mark.parametrize("seed", range(10))
def test_root_bound_bases_are_root_feasible(seed):
    from conftest import biased_instance

    h, b = biased_instance(seed, max_vertices=3, max_edges=4)
    D = directed_extension(h)
    try:
        m = build_root_bound_matroid(D, b)
    except (Gpc1Violated, Gpc2Violated):
        return
    for Z in subsets(len(D.arcs)):
        indeg = [0] * len(D.vertices)
        for i in Z:
            indeg[D.head_index[i]] += 1
        expected = len(Z) == m.mu and all(
            b.lower(v) <= b.k - d <= b.upper(v) for v, d in zip(D.vertices, indeg)
        )
        assert m.is_base(Z) == expected
