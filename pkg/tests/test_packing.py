import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import biased_instance, mixed
from arbopack.hypergraph import RootBounds, TooLarge, directed_extension
from arbopack.packing import (
    Arborescence,
    BundleReused,
    DecompositionFailed,
    DualSet,
    FgViolation,
    GpcViolation,
    InfeasibleInstance,
    Packing,
    SubpartitionF,
    TrimmedEdge,
    brute_force_solve,
    check_characterization_bruteforce,
    decompose_to_arborescences,
    edmonds_condition,
    map_back,
    solve_min_weight,
    verify_packing,
)


def kinds(violations):
    return {v.kind for v in violations}


# -- characterization ---------------------------------------------------------


def test_characterization_isolated_vertices():
    h, b = mixed("uv"), RootBounds(1, {}, {"u": 1, "v": 1})
    cert = check_characterization_bruteforce(h, b)
    assert cert == SubpartitionF((frozenset("u"), frozenset("v")))
    assert cert.sides(h, b) == (0, 1)
    assert cert.is_violated(h, b)


def test_characterization_fg():
    h = mixed("uv", hyperedges=[("e", "uv")])
    assert check_characterization_bruteforce(h, RootBounds(1, {"v": 2}, {"v": 1})) == FgViolation("v")


def test_characterization_feasible():
    h = mixed("uv", hyperedges=[("e", "uv")])
    assert check_characterization_bruteforce(h, RootBounds(1, {}, {"u": 1, "v": 1})) is None


# -- solver examples ---------------------------------------------------------


def test_solve_picks_cheaper_parallel_edge():
    h = mixed("ab", hyperedges=[("e1", "ab", 5), ("e2", "ab", 3)])
    b = RootBounds(1)
    p = solve_min_weight(h, b)
    assert isinstance(p, Packing)
    assert p.edge_ids() == ["e2"] and p.total_weight(h) == 3
    assert brute_force_solve(h, b).total_weight(h) == 3


def test_solve_infeasible_with_certificates():
    h = mixed("uv", [("a", "u", "v", 1)])
    b = RootBounds(1, {"v": 1}, {"u": 1, "v": 1})
    res = solve_min_weight(h, b)
    assert isinstance(res, InfeasibleInstance)
    assert SubpartitionF((frozenset("u"),)) in res.certificates
    assert all(c.is_violated(h, b) for c in res.certificates)
    assert check_characterization_bruteforce(h, b) == SubpartitionF((frozenset("u"),))
    assert brute_force_solve(h, b) is None


def test_single_vertex():
    h = mixed("r")
    for k in (2, 3):
        b = RootBounds(k, {"r": k}, {"r": k})
        p = solve_min_weight(h, b)
        assert [t.root for t in p.arborescences] == ["r"] * k
        assert all(t.edges == () for t in p.arborescences)
        assert p.total_weight(h) == 0
        assert verify_packing(h, b, p) == []
    assert brute_force_solve(h, RootBounds(2, {"r": 2}, {"r": 2})).arborescences == (
        Arborescence("r", ()),
        Arborescence("r", ()),
    )


def test_brute_force_infeasible_isolated():
    assert brute_force_solve(mixed("uv"), RootBounds(1)) is None


def test_brute_force_limits():
    with pytest.raises(TooLarge):
        brute_force_solve(mixed("abcde"), RootBounds(1))


def test_fg_violation_reported_first():
    h = mixed("uv", hyperedges=[("e", "uv")])
    b = RootBounds(1, {"v": 2}, {"v": 1})
    res = solve_min_weight(h, b)
    assert res.certificate == FgViolation("v")


def test_dual_set_certificate():
    # root bounds are satisfiable but nothing enters w
    h = mixed("uvw", [("a", "u", "v"), ("b", "v", "u")], [("e", "uv")])
    b = RootBounds(1)
    res = solve_min_weight(h, b)
    assert res.certificate == DualSet(("a", "b", "e@u", "e@v"), 1, 2)
    assert all(c.is_violated(h, b) for c in res.certificates)
    assert not DualSet(("a",), 1, 2).is_violated(h, b)


def test_gpc_certificate():
    h = mixed("uv", [("a", "u", "v")])
    b = RootBounds(1, {}, {"u": 0, "v": 0})
    res = solve_min_weight(h, b)
    assert res.certificate == GpcViolation("gpc2", side="lower")
    assert res.certificate.is_violated(h, b)
    assert not GpcViolation("gpc1", vertex="v").is_violated(h, b)


# -- cut condition and decomposition ------------------------------------------


def test_edmonds_examples():
    D = directed_extension(mixed("rx", [("a", "r", "x")]))
    assert edmonds_condition(D, [0], ["r"])
    assert not edmonds_condition(D, [], ["r"])
    assert edmonds_condition(directed_extension(mixed("r")), [], ["r"])


def test_edmonds_extra_class():
    D = directed_extension(mixed("rx", [("a", "r", "x")]))
    assert not edmonds_condition(D, [], [], extra_class=["r"])
    assert edmonds_condition(D, [0], [], extra_class=["r"])


def test_decompose_examples():
    D = directed_extension(mixed("rx", [("a", "r", "x")]))
    (t,) = decompose_to_arborescences(D, [0], ["r"])
    assert t.root == "r" and t.edges == (TrimmedEdge(0, "r", "x"),)
    D = directed_extension(mixed("rx", [("a", "r", "x"), ("b", "r", "x")]))
    ts = decompose_to_arborescences(D, [0, 1], ["r", "r"])
    assert sorted(te.ref for t in ts for te in t.edges) == [0, 1]


def test_decompose_rejects_bad_input():
    D = directed_extension(mixed("rx", [("a", "r", "x")]))
    with pytest.raises(DecompositionFailed):
        decompose_to_arborescences(D, [0], ["x"])
    with pytest.raises(DecompositionFailed):
        decompose_to_arborescences(D, [], ["r"])


def test_decompose_trims_hyperarc_at_tree_vertex():
    D = directed_extension(mixed("rxy", [("a", "r", "x"), ("b", "xr", "y")]))
    (t,) = decompose_to_arborescences(D, [0, 1], ["r"])
    assert t.edges == (TrimmedEdge(0, "r", "x"), TrimmedEdge(1, "r", "y"))


def test_map_back():
    h = mixed("ab", hyperedges=[("e", "ab")])
    D = directed_extension(h)
    p = map_back(h, D, [Arborescence("a", (TrimmedEdge(D.by_name["e@b"], "a", "b"),))])
    assert p.arborescences[0].edges == (TrimmedEdge("e", "a", "b"),)
    with pytest.raises(BundleReused) as info:
        map_back(
            h,
            D,
            [
                Arborescence("a", (TrimmedEdge(D.by_name["e@b"], "a", "b"),)),
                Arborescence("b", (TrimmedEdge(D.by_name["e@a"], "b", "a"),)),
            ],
        )
    assert info.value.edge_id == "e"


def test_map_back_identity_on_dypergraphs():
    h = mixed("ab", [("x", "a", "b")])
    D = directed_extension(h)
    p = map_back(h, D, [Arborescence("a", (TrimmedEdge(0, "a", "b"),))])
    assert p.arborescences[0].edges == (TrimmedEdge("x", "a", "b"),)


# -- verify_packing ------------------------------------------------------------


def test_verify_reuse_and_root_bounds():
    h = mixed("ab", hyperedges=[("e", "ab")])
    reuse = Packing(
        (Arborescence("a", (TrimmedEdge("e", "a", "b"),)), Arborescence("b", (TrimmedEdge("e", "b", "a"),)))
    )
    assert "DisjointnessViolation" in kinds(verify_packing(h, RootBounds(2), reuse))
    single = Packing((Arborescence("a", (TrimmedEdge("e", "a", "b"),)),))
    problems = verify_packing(h, RootBounds(1, {"b": 1}), single)
    assert kinds(problems) == {"RootBoundViolation"}
    assert problems[0].subject == "b"


def test_verify_structural_problems():
    h = mixed("abc", [("x", "a", "b"), ("y", "ab", "c")])
    b = RootBounds(1)
    assert "UnknownEdge" in kinds(verify_packing(h, b, Packing((Arborescence("a", (TrimmedEdge("zz", "a", "b"), TrimmedEdge("y", "a", "c"))),))))
    assert "BadTrim" in kinds(verify_packing(h, b, Packing((Arborescence("a", (TrimmedEdge("x", "b", "a"), TrimmedEdge("y", "a", "c"))),))))
    assert "EdgeCount" in kinds(verify_packing(h, b, Packing((Arborescence("a", (TrimmedEdge("x", "a", "b"),)),))))
    assert "ArborescenceCount" in kinds(verify_packing(h, RootBounds(2), Packing((Arborescence("a", (TrimmedEdge("x", "a", "b"), TrimmedEdge("y", "a", "c"))),))))
    assert verify_packing(h, b, Packing((Arborescence("a", (TrimmedEdge("x", "a", "b"), TrimmedEdge("y", "b", "c"))),))) == []


def test_verify_not_spanning():
    # two arcs into a 2-cycle detached from the root
    h = mixed("rxy", [("a", "y", "x"), ("b", "x", "y")])
    p = Packing((Arborescence("r", (TrimmedEdge("a", "y", "x"), TrimmedEdge("b", "x", "y"))),))
    assert "NotSpanning" in kinds(verify_packing(h, RootBounds(1), p))


# -- properties over random instances -----------------------------------------


@pytest.mark.parametrize("seed", range(40))
def test_solver_agrees_with_oracles(seed):
    h, b = biased_instance(seed, max_vertices=4, max_edges=6)
    res = solve_min_weight(h, b)
    verdict = check_characterization_bruteforce(h, b)
    best = brute_force_solve(h, b)
    if isinstance(res, Packing):
        assert verdict is None and best is not None
        assert verify_packing(h, b, res) == []
        assert res.total_weight(h) == best.total_weight(h)
    else:
        assert verdict is not None and best is None
        assert all(c.is_violated(h, b) for c in res.certificates)


@pytest.mark.parametrize("seed", range(15))
def test_count_oracle_same_weight(seed):
    h, b = biased_instance(500 + seed)
    a = solve_min_weight(h, b, oracle="union")
    c = solve_min_weight(h, b, oracle="count")
    assert type(a) is type(c)
    if isinstance(a, Packing):
        assert a.total_weight(h) == c.total_weight(h)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(-5, 5))
def test_constant_shift(seed, c):
    # every packing uses exactly k(|V|-1) edges, so a shift moves all packings alike
    h, b = biased_instance(seed, max_vertices=4, max_edges=6)
    base = solve_min_weight(h, b, certify=False)
    if not isinstance(base, Packing):
        return
    shifted = {e.id: e.weight + c for e in (*h.dyperedges, *h.hyperedges)}
    other = solve_min_weight(h, b, weights=shifted, certify=False)
    n_edges = b.k * (len(h.vertices) - 1)
    assert other.total_weight(h, shifted) == base.total_weight(h) + c * n_edges


@pytest.mark.parametrize("seed", range(10))
def test_trace_grows_one_arc_at_a_time(seed):
    h, b = biased_instance(seed)
    sizes = []
    res = solve_min_weight(h, b, trace=lambda step, current, path: sizes.append(len(current)), certify=False)
    assert sizes == list(range(1, len(sizes) + 1))
    if isinstance(res, Packing):
        assert sizes[-1:] == [b.k * (len(h.vertices) - 1)] or len(h.vertices) == 1


def test_exact_mode_fractional_weights():
    h = mixed("ab", hyperedges=[("e1", "ab", 0.1), ("e2", "ab", 0.3)], dyperedges=[("x", "a", "b", 0.2)])
    p = solve_min_weight(h, RootBounds(2), exact=True)
    assert sorted(p.edge_ids()) == ["e1", "x"]
    assert abs(p.total_weight(h) - 0.3) <= 1e-12
