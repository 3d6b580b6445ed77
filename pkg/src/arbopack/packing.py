"""Flexible-root packings of spanning mixed hyperarborescences.

Pipeline of :func:`solve_min_weight`:

1. build the root-bound matroid on the directed extension; if its
   existence conditions fail, no packing exists;
2. find a minimum-weight common independent set of size ``k(|V|-1)`` of
   that matroid and the extended k-hyperforest matroid, each orientation of
   a hyperedge carrying the hyperedge's weight;
3. root vertex ``v`` ``k - indegree(v)`` times and peel the arc set into
   arborescences;
4. replace orientations by their hyperedges.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import intersection
from .hyperforest import ExtendedHyperforestMatroid
from .hypergraph import (
    DirectedExtension,
    Dyperedge,
    MixedHypergraph,
    Oriented,
    RootBounds,
    TooLarge,
    directed_extension,
    enumerate_subpartitions,
    limit,
    validate_instance,
)
from .matroid import (
    Gpc1Violated,
    Gpc2Violated,
    build_root_bound_matroid,
    rank_via_oracle,
)

__all__ = [
    "FgViolation",
    "SubpartitionF",
    "SubpartitionG",
    "GpcViolation",
    "DualSet",
    "InfeasibleInstance",
    "TrimmedEdge",
    "Arborescence",
    "Packing",
    "Violation",
    "DecompositionFailed",
    "BundleReused",
    "check_characterization_bruteforce",
    "edmonds_condition",
    "decompose_to_arborescences",
    "map_back",
    "verify_packing",
    "brute_force_solve",
    "solve_min_weight",
    "lifted_weights",
]

log = logging.getLogger(__name__)

EXACT_SCALE = 10**6


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class FgViolation:
    vertex: str

    def is_violated(self, h: MixedHypergraph, b: RootBounds) -> bool:
        return b.lower(self.vertex) > b.upper(self.vertex)


def _cover_count(h: MixedHypergraph, classes) -> int:
    masks = [h.mask(X) for X in classes]
    count = 0
    for a in h.dyperedges:
        head, tail = 1 << h.index[a.head], h.mask(a.tail)
        if any(head & X and tail & ~X for X in masks):
            count += 1
    for e in h.hyperedges:
        m = h.mask(e.vertices)
        if any(m & X and m & ~X for X in masks):
            count += 1
    return count


@dataclass(frozen=True)
class SubpartitionF:
    """``e(P) < k(|P| - 1) + f(V - ∪P)``."""

    classes: tuple

    def sides(self, h: MixedHypergraph, b: RootBounds) -> tuple:
        covered = set().union(*self.classes)
        outside = sum(b.lower(v) for v in h.vertices if v not in covered)
        return _cover_count(h, self.classes), b.k * (len(self.classes) - 1) + outside

    def is_violated(self, h, b) -> bool:
        lhs, rhs = self.sides(h, b)
        return lhs < rhs


@dataclass(frozen=True)
class SubpartitionG:
    """``e(P) < k|P| - g(∪P)``."""

    classes: tuple

    def sides(self, h: MixedHypergraph, b: RootBounds) -> tuple:
        covered = set().union(*self.classes)
        return _cover_count(h, self.classes), b.k * len(self.classes) - sum(b.upper(v) for v in covered)

    def is_violated(self, h, b) -> bool:
        lhs, rhs = self.sides(h, b)
        return lhs < rhs


@dataclass(frozen=True)
class GpcViolation:
    """The root-bound matroid does not exist.

    ``condition`` is ``"gpc1"`` (per vertex, ``vertex`` set) or ``"gpc2"``
    (global, ``side`` is ``"lower"`` or ``"upper"``).
    """

    condition: str
    vertex: Optional[str] = None
    side: Optional[str] = None

    @classmethod
    def from_error(cls, exc) -> "GpcViolation":
        if isinstance(exc, Gpc1Violated):
            return cls("gpc1", vertex=exc.vertex)
        return cls("gpc2", side=exc.side)

    def is_violated(self, h: MixedHypergraph, b: RootBounds) -> bool:
        k = b.k
        D = directed_extension(h)
        indeg = Counter(arc.head for arc in D.arcs)
        if self.condition == "gpc1":
            v = self.vertex
            return max(k - b.upper(v), 0) > min(k - b.lower(v), indeg[v])
        mu = k * (len(h.vertices) - 1)
        if self.side == "lower":
            return sum(max(k - b.upper(v), 0) for v in h.vertices) > mu
        return mu > sum(min(k - b.lower(v), indeg[v]) for v in h.vertices)


@dataclass(frozen=True)
class DualSet:
    """Arcs ``Z`` of the directed extension with ``r1(Z) + r2(S - Z) < k(|V| - 1)``.

    ``elements`` are arc names (``id`` or ``id@head``).
    """

    elements: tuple
    rank_sum: int
    target: int

    def is_violated(self, h: MixedHypergraph, b: RootBounds) -> bool:
        D = directed_extension(h)
        m1 = ExtendedHyperforestMatroid(D, b.k)
        m2 = build_root_bound_matroid(D, b)
        Z = sorted(D.by_name[name] for name in self.elements)
        rest = [i for i in range(len(D.arcs)) if i not in set(Z)]
        total = rank_via_oracle(m1, Z) + rank_via_oracle(m2, rest)
        return total == self.rank_sum and total < b.k * (len(h.vertices) - 1)


Certificate = Union[FgViolation, SubpartitionF, SubpartitionG, GpcViolation, DualSet]


@dataclass(frozen=True)
class InfeasibleInstance:
    """No flexible packing exists.  ``certificates`` are in preference order."""

    certificates: tuple

    @property
    def certificate(self):
        return self.certificates[0]


def check_characterization_bruteforce(h: MixedHypergraph, b: RootBounds) -> Certificate | None:
    """First violated condition of the characterization, or ``None`` if all hold.

    Checks ``f <= g`` vertex by vertex, then for each subpartition ``P`` in
    :func:`enumerate_subpartitions` order the two cut conditions
    ``e(P) >= k(|P|-1) + f(V - ∪P)`` and ``e(P) >= k|P| - g(∪P)``.
    """
    validate_instance(h, b)
    for v in h.vertices:
        if b.lower(v) > b.upper(v):
            return FgViolation(v)
    k = b.k
    f_total = sum(b.lower(v) for v in h.vertices)
    for P in enumerate_subpartitions(h.vertices):
        e = _cover_count(h, P)
        covered = set().union(*P)
        if e < k * (len(P) - 1) + f_total - sum(b.lower(v) for v in covered):
            return SubpartitionF(P)
        if e < k * len(P) - sum(b.upper(v) for v in covered):
            return SubpartitionG(P)
    return None


# -- packings -----------------------------------------------------------------


@dataclass(frozen=True)
class TrimmedEdge:
    """An edge used by an arborescence, trimmed to the arc ``tail -> head``.

    ``ref`` is an edge id for packings of a mixed hypergraph, or an arc index
    while working on the directed extension.
    """

    ref: Union[str, int]
    tail: str
    head: str


@dataclass(frozen=True)
class Arborescence:
    root: str
    edges: tuple = ()


@dataclass(frozen=True)
class Packing:
    arborescences: tuple = ()

    def root_counts(self) -> Counter:
        return Counter(t.root for t in self.arborescences)

    def edge_ids(self) -> list:
        return [te.ref for t in self.arborescences for te in t.edges]

    def total_weight(self, h: MixedHypergraph, weights: Mapping | None = None):
        if weights is None:
            return sum(h.weight(i) for i in self.edge_ids())
        return sum(weights[i] for i in self.edge_ids())


class DecompositionFailed(RuntimeError):
    pass


class BundleReused(ValueError):
    def __init__(self, edge_id: str):
        self.edge_id = edge_id
        super().__init__(f"two orientations of hyperedge {edge_id!r} are used")


def _roots_outside(root_masks: Sequence[int], X: int) -> int:
    return sum(1 for r in root_masks if not r & X)


def edmonds_condition(
    D: DirectedExtension,
    Z: Iterable[int],
    R: Iterable[str],
    extra_class: Iterable[str] | None = None,
) -> bool:
    """For every nonempty ``X ⊆ V``: arcs of ``Z`` entering ``X`` number at least
    the roots of ``R`` outside ``X``, plus one if ``X`` misses ``extra_class``.

    ``extra_class`` is the vertex set of a partially grown arborescence whose
    root has already been taken out of ``R``.
    """
    vertices = D.vertices
    n = len(vertices)
    cap = limit("subset")
    if n > cap:
        raise TooLarge(f"{n} vertices exceeds the subset limit {cap}")
    src = D.source
    arcs = [(1 << D.head_index[i], D.tail_mask[i]) for i in Z]
    root_masks = [1 << src.index[r] for r in R]
    extra = src.mask(extra_class) if extra_class is not None else 0
    for X in range(1, 1 << n):
        need = _roots_outside(root_masks, X)
        if extra and not extra & X:
            need += 1
        if need == 0:
            continue
        entering = sum(1 for head, tail in arcs if head & X and tail & ~X)
        if entering < need:
            return False
    return True


def decompose_to_arborescences(D: DirectedExtension, Z: Iterable[int], R: Sequence[str]) -> list:
    """Split arc set ``Z`` into spanning arborescences, the ``i``-th rooted at ``R[i]``.

    Each arborescence is grown from its root.  An arc leaving the current
    tree is committed only if the leftover arcs still satisfy
    :func:`edmonds_condition` for the remaining roots with the enlarged tree
    as ``extra_class``; the arc is trimmed to start at the canonically
    smallest tree vertex in its tail.
    """
    Z = sorted(set(Z))
    R = list(R)
    src = D.source
    n = len(D.vertices)
    if len(Z) != len(R) * (n - 1):
        raise DecompositionFailed(f"|Z| = {len(Z)} but {len(R)} arborescences need {len(R) * (n - 1)}")
    if not edmonds_condition(D, Z, R):
        raise DecompositionFailed("arc set does not satisfy the cut condition for these roots")
    full = (1 << n) - 1
    remaining = list(Z)
    result = []
    for pos, root in enumerate(R):
        rest_roots = R[pos + 1 :]
        tree = 1 << src.index[root]
        used = []
        while tree != full:
            for a in remaining:
                head = D.head_index[a]
                if tree >> head & 1 or not D.tail_mask[a] & tree:
                    continue
                grown = tree | 1 << head
                left = [x for x in remaining if x != a]
                if edmonds_condition(D, left, rest_roots, src.unmask(grown)):
                    break
            else:
                raise DecompositionFailed(f"no admissible arc to extend the tree rooted at {root!r}")
            tail_vertex = next(v for i, v in enumerate(src.vertices) if (D.tail_mask[a] & tree) >> i & 1)
            used.append(TrimmedEdge(a, tail_vertex, D.arcs[a].head))
            remaining = left
            tree = grown
        result.append(Arborescence(root, tuple(used)))
    return result


def map_back(h: MixedHypergraph, D: DirectedExtension, arborescences: Iterable[Arborescence]) -> Packing:
    """Replace arc indices by edge ids; orientations become their hyperedge."""
    seen_bundles = set()
    out = []
    for t in arborescences:
        edges = []
        for te in t.edges:
            tag = D.arcs[te.ref].tag
            if isinstance(tag, Oriented):
                if tag.edge_id in seen_bundles:
                    raise BundleReused(tag.edge_id)
                seen_bundles.add(tag.edge_id)
            edges.append(TrimmedEdge(tag.edge_id, te.tail, te.head))
        out.append(Arborescence(t.root, tuple(edges)))
    return Packing(tuple(out))


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: object
    detail: str = ""

    def __str__(self):
        return f"{self.kind} {self.subject}: {self.detail}" if self.detail else f"{self.kind} {self.subject}"


def verify_packing(h: MixedHypergraph, b: RootBounds, p: Packing) -> list:
    """All violations of the packing and arborescence definitions (empty list means valid)."""
    out: list = []
    known = set(h.vertices)
    n = len(h.vertices)
    if len(p.arborescences) != b.k:
        out.append(Violation("ArborescenceCount", len(p.arborescences), f"expected k = {b.k}"))
    usage = Counter()
    for pos, t in enumerate(p.arborescences):
        label = f"arborescence {pos} (root {t.root})"
        if t.root not in known:
            out.append(Violation("UnknownVertex", t.root, label))
            continue
        if len(t.edges) != n - 1:
            out.append(Violation("EdgeCount", label, f"{len(t.edges)} edges, expected {n - 1}"))
        indeg = Counter()
        children: dict = {}
        for te in t.edges:
            usage[te.ref] += 1
            edge = h.edges_by_id.get(te.ref)
            if edge is None:
                out.append(Violation("UnknownEdge", te.ref, label))
                continue
            if te.tail not in known or te.head not in known:
                out.append(Violation("UnknownVertex", te.ref, f"{te.tail}->{te.head}"))
                continue
            if isinstance(edge, Dyperedge):
                ok = te.head == edge.head and te.tail in edge.tail
            else:
                ok = te.tail != te.head and {te.tail, te.head} <= edge.vertices
            if not ok:
                out.append(Violation("BadTrim", te.ref, f"{te.tail}->{te.head} is not a trimming"))
            indeg[te.head] += 1
            children.setdefault(te.tail, []).append(te.head)
        if indeg[t.root]:
            out.append(Violation("InDegree", t.root, f"{label}: root has in-degree {indeg[t.root]}"))
        for v in h.vertices:
            if v != t.root and indeg[v] != 1:
                out.append(Violation("InDegree", v, f"{label}: in-degree {indeg[v]}"))
        reached = {t.root}
        stack = [t.root]
        while stack:
            for w in children.get(stack.pop(), ()):
                if w not in reached:
                    reached.add(w)
                    stack.append(w)
        missing = [v for v in h.vertices if v not in reached]
        if missing:
            out.append(Violation("NotSpanning", label, f"unreached {missing}"))
    for ref, times in usage.items():
        if times > 1:
            out.append(Violation("DisjointnessViolation", ref, f"used {times} times"))
    roots = p.root_counts()
    for v in h.vertices:
        if not b.lower(v) <= roots[v] <= b.upper(v):
            out.append(
                Violation("RootBoundViolation", v, f"root of {roots[v]}, allowed [{b.lower(v)}, {b.upper(v)}]")
            )
    return out


# -- brute force ----------------------------------------------------------------


def _trims(edge) -> list:
    if isinstance(edge, Dyperedge):
        return [(u, edge.head) for u in sorted(edge.tail)]
    return [(u, v) for u in sorted(edge.vertices) for v in sorted(edge.vertices) if u != v]


def _trim_roots(vertices: Sequence[str], edges: Sequence, cache: dict) -> dict:
    """root -> trimmed arcs, for every root at which ``edges`` trim to a spanning arborescence."""
    key = tuple(e.id for e in edges)
    if key in cache:
        return cache[key]
    found: dict = {}
    for choice in itertools.product(*(_trims(e) for e in edges)):
        heads = [v for _, v in choice]
        if len(set(heads)) != len(heads):
            continue
        roots = [v for v in vertices if v not in heads]
        if len(roots) != 1 or roots[0] in found:
            continue
        root = roots[0]
        parent = {v: u for u, v in choice}
        ok = True
        for v in vertices:
            seen = set()
            while v != root and ok:
                if v in seen:
                    ok = False
                seen.add(v)
                v = parent[v]
        if ok:
            found[root] = tuple(TrimmedEdge(e.id, u, v) for e, (u, v) in zip(edges, choice))
    cache[key] = found
    return found


def brute_force_solve(h: MixedHypergraph, b: RootBounds, weights: Mapping | None = None) -> Packing | None:
    """Minimum-weight flexible packing by exhaustive search, or ``None``.

    Tries every assignment of edges to the ``k`` arborescences (or to no
    arborescence), every trimming and every root choice.  Meant as a test
    oracle for ``|V| <= 4``, at most 6 edges and ``k <= 3``.
    """
    edges = [*h.dyperedges, *h.hyperedges]
    n, k = len(h.vertices), b.k
    if n > 4 or len(edges) > 6 or k > 3:
        raise TooLarge("brute_force_solve handles |V| <= 4, |A|+|E| <= 6, k <= 3")
    w = {e.id: (weights[e.id] if weights is not None else e.weight) for e in edges}
    cache: dict = {}
    best = None
    for assign in itertools.product(range(k + 1), repeat=len(edges)):
        groups = [[e for e, a in zip(edges, assign) if a == i] for i in range(k)]
        if any(len(g) != n - 1 for g in groups):
            continue
        options = [_trim_roots(h.vertices, g, cache) for g in groups]
        if not all(options):
            continue
        weight = sum(w[e.id] for e, a in zip(edges, assign) if a < k)
        if best is not None and weight >= best[0]:
            continue
        for roots in itertools.product(*(sorted(o) for o in options)):
            counts = Counter(roots)
            if all(b.lower(v) <= counts[v] <= b.upper(v) for v in h.vertices):
                packing = Packing(tuple(Arborescence(r, o[r]) for r, o in zip(roots, options)))
                best = (weight, packing)
                break
    return None if best is None else best[1]


# -- solver -------------------------------------------------------------------


def _scaled(w) -> int:
    return round(Fraction(str(w)) * EXACT_SCALE)


def lifted_weights(D: DirectedExtension, weights: Mapping | None = None, exact: bool = False) -> list:
    """Arc weights: each orientation inherits its hyperedge's weight."""
    out = []
    for arc in D.arcs:
        w = arc.weight if weights is None else weights[arc.tag.edge_id]
        out.append(_scaled(w) if exact else w)
    return out


def solve_min_weight(
    h: MixedHypergraph,
    b: RootBounds,
    weights: Mapping | None = None,
    exact: bool = False,
    trace=None,
    certify: bool = True,
    oracle: str = "union",
) -> Packing | InfeasibleInstance:
    """Minimum-weight ``(k, f, g)``-flexible packing, or a proof that none exists.

    ``weights`` maps edge ids to reals and defaults to the weights stored on
    the edges.  With ``exact=True`` weights are compared as integers scaled
    by ``10**6``.  When ``certify`` is set and the instance is small enough,
    an infeasible answer also carries a violated subpartition.  ``oracle``
    selects the k-sum independence test (``"union"`` or ``"count"``).
    """
    validate_instance(h, b)
    k = b.k
    n = len(h.vertices)
    certs: list = [FgViolation(v) for v in h.vertices if b.lower(v) > b.upper(v)][:1]
    D = directed_extension(h)
    try:
        m2 = build_root_bound_matroid(D, b)
    except (Gpc1Violated, Gpc2Violated) as exc:
        certs.append(GpcViolation.from_error(exc))
    if not certs:
        m1 = ExtendedHyperforestMatroid(D, k, oracle)
        mu = k * (n - 1)
        w = lifted_weights(D, weights, exact)
        res = intersection.min_weight_common_independent_of_size(
            m1, m2, w, mu, trace=trace, tol=0 if exact else 1e-9
        )
        if isinstance(res, intersection.WeightedResult):
            chosen = sorted(res.common_set)
            indeg = Counter(D.arcs[i].head for i in chosen)
            roots = [v for v in h.vertices for _ in range(k - indeg[v])]
            packing = map_back(h, D, decompose_to_arborescences(D, chosen, roots))
            problems = verify_packing(h, b, packing)
            if problems:
                raise DecompositionFailed("; ".join(map(str, problems)))
            log.info("packing found, weight %s", packing.total_weight(h, weights))
            return packing
        names = tuple(D.arcs[i].name for i in sorted(res.dual_certificate))
        certs.append(DualSet(names, res.best_size, res.target))
    if certify and n <= limit("subpartition"):
        extra = check_characterization_bruteforce(h, b)
        if extra is not None and extra not in certs:
            certs.append(extra)
    return InfeasibleInstance(tuple(certs))
