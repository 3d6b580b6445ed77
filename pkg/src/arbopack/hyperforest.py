"""Hyperforest (Lorea) matroids, their k-sums, and the extended version on a directed extension.

A set ``Z`` of hyperedges is a hyperforest when every nonempty ``Z' ⊆ Z``
spans more vertices than it has members.  The fast test used here is a
matching criterion: ``Z`` is a hyperforest iff, for every vertex ``v`` it
covers, each member of ``Z`` can be matched to a distinct covered vertex
other than ``v`` (Hall's condition on ``V(Z) - v`` is exactly the strict
inequality above for the subsets containing ``v``).  Giving every vertex
capacity ``k`` instead of 1 tests ``|Z'| <= k(|V(Z')| - 1)``, which is
independence in the k-sum.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Sequence

from .hypergraph import DirectedExtension, Hypergraph, enumerate_partitions
from .matroid import rank_via_oracle

__all__ = [
    "is_hyperforest",
    "is_hyperforest_bruteforce",
    "is_partition_connected",
    "is_partition_connected_bruteforce",
    "augmented_hypergraph",
    "hyperforest_cover",
    "k_hyperforest_is_independent",
    "k_hyperforest_rank_bruteforce",
    "extended_is_independent",
    "extended_rank_bruteforce",
    "LoreaMatroid",
    "KHyperforestMatroid",
    "ExtendedHyperforestMatroid",
]


def _bits(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _saturates(edge_masks: Sequence[int], allowed: int, capacity: int) -> bool:
    """Can every edge be assigned a vertex of ``allowed`` inside it, each vertex taking at most ``capacity``?"""
    if not edge_masks:
        return True
    if capacity <= 0 or len(edge_masks) > capacity * bin(allowed).count("1"):
        return False
    options = [_bits(m & allowed) for m in edge_masks]
    load: dict = {}

    def place(i: int, seen: set) -> bool:
        for v in options[i]:
            if v in seen:
                continue
            seen.add(v)
            holders = load.setdefault(v, [])
            if len(holders) < capacity:
                holders.append(i)
                return True
            for j in holders:
                if place(j, seen):
                    holders.remove(j)
                    holders.append(i)
                    return True
        return False

    return all(place(i, set()) for i in range(len(edge_masks)))


def _count_independent(edge_masks: Sequence[int], k: int) -> bool:
    """``|Z'| <= k(|V(Z')| - 1)`` for every nonempty ``Z'``; ``k = 1`` is the Lorea condition."""
    if not edge_masks:
        return True
    if k <= 0:
        return False
    cover = 0
    for m in edge_masks:
        cover |= m
    if len(edge_masks) > k * (bin(cover).count("1") - 1):
        return False
    return all(_saturates(edge_masks, cover & ~(1 << v), k) for v in _bits(cover))


def is_hyperforest(H: Hypergraph, Z: Iterable[int]) -> bool:
    """Lorea independence of the edges ``Z`` (indices into ``H.edges``)."""
    masks = H.masks
    return _count_independent([masks[i] for i in dict.fromkeys(Z)], 1)


def is_hyperforest_bruteforce(H: Hypergraph, Z: Iterable[int]) -> bool:
    """Definitional check over every nonempty subset of ``Z``."""
    masks = [H.masks[i] for i in dict.fromkeys(Z)]
    for r in range(1, len(masks) + 1):
        for sub in combinations(masks, r):
            cover = 0
            for m in sub:
                cover |= m
            if bin(cover).count("1") <= r:
                return False
    return True


def _crossing(mask: int, class_masks: Sequence[int]) -> bool:
    return not any(mask & ~c == 0 for c in class_masks)


def is_partition_connected(H: Hypergraph) -> bool:
    """Greedy Lorea rank of all edges equals ``|V| - 1``."""
    if len(H.vertices) <= 1:
        return True
    return rank_via_oracle(LoreaMatroid(H), range(len(H.edges))) == len(H.vertices) - 1


def is_partition_connected_bruteforce(H: Hypergraph) -> bool:
    """``e(P) >= |P| - 1`` checked over every partition of the vertex set."""
    idx = H.index
    for P in enumerate_partitions(H.vertices):
        class_masks = [sum(1 << idx[v] for v in X) for X in P]
        crossing = sum(1 for m in H.masks if _crossing(m, class_masks))
        if crossing < len(P) - 1:
            return False
    return True


def augmented_hypergraph(H: Hypergraph, Z: Sequence[int]) -> Hypergraph:
    """``Z`` plus ``|V| - 1 - |Z|`` copies of the full vertex set (requires ``|Z| <= |V| - 1``)."""
    Z = list(dict.fromkeys(Z))
    pad = len(H.vertices) - 1 - len(Z)
    if pad < 0:
        raise ValueError("augmentation needs |Z| <= |V| - 1")
    full = frozenset(H.vertices)
    return Hypergraph(H.vertices, [H.edges[i] for i in Z] + [full] * pad)


def hyperforest_cover(H: Hypergraph, Z: Iterable[int], k: int) -> list | None:
    """Split ``Z`` into ``k`` hyperforests, or return ``None`` if impossible.

    Elements are inserted one at a time.  When no class accepts the new
    element directly, a breadth-first search over single exchanges
    (``u`` enters class ``c`` and evicts ``z``) looks for a shortest chain
    ending in a class that accepts its last element outright; applying a
    shortest chain keeps every class independent.
    """
    masks = H.masks
    Z = list(dict.fromkeys(Z))
    if not Z:
        return [[] for _ in range(k)]
    if k <= 0:
        return None
    classes: list = [[] for _ in range(k)]
    color: dict = {}

    def independent(items) -> bool:
        return _count_independent([masks[i] for i in items], 1)

    for x in Z:
        parent: dict = {x: None}
        queue = deque([x])
        end = None
        while queue and end is None:
            u = queue.popleft()
            for c in range(k):
                if color.get(u) == c:
                    continue
                members = classes[c]
                if independent([*members, u]):
                    end = (u, c)
                    break
                for z in members:
                    if z in parent:
                        continue
                    if independent([*(m for m in members if m != z), u]):
                        parent[z] = (u, c)
                        queue.append(z)
        if end is None:
            return None
        # walk back from the free end, moving each element into the class of its successor
        u, c = end
        moves = [(u, c)]
        while parent[u] is not None:
            prev, pc = parent[u]
            moves.append((prev, pc))
            u = prev
        for elem, _ in moves:
            if elem in color:
                classes[color[elem]].remove(elem)
        for elem, c in moves:
            classes[c].append(elem)
            color[elem] = c
        if not all(independent(cls) for cls in classes):
            raise RuntimeError("exchange chain produced a dependent class")
    return [sorted(cls) for cls in classes]


def k_hyperforest_is_independent(H: Hypergraph, Z: Iterable[int], k: int, method: str = "union") -> bool:
    """Can ``Z`` be split into ``k`` hyperforests?

    ``method="union"`` runs the exchange-chain partitioner
    (:func:`hyperforest_cover`); ``method="count"`` uses the capacity-``k``
    matching test, which gives the same answers at a fraction of the cost.
    """
    Z = list(dict.fromkeys(Z))
    if method == "union":
        return hyperforest_cover(H, Z, k) is not None
    if method == "count":
        return _count_independent([H.masks[i] for i in Z], k)
    raise ValueError(f"unknown method {method!r}")


def k_hyperforest_rank_bruteforce(H: Hypergraph, Z: Iterable[int], k: int) -> int:
    """``min over partitions P of V`` of ``e_Z(P) + k(|V| - |P|)``."""
    idx = H.index
    masks = [H.masks[i] for i in dict.fromkeys(Z)]
    n = len(H.vertices)
    best = None
    for P in enumerate_partitions(H.vertices):
        class_masks = [sum(1 << idx[v] for v in X) for X in P]
        value = sum(1 for m in masks if _crossing(m, class_masks)) + k * (n - len(P))
        best = value if best is None else min(best, value)
    return best if best is not None else 0


def _extended_image(D: DirectedExtension, Z: Iterable[int]):
    """Vertex masks of the underlying hyperedges, or ``None`` if a bundle is hit twice."""
    bundle_of = D.bundle_of
    seen_bundles = set()
    out = []
    for i in dict.fromkeys(Z):
        e = bundle_of[i]
        if e is not None:
            if e in seen_bundles:
                return None
            seen_bundles.add(e)
        out.append(D.vertex_mask[i])
    return out


def extended_is_independent(D: DirectedExtension, Z: Iterable[int], k: int, method: str = "union") -> bool:
    """Independence in the extended k-hyperforest matroid on the arcs of ``D``.

    Two orientations of the same hyperedge are parallel, so any set using
    both is dependent; otherwise each arc stands for its underlying
    hyperedge and the k-sum test decides.
    """
    image = _extended_image(D, Z)
    if image is None:
        return False
    if method == "count":
        return _count_independent(image, k)
    H = Hypergraph(D.vertices, [D.source.unmask(m) for m in image])
    return k_hyperforest_is_independent(H, range(len(image)), k, method)


def extended_rank_bruteforce(D: DirectedExtension, Z: Iterable[int], k: int) -> int:
    """Minimum over partitions ``P`` of ``|Z ∩ A(P)| + #{e ∈ E(P) : Z meets A_e} + k(|V| - |P|)``."""
    Z = list(dict.fromkeys(Z))
    idx = D.source.index
    n = len(D.vertices)
    best = None
    for P in enumerate_partitions(D.vertices):
        class_masks = [sum(1 << idx[v] for v in X) for X in P]
        originals = 0
        bundles = set()
        for i in Z:
            if not _crossing(D.vertex_mask[i], class_masks):
                continue
            e = D.bundle_of[i]
            if e is None:
                originals += 1
            else:
                bundles.add(e)
        value = originals + len(bundles) + k * (n - len(P))
        best = value if best is None else min(best, value)
    return best if best is not None else 0


class LoreaMatroid:
    def __init__(self, H: Hypergraph):
        self.H = H
        self.ground_size = len(H.edges)

    def is_independent(self, subset) -> bool:
        return is_hyperforest(self.H, subset)


class KHyperforestMatroid:
    def __init__(self, H: Hypergraph, k: int, method: str = "union"):
        self.H = H
        self.k = k
        self.method = method
        self.ground_size = len(H.edges)

    def is_independent(self, subset) -> bool:
        return k_hyperforest_is_independent(self.H, subset, self.k, self.method)


class ExtendedHyperforestMatroid:
    """Oracle for the extended k-hyperforest matroid; answers are memoised per set."""

    def __init__(self, D: DirectedExtension, k: int, method: str = "union"):
        self.D = D
        self.k = k
        self.method = method
        self.ground_size = len(D.arcs)
        self._cache: dict = {}

    def is_independent(self, subset) -> bool:
        key = frozenset(subset)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = extended_is_independent(self.D, key, self.k, self.method)
        return hit
