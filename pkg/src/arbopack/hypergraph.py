"""Mixed hypergraphs, cut counting and the two derived constructions.

Vertices are identified by strings and kept in declaration order; that order
is the canonical one used everywhere (bundle ordering, root emission,
trimming choices).  Vertex sets are handed around as ``frozenset`` in the
public API and as integer bitmasks inside the hot loops.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "HypergraphError",
    "DuplicateEdgeId",
    "HeadInTail",
    "EmptyTail",
    "HyperedgeTooSmall",
    "UnknownVertex",
    "NegativeBound",
    "OverlappingClasses",
    "TooLarge",
    "Dyperedge",
    "Hyperedge",
    "MixedHypergraph",
    "RootBounds",
    "Original",
    "Oriented",
    "ExtensionArc",
    "DirectedExtension",
    "Hypergraph",
    "limit",
    "validate_instance",
    "in_degree_set",
    "hyper_degree_set",
    "partition_cover_count",
    "directed_extension",
    "underlying_hypergraph",
    "enumerate_subpartitions",
    "enumerate_partitions",
]


class HypergraphError(ValueError):
    """Invalid instance data.  ``element`` names the offending item."""

    def __init__(self, element, message: str = ""):
        self.element = element
        super().__init__(message or f"{type(self).__name__}: {element!r}")


class DuplicateEdgeId(HypergraphError):
    pass


class HeadInTail(HypergraphError):
    pass


class EmptyTail(HypergraphError):
    pass


class HyperedgeTooSmall(HypergraphError):
    pass


class UnknownVertex(HypergraphError):
    pass


class NegativeBound(HypergraphError):
    pass


class OverlappingClasses(HypergraphError):
    pass


class TooLarge(ValueError):
    """An enumeration was requested above its configured size limit."""


_DEFAULT_LIMITS = {"subpartition": 10, "partition": 10, "subset": 20}


def limit(name: str) -> int:
    """Enumeration limit ``name``, overridable through ``ARBOPACK_LIMITS``.

    The variable holds comma-separated ``key=value`` pairs, e.g.
    ``ARBOPACK_LIMITS="subpartition=12,subset=22"``.  Raising the limits is
    meant for offline experiments only; enumeration time grows like a Bell
    number (partitions) or ``2**n`` (subsets).
    """
    value = _DEFAULT_LIMITS[name]
    raw = os.environ.get("ARBOPACK_LIMITS", "")
    for item in raw.split(","):
        key, sep, num = item.partition("=")
        if sep and key.strip() == name:
            value = int(num)
    return value


Weight = Union[int, float]


@dataclass(frozen=True)
class Dyperedge:
    id: str
    tail: frozenset
    head: str
    weight: Weight = 0

    def __post_init__(self):
        object.__setattr__(self, "tail", frozenset(self.tail))

    @property
    def vertices(self) -> frozenset:
        return self.tail | {self.head}


@dataclass(frozen=True)
class Hyperedge:
    id: str
    vertices: frozenset
    weight: Weight = 0

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))


@dataclass(frozen=True)
class MixedHypergraph:
    """``F = (V, A ∪ E)``.  Parallel edges are allowed, ids are not shared."""

    vertices: tuple
    dyperedges: tuple = ()
    hyperedges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "dyperedges", tuple(self.dyperedges))
        object.__setattr__(self, "hyperedges", tuple(self.hyperedges))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edges_by_id(self) -> dict:
        return {e.id: e for e in (*self.dyperedges, *self.hyperedges)}

    def mask(self, vertices: Iterable[str]) -> int:
        m = 0
        for v in vertices:
            try:
                m |= 1 << self.index[v]
            except KeyError:
                raise UnknownVertex(v) from None
        return m

    def unmask(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def sort_vertices(self, vertices: Iterable[str]) -> list:
        return sorted(vertices, key=self.index.__getitem__)

    def weight(self, edge_id: str) -> Weight:
        return self.edges_by_id[edge_id].weight


@dataclass(frozen=True)
class RootBounds:
    """Number of arborescences ``k`` and per-vertex root bounds ``f <= roots <= g``.

    Missing entries default to ``f(v) = 0`` and ``g(v) = k``.
    """

    k: int
    f: Mapping[str, int] = field(default_factory=dict)
    g: Mapping[str, int] = field(default_factory=dict)

    def lower(self, v: str) -> int:
        return self.f.get(v, 0)

    def upper(self, v: str) -> int:
        return self.g.get(v, self.k)

    def total(self, h: MixedHypergraph) -> "RootBounds":
        """Copy with ``f`` and ``g`` spelled out for every vertex of ``h``."""
        return RootBounds(
            self.k,
            {v: self.lower(v) for v in h.vertices},
            {v: self.upper(v) for v in h.vertices},
        )


def validate_instance(h: MixedHypergraph, b: RootBounds | None = None) -> None:
    """Raise a :class:`HypergraphError` subclass if ``h`` or ``b`` is malformed."""
    known = set(h.vertices)
    if len(known) != len(h.vertices):
        seen = set()
        for v in h.vertices:
            if v in seen:
                raise HypergraphError(v, f"vertex {v!r} declared twice")
            seen.add(v)
    ids = set()
    for a in h.dyperedges:
        if a.id in ids:
            raise DuplicateEdgeId(a.id)
        ids.add(a.id)
        if not a.tail:
            raise EmptyTail(a.id)
        for v in (*a.tail, a.head):
            if v not in known:
                raise UnknownVertex(v, f"dyperedge {a.id!r} uses unknown vertex {v!r}")
        if a.head in a.tail:
            raise HeadInTail(a.id, f"dyperedge {a.id!r} has head {a.head!r} in its tail")
    for e in h.hyperedges:
        if e.id in ids:
            raise DuplicateEdgeId(e.id)
        ids.add(e.id)
        for v in e.vertices:
            if v not in known:
                raise UnknownVertex(v, f"hyperedge {e.id!r} uses unknown vertex {v!r}")
        if len(e.vertices) < 2:
            raise HyperedgeTooSmall(e.id)
    if b is None:
        return
    if b.k < 0:
        raise NegativeBound("k", f"k must be nonnegative, got {b.k}")
    for name, bound in (("f", b.f), ("g", b.g)):
        for v, value in bound.items():
            if v not in known:
                raise UnknownVertex(v, f"{name} mentions unknown vertex {v!r}")
            if value < 0:
                raise NegativeBound(v, f"{name}({v}) = {value} is negative")


def _check_subset(vertices: Iterable[str], X: Iterable[str]) -> frozenset:
    X = frozenset(X)
    if vertices is not None:
        missing = X - set(vertices)
        if missing:
            raise UnknownVertex(min(missing))
    return X


def in_degree_set(dyperedges: Iterable[Dyperedge], X: Iterable[str], vertices=None) -> int:
    """Number of dyperedges entering ``X``: head inside, some tail vertex outside.

    ``vertices`` is the ambient vertex set; when given, ``X`` is checked
    against it.
    """
    X = _check_subset(vertices, X)
    return sum(1 for a in dyperedges if a.head in X and not a.tail <= X)


def hyper_degree_set(hyperedges: Iterable[Hyperedge], X: Iterable[str], vertices=None) -> int:
    """Number of hyperedges meeting both ``X`` and its complement."""
    X = _check_subset(vertices, X)
    return sum(1 for e in hyperedges if e.vertices & X and e.vertices - X)


def _check_subpartition(h: MixedHypergraph, P: Sequence[Iterable[str]]) -> list:
    classes = [frozenset(X) for X in P]
    seen: set = set()
    for X in classes:
        if not X:
            raise HypergraphError(X, "subpartition classes must be nonempty")
        if X & seen:
            raise OverlappingClasses(min(X & seen, key=h.index.get))
        _check_subset(h.vertices, X)
        seen |= X
    return classes


def partition_cover_count(h: MixedHypergraph, P: Sequence[Iterable[str]]) -> int:
    """``|E(P) ∪ A(P)|``: edges entering or crossing some class, each counted once."""
    classes = _check_subpartition(h, P)
    count = 0
    for a in h.dyperedges:
        if any(a.head in X and not a.tail <= X for X in classes):
            count += 1
    for e in h.hyperedges:
        if any(e.vertices & X and e.vertices - X for X in classes):
            count += 1
    return count


@dataclass(frozen=True)
class Original:
    edge_id: str


@dataclass(frozen=True)
class Oriented:
    edge_id: str
    head: str


@dataclass(frozen=True)
class ExtensionArc:
    tag: Union[Original, Oriented]
    tail: frozenset
    head: str
    weight: Weight = 0

    @property
    def vertices(self) -> frozenset:
        return self.tail | {self.head}

    @property
    def name(self) -> str:
        """External name: the dyperedge id, or ``edge@head`` for an orientation."""
        if isinstance(self.tag, Original):
            return self.tag.edge_id
        return f"{self.tag.edge_id}@{self.tag.head}"


@dataclass(frozen=True)
class DirectedExtension:
    """The dypergraph obtained by replacing each hyperedge with its bundle.

    Arcs are indexed densely; those indices are the ground set of both
    matroids used by the solver.
    """

    source: MixedHypergraph
    arcs: tuple

    @property
    def vertices(self) -> tuple:
        return self.source.vertices

    def __len__(self):
        return len(self.arcs)

    @cached_property
    def bundles(self) -> dict:
        """Hyperedge id -> indices of its orientations."""
        out: dict = {}
        for i, arc in enumerate(self.arcs):
            if isinstance(arc.tag, Oriented):
                out.setdefault(arc.tag.edge_id, []).append(i)
        return {e: tuple(ix) for e, ix in out.items()}

    @cached_property
    def bundle_of(self) -> tuple:
        """Per arc: hyperedge id for orientations, ``None`` for originals."""
        return tuple(arc.tag.edge_id if isinstance(arc.tag, Oriented) else None for arc in self.arcs)

    @cached_property
    def head_index(self) -> tuple:
        return tuple(self.source.index[arc.head] for arc in self.arcs)

    @cached_property
    def tail_mask(self) -> tuple:
        return tuple(self.source.mask(arc.tail) for arc in self.arcs)

    @cached_property
    def vertex_mask(self) -> tuple:
        return tuple(t | 1 << h for t, h in zip(self.tail_mask, self.head_index))

    @cached_property
    def by_name(self) -> dict:
        return {arc.name: i for i, arc in enumerate(self.arcs)}


def directed_extension(h: MixedHypergraph) -> DirectedExtension:
    arcs = [ExtensionArc(Original(a.id), a.tail, a.head, a.weight) for a in h.dyperedges]
    for e in h.hyperedges:
        for v in h.sort_vertices(e.vertices):
            arcs.append(ExtensionArc(Oriented(e.id, v), e.vertices - {v}, v, e.weight))
    return DirectedExtension(h, tuple(arcs))


@dataclass(frozen=True)
class Hypergraph:
    """Undirected hypergraph; ``labels[i]`` records where ``edges[i]`` came from."""

    vertices: tuple
    edges: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(frozenset(e) for e in self.edges))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.edges))))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def masks(self) -> tuple:
        idx = self.index
        out = []
        for e in self.edges:
            m = 0
            for v in e:
                m |= 1 << idx[v]
            out.append(m)
        return tuple(out)


def underlying_hypergraph(h: MixedHypergraph) -> Hypergraph:
    """``H_F``: dyperedges become ``tail ∪ {head}``; labels keep the edge ids."""
    edges = [a.vertices for a in h.dyperedges] + [e.vertices for e in h.hyperedges]
    labels = [a.id for a in h.dyperedges] + [e.id for e in h.hyperedges]
    return Hypergraph(h.vertices, edges, labels)


def _set_partitions(items: list) -> Iterator[list]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first], *part]
        for i in range(len(part)):
            yield [*part[:i], [first, *part[i]], *part[i + 1 :]]


def _mask_key(order: dict, classes) -> tuple:
    masks = sorted(sum(1 << order[v] for v in X) for X in classes)
    return (len(masks), masks)


def enumerate_partitions(vertices: Sequence[str], max_size: int | None = None) -> Iterator[tuple]:
    """All partitions of ``vertices`` (one for the empty set: no classes)."""
    vertices = list(vertices)
    cap = limit("partition") if max_size is None else max_size
    if len(vertices) > cap:
        raise TooLarge(f"{len(vertices)} vertices exceeds the partition limit {cap}")
    for part in _set_partitions(vertices):
        yield tuple(frozenset(X) for X in part)


def enumerate_subpartitions(vertices: Sequence[str], max_size: int | None = None) -> Iterator[tuple]:
    """Every subpartition of ``vertices`` exactly once, the empty one first.

    Order: by number of classes, then by the sorted class bitmasks (bit ``i``
    = ``i``-th vertex).  A subpartition is a partition of ``vertices`` plus a
    sink class that is dropped, so there are ``Bell(n + 1)`` of them.
    """
    vertices = list(vertices)
    cap = limit("subpartition") if max_size is None else max_size
    if len(vertices) > cap:
        raise TooLarge(f"{len(vertices)} vertices exceeds the subpartition limit {cap}")
    order = {v: i for i, v in enumerate(vertices)}
    sink = object()
    found = []
    for part in _set_partitions([sink, *vertices]):
        classes = tuple(frozenset(X) for X in part if sink not in X)
        found.append(classes)
    found.sort(key=lambda P: _mask_key(order, P))
    return iter(found)
