"""Independence-oracle matroids and the generalized partition matroid.

Every matroid here lives on a ground set ``{0, ..., n-1}``.  Solvers only
rely on the :class:`MatroidOracle` protocol: a ``ground_size`` attribute and
an ``is_independent`` query taking any iterable of ground indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Protocol, Sequence

from .hypergraph import DirectedExtension, RootBounds

__all__ = [
    "MatroidOracle",
    "FreeMatroid",
    "UniformMatroid",
    "PartitionMatroid",
    "GpmError",
    "GpmConditionViolated",
    "GpmMuOutOfRange",
    "Gpc1Violated",
    "Gpc2Violated",
    "GeneralizedPartitionMatroid",
    "gpm_build",
    "build_root_bound_matroid",
    "rank_via_oracle",
]


class MatroidOracle(Protocol):
    ground_size: int

    def is_independent(self, subset: Iterable[int]) -> bool: ...


@dataclass(frozen=True)
class FreeMatroid:
    ground_size: int

    def is_independent(self, subset):
        return True


@dataclass(frozen=True)
class UniformMatroid:
    ground_size: int
    rank: int

    def is_independent(self, subset):
        return len(set(subset)) <= self.rank


@dataclass(frozen=True)
class PartitionMatroid:
    """At most ``capacity[c]`` elements from block ``c``; ``block[i]`` is element ``i``'s block."""

    block: tuple
    capacity: tuple

    @property
    def ground_size(self):
        return len(self.block)

    def is_independent(self, subset):
        used = [0] * len(self.capacity)
        for x in set(subset):
            used[self.block[x]] += 1
        return all(u <= c for u, c in zip(used, self.capacity))


class GpmError(ValueError):
    pass


class GpmConditionViolated(GpmError):
    """``max(alpha_i, 0) > min(beta_i, |S_i|)`` for class ``index`` (0-based)."""

    def __init__(self, index: int, lhs: int, rhs: int):
        self.index = index
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"class {index}: max(alpha, 0) = {lhs} > min(beta, |S|) = {rhs}")


class GpmMuOutOfRange(GpmError):
    def __init__(self, low: int, mu: int, high: int):
        self.low, self.mu, self.high = low, mu, high
        super().__init__(f"need {low} <= mu <= {high}, got mu = {mu}")


class Gpc1Violated(GpmError):
    """Per-vertex condition of the root-bound matroid fails at ``vertex``."""

    def __init__(self, vertex, lhs: int, rhs: int):
        self.vertex = vertex
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"vertex {vertex!r}: max(k - g, 0) = {lhs} > min(k - f, indegree) = {rhs}"
        )


class Gpc2Violated(GpmError):
    """Global condition of the root-bound matroid fails.

    ``side`` is ``"lower"`` when ``sum max(k - g, 0) > k(|V| - 1)`` and
    ``"upper"`` when ``k(|V| - 1) > sum min(k - f, indegree)``.
    """

    def __init__(self, side: str, low: int, mu: int, high: int):
        self.side = side
        self.low, self.mu, self.high = low, mu, high
        super().__init__(f"{side} bound fails: need {low} <= {mu} <= {high}")


@dataclass(frozen=True)
class GeneralizedPartitionMatroid:
    """Ground set split into classes with counters ``alpha`` (lower), ``beta`` (upper), size ``mu``.

    Independent sets are the ``Z`` with ``|Z ∩ S_i| <= beta_i`` for all ``i``
    and ``sum_i max(alpha_i, |Z ∩ S_i|) <= mu``.  ``alpha_i`` may be negative.
    Build through :func:`gpm_build`, which checks that the data define a
    matroid at all.
    """

    classes: tuple
    alpha: tuple
    beta: tuple
    mu: int

    @cached_property
    def class_of(self) -> tuple:
        out = [-1] * self.ground_size
        for i, S in enumerate(self.classes):
            for x in S:
                out[x] = i
        return tuple(out)

    @property
    def ground_size(self) -> int:
        return sum(len(S) for S in self.classes)

    def counts(self, Z: Iterable[int]) -> list:
        z = [0] * len(self.classes)
        cls = self.class_of
        for x in set(Z):
            z[cls[x]] += 1
        return z

    def is_independent(self, Z: Iterable[int]) -> bool:
        z = self.counts(Z)
        if any(zi > b for zi, b in zip(z, self.beta)):
            return False
        return sum(max(a, zi) for a, zi in zip(self.alpha, z)) <= self.mu

    def is_base(self, Z: Iterable[int]) -> bool:
        Z = set(Z)
        if len(Z) != self.mu:
            return False
        z = self.counts(Z)
        return all(a <= zi <= b for a, zi, b in zip(self.alpha, z, self.beta))

    def rank(self, Z: Iterable[int]) -> int:
        z = self.counts(Z)
        capped = sum(min(b, zi) for b, zi in zip(self.beta, z))
        shortfall = sum(max(a - zi, 0) for a, zi in zip(self.alpha, z))
        return min(capped, self.mu - shortfall)


def gpm_build(
    classes: Sequence[Iterable[int]],
    alpha: Sequence[int],
    beta: Sequence[int],
    mu: int,
) -> GeneralizedPartitionMatroid:
    """Validate the existence conditions and return the matroid.

    ``classes`` must partition ``{0, ..., n-1}``; empty classes are allowed.
    """
    classes = tuple(tuple(sorted(S)) for S in classes)
    if not len(classes) == len(alpha) == len(beta):
        raise ValueError("classes, alpha and beta must have equal length")
    flat = sorted(x for S in classes for x in S)
    if flat != list(range(len(flat))):
        raise ValueError("classes must partition {0, ..., n-1}")
    for i, (S, a, b) in enumerate(zip(classes, alpha, beta)):
        lhs, rhs = max(a, 0), min(b, len(S))
        if lhs > rhs:
            raise GpmConditionViolated(i, lhs, rhs)
    low = sum(max(a, 0) for a in alpha)
    high = sum(min(b, len(S)) for S, b in zip(classes, beta))
    if not low <= mu <= high:
        raise GpmMuOutOfRange(low, mu, high)
    return GeneralizedPartitionMatroid(classes, tuple(alpha), tuple(beta), mu)


def build_root_bound_matroid(D: DirectedExtension, b: RootBounds) -> GeneralizedPartitionMatroid:
    """The matroid whose bases are the arc sets of size ``k(|V|-1)`` with
    ``f(v) <= k - indegree(v) <= g(v)``.

    One class per vertex (arcs with that head, possibly none), ``alpha_v = k - g(v)``,
    ``beta_v = k - f(v)``.  Raises :class:`Gpc1Violated` or
    :class:`Gpc2Violated` when the data do not define a matroid; either one
    already rules out every flexible packing.
    """
    k = b.k
    vertices = D.vertices
    classes: list = [[] for _ in vertices]
    for i, h in enumerate(D.head_index):
        classes[h].append(i)
    alpha = [k - b.upper(v) for v in vertices]
    beta = [k - b.lower(v) for v in vertices]
    mu = k * (len(vertices) - 1)
    low = sum(max(a, 0) for a in alpha)
    high = sum(min(bt, len(S)) for S, bt in zip(classes, beta))
    # order matters only for which error is reported when several conditions fail
    if low > mu:
        raise Gpc2Violated("lower", low, mu, high)
    for v, S, a, bt in zip(vertices, classes, alpha, beta):
        lhs, rhs = max(a, 0), min(bt, len(S))
        if lhs > rhs:
            raise Gpc1Violated(v, lhs, rhs)
    if mu > high:
        raise Gpc2Violated("upper", low, mu, high)
    return gpm_build(classes, alpha, beta, mu)


def rank_via_oracle(M: MatroidOracle, Z: Iterable[int]) -> int:
    """Greedy rank: grow an independent subset of ``Z`` scanning in the given order."""
    kept: list = []
    seen = set()
    for x in Z:
        if x in seen:
            continue
        seen.add(x)
        if M.is_independent([*kept, x]):
            kept.append(x)
    return len(kept)
