"""Matroid intersection over independence oracles.

Both solvers grow a common independent set one element at a time along
augmenting paths of the exchange graph.  For a current set ``I``:

* an arc ``y -> x`` (``y`` in ``I``, ``x`` outside) when ``I - y + x`` is
  independent in the first matroid,
* an arc ``x -> y`` when ``I - y + x`` is independent in the second,
* sources are the ``x`` with ``I + x`` independent in the first matroid,
  sinks those with ``I + x`` independent in the second.

Vertices carry length ``w(x)`` outside ``I`` and ``-w(y)`` inside.  Taking
a path of minimum length, then fewest vertices, then lexicographically
smallest vertex sequence keeps every intermediate set of minimum weight for
its size and makes the output reproducible.  With all weights zero this is
the plain shortest-augmenting-path algorithm.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .matroid import MatroidOracle, rank_via_oracle

__all__ = [
    "OracleInconsistent",
    "IntersectionResult",
    "WeightedResult",
    "Infeasible",
    "max_common_independent",
    "min_weight_common_independent_of_size",
]

log = logging.getLogger(__name__)

Trace = Callable[[int, frozenset, tuple], None]


class OracleInconsistent(RuntimeError):
    """An oracle answered in a way no matroid could."""


@dataclass(frozen=True)
class IntersectionResult:
    common_set: frozenset
    size: int
    dual_certificate: frozenset


@dataclass(frozen=True)
class WeightedResult:
    common_set: frozenset
    total_weight: float


@dataclass(frozen=True)
class Infeasible:
    """No common independent set of size ``target``; ``r1(Z) + r2(S - Z) = best_size < target``."""

    dual_certificate: frozenset
    best_size: int
    target: int


def _check_pair(m1: MatroidOracle, m2: MatroidOracle) -> int:
    if m1.ground_size != m2.ground_size:
        raise ValueError(f"ground sizes differ: {m1.ground_size} vs {m2.ground_size}")
    return m1.ground_size


def _exchange_graph(m1, m2, n: int, current: frozenset):
    inside = sorted(current)
    outside = [x for x in range(n) if x not in current]
    sources = [x for x in outside if m1.is_independent(current | {x})]
    sinks = {x for x in outside if m2.is_independent(current | {x})}
    source_set = set(sources)
    adj: dict = {v: [] for v in range(n)}
    for x in outside:
        for y in inside:
            swapped = (current - {y}) | {x}
            if x in source_set or m1.is_independent(swapped):
                adj[y].append(x)
            if x in sinks or m2.is_independent(swapped):
                adj[x].append(y)
    for v in adj:
        adj[v].sort()
    return sources, sinks, adj


def _better(a_len, a_hops, a_seq, b_len, b_hops, b_seq, tol) -> bool:
    if a_len < b_len - tol:
        return True
    if a_len > b_len + tol:
        return False
    return (a_hops, a_seq) < (b_hops, b_seq)


def _best_path(n, sources, sinks, adj, length, tol) -> Optional[tuple]:
    """Minimum (length, vertex count, sequence) source-to-sink path, layer by layer."""
    layer = {s: (length[s], (s,)) for s in sources}
    best = None
    for hops in range(1, n + 1):
        if not layer:
            break
        for v in sorted(layer):
            if v not in sinks:
                continue
            plen, seq = layer[v]
            if best is None or _better(plen, hops, seq, *best, tol):
                best = (plen, hops, seq)
        nxt: dict = {}
        for u in sorted(layer):
            plen, seq = layer[u]
            for v in adj[u]:
                cand = (plen + length[v], seq + (v,))
                old = nxt.get(v)
                if old is None or _better(cand[0], 0, cand[1], old[0], 0, old[1], tol):
                    nxt[v] = cand
        layer = nxt
    return None if best is None else best[2]


def _reachable(sources, adj) -> set:
    seen = set(sources)
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _certificate(m1, m2, n, current, sources, adj) -> frozenset:
    """Elements not reachable from a source; their ranks add up to ``|current|``."""
    unreached = frozenset(range(n)) - _reachable(sources, adj)
    rest = [x for x in range(n) if x not in unreached]
    total = rank_via_oracle(m1, sorted(unreached)) + rank_via_oracle(m2, rest)
    if total != len(current):
        raise OracleInconsistent(
            f"dual certificate gives r1 + r2 = {total}, expected {len(current)}"
        )
    return unreached


def _augment_until(m1, m2, weights, target, tol, trace):
    n = _check_pair(m1, m2)
    current = frozenset()
    step = 0
    while target is None or len(current) < target:
        sources, sinks, adj = _exchange_graph(m1, m2, n, current)
        length = [(-weights[v] if v in current else weights[v]) for v in range(n)]
        path = _best_path(n, sources, sinks, adj, length, tol)
        if path is None:
            return current, _certificate(m1, m2, n, current, sources, adj)
        if len(set(path)) != len(path):
            raise OracleInconsistent(f"augmenting path revisits an element: {path}")
        current = current.symmetric_difference(path)
        if not (m1.is_independent(current) and m2.is_independent(current)):
            raise OracleInconsistent(f"augmentation along {path} broke independence")
        step += 1
        log.debug("augment %d: path %s -> size %d", step, path, len(current))
        if trace is not None:
            trace(step, current, path)
    return current, None


def max_common_independent(
    m1: MatroidOracle, m2: MatroidOracle, trace: Trace | None = None
) -> IntersectionResult:
    """Largest set independent in both matroids, with a min-max certificate."""
    n = _check_pair(m1, m2)
    current, cert = _augment_until(m1, m2, [0] * n, None, 0, trace)
    return IntersectionResult(current, len(current), cert)


def min_weight_common_independent_of_size(
    m1: MatroidOracle,
    m2: MatroidOracle,
    weights: Sequence,
    mu: int,
    trace: Trace | None = None,
    tol: float = 1e-9,
) -> WeightedResult | Infeasible:
    """Common independent set of exactly ``mu`` elements and minimum total weight.

    Weights may be any reals, negative included.  Pass integer or
    ``Fraction`` weights with ``tol=0`` for exact comparisons.  Returns
    :class:`Infeasible` when no common independent set of that size exists.
    """
    n = _check_pair(m1, m2)
    if len(weights) != n:
        raise ValueError(f"expected {n} weights, got {len(weights)}")
    current, cert = _augment_until(m1, m2, list(weights), mu, tol, trace)
    if len(current) < mu:
        return Infeasible(cert, len(current), mu)
    return WeightedResult(current, sum(weights[x] for x in sorted(current)))
