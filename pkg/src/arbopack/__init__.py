"""Flexible packings of spanning mixed hyperarborescences via weighted matroid intersection."""

from .hypergraph import (
    Dyperedge,
    Hyperedge,
    MixedHypergraph,
    RootBounds,
    directed_extension,
    underlying_hypergraph,
    validate_instance,
)
from .packing import (
    Arborescence,
    InfeasibleInstance,
    Packing,
    TrimmedEdge,
    brute_force_solve,
    check_characterization_bruteforce,
    solve_min_weight,
    verify_packing,
)
from .generate import generate_instance

__all__ = [
    "Dyperedge",
    "Hyperedge",
    "MixedHypergraph",
    "RootBounds",
    "directed_extension",
    "underlying_hypergraph",
    "validate_instance",
    "Arborescence",
    "InfeasibleInstance",
    "Packing",
    "TrimmedEdge",
    "brute_force_solve",
    "check_characterization_bruteforce",
    "solve_min_weight",
    "verify_packing",
    "generate_instance",
]
