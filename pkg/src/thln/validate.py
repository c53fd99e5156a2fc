"""Independent classification of node sequences against a graph and fault set.

This module recomputes liveness straight from the graph and the fault set
and never trusts the producer's claims; it is the arbiter the search and
embedding code must satisfy. Malformed input yields an Invalid verdict with
the first failing position, not an exception.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .faults import FaultSet
from .topology import ThlnGraph, _norm_edge


class PathStatus(enum.Enum):
    HAMILTONIAN = "hamiltonian"
    NEAR_HAMILTONIAN = "near-hamiltonian"
    INVALID = "invalid"


@dataclass(frozen=True)
class PathClass:
    status: PathStatus
    missed: Optional[int] = None
    reason: Optional[str] = None
    position: Optional[int] = None

    @property
    def is_hamiltonian(self) -> bool:
        return self.status is PathStatus.HAMILTONIAN

    @property
    def is_near_hamiltonian(self) -> bool:
        return self.status is PathStatus.NEAR_HAMILTONIAN

    @property
    def is_valid(self) -> bool:
        return self.status is not PathStatus.INVALID


def _invalid(reason: str, position: Optional[int] = None) -> PathClass:
    return PathClass(PathStatus.INVALID, reason=reason, position=position)


def _check_sequence(
    g: ThlnGraph, f: FaultSet, seq: Sequence[int], *, closed: bool
) -> Optional[PathClass]:
    """Shared walk checks; returns an Invalid verdict or None if clean."""
    alive_nodes = set(g.nodes) - f.nodes
    seen: set[int] = set()
    for i, v in enumerate(seq):
        if not isinstance(v, int) or not (0 <= v < g.num_nodes):
            return _invalid(f"unknown node {v!r}", i)
        if v not in alive_nodes:
            return _invalid(f"faulty node {v}", i)
        if v in seen:
            return _invalid(f"repeated node {v}", i)
        seen.add(v)
    hops = len(seq) - 1 + (1 if closed else 0)
    for i in range(hops):
        u, v = seq[i], seq[(i + 1) % len(seq)]
        if not g.has_edge(u, v):
            return _invalid(f"({u},{v}) is not an edge", i)
        if _norm_edge(u, v) in f.edges:
            return _invalid(f"dead edge ({u},{v})", i)
    return None


def _classify_cover(g: ThlnGraph, f: FaultSet, seq: Sequence[int]) -> PathClass:
    surviving = set(g.nodes) - f.nodes
    covered = set(seq)
    if len(covered) == len(surviving):
        return PathClass(PathStatus.HAMILTONIAN)
    if len(covered) == len(surviving) - 1:
        (missed,) = surviving - covered
        return PathClass(PathStatus.NEAR_HAMILTONIAN, missed=missed)
    return _invalid(f"covers {len(covered)} of {len(surviving)} surviving nodes")


def validate_path(
    g: ThlnGraph, f: FaultSet, s: int, t: int, seq: Sequence[int]
) -> PathClass:
    """Classify ``seq`` as a hamiltonian / near-hamiltonian s-t path or Invalid."""
    if not seq:
        return _invalid("empty sequence")
    if len(seq) < 2:
        return _invalid("a path needs at least two nodes")
    if seq[0] != s:
        return _invalid(f"starts at {seq[0]}, expected {s}", 0)
    if seq[-1] != t:
        return _invalid(f"ends at {seq[-1]}, expected {t}", len(seq) - 1)
    bad = _check_sequence(g, f, seq, closed=False)
    if bad is not None:
        return bad
    return _classify_cover(g, f, seq)


def validate_cycle(g: ThlnGraph, f: FaultSet, seq: Sequence[int]) -> PathClass:
    """Classify ``seq`` (closing edge required) as a covering cycle or Invalid."""
    if not seq:
        return _invalid("empty sequence")
    if len(seq) < 3:
        return _invalid("a cycle needs at least three nodes")
    bad = _check_sequence(g, f, seq, closed=True)
    if bad is not None:
        return bad
    return _classify_cover(g, f, seq)
