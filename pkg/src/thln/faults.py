"""Fault sets, the surviving subgraph view, and fault bookkeeping per half.

A fault set holds failed nodes and failed edges. The surviving view is the
graph with faulty nodes removed and an edge present only when both endpoints
survive and the edge itself is not faulty. Faulting an edge whose endpoint is
already faulty is allowed and still counts toward the fault total; redundant
faults only make bound checks more conservative.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import FaultyEndpoint, ForeignFault, NoDecomposition, PreconditionViolated
from .topology import DecompositionNode, Edge, ThlnGraph, _norm_edge


@dataclass(frozen=True)
class FaultSet:
    """Failed nodes and failed edges; edge pairs are stored as (min, max)."""

    nodes: frozenset[int]
    edges: frozenset[Edge]

    @classmethod
    def of(cls, nodes: Iterable[int] = (), edges: Iterable[Edge] = ()) -> "FaultSet":
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop fault at node {u}")
            norm.add(_norm_edge(u, v))
        return cls(nodes=frozenset(nodes), edges=frozenset(norm))

    @classmethod
    def empty(cls) -> "FaultSet":
        return cls(frozenset(), frozenset())

    def __len__(self) -> int:
        return len(self.nodes) + len(self.edges)

    @property
    def size(self) -> int:
        return len(self)

    def restricted(self, node_set: frozenset[int]) -> "FaultSet":
        """Faults lying entirely inside ``node_set`` (edges need both ends)."""
        return FaultSet(
            nodes=frozenset(v for v in self.nodes if v in node_set),
            edges=frozenset(e for e in self.edges if e[0] in node_set and e[1] in node_set),
        )

    def without_node(self, v: int) -> "FaultSet":
        return FaultSet(self.nodes - {v}, self.edges)

    def without_edge(self, e: Edge) -> "FaultSet":
        return FaultSet(self.nodes, self.edges - {_norm_edge(*e)})

    def validate_against(self, g: ThlnGraph) -> None:
        for v in self.nodes:
            if not (0 <= v < g.num_nodes):
                raise ForeignFault(f"faulty node {v} is not in the graph")
        for e in self.edges:
            if e not in g.edge_set:
                raise ForeignFault(f"faulty edge {e} is not in the graph")

    def to_json_obj(self) -> dict:
        return {
            "nodes": sorted(self.nodes),
            "edges": [list(e) for e in sorted(self.edges)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FaultSet":
        return cls.of(
            nodes=(int(v) for v in obj.get("nodes", ())),
            edges=((int(u), int(v)) for u, v in obj.get("edges", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "FaultSet":
        return cls.from_json_obj(json.loads(text))


class SurvivingView:
    """Read-only fault-free subgraph, optionally narrowed to a node scope.

    A node is present iff it is in scope and not faulty; an edge is present
    iff both endpoints are present and the edge is not faulty. Queries run
    against a precomputed adjacency, so views are cheap to share and safe to
    use concurrently.
    """

    __slots__ = ("graph", "faults", "scope", "_adj", "_nodes", "_node_set")

    def __init__(
        self,
        graph: ThlnGraph,
        faults: FaultSet,
        scope: Optional[frozenset[int]] = None,
        _validate: bool = True,
    ):
        if _validate:
            faults.validate_against(graph)
        self.graph = graph
        self.faults = faults
        self.scope = frozenset(scope) if scope is not None else None
        in_scope = self.scope.__contains__ if self.scope is not None else lambda v: True
        dead = faults.nodes
        bad_edge = faults.edges
        adj: dict[int, tuple[int, ...]] = {}
        for v in graph.nodes:
            if v in dead or not in_scope(v):
                continue
            row = tuple(
                w
                for w in graph.adjacency[v]
                if w not in dead
                and in_scope(w)
                and _norm_edge(v, w) not in bad_edge
            )
            adj[v] = row
        self._adj = adj
        self._nodes = tuple(sorted(adj))
        self._node_set = frozenset(self._nodes)

    @property
    def nodes(self) -> tuple[int, ...]:
        return self._nodes

    @property
    def node_set(self) -> frozenset[int]:
        return self._node_set

    def __len__(self) -> int:
        return len(self._nodes)

    def has_node(self, v: int) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        row = self._adj.get(u)
        return row is not None and v in row

    def min_degree_witness(self) -> tuple[Optional[int], Optional[int]]:
        """(minimum degree, lowest-index node attaining it); (None, None) if empty."""
        best_deg: Optional[int] = None
        best_node: Optional[int] = None
        for v in self._nodes:
            d = len(self._adj[v])
            if best_deg is None or d < best_deg:
                best_deg, best_node = d, v
        return best_deg, best_node

    def restrict(self, nodes: Iterable[int]) -> "SurvivingView":
        keep = frozenset(nodes)
        base = keep if self.scope is None else (keep & self.scope)
        return SurvivingView(self.graph, self.faults, scope=base, _validate=False)

    def without_nodes(self, nodes: Iterable[int]) -> "SurvivingView":
        drop = frozenset(nodes)
        base = self.node_set - drop
        return SurvivingView(self.graph, self.faults, scope=base, _validate=False)


def surviving_view(g: ThlnGraph, f: FaultSet) -> SurvivingView:
    """The fault-free subgraph of ``g`` under fault set ``f``."""
    return SurvivingView(g, f)


@dataclass(frozen=True)
class FaultPartition:
    """Fault set split across the top decomposition level.

    ``fc_direct`` holds cross edges that are faulty themselves;
    ``fc_effective`` additionally includes cross edges killed by a faulty
    endpoint, i.e. every cross edge absent from the surviving graph.
    """

    f1: FaultSet
    f2: FaultSet
    fc_direct: frozenset[Edge]
    fc_effective: tuple[Edge, ...]

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.f1), len(self.f2), len(self.fc_direct))


def partition_decomposition(decomp: DecompositionNode, f: FaultSet) -> FaultPartition:
    h1, h2 = decomp.half1_set, decomp.half2_set
    matching_set = frozenset(decomp.matching)
    fc_direct = frozenset(e for e in f.edges if e in matching_set)
    dead = f.nodes
    fc_effective = tuple(
        sorted(
            e
            for e in decomp.matching
            if e in fc_direct or e[0] in dead or e[1] in dead
        )
    )
    return FaultPartition(
        f1=f.restricted(h1),
        f2=f.restricted(h2),
        fc_direct=fc_direct,
        fc_effective=fc_effective,
    )


def partition(g: ThlnGraph, f: FaultSet) -> FaultPartition:
    """Split ``f`` into half-1 faults, half-2 faults, and cross-edge faults."""
    if g.decomposition is None:
        raise NoDecomposition("cannot partition faults without a decomposition")
    f.validate_against(g)
    return partition_decomposition(g.decomposition, f)


@dataclass(frozen=True)
class HalfAnalysis:
    """Fault load and minimum surviving intra-half degree of one half."""

    fault_count: int
    min_degree: Optional[int]
    min_degree_witness: Optional[int]
    empty: bool = False


def analyze_half(view: SurvivingView, half: Iterable[int]) -> HalfAnalysis:
    """Minimum degree over the half's surviving nodes, counting only
    surviving edges that stay inside the half. An all-faulty half is reported
    as empty rather than raised."""
    half_set = frozenset(half)
    if not half_set <= frozenset(view.graph.nodes):
        raise PreconditionViolated("half contains nodes outside the host graph")
    fault_count = len(view.faults.restricted(half_set))
    best_deg: Optional[int] = None
    best_node: Optional[int] = None
    for v in sorted(half_set):
        if not view.has_node(v):
            continue
        d = sum(1 for w in view.neighbors(v) if w in half_set)
        if best_deg is None or d < best_deg:
            best_deg, best_node = d, v
    if best_deg is None:
        return HalfAnalysis(fault_count, None, None, empty=True)
    return HalfAnalysis(fault_count, best_deg, best_node)


def neighbor_condition(view: SurvivingView, s: int, t: int) -> bool:
    """True iff both endpoints keep a surviving neighbor besides each other.

    This is necessary for any path of length two or more between ``s`` and
    ``t`` to exist in the surviving graph.
    """
    if s == t:
        raise PreconditionViolated("endpoints must be distinct")
    for v in (s, t):
        if not view.has_node(v):
            raise FaultyEndpoint(f"endpoint {v} is not in the surviving view")
    s_ok = any(w != t for w in view.neighbors(s))
    t_ok = any(w != s for w in view.neighbors(t))
    return s_ok and t_ok
