"""Fault-tolerant covering-path construction over the recursive decomposition.

Given an n-dimensional network (n >= 7), at most 2n-10 faults, and two
surviving endpoints that each keep another surviving neighbor, ``embed``
produces a path between them that visits every surviving node, or every
surviving node but one.

The solver works level by level on the decomposition. After relabeling the
halves so half 1 carries at least as many faults as half 2 (written f1 below,
with k the halves' dimension), it dispatches:

  case 1  f1 <= 2k-10          solve half 1 recursively, stitch half 2 by search
  case 2  f1  = 2k-9, min degree of half 1 >= 2   covering cycle in half 1, splice
  case 3  f1  = 2k-9, min degree <= 1             near-covering cycle missing the
                                                  starved node, agents stand in
  case 4  f1  = 2k-8, min degree >= 2   one fault is imagined repaired, the cycle
                                        through it is cut into a covering path
  case 5  f1  = 2k-8, min degree <= 1   as case 4 from a near-covering cycle

Sub-labels (for example "2.1.2.1") name the endpoint placement and splice
shape; they appear in traces and are stable. Every "choose any" step picks the
first candidate in canonical order (path order, then node index), so runs are
reproducible. Choices the construction guarantees but cannot find raise
InternalContradiction instead of being patched around. At dimension 7 the
level is solved directly by exact search, which the fault bound (at most 4)
keeps feasible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from . import oracle
from .errors import (
    AdjacencyViolated,
    DisjointnessViolated,
    InternalContradiction,
    NoCandidate,
    OracleBudgetExhausted,
    PreconditionViolated,
)
from .faults import (
    FaultSet,
    SurvivingView,
    neighbor_condition,
    partition_decomposition,
    surviving_view,
)
from .oracle import SearchBudget, SearchStatus
from .topology import DecompositionNode, ThlnGraph

PathSeq = tuple[int, ...]


# ----------------------------------------------------------------------
# path utilities


def orient(path: Sequence[int], first: int) -> PathSeq:
    """The path as a tuple starting at ``first`` (reversing if needed)."""
    if path and path[0] == first:
        return tuple(path)
    if path and path[-1] == first:
        return tuple(reversed(path))
    raise PreconditionViolated(f"{first} is not an endpoint of the path")


class Hop(NamedTuple):
    """Explicit connector edge between two spliced segments."""

    u: int
    v: int


Segment = Union[Sequence[int], Hop]


def splice(view, segments: Iterable[Segment]) -> PathSeq:
    """Concatenate path segments into one path, verifying it as it goes.

    Segments are node sequences optionally separated by :class:`Hop`
    connectors naming the joining edge. Every junction (stated or implied)
    and every step inside a segment must be an edge of ``view``; any repeated
    node fails. The result is the validated node tuple.
    """
    out: list[int] = []
    pending: Optional[Hop] = None
    for seg in segments:
        if isinstance(seg, Hop):
            if pending is not None:
                raise AdjacencyViolated("two connectors in a row")
            if not out:
                raise AdjacencyViolated("connector before any segment")
            pending = seg
            continue
        seq = list(seg)
        if not seq:
            raise AdjacencyViolated("empty segment")
        if out and pending is not None and (pending.u, pending.v) != (out[-1], seq[0]):
            raise AdjacencyViolated(
                f"connector {tuple(pending)} does not join {out[-1]} to {seq[0]}"
            )
        pending = None
        out.extend(seq)
    if pending is not None:
        raise AdjacencyViolated("dangling connector")
    seen: set[int] = set()
    for i, v in enumerate(out):
        if v in seen:
            raise DisjointnessViolated(f"node {v} repeated at position {i}")
        seen.add(v)
    for i in range(len(out) - 1):
        if not view.has_edge(out[i], out[i + 1]):
            raise AdjacencyViolated(
                f"({out[i]},{out[i + 1]}) is not a surviving edge at position {i}"
            )
    return tuple(out)


def select_cross_edge(
    path: Sequence[int],
    view,
    exclude: Iterable[int] = (),
    *,
    partner: dict[int, int],
    partner_view=None,
    min_partner_degree: int = 0,
) -> tuple[int, int]:
    """First consecutive pair on ``path`` whose cross partners both survive,
    whose cross edges are live, whose partners avoid ``exclude``, and (when
    requested) whose partners keep at least ``min_partner_degree`` surviving
    neighbors inside their own half."""
    idx = _first_cross_pair_index(
        path, view, partner, frozenset(exclude), partner_view, min_partner_degree
    )
    if idx is None:
        raise NoCandidate("no consecutive pair with two usable cross edges")
    return path[idx], path[idx + 1]


def _first_cross_pair_index(path, view, partner, exclude, partner_view, min_deg):
    for i in _cross_pair_indexes(path, view, partner, exclude, partner_view, min_deg):
        return i
    return None


def _cross_pair_indexes(path, view, partner, exclude=frozenset(), partner_view=None, min_deg=0):
    def usable(x):
        p = partner[x]
        if p in exclude or not view.has_edge(x, p):
            return False
        if min_deg and partner_view.degree(p) < min_deg:
            return False
        return True

    for i in range(len(path) - 1):
        if usable(path[i]) and usable(path[i + 1]):
            yield i


# ----------------------------------------------------------------------
# results and traces


@dataclass(frozen=True)
class CaseTrace:
    """Chronological construction log: one record per solved level, one per
    search-service invocation."""

    records: tuple[dict, ...]

    def labels(self) -> tuple[str, ...]:
        return tuple(r["case"] for r in self.records if "case" in r)

    def top_case(self) -> Optional[str]:
        for r in self.records:
            if "case" in r:
                return r["case"]
        return None

    def to_json_obj(self) -> list:
        def conv(x):
            if isinstance(x, dict):
                return {k: conv(v) for k, v in sorted(x.items())}
            if isinstance(x, (list, tuple)):
                return [conv(v) for v in x]
            return x

        return [conv(r) for r in self.records]


@dataclass(frozen=True)
class EmbedResult:
    path: PathSeq
    missed: Optional[int]
    trace: CaseTrace

    @property
    def hamiltonian(self) -> bool:
        return self.missed is None

    @property
    def classification(self) -> str:
        return "hamiltonian" if self.missed is None else "near-hamiltonian"

    def to_json_obj(self) -> dict:
        return {
            "status": self.classification,
            "path": list(self.path),
            "missed": self.missed,
            "trace": self.trace.to_json_obj(),
        }


# ----------------------------------------------------------------------
# runtime plumbing


@dataclass
class _Runtime:
    graph: ThlnGraph
    faults: FaultSet
    budget: SearchBudget
    trace: list = field(default_factory=list)
    debug: bool = False


@dataclass(frozen=True)
class _Level:
    dim: int
    scope: frozenset[int]
    decomp: Optional[DecompositionNode]


class _Ctx:
    """Per-level working state: halves ordered by fault count, views, and
    traced access to the search services."""

    def __init__(self, rt: _Runtime, level: _Level, s: int, t: int):
        decomp = level.decomp
        if decomp is None:
            raise InternalContradiction(f"no decomposition at dimension {level.dim}")
        self.rt = rt
        self.dim = level.dim
        self.k = level.dim - 1
        self.s = s
        self.t = t
        part = partition_decomposition(decomp, rt.faults)
        self.swapped = len(part.f2) > len(part.f1)
        if self.swapped:
            self.h1, self.h2 = decomp.half2_set, decomp.half1_set
            self.child1, self.child2 = decomp.child2, decomp.child1
            self.f1_count, self.f2_count = len(part.f2), len(part.f1)
            self.f1 = part.f2
        else:
            self.h1, self.h2 = decomp.half1_set, decomp.half2_set
            self.child1, self.child2 = decomp.child1, decomp.child2
            self.f1_count, self.f2_count = len(part.f1), len(part.f2)
            self.f1 = part.f1
        self.fc_count = len(part.fc_direct)
        self.partner = decomp.partner_map
        self.view = SurvivingView(rt.graph, rt.faults, scope=level.scope, _validate=False)
        self.h1_view = SurvivingView(rt.graph, rt.faults, scope=self.h1, _validate=False)
        self.h2_view = SurvivingView(rt.graph, rt.faults, scope=self.h2, _validate=False)
        self.delta1, self.delta1_witness = self.h1_view.min_degree_witness()

    # -- predicates

    def partner_ok(self, x: int) -> bool:
        return self.view.has_edge(x, self.partner[x])

    def in_h1(self, v: int) -> bool:
        return v in self.h1

    # -- traced search services

    def _record(self, name: str, out, **extra):
        rec = {"service": name, "status": out.status.value, "expansions": out.expansions}
        rec.update(extra)
        self.rt.trace.append(rec)

    def _demand(self, name: str, out):
        if out.status is SearchStatus.BUDGET_EXHAUSTED:
            raise OracleBudgetExhausted(
                f"search budget exhausted during {name} at dimension {self.dim}",
                trace=CaseTrace(tuple(self.rt.trace)),
            )
        if out.status is SearchStatus.PROVEN_ABSENT:
            raise InternalContradiction(
                f"{name} at dimension {self.dim} was guaranteed but proven absent"
            )

    def ham_path_h2(self, a: int, b: int, exclude: Iterable[int] = ()) -> PathSeq:
        v = self.h2_view.without_nodes(exclude) if exclude else self.h2_view
        out = oracle.ham_path(v, a, b, self.rt.budget)
        self._record("ham_path", out, half=2, dim=self.k)
        self._demand("half-2 covering path", out)
        return out.path

    def two_paths_h2(
        self, a1: int, b1: int, a2: int, b2: int, exclude: Iterable[int] = ()
    ) -> tuple[PathSeq, PathSeq]:
        v = self.h2_view.without_nodes(exclude) if exclude else self.h2_view
        out = oracle.two_disjoint_spanning_paths(v, a1, b1, a2, b2, self.rt.budget)
        self._record("two_disjoint_spanning_paths", out, half=2, dim=self.k)
        self._demand("half-2 disjoint path cover", out)
        return out.paths

    def _h1_restored_view(self, restore) -> SurvivingView:
        if restore is None:
            return self.h1_view
        kind, payload = restore
        f = (
            self.rt.faults.without_node(payload)
            if kind == "node"
            else self.rt.faults.without_edge(payload)
        )
        return SurvivingView(self.rt.graph, f, scope=self.h1, _validate=False)

    def ham_cycle_h1(self, restore=None) -> PathSeq:
        out = oracle.ham_cycle(self._h1_restored_view(restore), self.rt.budget)
        self._record("ham_cycle", out, half=1, dim=self.k)
        self._demand("half-1 covering cycle", out)
        return out.path

    def near_cycle_h1(self, restore=None) -> tuple[PathSeq, Optional[int]]:
        out = oracle.near_ham_cycle(self._h1_restored_view(restore), self.rt.budget)
        self._record("near_ham_cycle", out, half=1, dim=self.k, missed=out.missed)
        self._demand("half-1 near-covering cycle", out)
        return out.path, out.missed

    def recurse(self, s: int, t: int) -> tuple[PathSeq, Optional[int]]:
        child = _Level(self.k, self.h1, self.child1)
        return _solve_level(self.rt, child, s, t)

    # -- cross-edge selection helpers

    def first_cross_pair(self, path, exclude=(), min_partner_degree=0, partner_view=None):
        idx = _first_cross_pair_index(
            path, self.view, self.partner, frozenset(exclude), partner_view, min_partner_degree
        )
        if idx is None:
            raise NoCandidate(
                f"no usable cross pair on a path of {len(path)} nodes at dimension {self.dim}"
            )
        return idx


# ----------------------------------------------------------------------
# cycle geometry helpers


def _canon_cycle(cyc: Sequence[int]) -> tuple[int, ...]:
    i = min(range(len(cyc)), key=lambda j: cyc[j])
    c = tuple(cyc[i:]) + tuple(cyc[:i])
    if len(c) > 2 and c[1] > c[-1]:
        c = (c[0],) + tuple(reversed(c[1:]))
    return c


def _cyc_walk(c: Sequence[int], i: int, j: int, step: int) -> list[int]:
    m = len(c)
    out = [c[i]]
    k = i
    while k != j:
        k = (k + step) % m
        out.append(c[k])
    return out


# ----------------------------------------------------------------------
# case 1: half 1 within the recursive bound


def solve_case1(ctx: _Ctx):
    s, t = ctx.s, ctx.t
    if ctx.in_h1(s) and ctx.in_h1(t):
        return _case1_both_h1(ctx)
    if not ctx.in_h1(s) and not ctx.in_h1(t):
        return _case1_both_h2(ctx)
    if ctx.in_h1(s):
        return _case1_split(ctx, s, t, flipped=False)
    path, label, detail = _case1_split(ctx, t, s, flipped=True)
    return tuple(reversed(path)), label, detail


def _case1_both_h1(ctx: _Ctx):
    s, t = ctx.s, ctx.t
    hv = ctx.h1_view
    s_open = any(w != t for w in hv.neighbors(s))
    t_open = any(w != s for w in hv.neighbors(t))
    if s_open and t_open:
        p1, _missed = ctx.recurse(s, t)
        i = ctx.first_cross_pair(p1)
        a, b = p1[i], p1[i + 1]
        p2 = ctx.ham_path_h2(ctx.partner[a], ctx.partner[b])
        path = splice(ctx.view, [p1[: i + 1], p2, p1[i + 1 :]])
        return path, "1.1.1", {"cross": [[a, ctx.partner[a]], [b, ctx.partner[b]]]}
    if not s_open and not t_open:
        raise InternalContradiction(
            "both endpoints starved inside half 1 despite the case-1 fault bound"
        )
    # exactly one endpoint has no surviving intra-half neighbor besides the
    # other; route it through its cross edge and leave it off the recursive path
    flipped = not s_open
    if flipped:
        s, t = t, s
    if not ctx.partner_ok(t):
        raise InternalContradiction("starved endpoint lost its cross edge as well")
    t2 = ctx.partner[t]
    s_nbrs = set(hv.neighbors(s))
    u1 = None
    for u in sorted(ctx.h1):
        if u in (s, t) or not ctx.partner_ok(u):
            continue
        if not hv.has_node(u):
            continue
        if (s_nbrs - {u}) and any(w != s for w in hv.neighbors(u)):
            u1 = u
            break
    if u1 is None:
        raise InternalContradiction("no cross edge avoiding both endpoints was usable")
    p1, missed = ctx.recurse(s, u1)
    if missed != t:
        raise InternalContradiction(
            "recursive path was bound to leave exactly the starved endpoint out"
        )
    p2 = ctx.ham_path_h2(ctx.partner[u1], t2)
    path = splice(ctx.view, [p1, p2, [t]])
    if flipped:
        path = tuple(reversed(path))
    return path, "1.1.2", {"cross": [[u1, ctx.partner[u1]], [t, t2]], "starved": t}


def _case1_both_h2(ctx: _Ctx):
    s, t = ctx.s, ctx.t
    p2 = ctx.ham_path_h2(s, t)
    gen = _cross_pair_indexes(p2, ctx.view, ctx.partner)
    i1 = next(gen, None)
    if i1 is None:
        raise NoCandidate("no usable cross pair on the half-2 path")
    i2 = next((j for j in gen if j >= i1 + 2), None)
    chosen = None
    for i in (i1, i2):
        if i is None:
            continue
        a, b = ctx.partner[p2[i]], ctx.partner[p2[i + 1]]
        if ctx.h1_view.degree(a) >= 2 and ctx.h1_view.degree(b) >= 2:
            chosen = i
            break
    if chosen is None:
        raise InternalContradiction(
            "both disjoint cross pairs hit the single low-degree node of half 1"
        )
    i = chosen
    u1, v1 = ctx.partner[p2[i]], ctx.partner[p2[i + 1]]
    p1, _missed = ctx.recurse(u1, v1)
    path = splice(ctx.view, [p2[: i + 1], p1, p2[i + 1 :]])
    return path, "1.2", {"cross": [[u1, p2[i]], [v1, p2[i + 1]]]}


def _case1_split(ctx: _Ctx, s: int, t: int, flipped: bool):
    # s inside half 1, t inside half 2
    cands: list[int] = []
    for u in sorted(ctx.h1):
        if u == s or not ctx.partner_ok(u) or ctx.partner[u] == t:
            continue
        cands.append(u)
        if len(cands) == 3:
            break
    good = [u for u in cands if ctx.h1_view.degree(u) >= 2][:2]
    if not good:
        raise InternalContradiction("all candidate cross ends sit at degree < 2")
    s_nbrs = set(ctx.h1_view.neighbors(s)) if ctx.h1_view.has_node(s) else set()
    u1 = next((u for u in good if s_nbrs - {u}), None)
    if u1 is None:
        raise InternalContradiction(
            "split endpoint has no surviving neighbor inside its own half"
        )
    p1, _missed = ctx.recurse(s, u1)
    p2 = ctx.ham_path_h2(ctx.partner[u1], t)
    path = splice(ctx.view, [p1, p2])
    return path, "1.3", {"cross": [[u1, ctx.partner[u1]]], "flipped": flipped}


# ----------------------------------------------------------------------
# cases 2 and 3: covering cycle in half 1


def solve_case2(ctx: _Ctx):
    cyc = ctx.ham_cycle_h1()
    return _dispatch_on_cycle(ctx, cyc, q1=None, major="2")


def solve_case3(ctx: _Ctx):
    cyc, missed = ctx.near_cycle_h1()
    if missed is None:
        raise InternalContradiction(
            "half 1 at minimum degree <= 1 cannot have a full covering cycle"
        )
    return _dispatch_on_cycle(ctx, cyc, q1=missed, major="3")


def _dispatch_on_cycle(ctx: _Ctx, cyc: PathSeq, q1: Optional[int], major: str):
    s, t = ctx.s, ctx.t
    s1, t1 = ctx.in_h1(s), ctx.in_h1(t)
    detail: dict = {"q1": q1} if q1 is not None else {}

    if s1 and t1:
        if q1 is not None and q1 in (s, t):
            return _cycle_agent_both_h1(ctx, cyc, q1, major, detail)
        path, shape = _cycle_h1_both(ctx, cyc, s, t, allow_bypass=q1 is None)
        if major == "2":
            label = {"d1": "2.1.1", "d2-direct": "2.1.2.1",
                     "d2-bypass": "2.1.2.2", "d3": "2.1.3"}[shape]
        else:
            label = "3.1.1.2" if shape.startswith("d2") else "3.1.1.1"
        detail["shape"] = shape
        return path, label, detail

    if not s1 and not t1:
        path = _cycle_h2_both(ctx, cyc, s, t)
        return path, f"{major}.2", detail

    flipped = not s1
    a, b = (t, s) if flipped else (s, t)
    if q1 is not None and a == q1:
        # the half-1 endpoint is the node off the cycle
        if ctx.partner_ok(a):
            core = _cycle_h2_both(ctx, cyc, ctx.partner[a], b)
            path = splice(ctx.view, [[a], core])
            detail["agent"] = ctx.partner[a]
        else:
            agent = next((w for w in sorted(ctx.h1_view.neighbors(a))), None)
            if agent is None:
                raise InternalContradiction("off-cycle endpoint is isolated in half 1")
            core, _shape = _cycle_split(ctx, cyc, agent, b)
            path = splice(ctx.view, [[a], core])
            detail["agent"] = agent
        label = f"{major}.3.2"
    else:
        core, shape = _cycle_split(ctx, cyc, a, b)
        path = core
        label = f"{major}.3.1" if major == "3" else {"exit": "2.3.1", "blocked": "2.3.2"}[shape]
        detail["shape"] = shape
    if flipped:
        path = tuple(reversed(path))
    detail["flipped"] = flipped
    return path, label, detail


def _cycle_agent_both_h1(ctx: _Ctx, cyc, q1, major, detail):
    # both endpoints in half 1 and one of them is the off-cycle node
    s, t = ctx.s, ctx.t
    flipped = s == q1
    a, b = (t, s) if flipped else (s, t)  # b is off the cycle
    if ctx.partner_ok(b):
        core, _shape = _cycle_split(ctx, cyc, a, ctx.partner[b])
        path = splice(ctx.view, [core, [b]])
        detail["agent"] = ctx.partner[b]
    else:
        agent = next((w for w in sorted(ctx.h1_view.neighbors(b)) if w != a), None)
        if agent is None:
            raise InternalContradiction("off-cycle endpoint kept no usable neighbor")
        core, _shape = _cycle_h1_both(ctx, cyc, a, agent, allow_bypass=False)
        path = splice(ctx.view, [core, [b]])
        detail["agent"] = agent
    if flipped:
        path = tuple(reversed(path))
    detail["flipped"] = flipped
    return path, f"{major}.1.2", detail


def _cycle_h1_both(ctx: _Ctx, cyc, s, t, allow_bypass: bool):
    """Both endpoints on the half-1 cycle; returns (path, shape tag)."""
    c = _canon_cycle(cyc)
    m = len(c)
    pos = {v: i for i, v in enumerate(c)}
    if s not in pos or t not in pos:
        raise InternalContradiction("an endpoint is missing from the half-1 cycle")
    ps, pt = pos[s], pos[t]
    fwd = (pt - ps) % m
    d = min(fwd, m - fwd)

    if d == 1:
        step = -1 if fwd == 1 else 1
        pst = _cyc_walk(c, ps, pt, step)
        i = ctx.first_cross_pair(pst)
        a, b = pst[i], pst[i + 1]
        p2 = ctx.ham_path_h2(ctx.partner[a], ctx.partner[b])
        return splice(ctx.view, [pst[: i + 1], p2, pst[i + 1 :]]), "d1"

    if d == 2:
        step_short = 1 if fwd == 2 else -1
        x1 = c[(ps + step_short) % m]
        plong = _cyc_walk(c, ps, pt, -step_short)
        if ctx.partner_ok(x1):
            y1, z1 = plong[-2], plong[1]
            if ctx.partner_ok(y1):
                p2 = ctx.ham_path_h2(ctx.partner[y1], ctx.partner[x1])
                return splice(ctx.view, [plong[:-1], p2, [x1, t]]), "d2-direct"
            if ctx.partner_ok(z1):
                p2 = ctx.ham_path_h2(ctx.partner[x1], ctx.partner[z1])
                return splice(ctx.view, [[s, x1], p2, plong[1:]]), "d2-direct"
            raise InternalContradiction("both bypass anchors lost their cross edges")
        if allow_bypass:
            i = ctx.first_cross_pair(plong)
            a, b = plong[i], plong[i + 1]
            p2 = ctx.ham_path_h2(ctx.partner[a], ctx.partner[b])
            # x1 stays out: the result misses exactly one node
            return splice(ctx.view, [plong[: i + 1], p2, plong[i + 1 :]]), "d2-bypass"
        # reattach the skipped middle node through one of its cycle neighbors
        interior = plong[1:-1]
        x1_nbrs = set(ctx.h1_view.neighbors(x1))
        jy = next(
            (j for j in range(len(interior) - 1) if interior[j] in x1_nbrs), None
        )
        if jy is None:
            raise InternalContradiction(
                "skipped node kept no usable cycle neighbor despite its degree floor"
            )
        v1, y1, u1 = interior[0], interior[jy], interior[jy + 1]
        if not (ctx.partner_ok(v1) and ctx.partner_ok(u1)):
            raise InternalContradiction("reattachment anchors lost their cross edges")
        p2 = ctx.ham_path_h2(ctx.partner[v1], ctx.partner[u1])
        seg_back = list(reversed(interior[: jy + 1]))  # y1 .. v1
        seg_fwd = interior[jy + 1 :] + [t]  # u1 .. t
        return splice(ctx.view, [[s, x1], seg_back, p2, seg_fwd]), "d2-reattach"

    arc_f = _cyc_walk(c, ps, pt, 1)  # s .. t forward
    arc_b = _cyc_walk(c, ps, pt, -1)  # s .. t backward
    u1, y1 = arc_f[1], arc_f[-2]
    x1, v1 = arc_b[1], arc_b[-2]
    if ctx.partner_ok(u1) and ctx.partner_ok(v1):
        p2 = ctx.ham_path_h2(ctx.partner[v1], ctx.partner[u1])
        return splice(ctx.view, [arc_b[:-1], p2, arc_f[1:]]), "d3"
    if ctx.partner_ok(x1) and ctx.partner_ok(y1):
        p2 = ctx.ham_path_h2(ctx.partner[y1], ctx.partner[x1])
        return splice(ctx.view, [arc_f[:-1], p2, arc_b[1:]]), "d3"
    raise InternalContradiction("both neighbor pairs around the endpoints are blocked")


def _cycle_h2_both(ctx: _Ctx, cyc, s, t) -> PathSeq:
    """Both endpoints in half 2: cut the cycle at a cross-usable edge and
    cover half 2 with two disjoint paths."""
    c = _canon_cycle(cyc)
    m = len(c)
    cut = None
    for i in range(m):
        a, b = c[i], c[(i + 1) % m]
        if (
            ctx.partner_ok(a)
            and ctx.partner_ok(b)
            and ctx.partner[a] not in (s, t)
            and ctx.partner[b] not in (s, t)
        ):
            cut = i
            break
    if cut is None:
        raise InternalContradiction("no cycle edge had two usable cross partners")
    a, b = c[cut], c[(cut + 1) % m]
    long_path = _cyc_walk(c, cut, (cut + 1) % m, -1)  # a .. b avoiding edge (a,b)
    p21, p22 = ctx.two_paths_h2(s, ctx.partner[a], ctx.partner[b], t)
    return splice(ctx.view, [p21, long_path, p22])


def _cycle_split(ctx: _Ctx, cyc, s, t):
    """s on the half-1 cycle, t in half 2; returns (path, 'exit'|'blocked')."""
    c = _canon_cycle(cyc)
    m = len(c)
    pos = {v: i for i, v in enumerate(c)}
    if s not in pos:
        raise InternalContradiction("the half-1 endpoint is missing from the cycle")
    ps = pos[s]
    nxt, prv = c[(ps + 1) % m], c[(ps - 1) % m]
    nbrs = sorted((nxt, prv))

    exit_node = next(
        (w for w in nbrs if ctx.partner_ok(w) and ctx.partner[w] != t), None
    )
    if exit_node is not None:
        start = nxt if exit_node != nxt else prv
        step = 1 if start == nxt else -1
        walk = _cyc_walk(c, ps, pos[exit_node], step)
        p2 = ctx.ham_path_h2(ctx.partner[exit_node], t)
        return splice(ctx.view, [walk, p2]), "exit"

    # one side is blocked by the single outer fault and the other side's
    # partner is t itself: finish over that cross edge
    tside = next((w for w in nbrs if ctx.partner[w] == t and ctx.partner_ok(w)), None)
    if tside is None:
        raise InternalContradiction("both cycle neighbors of the endpoint are unusable")
    start = nxt if tside != nxt else prv
    step = 1 if start == nxt else -1
    arc = _cyc_walk(c, ps, pos[tside], step)[1:]  # u1 .. v1 (= partner of t)
    pair = None
    for j in range(1, len(arc) - 2):
        if ctx.partner_ok(arc[j]) and ctx.partner_ok(arc[j + 1]):
            pair = j
            break
    if pair is None:
        raise InternalContradiction("no interior cycle edge kept both cross partners")
    y1, x1 = arc[pair], arc[pair + 1]
    p2 = ctx.ham_path_h2(ctx.partner[y1], ctx.partner[x1], exclude={t})
    path = splice(ctx.view, [[s], arc[: pair + 1], p2, arc[pair + 1 :], [t]])
    return path, "blocked"


# ----------------------------------------------------------------------
# cases 4 and 5: one fault imagined repaired, cycle cut into a path


def _canonical_faults(f1: FaultSet):
    for v in sorted(f1.nodes):
        yield ("node", v)
    for e in sorted(f1.edges):
        yield ("edge", e)


def _select_restorable_fault(ctx: _Ctx):
    """First half-1 fault whose repair keeps every node at degree >= 2."""
    for kind, payload in _canonical_faults(ctx.f1):
        if kind == "edge":
            return kind, payload
        v = payload
        deg = sum(
            1
            for w in ctx.rt.graph.adjacency[v]
            if w in ctx.h1
            and w not in ctx.rt.faults.nodes
            and (min(v, w), max(v, w)) not in ctx.rt.faults.edges
        )
        if deg >= 2:
            return kind, payload
    raise InternalContradiction("no half-1 fault can be repaired without a degree gap")


def _cut_cycle(ctx: _Ctx, cyc: PathSeq, fe) -> PathSeq:
    """Remove the repaired element from the cycle, leaving a covering path of
    the unrepaired half. Falls back to the smallest cycle edge when the
    repaired element is not on the cycle."""
    kind, payload = fe
    m = len(cyc)
    if kind == "node":
        if payload not in cyc:
            raise InternalContradiction("repaired node missing from its covering cycle")
        i = cyc.index(payload)
        return tuple(cyc[i + 1 :]) + tuple(cyc[:i])
    u, v = payload
    for i in range(m):
        a, b = cyc[i], cyc[(i + 1) % m]
        if (a, b) == (u, v) or (a, b) == (v, u):
            return tuple(cyc[i + 1 :]) + tuple(cyc[: i + 1])
    # repaired edge unused: cut at the smallest edge on the cycle
    best = min(
        range(m),
        key=lambda i: (min(cyc[i], cyc[(i + 1) % m]), max(cyc[i], cyc[(i + 1) % m])),
    )
    return tuple(cyc[best + 1 :]) + tuple(cyc[: best + 1])


def solve_case4(ctx: _Ctx):
    if ctx.f2_count or ctx.fc_count:
        raise InternalContradiction("case-4 fault arithmetic leaves no outside faults")
    fe = _select_restorable_fault(ctx)
    cyc = ctx.ham_cycle_h1(restore=fe)
    p1 = _cut_cycle(ctx, cyc, fe)
    path, label, detail = _dispatch_on_path(ctx, p1, q1=None, major="4")
    detail["fe"] = list(fe[1]) if fe[0] == "edge" else fe[1]
    return path, label, detail


def solve_case5(ctx: _Ctx):
    if ctx.f2_count or ctx.fc_count:
        raise InternalContradiction("case-5 fault arithmetic leaves no outside faults")
    fe = next(_canonical_faults(ctx.f1))
    cyc, _missed = ctx.near_cycle_h1(restore=fe)
    p1 = _cut_cycle(ctx, cyc, fe)
    off = ctx.h1_view.node_set - set(p1)
    if len(off) > 1:
        raise InternalContradiction("near-covering cycle left more than one node out")
    q1 = next(iter(off)) if off else None
    path, label, detail = _dispatch_on_path(ctx, p1, q1=q1, major="5")
    detail["fe"] = list(fe[1]) if fe[0] == "edge" else fe[1]
    return path, label, detail


def _dispatch_on_path(ctx: _Ctx, p1: PathSeq, q1: Optional[int], major: str):
    s, t = ctx.s, ctx.t
    s1, t1 = ctx.in_h1(s), ctx.in_h1(t)
    detail: dict = {"q1": q1} if q1 is not None else {}
    detail["ends"] = [p1[0], p1[-1]]

    if s1 and t1:
        if q1 is not None and q1 in (s, t):
            # stand a cross partner in for the off-path endpoint
            flipped = s == q1
            a, b = (t, s) if flipped else (s, t)
            if not ctx.partner_ok(b):
                raise InternalContradiction("off-path endpoint lost its cross edge")
            core, _shape = _path_split(ctx, p1, a, ctx.partner[b])
            path = splice(ctx.view, [core, [b]])
            if flipped:
                path = tuple(reversed(path))
            detail.update(agent=ctx.partner[b], flipped=flipped)
            return path, f"{major}.1.2", detail
        path, shape = _path_h1_both(ctx, p1, s, t)
        label = {"d1": ".1.1", "d2": ".1.2", "d3": ".1.3"}[shape] if major == "4" else ".1.1"
        detail["shape"] = shape
        return path, major + label, detail

    if not s1 and not t1:
        path, shape = _path_h2_both(ctx, p1, s, t)
        label = (
            {"free": "4.2.1", "one-end": "4.2.2", "both-ends": "4.2.3"}[shape]
            if major == "4"
            else "5.2"
        )
        detail["shape"] = shape
        return path, label, detail

    flipped = not s1
    a, b = (t, s) if flipped else (s, t)
    if q1 is not None and a == q1:
        if not ctx.partner_ok(a):
            raise InternalContradiction("off-path endpoint lost its cross edge")
        core, shape = _path_h2_both(ctx, p1, ctx.partner[a], b)
        path = splice(ctx.view, [[a], core])
        label = f"{major}.3.2"
        detail.update(agent=ctx.partner[a], shape=shape)
    else:
        path, shape = _path_split(ctx, p1, a, b)
        if major == "4":
            label = {
                "free": "4.3.1",
                "vend": "4.3.2",
                "wend": "4.3.2",
                "uend-0": "4.3.3",
                "uend-1": "4.3.3.1",
                "uend-1z": "4.3.3.1",
                "uend-1chord": "4.3.3.1",
                "uend-2": "4.3.3.2",
            }[shape]
        else:
            label = {
                "uend-1": "5.3.1.1",
                "uend-1z": "5.3.1.1",
                "uend-1chord": "5.3.1.1",
                "uend-2": "5.3.1.2",
            }.get(shape, "5.3.1")
        detail["shape"] = shape
    if flipped:
        path = tuple(reversed(path))
    detail["flipped"] = flipped
    return path, label, detail


def _path_h1_both(ctx: _Ctx, p1: PathSeq, s, t):
    """Both endpoints on the half-1 path."""
    if s not in p1 or t not in p1:
        raise InternalContradiction("an endpoint is missing from the half-1 path")
    chosen = None
    for seq in (tuple(p1), tuple(reversed(p1))):
        pos = {v: i for i, v in enumerate(seq)}
        L = len(seq) - 1
        a, b = (s, t) if pos[s] < pos[t] else (t, s)
        if pos[b] - pos[a] == 2 and pos[b] > L - 2:
            continue  # the skipped-pair shape needs room past the far endpoint
        chosen = (seq, pos, L, a, b)
        break
    if chosen is None:
        raise InternalContradiction("covering path too short to orient")
    seq, pos, L, a, b = chosen
    pa, pb = pos[a], pos[b]
    d = pb - pa
    u2, v2 = ctx.partner[seq[0]], ctx.partner[seq[L]]

    if d == 1:
        p2 = ctx.ham_path_h2(u2, v2)
        path = splice(
            ctx.view, [list(reversed(seq[: pa + 1])), p2, list(reversed(seq[pb:]))]
        )
        shape = "d1"
    elif d == 2:
        x1, y1 = seq[pa + 1], seq[pb + 1]
        p21, p22 = ctx.two_paths_h2(u2, v2, ctx.partner[x1], ctx.partner[y1])
        path = splice(
            ctx.view,
            [
                list(reversed(seq[: pa + 1])),
                p21,
                list(reversed(seq[pb + 1 :])),
                list(reversed(p22)),
                [x1, b],
            ],
        )
        shape = "d2"
    else:
        x1, y1 = seq[pa + 1], seq[pb - 1]
        p21, p22 = ctx.two_paths_h2(u2, ctx.partner[x1], v2, ctx.partner[y1])
        path = splice(
            ctx.view,
            [
                list(reversed(seq[: pa + 1])),
                p21,
                seq[pa + 1 : pb],
                list(reversed(p22)),
                list(reversed(seq[pb:])),
            ],
        )
        shape = "d3"
    if a != s:
        path = tuple(reversed(path))
    return path, shape


def _path_h2_both(ctx: _Ctx, p1: PathSeq, s, t):
    """Both endpoints in half 2; the half-1 path is entered over its ends'
    cross edges."""
    u1, v1 = p1[0], p1[-1]
    u2, v2 = ctx.partner[u1], ctx.partner[v1]
    hit = {u2, v2} & {s, t}

    if not hit:
        p21, p22 = ctx.two_paths_h2(s, u2, v2, t)
        return splice(ctx.view, [p21, p1, p22]), "free"

    if len(hit) == 1:
        seq = tuple(p1) if u2 in (s, t) else tuple(reversed(p1))
        head = ctx.partner[seq[0]]
        tail_partner = ctx.partner[seq[-1]]
        other = t if head == s else s
        p2 = ctx.ham_path_h2(tail_partner, other, exclude={head})
        path = splice(ctx.view, [[head], seq, p2])
        if head != s:
            path = tuple(reversed(path))
        return path, "one-end"

    seq = tuple(p1) if u2 == s else tuple(reversed(p1))
    L = len(seq) - 1
    i = next(
        (
            j
            for j in range(1, L - 1)
            if ctx.partner_ok(seq[j]) and ctx.partner_ok(seq[j + 1])
        ),
        None,
    )
    if i is None:
        raise InternalContradiction("no interior pair on the half-1 path was usable")
    x1, y1 = seq[i], seq[i + 1]
    p2 = ctx.ham_path_h2(ctx.partner[x1], ctx.partner[y1], exclude={s, t})
    path = splice(ctx.view, [[s], seq[: i + 1], p2, seq[i + 1 :], [t]])
    return path, "both-ends"


def _path_split(ctx: _Ctx, p1: PathSeq, s, t):
    """s on the half-1 path, t in half 2."""
    seq = tuple(p1)
    pos = {v: i for i, v in enumerate(seq)}
    L = len(seq) - 1
    if s not in pos:
        raise InternalContradiction("the half-1 endpoint is missing from the path")
    if pos[s] > L - 2:
        seq = tuple(reversed(seq))
        pos = {v: i for i, v in enumerate(seq)}
    ps = pos[s]
    u1, w1, v1 = seq[0], seq[ps + 1], seq[L]
    u2, w2, v2 = ctx.partner[u1], ctx.partner[w1], ctx.partner[v1]

    if t not in (u2, w2, v2):
        p21, p22 = ctx.two_paths_h2(u2, w2, v2, t)
        path = splice(
            ctx.view, [list(reversed(seq[: ps + 1])), p21, seq[ps + 1 :], p22]
        )
        return path, "free"

    if t == v2:
        p2 = ctx.ham_path_h2(u2, w2, exclude={t})
        path = splice(
            ctx.view, [list(reversed(seq[: ps + 1])), p2, seq[ps + 1 :], [t]]
        )
        return path, "vend"

    if t == w2:
        p2 = ctx.ham_path_h2(u2, v2, exclude={t})
        path = splice(
            ctx.view,
            [list(reversed(seq[: ps + 1])), p2, list(reversed(seq[ps + 1 :])), [t]],
        )
        return path, "wend"

    # t is the partner of the near end
    if ps == 0:
        p2 = ctx.ham_path_h2(v2, t)
        return splice(ctx.view, [seq, p2]), "uend-0"

    if ps == 1:
        on_path = sorted(
            pos[w] for w in ctx.h1_view.neighbors(u1) if w in pos and pos[w] >= 2
        )
        px = next((p for p in on_path if p >= 4), None)
        if px is not None:
            x1, y1 = seq[px], seq[px - 1]
            p21, p22 = ctx.two_paths_h2(w2, t, v2, ctx.partner[y1])
            path = splice(
                ctx.view,
                [[s, u1], seq[px:], p22, list(reversed(seq[2:px])), p21],
            )
            return path, "uend-1"
        if 3 in on_path:
            z1 = seq[4]
            p21, p22 = ctx.two_paths_h2(w2, ctx.partner[z1], v2, t)
            path = splice(
                ctx.view, [[s, u1], [seq[3], seq[2]], p21, seq[4:], p22]
            )
            return path, "uend-1z"
        if 2 in on_path:
            p2 = ctx.ham_path_h2(v2, t)
            return splice(ctx.view, [[s, u1], seq[2:], p2]), "uend-1chord"
        raise InternalContradiction(
            "path end kept no on-path neighbor despite its degree floor"
        )

    x1 = seq[ps - 1]
    s2 = ctx.partner[s]
    p21, p22 = ctx.two_paths_h2(s2, w2, v2, ctx.partner[x1], exclude={t})
    path = splice(
        ctx.view,
        [[s], p21, seq[ps + 1 :], p22, list(reversed(seq[:ps])), [t]],
    )
    return path, "uend-2"


# ----------------------------------------------------------------------
# level solver and public entry point


def _solve_level(rt: _Runtime, level: _Level, s: int, t: int):
    rec: dict = {"dim": level.dim}
    rt.trace.append(rec)
    view = SurvivingView(rt.graph, rt.faults, scope=level.scope, _validate=False)
    if not neighbor_condition(view, s, t):
        raise InternalContradiction(
            f"level at dimension {level.dim} received endpoints violating the "
            "neighbor condition"
        )

    if level.dim == 7:
        out = oracle.ham_path(view, s, t, rt.budget)
        rt.trace.append(
            {"service": "ham_path", "status": out.status.value,
             "expansions": out.expansions, "half": 0, "dim": 7}
        )
        if out.status is SearchStatus.BUDGET_EXHAUSTED:
            raise OracleBudgetExhausted(
                "search budget exhausted at the dimension-7 base",
                trace=CaseTrace(tuple(rt.trace)),
            )
        if out.status is SearchStatus.PROVEN_ABSENT:
            raise InternalContradiction(
                "dimension-7 base with at most 4 faults must stay fully connected "
                "by covering paths"
            )
        rec.update(case="base", missed=None)
        path = out.path
    else:
        ctx = _Ctx(rt, level, s, t)
        k = ctx.k
        f1 = ctx.f1_count
        delta = ctx.delta1
        if delta is None:
            raise InternalContradiction("half 1 has no surviving node")
        if f1 <= 2 * k - 10:
            path, label, detail = solve_case1(ctx)
        elif f1 == 2 * k - 9 and delta >= 2:
            path, label, detail = solve_case2(ctx)
        elif f1 == 2 * k - 9:
            path, label, detail = solve_case3(ctx)
        elif f1 == 2 * k - 8 and delta >= 2:
            path, label, detail = solve_case4(ctx)
        elif f1 == 2 * k - 8:
            path, label, detail = solve_case5(ctx)
        else:
            raise PreconditionViolated(
                f"fault load {f1} in one half exceeds the dispatch table at "
                f"dimension {level.dim}"
            )
        rec.update(
            case=label,
            f1=f1,
            f2=ctx.f2_count,
            fc=ctx.fc_count,
            delta1=delta,
            swapped=ctx.swapped,
        )
        rec.update(detail)

    if path[0] != s or path[-1] != t:
        raise InternalContradiction("assembled path has the wrong endpoints")
    alive = view.node_set
    covered = set(path)
    if len(covered) != len(path) or not covered <= alive:
        raise InternalContradiction("assembled path left the surviving level")
    missing = alive - covered
    if len(missing) > 1:
        raise InternalContradiction(
            f"assembled path misses {len(missing)} nodes at dimension {level.dim}"
        )
    missed = next(iter(missing)) if missing else None
    if missed is not None and missed in (s, t):
        raise InternalContradiction("assembled path misses one of its endpoints")
    if rt.debug:
        for i in range(len(path) - 1):
            if not view.has_edge(path[i], path[i + 1]):
                raise InternalContradiction(
                    f"debug: dead step ({path[i]},{path[i + 1]}) at dimension {level.dim}"
                )
    rec["missed"] = missed
    return path, missed


def embed(
    g: ThlnGraph,
    f: FaultSet,
    s: int,
    t: int,
    budget: Optional[SearchBudget] = None,
    *,
    debug: bool = False,
    enforce_bounds: bool = True,
) -> EmbedResult:
    """Covering (or one-short) path between s and t in the surviving graph.

    Requires dimension >= 7, at most ``2n - 10`` faults, both endpoints
    surviving and distinct, and each endpoint keeping a surviving neighbor
    besides the other. ``enforce_bounds=False`` drops the fault-count check
    for out-of-contract probing; everything else still applies.
    """
    budget = budget or SearchBudget()
    f.validate_against(g)
    n = g.dimension
    if n < 7:
        raise PreconditionViolated(f"embedding needs dimension >= 7, got {n}")
    if enforce_bounds and len(f) > 2 * n - 10:
        raise PreconditionViolated(
            f"fault count {len(f)} exceeds the bound {2 * n - 10} at dimension {n}"
        )
    if s == t:
        raise PreconditionViolated("endpoints must be distinct")
    view = surviving_view(g, f)
    for v in (s, t):
        if not view.has_node(v):
            raise PreconditionViolated(f"endpoint {v} is faulty")
    if not neighbor_condition(view, s, t):
        raise PreconditionViolated(
            "neighbor condition: an endpoint has no surviving neighbor besides the other"
        )
    rt = _Runtime(graph=g, faults=f, budget=budget, debug=debug)
    root = _Level(n, frozenset(g.nodes), g.decomposition)
    path, missed = _solve_level(rt, root, s, t)
    return EmbedResult(path=tuple(path), missed=missed, trace=CaseTrace(tuple(rt.trace)))
