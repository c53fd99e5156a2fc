"""Command-line surface: generate | embed | stress | check | export.

Exit codes are the scriptable contract:

  0  success (embed: a validating covering or one-short path was produced)
  1  a trial or suite failed validation
  2  bad configuration or unreadable input
  3  precondition violated (fault bound, faulty endpoint, neighbor condition)
  4  search budget exhausted

Every command honors ``--seed``; identical invocations write byte-identical
artifacts. Wall-clock numbers are therefore never written to report files
unless ``--timing`` is passed; the human summary on stderr always shows them.
The environment variable ``THLN_BUDGET`` overrides the default expansion
budget when ``--budget`` is absent.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import statistics
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .embedder import embed
from .errors import (
    ForeignFault,
    MalformedGraph,
    OracleBudgetExhausted,
    PreconditionViolated,
    ThlnError,
)
from .faults import FaultSet, neighbor_condition, surviving_view
from .oracle import (
    SearchBudget,
    ham_cycle,
    ham_path,
    two_disjoint_spanning_paths,
)
from .topology import (
    ThlnGraph,
    VariantSpec,
    check_shape,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    make_preset,
)
from .validate import validate_path

_VARIANT_CHOICES = ("random", "crossed", "mobius0", "mobius1", "locally-twisted", "default")


@dataclass
class RunConfig:
    """Configuration shared by the campaign-style commands."""

    seed: int = 0
    dimension: int = 8
    variant: str = "random"
    fault_count: int = 0
    trial_count: int = 0
    budget: SearchBudget = field(default_factory=SearchBudget)
    unsafe: bool = False
    out: Optional[str] = None
    csv: Optional[str] = None
    timing: bool = False

    def validate(self) -> None:
        if self.dimension < 3:
            raise PreconditionViolated("dimension must be at least 3")
        bound = 2 * self.dimension - 10
        if not self.unsafe and self.fault_count > max(bound, 0):
            raise PreconditionViolated(
                f"fault count {self.fault_count} exceeds {bound} at dimension "
                f"{self.dimension}; pass --unsafe to probe beyond the contract"
            )


def _default_budget(args) -> SearchBudget:
    if getattr(args, "budget", None):
        return SearchBudget(max_expansions=args.budget)
    env = os.environ.get("THLN_BUDGET")
    if env:
        return SearchBudget(max_expansions=int(env))
    return SearchBudget()


def _variant_spec(name: str, seed: int) -> VariantSpec:
    if name == "random":
        return VariantSpec.random(seed)
    if name == "default":
        return VariantSpec.base3_default()
    return VariantSpec(name)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(path: str) -> ThlnGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(fh.read())


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------------
# generate / export


def cmd_generate(args) -> int:
    if args.n < 3:
        _info(f"error: dimension must be at least 3, got {args.n}")
        return 2
    try:
        g = make_preset(_variant_spec(args.variant, args.seed), args.n)
    except ThlnError as exc:
        _info(f"error: {exc}")
        return 2
    _write(args.out, graph_to_json(g))
    if args.dot:
        _write(args.dot, graph_to_dot(g))
    _info(
        f"generated {args.variant} dimension-{args.n}: "
        f"{g.num_nodes} nodes, {g.num_edges} edges"
    )
    return 0


def cmd_export(args) -> int:
    try:
        g = _load_graph(args.graph)
    except (OSError, MalformedGraph) as exc:
        _info(f"error: {exc}")
        return 2
    _write(args.out, graph_to_dot(g))
    return 0


# ----------------------------------------------------------------------
# embed


def cmd_embed(args) -> int:
    try:
        g = _load_graph(args.graph)
        with open(args.faults, "r", encoding="utf-8") as fh:
            f = FaultSet.from_json(fh.read())
    except (OSError, MalformedGraph, ValueError) as exc:
        _info(f"error: {exc}")
        return 2
    budget = _default_budget(args)
    out_of_contract = args.unsafe and len(f) > 2 * g.dimension - 10

    def emit(obj) -> None:
        _write(args.out, _dump(obj))

    try:
        result = embed(g, f, args.s, args.t, budget, enforce_bounds=not args.unsafe)
    except PreconditionViolated as exc:
        emit({"status": "error", "path": [], "missed": None, "trace": [],
              "reason": str(exc)})
        _info(f"precondition violated: {exc}")
        return 3
    except OracleBudgetExhausted as exc:
        trace = exc.trace.to_json_obj() if exc.trace else []
        emit({"status": "error", "path": [], "missed": None, "trace": trace,
              "reason": str(exc)})
        _info(f"budget exhausted: {exc}")
        return 4
    except (ForeignFault, MalformedGraph) as exc:
        emit({"status": "error", "path": [], "missed": None, "trace": [],
              "reason": str(exc)})
        _info(f"error: {exc}")
        return 2
    except ThlnError as exc:
        emit({"status": "error", "path": [], "missed": None, "trace": [],
              "reason": str(exc)})
        _info(f"error: {exc}")
        return 1

    verdict = validate_path(g, f, args.s, args.t, result.path)
    if not verdict.is_valid or verdict.missed != result.missed:
        emit({"status": "error", "path": list(result.path), "missed": result.missed,
              "trace": result.trace.to_json_obj(),
              "reason": f"self-check failed: {verdict.reason}"})
        _info("error: produced path failed independent validation")
        return 1
    obj = result.to_json_obj()
    if out_of_contract:
        obj["status"] = "out-of-contract"
        obj["classification"] = result.classification
    emit(obj)
    _info(
        f"{result.classification}: {len(result.path)} nodes"
        + (f", missed {result.missed}" if result.missed is not None else "")
    )
    return 0


# ----------------------------------------------------------------------
# stress


def _trial_seed(base: int, index: int) -> int:
    return base * (1 << 32) + index


def run_stress_trial(n: int, fault_count: int, seed: int,
                     budget: SearchBudget, enforce_bounds: bool = True) -> dict:
    """One self-contained seeded trial: fresh random graph, random faults,
    endpoints resampled until the neighbor condition holds, then embed and
    independently validate. Deterministic in its arguments."""
    rng = random.Random(seed)
    g = make_preset(VariantSpec.random(rng.randrange(1 << 30)), n)
    elements = [("node", v) for v in g.nodes] + [("edge", e) for e in g.edges]
    picked = rng.sample(elements, fault_count) if fault_count else []
    f = FaultSet.of(
        nodes=(p for k, p in picked if k == "node"),
        edges=(p for k, p in picked if k == "edge"),
    )
    view = surviving_view(g, f)
    s = t = None
    for _ in range(1000):
        cand_s, cand_t = rng.sample(view.nodes, 2)
        if neighbor_condition(view, cand_s, cand_t):
            s, t = cand_s, cand_t
            break
    if s is None:
        return {"ok": False, "error": "no endpoint pair met the neighbor condition"}

    started = time.perf_counter()
    try:
        result = embed(g, f, s, t, budget, enforce_bounds=enforce_bounds)
    except ThlnError as exc:
        return {
            "ok": False, "s": s, "t": t, "error": f"{type(exc).__name__}: {exc}",
            "elapsed_s": time.perf_counter() - started,
        }
    elapsed = time.perf_counter() - started
    verdict = validate_path(g, f, s, t, result.path)
    ok = verdict.is_valid and verdict.missed == result.missed
    return {
        "ok": ok,
        "s": s,
        "t": t,
        "status": result.classification,
        "missed": result.missed,
        "path_len": len(result.path),
        "cases": list(result.trace.labels()),
        "elapsed_s": elapsed,
        "error": None if ok else f"validation: {verdict.reason}",
    }


def run_stress(cfg: RunConfig) -> tuple[dict, list[float]]:
    """Run the campaign and build the deterministic report object. Trial
    wall-clock times are returned separately; they enter the report only
    when ``cfg.timing`` is set."""
    trials = []
    elapsed = []
    for i in range(cfg.trial_count):
        rec = run_stress_trial(
            cfg.dimension, cfg.fault_count, _trial_seed(cfg.seed, i),
            cfg.budget, enforce_bounds=not cfg.unsafe,
        )
        elapsed.append(rec.pop("elapsed_s", 0.0))
        rec["trial"] = i
        trials.append(rec)

    histogram: dict[str, int] = {}
    missed_freq: dict[str, int] = {}
    statuses: dict[str, int] = {}
    failures = []
    for rec in trials:
        for label in rec.get("cases", ()):
            histogram[label] = histogram.get(label, 0) + 1
        if rec.get("missed") is not None:
            key = str(rec["missed"])
            missed_freq[key] = missed_freq.get(key, 0) + 1
        if rec.get("status"):
            statuses[rec["status"]] = statuses.get(rec["status"], 0) + 1
        if not rec["ok"]:
            failures.append({"trial": rec["trial"], "error": rec.get("error")})

    report = {
        "config": {
            "dimension": cfg.dimension,
            "faults": cfg.fault_count,
            "trials": cfg.trial_count,
            "seed": cfg.seed,
            "budget": cfg.budget.max_expansions,
            "unsafe": cfg.unsafe,
        },
        "successes": sum(1 for r in trials if r["ok"]),
        "statuses": statuses,
        "case_histogram": histogram,
        "missed_frequency": missed_freq,
        "failures": failures,
        "trials": [
            {k: v for k, v in sorted(rec.items())} for rec in trials
        ],
    }
    if cfg.timing and elapsed:
        report["timing_s"] = {
            "median": statistics.median(elapsed),
            "max": max(elapsed),
            "total": sum(elapsed),
        }
    return report, elapsed


def _stress_csv(report: dict, timing: bool, elapsed: list[float]) -> str:
    cols = ["trial", "ok", "status", "missed", "path_len", "top_case"]
    if timing:
        cols.append("elapsed_s")
    lines = [",".join(cols)]
    for i, rec in enumerate(report["trials"]):
        cases = rec.get("cases") or []
        row = [
            str(rec["trial"]),
            "1" if rec["ok"] else "0",
            rec.get("status") or "",
            "" if rec.get("missed") is None else str(rec["missed"]),
            str(rec.get("path_len") or ""),
            cases[0] if cases else "",
        ]
        if timing:
            row.append(f"{elapsed[i]:.6f}")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def cmd_stress(args) -> int:
    cfg = RunConfig(
        seed=args.seed,
        dimension=args.n,
        fault_count=args.faults,
        trial_count=args.trials,
        budget=_default_budget(args),
        unsafe=args.unsafe,
        timing=args.timing,
    )
    try:
        cfg.validate()
    except PreconditionViolated as exc:
        _info(f"error: {exc}")
        return 2
    report, elapsed = run_stress(cfg)
    _write(args.out, _dump(report))
    if args.csv:
        _write(args.csv, _stress_csv(report, args.timing, elapsed))
    ok = report["successes"] == cfg.trial_count
    if elapsed:
        _info(
            f"stress: {report['successes']}/{cfg.trial_count} ok; "
            f"median {statistics.median(elapsed):.3f}s, max {max(elapsed):.3f}s"
        )
    else:
        _info(f"stress: 0 trials")
    return 0 if ok else 1


# ----------------------------------------------------------------------
# check


def _check_topology(seed: int) -> dict:
    bad = []
    combos = [("crossed", None), ("mobius0", None), ("mobius1", None),
              ("locally-twisted", None)]
    for n in range(3, 7):
        for name, _ in combos:
            g = make_preset(VariantSpec(name), n)
            rep = check_shape(g)
            if not rep.ok:
                bad.append({"variant": name, "n": n,
                            "failures": [c.name for c in rep.failures]})
        g = make_preset(VariantSpec.random(seed + n), n)
        rep = check_shape(g)
        if not rep.ok:
            bad.append({"variant": "random", "n": n,
                        "failures": [c.name for c in rep.failures]})
    return {"name": "topology-shape-sweep", "ok": not bad, "detail": {"failures": bad}}


def _random_instance(n: int, fault_count: int, rng: random.Random):
    g = make_preset(VariantSpec.random(rng.randrange(1 << 30)), n)
    elements = [("node", v) for v in g.nodes] + [("edge", e) for e in g.edges]
    picked = rng.sample(elements, fault_count) if fault_count else []
    f = FaultSet.of(
        nodes=(p for k, p in picked if k == "node"),
        edges=(p for k, p in picked if k == "edge"),
    )
    return g, f, surviving_view(g, f)


def _check_ham_path_service(seed: int, trials: int, budget: SearchBudget) -> dict:
    # covering paths must exist between any surviving pair with n-3 faults
    n, failures = 4, []
    rng = random.Random(seed)
    for i in range(trials):
        g, f, view = _random_instance(n, n - 3, rng)
        s, t = rng.sample(view.nodes, 2)
        out = ham_path(view, s, t, budget)
        if not out.found:
            failures.append({"trial": i, "status": out.status.value})
    return {"name": "service-covering-path", "ok": not failures,
            "detail": {"n": n, "faults": n - 3, "trials": trials, "failures": failures}}


def _check_ham_cycle_service(seed: int, trials: int, budget: SearchBudget) -> dict:
    # covering cycles must exist with n-2 faults
    n, failures = 4, []
    rng = random.Random(seed)
    for i in range(trials):
        g, f, view = _random_instance(n, n - 2, rng)
        out = ham_cycle(view, budget)
        if not out.found:
            failures.append({"trial": i, "status": out.status.value})
    return {"name": "service-covering-cycle", "ok": not failures,
            "detail": {"n": n, "faults": n - 2, "trials": trials, "failures": failures}}


def _check_large_fault_cycle(seed: int, trials: int, budget: SearchBudget) -> dict:
    # dimension 7 with 2n-9 faults and minimum degree >= 2 must keep a
    # covering cycle
    n, failures = 7, []
    rng = random.Random(seed)
    done = 0
    while done < trials:
        g, f, view = _random_instance(n, 2 * n - 9, rng)
        delta, _ = view.min_degree_witness()
        if delta is None or delta < 2:
            continue
        out = ham_cycle(view, budget)
        if not out.found:
            failures.append({"trial": done, "status": out.status.value})
        done += 1
    return {"name": "service-large-fault-cycle", "ok": not failures,
            "detail": {"n": n, "faults": 2 * n - 9, "trials": trials,
                       "failures": failures}}


def _check_disjoint_paths_service(seed: int, draws: int, budget: SearchBudget) -> dict:
    n, failures = 4, []
    rng = random.Random(seed)
    g = make_preset(VariantSpec.random(seed), n)
    view = surviving_view(g, FaultSet.empty())
    for i in range(draws):
        x1, y1, x2, y2 = rng.sample(view.nodes, 4)
        out = two_disjoint_spanning_paths(view, x1, y1, x2, y2, budget)
        if not out.found:
            failures.append({"draw": i, "status": out.status.value})
    return {"name": "service-disjoint-path-cover", "ok": not failures,
            "detail": {"n": n, "faults": 0, "draws": draws, "failures": failures}}


def cmd_check(args) -> int:
    budget = _default_budget(args)
    suites = []
    if args.graph:
        try:
            g = _load_graph(args.graph)
        except (OSError, MalformedGraph) as exc:
            _info(f"error: {exc}")
            return 2
        rep = check_shape(g)
        suites.append({
            "name": "graph-file-shape",
            "ok": rep.ok,
            "detail": {"failures": [{"check": c.name, "detail": c.detail}
                                    for c in rep.failures]},
        })
    else:
        suites.append(_check_topology(args.seed))
        suites.append(_check_ham_path_service(args.seed, args.trials, budget))
        suites.append(_check_ham_cycle_service(args.seed + 1, args.trials, budget))
        suites.append(_check_large_fault_cycle(args.seed + 2, max(args.trials // 10, 3), budget))
        suites.append(_check_disjoint_paths_service(args.seed + 3, 100, budget))
    ok = all(s["ok"] for s in suites)
    _write(args.out, _dump({"ok": ok, "suites": suites}))
    for s in suites:
        _info(f"{'ok  ' if s['ok'] else 'FAIL'} {s['name']}")
    return 0 if ok else 1


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thln", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a network and write canonical JSON")
    g.add_argument("--variant", choices=_VARIANT_CHOICES, default="random")
    g.add_argument("--n", type=int, required=True, help="dimension (>= 3)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", default=None, help="output JSON (default stdout)")
    g.add_argument("--dot", default=None, help="also write a DOT rendering here")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("embed", help="fault-tolerant covering path between two nodes")
    e.add_argument("--graph", required=True)
    e.add_argument("--faults", required=True)
    e.add_argument("-s", type=int, required=True)
    e.add_argument("-t", type=int, required=True)
    e.add_argument("--budget", type=int, default=None)
    e.add_argument("--unsafe", action="store_true",
                   help="allow fault counts beyond the contract bound")
    e.add_argument("-o", "--out", default=None)
    e.set_defaults(func=cmd_embed)

    s = sub.add_parser("stress", help="seeded random campaign with validation")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--faults", type=int, default=6)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("--unsafe", action="store_true")
    s.add_argument("--timing", action="store_true",
                   help="include wall-clock numbers in the report (non-deterministic)")
    s.add_argument("-o", "--out", default=None)
    s.add_argument("--csv", default=None)
    s.set_defaults(func=cmd_stress)

    c = sub.add_parser("check", help="service guarantees and topology sweeps")
    c.add_argument("--graph", default=None,
                   help="check one graph file instead of the default suites")
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=None)
    c.add_argument("-o", "--out", default=None)
    c.set_defaults(func=cmd_check)

    x = sub.add_parser("export", help="convert a graph JSON file to DOT")
    x.add_argument("--graph", required=True)
    x.add_argument("-o", "--out", default=None)
    x.set_defaults(func=cmd_export)

    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
