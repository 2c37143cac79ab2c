"""Command-line frontend tying the pipeline together.

Subcommands:

  bounds     distance profile and the average-time lower bound
  words      shortest-word set and generator occupancy
  factorize  1-factorization / spanning factorization artifacts
  schedule   time slots for a word collection (CSV rows + JSON summary)
  simulate   replay a schedule and count conflicts and deliveries
  pipeline   words -> factorize -> schedule -> simulate, one verdict line
  compare    rank candidate networks under a wire budget

Graphs come from ``--builtin <name>`` or ``--spec <file>`` (see specfile for
the JSON format).  Artifacts written by one subcommand are read back by the
next stage unchanged: words/factorize emit JSON, schedule emits CSV rows
plus a JSON summary, simulate reads both and emits a trace CSV plus a JSON
verdict.

Exit codes: 0 success, 1 invalid input or usage, 2 infeasible or search
budget exhausted.  Usage errors from argparse are remapped from its default
2 to 1 so that 2 keeps its infeasibility meaning in scripts.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures, specfile
from .costmodel import CostParams, compare_networks
from .errors import InfeasibleError, InputError, SearchBudgetError
from .factorization import (
    DEFAULT_SEARCH_BUDGET,
    SpanningFactorization,
    factor_digraph,
    factorization_from_successors,
    one_factorize,
    search_spanning_factorization,
    spanning_factorization_from_cayley,
)
from .graphs import CosetGraph, Digraph, as_digraph, build_cayley_coset_graph, emit_adjacency, regular_degree
from .groups import GroupSpec
from .layers import average_diameter_bound, layer_profile
from .scheduling import (
    DEFAULT_SCHEDULE_BUDGET,
    Schedule,
    classify,
    exact_min_schedule,
    factor_occurrences,
    greedy_schedule,
    two_layer_counts,
    two_layer_time_bound,
)
from .simulate import expand_cayley_paths, expand_factor_paths, run_transpose, trace_csv_rows
from .words import DEFAULT_SEARCH_BUDGET as DEFAULT_WORD_BUDGET
from .words import WordSet, bfs_word_set, generator_occurrences, regular_bound_exact


# ---------------------------------------------------------------------------
# plumbing: argument scaffolding, artifact readers/writers
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; here 2 means infeasible, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=sorted(fixtures.BUILTIN_SPECS),
                     help="use a built-in fixture graph")
    src.add_argument("--spec", metavar="FILE", help="JSON graph spec file")


def _load_graph(args) -> tuple[CosetGraph | None, Digraph]:
    """Resolve --builtin/--spec into (coset graph or None, digraph view)."""
    if args.builtin:
        cg = fixtures.builtin_graph(args.builtin)
        return cg, as_digraph(cg)
    parsed = specfile.load_spec_file(args.spec)
    if isinstance(parsed, GroupSpec):
        cg = build_cayley_coset_graph(parsed)
        return cg, as_digraph(cg)
    regular_degree(parsed)  # raw digraphs must be regular before anything else
    return None, parsed


def _json_default(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    raise TypeError(f"cannot serialize {x!r}")


def _emit_json(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, default=_json_default) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    return doc


def _parse_words_doc(doc: dict, origin: str) -> dict[int, tuple[int, ...]]:
    if "words" not in doc or not isinstance(doc["words"], dict):
        raise InputError(f"{origin}: missing 'words' object")
    word_map = {}
    for key, word in doc["words"].items():
        try:
            v = int(key)
        except ValueError:
            raise InputError(f"{origin}: word key {key!r} is not a vertex index") from None
        if not isinstance(word, list) or not all(isinstance(j, int) for j in word):
            raise InputError(f"{origin}: word for vertex {key} must be a list of generator indices")
        word_map[v] = tuple(word)
    return word_map


def _parse_factorization_doc(doc: dict, origin: str):
    for field in ("n", "d", "factors"):
        if field not in doc:
            raise InputError(f"{origin}: missing '{field}'")
    factors = doc["factors"]
    if not isinstance(factors, list) or len(factors) != doc["d"]:
        raise InputError(f"{origin}: 'factors' must list d={doc['d']} successor arrays")
    words = doc.get("words")
    if words is not None:
        if not isinstance(words, list) or len(words) != doc["n"]:
            raise InputError(f"{origin}: 'words' must hold one word per vertex")
        words = [tuple(int(j) for j in w) for w in words]
    return factorization_from_successors(factors), words


def _write_schedule_csv(path: str, word_map: dict[int, tuple[int, ...]], sched: Schedule) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["word_target", "position", "factor", "time"])
        for target in sorted(sched.times):
            word = word_map[target]
            for pos, (j, t) in enumerate(zip(word, sched.times[target])):
                w.writerow([target, pos, j, t])


def _read_schedule_csv(path: str) -> tuple[dict[int, tuple[int, ...]], Schedule]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows or rows[0] != ["word_target", "position", "factor", "time"]:
        raise InputError(f"{path}: expected header word_target,position,factor,time")
    per_target: dict[int, dict[int, tuple[int, int]]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            target, pos, factor, time = (int(x) for x in row)
        except (ValueError, TypeError):
            raise InputError(f"{path}:{lineno}: expected four integers, got {row!r}") from None
        slots = per_target.setdefault(target, {})
        if pos in slots:
            raise InputError(f"{path}:{lineno}: duplicate position {pos} for word {target}")
        slots[pos] = (factor, time)
    word_map: dict[int, tuple[int, ...]] = {}
    times: dict[int, tuple[int, ...]] = {}
    for target, slots in per_target.items():
        if sorted(slots) != list(range(len(slots))):
            raise InputError(f"{path}: word {target} has gaps in its positions")
        ordered = [slots[i] for i in range(len(slots))]
        word_map[target] = tuple(f for f, _ in ordered)
        times[target] = tuple(t for _, t in ordered)
    return word_map, Schedule(times=times)


def _write_trace_csv(path: str, trace, host) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "src", "dst", "gen", "packet_src", "packet_dst"])
        for row in trace_csv_rows(trace, host):
            w.writerow(row)


def _schedule_summary(word_map, sched, degree, profile) -> dict:
    flags = classify(word_map, sched, degree, profile)
    occ = factor_occurrences(word_map, degree)
    corollary6 = None
    if word_map and max(len(w) for w in word_map.values()) <= 2:
        corollary6 = two_layer_time_bound(two_layer_counts(word_map, degree))
    return {
        "makespan": sched.makespan,
        "flags": {
            "balanced": flags.balanced,
            "short": flags.short,
            "optimal": flags.optimal,
            "minimum": flags.minimum,
        },
        "bounds": {
            "theta": average_diameter_bound(profile),
            "psi_for_W": max(occ) if occ else 0,
            "corollary6": corollary6,
        },
    }


def _make_schedule(word_map, degree, method: str, budget: int):
    """Run the chosen scheduler; return (schedule, None) or (None, failure message)."""
    if method == "greedy":
        return greedy_schedule(word_map, degree), None
    res = exact_min_schedule(word_map, degree, budget=budget)
    if res.status != "optimal":
        return None, f"exact scheduling gave up ({res.status}) after {res.nodes} nodes"
    return res.schedule, None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_bounds(args) -> int:
    cg, dg = _load_graph(args)
    profile = layer_profile(cg if cg is not None else dg)
    doc = {
        "P": profile.vertex_count,
        "d": profile.degree,
        "D": profile.diameter,
        "n": list(profile.layer_sizes),
        "theta": average_diameter_bound(profile),
    }
    if args.adjacency:
        Path(args.adjacency).write_text(emit_adjacency(cg if cg is not None else dg), encoding="utf-8")
    _emit_json(doc, args.out)
    return 0


def cmd_words(args) -> int:
    cg, _ = _load_graph(args)
    if cg is None:
        raise InputError("word sets need a group-form spec, not a raw digraph")
    ws = bfs_word_set(cg, mode=args.mode)
    occ = generator_occurrences(ws, cg.degree)
    profile = layer_profile(cg)
    doc = {
        "words": {str(v): list(w) for v, w in sorted(ws.words.items())},
        "occurrences": occ,
        "psi_W": max(occ),
        "theta": average_diameter_bound(profile),
    }
    if args.exact:
        bound = regular_bound_exact(cg, budget=args.budget)
        doc["psi_exact"] = bound.value
        doc["exact"] = bound.exact
    _emit_json(doc, args.out)
    return 0


def cmd_factorize(args) -> int:
    cg, dg = _load_graph(args)
    n, d = dg.vertex_count, regular_degree(dg)
    doc = {"n": n, "d": d}
    if args.search:
        res = search_spanning_factorization(dg, budget=args.budget, max_slack=args.max_slack)
        if res.found is None:
            print(
                f"no spanning factorization found ({res.reason}): {res.nodes} nodes over "
                f"{res.factorizations} factorizations, deepest word prefix {res.best_depth}",
                file=sys.stderr,
            )
            return 2
        sf = res.found
        doc["factors"] = [list(succ) for succ in sf.base.factors]
        doc["words"] = [list(w) for w in sf.words]
        doc["search"] = {"nodes": res.nodes, "factorizations": res.factorizations}
    elif cg is not None and cg.is_cayley:
        ws = bfs_word_set(cg, mode=args.mode)
        sf = spanning_factorization_from_cayley(cg, ws)
        doc["factors"] = [list(succ) for succ in sf.base.factors]
        doc["words"] = [list(w) for w in sf.words]
    else:
        f = one_factorize(dg)
        doc["factors"] = [list(succ) for succ in f.factors]
        doc["words"] = None
    _emit_json(doc, args.out)
    return 0


def cmd_schedule(args) -> int:
    cg, dg = _load_graph(args)
    profile = layer_profile(cg if cg is not None else dg)
    if args.factorization:
        fdoc = _read_json(args.factorization)
        f, words = _parse_factorization_doc(fdoc, args.factorization)
        if words is None:
            raise InputError(f"{args.factorization}: factor-only artifact has no words to schedule")
        degree = len(f.factors)
        word_map = {i: w for i, w in enumerate(words) if w}
    elif args.words:
        wdoc = _read_json(args.words)
        parsed = _parse_words_doc(wdoc, args.words)
        degree = cg.degree if cg is not None else regular_degree(dg)
        word_map = {v: w for v, w in parsed.items() if w}
    else:
        if cg is None or not cg.is_cayley:
            raise InputError("scheduling a coset graph or raw digraph needs --words or --factorization")
        ws = bfs_word_set(cg, mode=args.mode)
        degree = cg.degree
        word_map = {v: w for v, w in ws.words.items() if w}
    sched, failure = _make_schedule(word_map, degree, args.method, args.budget)
    if sched is None:
        print(failure, file=sys.stderr)
        return 2
    if args.csv:
        _write_schedule_csv(args.csv, word_map, sched)
    _emit_json(_schedule_summary(word_map, sched, degree, profile), args.out)
    return 0


def cmd_simulate(args) -> int:
    cg, dg = _load_graph(args)
    word_map, sched = _read_schedule_csv(args.schedule)
    profile = layer_profile(cg if cg is not None else dg)
    theta = average_diameter_bound(profile)
    if args.factorization:
        fdoc = _read_json(args.factorization)
        f, _ = _parse_factorization_doc(fdoc, args.factorization)
        n = len(f.factors[0])
        if n != dg.vertex_count:
            raise InputError(f"factorization covers {n} vertices, graph has {dg.vertex_count}")
        sf = SpanningFactorization(base=f, words=tuple(word_map.get(i, ()) for i in range(n)))
        paths = expand_factor_paths(sf, sched)
        host = factor_digraph(f)
    else:
        if cg is None:
            raise InputError("raw digraph schedules replay over factors; pass --factorization")
        ws = WordSet(words=word_map, shortest=False)
        paths = expand_cayley_paths(cg, ws, sched)
        host = cg
    trace = run_transpose(host, paths)
    verdict = {
        "tau": trace.horizon,
        "conflicts": len(trace.conflicts),
        "undelivered": len(trace.undelivered),
        "theta": theta,
        "optimal": bool(trace.clean and trace.horizon == theta),
    }
    if args.trace:
        _write_trace_csv(args.trace, trace, host)
    _emit_json(verdict, args.out)
    return 0 if trace.clean else 2


def cmd_pipeline(args) -> int:
    cg, dg = _load_graph(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    profile = layer_profile(cg if cg is not None else dg)
    theta = average_diameter_bound(profile)

    use_cayley = cg is not None and cg.is_cayley and not args.search
    if use_cayley:
        ws = bfs_word_set(cg, mode=args.mode)
        occ = generator_occurrences(ws, cg.degree)
        _emit_json(
            {
                "words": {str(v): list(w) for v, w in sorted(ws.words.items())},
                "occurrences": occ,
                "psi_W": max(occ),
                "theta": theta,
            },
            str(outdir / "words.json"),
        )
        degree = cg.degree
        word_map = {v: w for v, w in ws.words.items() if w}
        psi_w = max(occ)
    else:
        res = search_spanning_factorization(dg, budget=args.budget, max_slack=args.max_slack)
        if res.found is None:
            print(
                f"no spanning factorization found ({res.reason}): {res.nodes} nodes over "
                f"{res.factorizations} factorizations, deepest word prefix {res.best_depth}",
                file=sys.stderr,
            )
            return 2
        sf = res.found
        degree = sf.degree
        _emit_json(
            {
                "n": sf.vertex_count,
                "d": degree,
                "factors": [list(succ) for succ in sf.base.factors],
                "words": [list(w) for w in sf.words],
                "search": {"nodes": res.nodes, "factorizations": res.factorizations},
            },
            str(outdir / "factorization.json"),
        )
        word_map = {i: w for i, w in enumerate(sf.words) if w}
        psi_w = max(factor_occurrences(word_map, degree))

    sched, failure = _make_schedule(word_map, degree, args.method, args.schedule_budget)
    if sched is None:
        print(failure, file=sys.stderr)
        return 2
    _write_schedule_csv(str(outdir / "schedule.csv"), word_map, sched)
    _emit_json(_schedule_summary(word_map, sched, degree, profile), str(outdir / "schedule.json"))

    if use_cayley:
        paths = expand_cayley_paths(cg, ws, sched)
        host = cg
    else:
        paths = expand_factor_paths(sf, sched)
        host = factor_digraph(sf.base)
    trace = run_transpose(host, paths)
    tau = trace.horizon
    optimal = bool(trace.clean and tau == theta)
    _write_trace_csv(str(outdir / "trace.csv"), trace, host)
    _emit_json(
        {
            "tau": tau,
            "conflicts": len(trace.conflicts),
            "undelivered": len(trace.undelivered),
            "theta": theta,
            "psi_W": psi_w,
            "optimal": optimal,
        },
        str(outdir / "verdict.json"),
    )
    print(f"tau={tau} theta={theta} psi_W={psi_w} optimal={str(optimal).lower()}")
    return 0 if trace.clean else 2


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def cmd_compare(args) -> int:
    if len(args.networks) < 2:
        raise InputError(f"need at least two network files, got {len(args.networks)}")
    candidates: list[tuple[str, CostParams]] = []
    taus: dict[str, float] = {}
    for path in args.networks:
        doc = _read_json(path)
        for field in ("P", "d", "D", "rho"):
            if field not in doc:
                raise InputError(f"{path}: missing '{field}'")
        name = doc.get("name", Path(path).stem)
        params = CostParams(
            processors=doc["P"],
            degree=doc["d"],
            avg_diameter=doc["D"],
            cost_ratio=doc["rho"],
            matrix_dim=args.matrix_dim,
            iterations=args.iterations,
        )
        candidates.append((name, params))
        if "tau" in doc:
            taus[name] = doc["tau"]
    verdict = compare_networks(candidates, gamma_max=args.gamma_max, taus=taus if args.measured else None)
    if args.ranking:
        with open(args.ranking, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "name", "P", "d", "D", "wire_cost", "compute", "exchange", "total"])
            for rank, r in enumerate(verdict.ranking, start=1):
                w.writerow([
                    rank, r.name, r.params.processors, r.params.degree, r.params.avg_diameter,
                    r.wire_cost, r.times.compute, r.times.exchange, r.times.total,
                ])
    _emit_json(
        {
            "winner": verdict.winner,
            "explanation": verdict.explanation,
            "ranking": [r.name for r in verdict.ranking],
            "eliminated": [[name, wire] for name, wire in verdict.eliminated],
        },
        args.out,
    )
    if verdict.winner is None:
        print(verdict.explanation, file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alltoall", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized search order (searches default to a deterministic order)")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker cap for parallel search (1 keeps runs fully deterministic)")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("bounds", parents=[common], help="distance profile and lower bounds")
    _add_graph_source(p)
    p.add_argument("--out", metavar="FILE", help="write the JSON report here instead of stdout")
    p.add_argument("--adjacency", metavar="FILE", help="also dump 'src dst gen' arc lines")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("words", parents=[common], help="shortest-word set and occupancy")
    _add_graph_source(p)
    p.add_argument("--mode", choices=("first-found", "load-balanced"), default="load-balanced")
    p.add_argument("--exact", action="store_true", help="also search for the exact regular bound")
    p.add_argument("--budget", type=int, default=DEFAULT_WORD_BUDGET, help="node budget for --exact")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_words)

    p = sub.add_parser("factorize", parents=[common], help="1-factorization artifacts")
    _add_graph_source(p)
    p.add_argument("--search", action="store_true",
                   help="search for a spanning factorization instead of the direct construction")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    p.add_argument("--max-slack", type=int, default=2,
                   help="extra total word length allowed beyond the BFS floor")
    p.add_argument("--mode", choices=("first-found", "load-balanced"), default="load-balanced",
                   help="word choice for the Cayley construction")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("schedule", parents=[common], help="assign time slots to a word collection")
    _add_graph_source(p)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--words", metavar="FILE", help="words artifact from the words subcommand")
    src.add_argument("--factorization", metavar="FILE", help="artifact from the factorize subcommand")
    p.add_argument("--mode", choices=("first-found", "load-balanced"), default="load-balanced",
                   help="word choice when neither artifact is given")
    p.add_argument("--method", choices=("exact", "greedy"), default="exact")
    p.add_argument("--budget", type=int, default=DEFAULT_SCHEDULE_BUDGET)
    p.add_argument("--csv", metavar="FILE", help="write schedule rows here")
    p.add_argument("--out", metavar="FILE", help="write the JSON summary here instead of stdout")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("simulate", parents=[common], help="replay a schedule and report the trace")
    _add_graph_source(p)
    p.add_argument("--schedule", metavar="FILE", required=True, help="schedule CSV to replay")
    p.add_argument("--factorization", metavar="FILE",
                   help="replay over these factors instead of generator labels")
    p.add_argument("--trace", metavar="FILE", help="write the trace CSV here")
    p.add_argument("--out", metavar="FILE", help="write the JSON verdict here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pipeline", parents=[common], help="full chain with a final verdict line")
    _add_graph_source(p)
    p.add_argument("--outdir", metavar="DIR", default="out", help="artifact directory (default: out)")
    p.add_argument("--mode", choices=("first-found", "load-balanced"), default="load-balanced")
    p.add_argument("--method", choices=("exact", "greedy"), default="exact")
    p.add_argument("--search", action="store_true",
                   help="force the spanning-factorization route even for Cayley graphs")
    p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                   help="node budget for the factorization search")
    p.add_argument("--max-slack", type=int, default=2)
    p.add_argument("--schedule-budget", type=int, default=DEFAULT_SCHEDULE_BUDGET)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("compare", parents=[common], help="rank networks under a wire budget")
    p.add_argument("networks", nargs="+", metavar="FILE",
                   help="network descriptor JSON files: {name, P, d, D, rho}")
    p.add_argument("--gamma-max", type=_number, required=True, help="wire budget: keep P*d < gamma_max")
    p.add_argument("--matrix-dim", type=int, default=1024, help="N in the workload model")
    p.add_argument("--iterations", type=int, default=1, help="M in the workload model")
    p.add_argument("--measured", action="store_true",
                   help="use each file's 'tau' field instead of the optimistic model")
    p.add_argument("--ranking", metavar="FILE", help="write the ranking CSV here")
    p.add_argument("--out", metavar="FILE", help="write the JSON verdict here instead of stdout")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SearchBudgetError, InfeasibleError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
