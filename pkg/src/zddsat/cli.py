"""Command line front end: ``solve``, ``gen`` and ``bench``.

Exit codes follow the SAT competition convention: 10 SAT, 20 UNSAT, 1 error,
2 budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import dimacs
from .dd_store import BudgetExceeded
from .solver import SolveReport, Strategy, Verdict, solve

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR, EXIT_BUDGET = 10, 20, 1, 2

STRATEGY_NAMES = {"original": "original", "node": "node_bound", "clause": "clause_bound"}
METHOD_NAMES = {"dp": "dp", "bdd-direct": "bdd-direct", "bdd-zdd": "bdd-zdd", "bdd-via-zdd": "bdd-zdd"}
WORKERS_ENV = "ZDDSAT_WORKERS"

# operator recursion is as deep as twice the variable count, times a few
_STACK_BYTES = 512 * 1024 * 1024


@dataclass(frozen=True)
class RunConfig:
    method: str = "dp"
    strategy: str = "node"
    bound: int = 0
    workers: int = 1
    max_nodes: int | None = None
    max_seconds: float | None = None
    machine: bool = False

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("--bound must be >= 0")
        if self.workers < 1:
            raise ValueError("--workers must be >= 1")
        if self.method not in METHOD_NAMES:
            raise ValueError(f"unknown method {self.method!r}")
        if self.strategy not in STRATEGY_NAMES:
            raise ValueError(f"unknown strategy {self.strategy!r}")

    def run(self, cnf: dimacs.CnfInstance) -> SolveReport:
        return solve(
            cnf,
            METHOD_NAMES[self.method],
            Strategy(STRATEGY_NAMES[self.strategy], self.bound),
            max_nodes=self.max_nodes,
            max_seconds=self.max_seconds,
        )


def run_deep(fn, *args, **kwargs):
    """Call ``fn`` on a thread with a large stack and recursion limit."""
    box: dict = {}

    def target():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised on the caller's thread
            box["error"] = exc

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 200_000))
    old_size = threading.stack_size(_STACK_BYTES)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box["value"]


# -- report rendering --------------------------------------------------------


def model_line(report: SolveReport, nvars: int) -> str:
    model = report.model or {}
    lits = [v if model.get(v, False) else -v for v in range(1, nvars + 1)]
    return " ".join(map(str, (*lits, 0)))


def render_report(report: SolveReport, nvars: int, machine: bool) -> list[str]:
    sat = report.verdict is Verdict.SAT
    status = "SATISFIABLE" if sat else "UNSATISFIABLE"
    ratio = float(report.compression_ratio_initial)
    strategy = report.strategy.kind if report.strategy else "-"
    bound = report.strategy.bound if report.strategy else 0
    if machine:
        lines = [
            f"method {report.method}",
            f"strategy {strategy}",
            f"bound {bound}",
            f"initial_nodes {report.initial_nodes}",
            f"initial_literals {report.initial_literals}",
            f"compression_ratio {ratio:.6f}",
        ]
        for s in report.steps:
            lines.append(
                f"step {s.variable} {int(s.accepted)} {int(s.fallback)} {s.nodes_before} "
                f"{s.nodes_after} {s.clauses_before} {s.clauses_after}"
            )
        lines.append(f"eliminated {len(report.eliminated)}")
        lines.append(f"elapsed {report.elapsed:.6f}")
    else:
        lines = [
            f"c method {report.method}" + (f" strategy {strategy} bound {bound}" if report.strategy else ""),
            f"c initial nodes     {report.initial_nodes}",
            f"c initial literals  {report.initial_literals}",
            f"c compression ratio {ratio:.4f}",
        ]
        if report.steps:
            lines.append("c   var acc  nodes_before nodes_after clauses_before clauses_after")
            for s in report.steps:
                mark = "*" if s.fallback else ("+" if s.accepted else "-")
                lines.append(
                    f"c {s.variable:5d}  {mark}  {s.nodes_before:12d} {s.nodes_after:11d} "
                    f"{s.clauses_before:14d} {s.clauses_after:13d}"
                )
            lines.append(f"c eliminated {len(report.eliminated)} variables")
        lines.append(f"c elapsed {report.elapsed:.3f} s")
    lines.append(f"s {status}")
    if sat and report.method != "dp":
        lines.append(f"v {model_line(report, nvars)}")
    return lines


# -- commands ----------------------------------------------------------------


def cmd_solve(path: str, config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        cnf = dimacs.parse(Path(path).read_bytes())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if cnf.tautologies_dropped:
        print(f"c dropped {cnf.tautologies_dropped} tautological clauses", file=out)
    try:
        report = run_deep(config.run, cnf)
    except BudgetExceeded as exc:
        print(f"budget_exceeded {exc.reason}" if config.machine else f"c budget exceeded: {exc.reason}", file=out)
        return EXIT_BUDGET
    for line in render_report(report, cnf.nvars, config.machine):
        print(line, file=out)
    return EXIT_SAT if report.verdict is Verdict.SAT else EXIT_UNSAT


def cmd_gen(kind: str, n: int, out_path: str | None, out=None) -> int:
    out = out or sys.stdout
    if kind != "pigeonhole":
        print(f"error: unknown generator {kind!r}", file=sys.stderr)
        return EXIT_ERROR
    try:
        cnf = dimacs.gen_pigeonhole(n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = dimacs.write(cnf)
    if out_path is None:
        out.write(text)
        return 0
    try:
        Path(out_path).write_text(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"c wrote {out_path}: p cnf {cnf.nvars} {len(cnf.clauses)}", file=out)
    return 0


def _bench_row(config: RunConfig, ns: list[int]) -> list[dict]:
    """Solve ph(n) for each n; once a run fails, later cells are skipped."""
    cells = []
    stopped = False
    for n in ns:
        if stopped:
            cells.append({"n": n, "status": "skipped"})
            continue
        try:
            report = run_deep(config.run, dimacs.gen_pigeonhole(n))
        except BudgetExceeded:
            cells.append({"n": n, "status": "timeout"})
            stopped = True
            continue
        cells.append({
            "n": n,
            "status": report.verdict.value,
            "elapsed": report.elapsed,
            "nodes": report.initial_nodes,
            "literals": report.initial_literals,
            "ratio": float(report.compression_ratio_initial),
            "eliminated": len(report.eliminated),
            "steps": len(report.steps),
            "peak_nodes": max((s.nodes_after for s in report.steps if s.accepted), default=report.initial_nodes),
            "peak_clauses": max((s.clauses_after for s in report.steps if s.accepted), default=0),
        })
    return cells


def bench_configs(methods, strategies, bound, timeout, max_nodes) -> list[tuple[str, RunConfig]]:
    configs = []
    for method in methods:
        if method == "dp":
            for strat in strategies:
                configs.append((f"dp/{strat}", RunConfig("dp", strat, bound, max_nodes=max_nodes, max_seconds=timeout)))
        else:
            configs.append((method, RunConfig(method, max_nodes=max_nodes, max_seconds=timeout)))
    return configs


def cmd_bench(
    ns: list[int],
    methods: list[str],
    strategies: list[str],
    timeout: float | None,
    *,
    bound: int = 0,
    workers: int = 1,
    max_nodes: int | None = None,
    machine: bool = False,
    out=None,
) -> int:
    out = out or sys.stdout
    configs = bench_configs(methods, strategies, bound, timeout, max_nodes)
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_row, [c for _, c in configs], [ns] * len(configs)))
    else:
        rows = [_bench_row(c, ns) for _, c in configs]

    def cell_text(cell):
        return f"{cell['elapsed']:.2f}" if "elapsed" in cell else "--"

    if machine:
        for n in ns:
            cnf = dimacs.gen_pigeonhole(n)
            print(f"instance ph{n} nvars {cnf.nvars} clauses {len(cnf.clauses)}", file=out)
        for (name, _), cells in zip(configs, rows):
            for cell in cells:
                fields = [f"cell {name} ph{cell['n']} status {cell['status']}"]
                for key in ("elapsed", "nodes", "literals", "ratio", "eliminated", "steps",
                            "peak_nodes", "peak_clauses"):
                    if key in cell:
                        val = cell[key]
                        fields.append(f"{key} {val:.6f}" if isinstance(val, float) else f"{key} {val}")
                print(" ".join(fields), file=out)
        return 0

    width = max([len(name) for name, _ in configs] + [len("ratio")])
    head = " ".join(f"{'ph' + str(n):>8}" for n in ns)
    print(f"{'config':<{width}} {head}", file=out)
    for (name, _), cells in zip(configs, rows):
        print(f"{name:<{width}} " + " ".join(f"{cell_text(c):>8}" for c in cells), file=out)
    ratios = {}
    for cells in rows:
        for c in cells:
            if "ratio" in c:
                ratios.setdefault(c["n"], c["ratio"])
    print(f"{'ratio':<{width}} " + " ".join(
        f"{ratios[n]:>8.4f}" if n in ratios else f"{'--':>8}" for n in ns), file=out)
    return 0


# -- argument parsing --------------------------------------------------------


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _csv(choices):
    def parse(text: str) -> list[str]:
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if bad or not items:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}")
        return items
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zddsat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a DIMACS CNF file")
    p.add_argument("file")
    p.add_argument("--method", choices=sorted(METHOD_NAMES), default="dp")
    p.add_argument("--strategy", choices=sorted(STRATEGY_NAMES), default="node")
    p.add_argument("--bound", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--machine", action="store_true", help="key/value output")

    g = sub.add_parser("gen", help="write a benchmark instance")
    g.add_argument("kind", choices=["pigeonhole"])
    g.add_argument("n", type=int)
    g.add_argument("-o", "--output", default=None)

    b = sub.add_parser("bench", help="time pigeonhole instances across configurations")
    b.add_argument("--min", type=int, required=True, dest="nmin")
    b.add_argument("--max", type=int, required=True, dest="nmax")
    b.add_argument("--timeout", type=float, default=120.0)
    b.add_argument("--methods", type=_csv(["dp", "bdd-direct", "bdd-zdd"]), default=["dp"])
    b.add_argument("--strategies", type=_csv(list(STRATEGY_NAMES)), default=list(STRATEGY_NAMES))
    b.add_argument("--bound", type=int, default=0)
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("--max-nodes", type=int, default=None)
    b.add_argument("--machine", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen":
        return cmd_gen(args.kind, args.n, args.output)
    workers = args.workers if args.workers is not None else _default_workers()
    if args.command == "solve":
        try:
            config = RunConfig(args.method, args.strategy, args.bound, workers,
                               args.max_nodes, args.max_seconds, args.machine)
        except ValueError as exc:
            parser.error(str(exc))
        return cmd_solve(args.file, config)
    if args.nmin < 1 or args.nmax < args.nmin:
        parser.error("need 1 <= --min <= --max")
    if workers < 1 or args.bound < 0:
        parser.error("--workers must be >= 1 and --bound >= 0")
    return cmd_bench(list(range(args.nmin, args.nmax + 1)), args.methods, args.strategies,
                     args.timeout, bound=args.bound, workers=workers,
                     max_nodes=args.max_nodes, machine=args.machine)


if __name__ == "__main__":
    sys.exit(main())
