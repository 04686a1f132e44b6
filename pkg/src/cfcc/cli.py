"""Command-line front end: ``cfcc select``, ``cfcc eval`` and ``cfcc bench``.

Exit codes
----------
0  report produced
2  usage error (unknown flag, bad flag value)
3  input file unreadable or malformed
4  precondition violated (``k >= n``, unknown vertex label, dense cap, ...)
5  numerical failure (solver did not converge, degenerate pivot)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .baselines import random_selection, top_centrality, top_degree
from .centrality import group_closeness
from .errors import CfccError, EdgeListError, PreconditionError
from .graph import EdgeListWarning, Graph, VertexMap, largest_connected_component, read_edge_list
from .greedy_approx import approx_greedy
from .greedy_exact import Selection, exact_greedy
from .laplacian import DENSE_CAP, SolveStats
from .sketch import SketchConfig

__all__ = ["main", "RunReport", "EvalReport", "BenchReport", "EXIT_CODES"]

SCHEMA = 1
ALGORITHMS = ("exact", "approx", "random", "top-degree", "top-cent")
EXIT_CODES = {"ok": 0, "usage": 2, "io": 3, "precondition": 4, "numerical": 5}


class _Usage(Exception):
    pass


def _from_dict(cls, data: dict):
    names = {f.name for f in fields(cls)}
    return cls(**{k: v for k, v in data.items() if k in names})


@dataclass
class RunReport:
    """Result of ``cfcc select``; vertex labels are the input file's labels."""

    input: str
    algorithm: str
    k: int
    epsilon: float | None
    jl_factor: float | None
    seed: int
    vertices: list
    closeness: list[float]
    traces: list[float]
    trace_method: str
    total_time: float
    step_times: list[float]
    solver_stats: dict = field(default_factory=dict)
    n: int = 0
    m: int = 0
    schema: int = SCHEMA

    def __post_init__(self):
        if len(self.vertices) != self.k:
            raise ValueError("report must list exactly k vertices")

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return _from_dict(cls, json.loads(text))

    def to_text(self) -> str:
        lines = [
            f"algorithm: {self.algorithm}   k: {self.k}   graph: n={self.n} m={self.m}",
            f"evaluation: {self.trace_method}   total selection time: {self.total_time:.3f} s",
            f"{'step':>4}  {'vertex':>10}  {'closeness':>12}  {'time (s)':>10}",
        ]
        times = self.step_times if len(self.step_times) == self.k else [float("nan")] * self.k
        cl = self.closeness if self.closeness else [float("nan")] * self.k
        for i, (v, c, t) in enumerate(zip(self.vertices, cl, times), start=1):
            lines.append(f"{i:>4}  {str(v):>10}  {c:>12.6f}  {t:>10.4f}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["step", "vertex", "closeness", "trace", "step_time"])
        times = self.step_times if len(self.step_times) == self.k else [""] * self.k
        for i, v in enumerate(self.vertices):
            c = self.closeness[i] if self.closeness else ""
            t = self.traces[i] if self.traces else ""
            wr.writerow([i + 1, v, c, t, times[i]])
        return buf.getvalue().rstrip("\n")


@dataclass
class EvalReport:
    input: str
    vertices: list
    closeness: float
    trace: float
    method: str
    stderr: float
    n: int = 0
    schema: int = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        return _from_dict(cls, json.loads(text))

    def to_text(self) -> str:
        err = f" +/- {self.stderr:.3g} (trace std. error)" if self.method == "hutchinson" else ""
        return (f"set: {','.join(map(str, self.vertices))}\n"
                f"closeness: {self.closeness:.10g}\n"
                f"trace: {self.trace:.10g}{err}\n"
                f"method: {self.method}")

    def to_csv(self) -> str:
        return f"closeness,trace,method,stderr\n{self.closeness!r},{self.trace!r},{self.method},{self.stderr!r}"


@dataclass
class BenchReport:
    input: str
    k: int
    repeats: int
    rows: list[dict]
    closeness_ratio: float | None = None
    n: int = 0
    m: int = 0
    schema: int = SCHEMA

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return _from_dict(cls, json.loads(text))

    def to_text(self) -> str:
        lines = [f"{'algorithm':>10}  {'median time (s)':>15}  {'closeness':>12}  samples"]
        for r in self.rows:
            samples = ", ".join(f"{t:.3f}" for t in r["times"])
            lines.append(f"{r['algorithm']:>10}  {r['median_time']:>15.4f}  {r['closeness']:>12.6f}  [{samples}]")
        if self.closeness_ratio is not None:
            lines.append(f"approx/exact closeness ratio: {self.closeness_ratio:.6f}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["algorithm", "median_time", "closeness", "ratio"])
        for r in self.rows:
            ratio = self.closeness_ratio if r["algorithm"] == "approx" and self.closeness_ratio is not None else ""
            wr.writerow([r["algorithm"], r["median_time"], r["closeness"], ratio])
        return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------- plumbing


def _load(path: str) -> tuple[Graph, VertexMap]:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", EdgeListWarning)
            g, vmap = read_edge_list(path)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except OSError as exc:
        raise EdgeListError(None, f"cannot read {path}: {exc.strerror or exc}") from exc
    if g.n == 0:
        raise EdgeListError(None, f"{path} contains no edges")
    lcc, inner = largest_connected_component(g)
    print(f"notice: using the largest connected component ({lcc.n} of {g.n} vertices, "
          f"{lcc.m} of {g.m} edges)", file=sys.stderr)
    return lcc, vmap.compose(inner)


def _sketch_config(args) -> SketchConfig:
    jl = None if args.jl_factor is not None and args.jl_factor <= 0 else args.jl_factor
    return SketchConfig(epsilon=args.epsilon, jl_factor=jl, delta=args.delta, seed=args.seed,
                        solver=args.solver)


def _run(g: Graph, algo: str, k: int, args, stats: SolveStats) -> Selection:
    cap = args.dense_cap
    if algo == "exact":
        return exact_greedy(g, k, cap=cap)
    if algo == "approx":
        return approx_greedy(g, k, _sketch_config(args), args.seed, cap=cap, stats=stats)
    if algo == "random":
        return random_selection(g, k, args.seed, cap=cap)
    if algo == "top-degree":
        return top_degree(g, k, cap=cap, seed=args.seed)
    if algo == "top-cent":
        return top_centrality(g, k, cap=cap, cfg=_sketch_config(args), seed=args.seed)
    raise _Usage(f"unknown algorithm {algo!r}")


def _selection_report(path, g, vmap, sel: Selection, args, stats: SolveStats) -> RunReport:
    approx = sel.algorithm == "approx"
    return RunReport(
        input=str(path),
        algorithm=sel.algorithm,
        k=sel.k,
        epsilon=args.epsilon if approx else None,
        jl_factor=args.jl_factor if approx else None,
        seed=args.seed,
        vertices=[vmap.to_external(u) for u in sel.vertices],
        closeness=list(sel.closeness),
        traces=list(sel.traces),
        trace_method=sel.trace_method,
        total_time=sel.total_time,
        step_times=list(sel.step_times),
        solver_stats=stats.as_dict(),
        n=g.n,
        m=g.m,
    )


def _emit(report, fmt: str):
    text = {"json": report.to_json, "csv": report.to_csv, "text": report.to_text}[fmt]()
    print(text)


def cmd_select(args) -> RunReport:
    g, vmap = _load(args.input)
    stats = SolveStats()
    sel = _run(g, args.algo, args.k, args, stats)
    report = _selection_report(args.input, g, vmap, sel, args, stats)
    _emit(report, args.format)
    return report


def cmd_eval(args) -> EvalReport:
    g, vmap = _load(args.input)
    labels = [tok.strip() for tok in args.set.split(",") if tok.strip()]
    if not labels:
        raise PreconditionError("--set must name at least one vertex")
    ids = []
    for lab in labels:
        try:
            ids.append(vmap.to_internal(lab))
        except KeyError:
            raise PreconditionError(f"vertex label {lab!r} not found in the largest component") from None
    value = group_closeness(g, ids, args.method, probes=args.probes, rng=args.seed,
                            cap=args.dense_cap, solver=args.solver)
    report = EvalReport(
        input=str(args.input),
        vertices=[vmap.to_external(u) for u in sorted(set(ids))],
        closeness=value.closeness,
        trace=value.trace,
        method=value.method,
        stderr=value.stderr,
        n=g.n,
    )
    _emit(report, args.format)
    return report


def cmd_bench(args) -> BenchReport:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise _Usage(f"--algos must be a subset of {','.join(ALGORITHMS)}")
    if args.repeats < 1:
        raise _Usage("--repeats must be at least 1")
    g, _ = _load(args.input)
    rows = []
    for algo in algos:
        times, sel = [], None
        for _ in range(args.repeats):
            sel = _run(g, algo, args.k, args, SolveStats())
            times.append(sel.total_time)
        rows.append({"algorithm": algo, "times": times, "median_time": statistics.median(times),
                     "closeness": sel.final_closeness, "trace_method": sel.trace_method})
    by = {r["algorithm"]: r for r in rows}
    ratio = by["approx"]["closeness"] / by["exact"]["closeness"] if "approx" in by and "exact" in by else None
    report = BenchReport(str(args.input), args.k, args.repeats, rows, ratio, g.n, g.m)
    _emit(report, args.format)
    return report


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CODES["usage"])


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfcc", description="Group current-flow closeness maximization.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="edge list: 'u v [w]' per line")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--solver", choices=("jacobi", "lu"), default="jacobi",
                        help="preconditioner for iterative Laplacian solves")
    common.add_argument("--dense-cap", type=_positive_int, default=DENSE_CAP,
                        help="largest dimension handled by dense inversion")

    sketch = _Parser(add_help=False)
    sketch.add_argument("--epsilon", type=float, default=0.3)
    sketch.add_argument("--jl-factor", type=float, default=20.0,
                        help="projection rows per ln n; 0 selects the worst-case row count")
    sketch.add_argument("--delta", type=float, default=1e-8,
                        help="relative residual of every solve")

    s = sub.add_parser("select", parents=[common, sketch], help="choose k vertices")
    s.add_argument("--k", type=_positive_int, required=True)
    s.add_argument("--algo", choices=ALGORITHMS, default="approx")
    s.set_defaults(func=cmd_select)

    e = sub.add_parser("eval", parents=[common], help="closeness of a given vertex set")
    e.add_argument("--set", required=True, help="comma-separated vertex labels")
    e.add_argument("--method", choices=("dense", "solve", "hutchinson"), default="dense")
    e.add_argument("--probes", type=_positive_int, default=100)
    e.set_defaults(func=cmd_eval)

    b = sub.add_parser("bench", parents=[common, sketch], help="compare selection algorithms")
    b.add_argument("--k", type=_positive_int, required=True)
    b.add_argument("--algos", default="exact,approx", help="comma-separated subset of " + ",".join(ALGORITHMS))
    b.add_argument("--repeats", type=_positive_int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except _Usage as exc:
        print(f"cfcc: error: {exc}", file=sys.stderr)
        return EXIT_CODES["usage"]
    except EdgeListError as exc:
        print(f"cfcc: input error: {exc}", file=sys.stderr)
        return EXIT_CODES["io"]
    except PreconditionError as exc:
        print(f"cfcc: refused: {exc}", file=sys.stderr)
        return EXIT_CODES["precondition"]
    except (CfccError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"cfcc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_CODES["numerical"]
    return EXIT_CODES["ok"]


if __name__ == "__main__":
    sys.exit(main())
