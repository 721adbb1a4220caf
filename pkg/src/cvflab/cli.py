"""``cvflab`` command line: gen-graph, analyze-full, analyze-partial, simulate, fit."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from pathlib import Path

from . import io
from .case_studies import PROGRAMS, make_program
from .cvf import CVF_KINDS, FEASIBLE, analyze_full, fit_exponential
from .errors import CvfLabError, FitError, OutputError, ResourceError, UsageError
from .graphs import GraphSpec, TOPOLOGIES, generate, read_edge_list, write_edge_list
from .program import CommGraph
from .sampling import SamplingConfig, partial_reports
from .simulation import SCHEDULERS, SimConfig, run_campaign
from .statespace import AVERAGE, DEFAULT_MEMORY_BUDGET, MAX, dump_ranks, enumerate_space

DEFAULT_OUT_BASE = "cvflab-runs"
RANK_CHOICES = {"max": (MAX,), "avg": (AVERAGE,), "both": (MAX, AVERAGE)}
# flags that never change results, so they stay out of the output-directory hash
_UNHASHED = {"workers", "out", "func"}


def parse_bytes(text: str) -> int:
    m = re.fullmatch(r"\s*(\d+(?:\.\d+)?)\s*([KMGT]?)i?B?\s*", text, flags=re.IGNORECASE)
    if not m:
        raise argparse.ArgumentTypeError(f"bad byte count {text!r} (try 8G or 500M)")
    scale = 1024 ** " KMGT".index(m.group(2).upper() or " ")
    return int(float(m.group(1)) * scale)


def parse_intervals(values: list[str]) -> tuple[int, ...]:
    out = []
    for v in values:
        for part in v.split(","):
            part = part.strip()
            if part:
                try:
                    out.append(int(part))
                except ValueError:
                    raise UsageError(f"bad cvf interval {part!r}") from None
    if not out:
        raise UsageError("need at least one cvf interval")
    return tuple(out)


def config_hash(args: argparse.Namespace) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _UNHASHED}
    if getattr(args, "graph_file", None):
        cfg["graph_file_sha256"] = hashlib.sha256(Path(args.graph_file).read_bytes()).hexdigest()
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def output_dir(args: argparse.Namespace) -> Path:
    if args.out:
        return Path(args.out)
    base = os.environ.get("CVFLAB_OUT") or DEFAULT_OUT_BASE
    return Path(base) / f"{args.command}-{config_hash(args)}"


def _write_config(args, out: Path) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _UNHASHED}
    text = json.dumps(cfg, sort_keys=True, indent=1, default=str) + "\n"
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.json").write_bytes(text.encode())
    except OSError as exc:
        raise OutputError(f"cannot write {out / 'config.json'}: {exc.strerror or exc}") from exc


def _ext(args) -> str:
    return "." + args.format


def _graph_spec(args) -> GraphSpec:
    return GraphSpec(args.topology, args.n, args.degree, args.attach, args.seed)


def build_program(args):
    """Program plus a topology label for the reports."""
    if args.program == "token-ring":
        if args.graph_file or args.topology not in (None, "ring"):
            raise UsageError("the token ring is always a ring; drop --topology/--graph-file")
        if args.n is None:
            raise UsageError("--n is required")
        return make_program("token-ring", n=args.n, last_rule=args.token_rule), "ring"
    if args.graph_file:
        if args.topology is not None:
            raise UsageError("give either --topology or --graph-file, not both")
        graph = read_edge_list(args.graph_file, args.n)
        return make_program(args.program, graph), "edge-list"
    if args.n is None:
        raise UsageError("--n is required")
    topology = args.topology or "ring"
    if topology == "path":
        if args.n < 2:
            raise UsageError("path needs n >= 2")
        graph = CommGraph.path(args.n)
    else:
        graph = generate(_graph_spec(argparse.Namespace(**{**vars(args), "topology": topology})))
    return make_program(args.program, graph), topology


def cmd_gen_graph(args) -> list[Path]:
    if args.topology is None or args.n is None:
        raise UsageError("gen-graph needs --topology and --n")
    graph = generate(_graph_spec(args))
    out = output_dir(args)
    _write_config(args, out)
    return [write_edge_list(graph, out / "graph.txt")]


def cmd_analyze_full(args) -> list[Path]:
    program, topology = build_program(args)
    try:
        space = enumerate_space(program, args.memory_budget, args.workers)
    except ResourceError as exc:
        raise ResourceError(f"{exc}; use analyze-partial for state spaces this large") from None
    result = analyze_full(space, RANK_CHOICES[args.rank], args.cvf_kind, topology,
                          cvf_outside_only=args.cvf_origins == "outside")
    out = output_dir(args)
    _write_config(args, out)
    files = [io.emit(io.report_rows(result.reports), io.REPORT_COLUMNS, out / f"report{_ext(args)}", args.format),
             io.emit(io.histogram_rows(result.histograms), io.HISTOGRAM_COLUMNS,
                     out / f"histogram{_ext(args)}", args.format)]
    if args.dump_ranks:
        for kind, table in result.ranks.items():
            path = out / f"ranks-{kind}.bin"
            dump_ranks(table, path)
            files.append(path)
    _summarize(result.reports)
    return files


def cmd_analyze_partial(args) -> list[Path]:
    program, topology = build_program(args)
    config = SamplingConfig(args.num_states or 1000, args.paths_per_state, args.walk_cap, args.seed)
    reports, hists = partial_reports(program, config, args.cvf_kind, RANK_CHOICES[args.rank],
                                     topology, args.workers)
    out = output_dir(args)
    _write_config(args, out)
    _summarize(reports)
    return [io.emit(io.report_rows(reports), io.REPORT_COLUMNS, out / f"report{_ext(args)}", args.format),
            io.emit(io.histogram_rows(hists), io.HISTOGRAM_COLUMNS, out / f"histogram{_ext(args)}", args.format)]


def cmd_simulate(args) -> list[Path]:
    program, topology = build_program(args)
    config = SimConfig(cvf_intervals=parse_intervals(args.cvf_interval), runs_per_state=args.runs_per_state,
                       step_threshold=args.threshold, num_initial=args.num_states or 20, seed=args.seed,
                       scheduler=args.scheduler)
    outcomes = run_campaign(program, config, args.workers)
    out = output_dir(args)
    _write_config(args, out)
    files = [io.emit(io.simulation_rows(outcomes, program.name, topology, program.n), io.SIMULATION_COLUMNS,
                     out / f"simulation{_ext(args)}", args.format)]
    if args.scatter:
        files.append(io.emit(io.scatter_rows(outcomes, program.name, topology, program.n), io.SCATTER_COLUMNS,
                             out / f"scatter{_ext(args)}", args.format))
    return files


def cmd_fit(args) -> list[Path]:
    fits = []
    for hist in io.histograms_from_rows(io.read_table(args.histogram)):
        try:
            fit = fit_exponential(hist)
        except FitError:
            fit = None
        fits.append((hist.source, hist.rank_kind, fit))
    out = output_dir(args)
    _write_config(args, out)
    return [io.emit(io.fit_rows(fits), io.FIT_COLUMNS, out / f"fit{_ext(args)}", args.format)]


def _summarize(reports) -> None:
    for r in reports:
        print(f"{r.program} {r.topology} n={r.n} {r.analysis_kind} {r.rank_kind}-rank: "
              f"effect_prog={r.effect_prog:.4g} effect_cvf={r.effect_cvf:.4g} rel_cvf={r.rel_cvf:.4g}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvflab", description="Rank-based cost analysis of cvfs.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", help="output directory (default: $CVFLAB_OUT or ./cvflab-runs, "
                                      "then a subdirectory named by the config hash)")
    common.add_argument("--format", choices=io.FORMATS, default="csv")

    topo = argparse.ArgumentParser(add_help=False)
    topo.add_argument("--topology", choices=(*TOPOLOGIES, "path"))
    topo.add_argument("--n", type=int)
    topo.add_argument("--degree", type=int, help="random-regular degree")
    topo.add_argument("--attach", type=int, help="power-law attachment count")

    prog = argparse.ArgumentParser(add_help=False, parents=[topo])
    prog.add_argument("--program", choices=PROGRAMS, required=True)
    prog.add_argument("--graph-file", help="edge list, one 'u v' per line")
    prog.add_argument("--token-rule", choices=("dijkstra", "copy"), default="dijkstra",
                      help="statement of the token ring's last process")

    analysis = argparse.ArgumentParser(add_help=False)
    analysis.add_argument("--rank", choices=tuple(RANK_CHOICES), default="both")
    analysis.add_argument("--cvf-kind", choices=CVF_KINDS, default=FEASIBLE)

    p = sub.add_parser("gen-graph", parents=[common, topo], help="write a generated graph as an edge list")
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser("analyze-full", parents=[common, prog, analysis], help="exact analysis of the state space")
    p.add_argument("--memory-budget", type=parse_bytes, default=DEFAULT_MEMORY_BUDGET)
    p.add_argument("--dump-ranks", action="store_true", help="also write binary rank tables")
    p.add_argument("--cvf-origins", choices=("all", "outside"), default="all",
                   help="origins counted in the cvf histogram and its fit")
    p.set_defaults(func=cmd_analyze_full)

    p = sub.add_parser("analyze-partial", parents=[common, prog, analysis], help="sampled analysis")
    p.add_argument("--num-states", type=int)
    p.add_argument("--paths-per-state", type=int, default=100)
    p.add_argument("--walk-cap", type=int, default=10_000)
    p.set_defaults(func=cmd_analyze_partial)

    p = sub.add_parser("simulate", parents=[common, prog], help="convergence with injected cvfs")
    p.add_argument("--cvf-interval", nargs="+", default=["1,2,4,8,16"])
    p.add_argument("--runs-per-state", type=int, default=5)
    p.add_argument("--threshold", type=int, default=10_000)
    p.add_argument("--num-states", type=int, help="number of initial states (default 20)")
    p.add_argument("--scheduler", choices=SCHEDULERS, default="enabled")
    p.add_argument("--scatter", action="store_true", help="also write per-run steps")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", parents=[common], help="exponential fits of a histogram file")
    p.add_argument("--histogram", required=True)
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("cvflab: error: --workers must be >= 1", file=sys.stderr)
        return UsageError.exit_code
    try:
        for path in args.func(args):
            print(path)
    except CvfLabError as exc:
        print(f"cvflab: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"cvflab: error: {exc}", file=sys.stderr)
        return OutputError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
