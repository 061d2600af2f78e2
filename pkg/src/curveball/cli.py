"""Command line entry point: ``curveball <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .chains import ChainError, ChainKind, IncompatibleKind, run_chain
from .degseq import (DegreeSequenceError, DirectedDegreeSequence, detect_induced_cycle_sets,
                     is_realizable_directed, parse_degree_file)
from .exactlab import (ExactLabError, build_transition_matrix, component_analysis,
                       enumerate_realizations, per_component_stationary,
                       verify_symmetry_and_balance)
from .experiment import ConfigError, ExperimentConfig, run_experiment
from .graph_core import (Flavor, GraphError, format_edge_list, parse_edge_list, from_edge_list,
                         to_edge_list, validate)
from .partition import count_two_partitions, format_partition, partition_frequencies
from .rng import SEED_ENV, Stream, default_seed

DATA_ERRORS = (GraphError, DegreeSequenceError, ChainError, ExactLabError, ConfigError,
               OSError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _kind(text: str) -> ChainKind:
    try:
        return ChainKind.parse(text)
    except (ValueError, IncompatibleKind) as exc:
        choices = ", ".join(k.value for k in ChainKind)
        raise argparse.ArgumentTypeError(f"{exc}; choose from {choices}") from None


def _kinds(text: str) -> list:
    return [_kind(t) for t in text.split(",") if t.strip()]


def _flavor(text: str) -> Flavor:
    try:
        return Flavor.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown flavor {text!r}; choose from {', '.join(f.value for f in Flavor)}") from None


def _read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- subcommands

def cmd_sample(args) -> int:
    rep = from_edge_list(parse_edge_list(_read_text(args.inp)))
    bad = validate(rep)
    if bad:
        raise GraphError("input graph is invalid: " + "; ".join(map(str, bad[:5])))
    kind = args.kind or {Flavor.DIRECTED_SIMPLE: ChainKind.DIRECTED_CURVEBALL,
                         Flavor.UNDIRECTED: ChainKind.UNDIRECTED_CURVEBALL}.get(
                             rep.flavor, ChainKind.CURVEBALL)
    if args.adjusted and rep.flavor is Flavor.DIRECTED_SIMPLE:
        seq = DirectedDegreeSequence.of(rep)
        if not is_realizable_directed(seq):
            raise DegreeSequenceError("degree sequence of the input is not realizable "
                                      "as a simple digraph")
    out = run_chain(rep, kind, args.steps, Stream(args.seed), adjusted=args.adjusted)
    _emit(format_edge_list(to_edge_list(out)), args.out)
    return 0


def cmd_experiment(args) -> int:
    data = {}
    if args.config:
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib
        with open(args.config, "rb") as fh:
            data = tomllib.load(fh)
    gen = dict(data.get("generator", {}))
    for key in ("type", "n", "p", "m", "path", "directed"):
        val = getattr(args, "gen_type" if key == "type" else key)
        if val is not None:
            gen[key] = val
    data["generator"] = gen
    for key in ("kinds", "steps", "reps", "every", "seed", "window", "tol", "jobs"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if "generator" not in data or "type" not in gen:
        raise UsageError("experiment needs a generator: --config FILE or --generator TYPE")
    cfg = ExperimentConfig.from_mapping(data)
    series = run_experiment(cfg)
    if args.csv_out:
        _emit(series.long_csv(), args.csv_out)
    _emit(series.mean_csv(), args.mean_out)
    for kind in series.kinds():
        print(f"plateau {kind.value} {series.plateau(kind, cfg.window, cfg.tol)}",
              file=sys.stderr)
    return 0


def read_degree_spec(path: str, flavor: Flavor):
    """Degree spec for :func:`enumerate_realizations` from a text file.

    directed/loops: ``in out`` per vertex; undirected: one degree per line;
    bipartite: ``r d`` for a row sum and ``c d`` for a column sum.
    """
    text = _read_text(path)
    if flavor is Flavor.BIPARTITE:
        rows, cols = [], []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            if len(line) != 2 or line[0] not in ("r", "c"):
                raise DegreeSequenceError(f"bipartite degree lines are 'r d' or 'c d', got {raw!r}")
            (rows if line[0] == "r" else cols).append(int(line[1]))
        return tuple(rows), tuple(cols)
    lines = parse_degree_file(text)
    if flavor is Flavor.UNDIRECTED:
        if any(len(r) != 1 for r in lines):
            raise DegreeSequenceError("undirected degree file needs one degree per line")
        return tuple(r[0] for r in lines)
    if any(len(r) != 2 for r in lines):
        raise DegreeSequenceError("directed degree file needs 'a_i b_i' on every line")
    return tuple(lines)


def cmd_exactlab(args) -> int:
    kind = args.kind
    if args.flavor not in kind.flavors:
        raise IncompatibleKind(f"{kind.value} does not run on {args.flavor.value} graphs")
    spec = read_degree_spec(args.degseq, args.flavor)
    space = enumerate_realizations(spec, args.flavor, cap=args.cap)
    if space.n < 2:
        raise ChainError(f"{kind.value} needs at least two sets")
    T = build_transition_matrix(space, kind, cap=args.cap)
    report = component_analysis(space, kind, T)
    asym = verify_symmetry_and_balance(T)
    out = [f"# states {len(space)}", f"# components {report.count}"]
    if report.expected is not None:
        out.append(f"# cycle_sets {len(report.cycle_sets)} expected_components {report.expected}")
    out.append(f"# symmetric {'yes' if not asym else 'no'}")
    out.append("component,size,step,tv")
    for c, (comp, res) in enumerate(per_component_stationary(T)):
        tv = res.tv_to_uniform[: args.iters + 1] if args.iters else res.tv_to_uniform
        for step, val in enumerate(tv):
            out.append(f"{c},{len(comp)},{step},{val:.12g}")
    _emit("\n".join(out) + "\n", args.out)
    return 0


def cmd_degseq(args) -> int:
    lines = parse_degree_file(_read_text(args.file))
    if any(len(r) != 2 for r in lines):
        raise DegreeSequenceError("degree file needs 'a_i b_i' on every line")
    seq = DirectedDegreeSequence(lines)
    if not is_realizable_directed(seq):
        print("realizable no")
        return 0
    triples = detect_induced_cycle_sets(seq)
    out = ["realizable yes", f"cycle_sets {len(triples)}"]
    out += [" ".join(str(v + 1) for v in t) for t in triples]
    print("\n".join(out))
    return 0


def cmd_partition(args) -> int:
    if args.n < 1 or args.samples < 0:
        raise UsageError("--n must be positive and --samples non-negative")
    rows, counts = partition_frequencies(args.n, args.samples, Stream(args.seed))
    out = [f"# n {args.n} samples {args.samples} distinct {len(rows)} "
           f"of {count_two_partitions(args.n)}", "partition,count"]
    out += [f"{format_partition(r)},{c}" for r, c in zip(rows, counts)]
    print("\n".join(out))
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    seed_help = f"master seed (default: ${SEED_ENV} or 0)"
    p = _Parser(prog="curveball", description="Uniform sampling of graphs with fixed degrees "
                "by Curveball trades, plus exact small-instance checks and mixing experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    s = sub.add_parser("sample", help="randomize an edge-list graph")
    s.add_argument("--in", dest="inp", required=True, help="input edge list ('-' for stdin)")
    s.add_argument("--out", help="output edge list (default stdout)")
    s.add_argument("--kind", type=_kind, help="chain kind (default: plain trade for the flavor)")
    s.add_argument("--steps", type=int, default=100_000, help="chain steps (default 100000)")
    s.add_argument("--seed", type=int, default=None, help=seed_help)
    s.add_argument("--adjusted", action="store_true",
                   help="randomly re-orient induced cycle sets first (directed graphs)")
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("experiment", help="perturbation-score mixing experiment")
    e.add_argument("--config", help="TOML file with ExperimentConfig fields")
    e.add_argument("--generator", dest="gen_type",
                   choices=["erdos_renyi", "preferential_attachment", "file"])
    e.add_argument("--n", type=int)
    e.add_argument("--p", type=float)
    e.add_argument("--m", type=int, help="attachment edges per new vertex")
    e.add_argument("--path", help="edge-list file for --generator file")
    d = e.add_mutually_exclusive_group()
    d.add_argument("--directed", dest="directed", action="store_true", default=None)
    d.add_argument("--undirected", dest="directed", action="store_false")
    e.add_argument("--kinds", type=_kinds, help="comma-separated chain kinds "
                   "(default: adjusted-switching and the good-shuffle kind)")
    e.add_argument("--steps", type=int, help="chain steps N (default 100000)")
    e.add_argument("--reps", type=int, help="repetitions per kind (default 10)")
    e.add_argument("--every", type=int, help="observation cadence (default 100 if N >= 1e4 else 10)")
    e.add_argument("--seed", type=int, help=seed_help)
    e.add_argument("--window", type=int, help="plateau window in grid points (default 10)")
    e.add_argument("--tol", type=float, help="plateau tolerance (default 0.005)")
    e.add_argument("--jobs", type=int, help="worker threads (default 1)")
    e.add_argument("--csv-out", help="long-form CSV kind,rep,step,score")
    e.add_argument("--mean-out", help="aggregate CSV kind,step,mean_score (default stdout)")
    e.set_defaults(func=cmd_experiment)

    x = sub.add_parser("exactlab", help="exact transition matrix analysis on a small instance")
    x.add_argument("--degseq", required=True, help="degree file (format depends on --flavor)")
    x.add_argument("--flavor", type=_flavor, required=True)
    x.add_argument("--kind", type=_kind, required=True)
    x.add_argument("--iters", type=int, default=0,
                   help="truncate TV trajectories to this many steps (default: until converged)")
    x.add_argument("--cap", type=int, default=5000, help="maximum number of realizations")
    x.add_argument("--out", help="output CSV (default stdout)")
    x.set_defaults(func=cmd_exactlab)

    g = sub.add_parser("degseq", help="realizability and induced cycle sets of a directed sequence")
    g.add_argument("file", help="lines 'a_i b_i' (in-degree, out-degree)")
    g.set_defaults(func=cmd_degseq)

    t = sub.add_parser("partition", help="frequency table of sampled 2-partitions")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--samples", type=int, default=100_000)
    t.add_argument("--seed", type=int, default=None, help=seed_help)
    t.set_defaults(func=cmd_partition)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        if getattr(args, "seed", None) is None and args.command != "experiment":
            args.seed = default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"curveball: error: {exc}", file=sys.stderr)
        return 1
    except DATA_ERRORS as exc:
        print(f"curveball: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
