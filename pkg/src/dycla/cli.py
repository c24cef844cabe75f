"""Command-line harness: generate networks, run seed selectors, compare results.

    dycla generate --n 800 --snapshots 6 --drastic-at 5 --seed 42 --out net.tel
    dycla run --net net.tel --algo dycla --k 5 --seed 7 --out dycla.csv
    dycla run --net net.tel --algo celf --k 5 --seed 7 --out celf.csv
    dycla compare dycla.csv celf.csv --out both.csv

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path
from typing import Optional, TextIO

from . import __version__
from ._backend import BACKEND
from .baselines import celf, naive_greedy, top_k_degree
from .cla import REPORT_SIMS, ClaConfig, ExperimentRecord, report_spread, run_cold, run_temporal
from .diffusion import InteractionCounter, SimStream
from .graph import NetworkError, generate_synthetic, load_temporal_network, save_temporal_network

log = logging.getLogger("dycla")

RESULT_HEADER = ["snapshot", "algorithm", "seeds", "spread_mean", "spread_stderr",
                 "interactions", "wall_ms"]
COMPARE_HEADER = ["snapshot", "label"] + RESULT_HEADER[1:]
ALGORITHMS = ("dycla", "cla-cold", "greedy", "celf", "degree")


class UsageError(Exception):
    """Bad flag values that argparse itself cannot catch."""


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dycla", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic dynamic network")
    gen.add_argument("--n", type=int, required=True, help="number of vertices (>= 2)")
    gen.add_argument("--snapshots", type=_positive_int, default=6)
    gen.add_argument("--edge-prob", type=_fraction, default=0.01,
                     help="edge probability of the first snapshot")
    gen.add_argument("--docile-frac", type=_fraction, default=0.02,
                     help="fraction of edges rewired between ordinary snapshots")
    gen.add_argument("--drastic-at", type=int, action="append", default=[],
                     help="snapshot index with a drastic change (repeatable)")
    gen.add_argument("--drastic-frac", type=_fraction, default=0.5)
    gen.add_argument("--undirected", action="store_true")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    run = sub.add_parser("run", help="run one algorithm on every snapshot")
    run.add_argument("--net", required=True, help="temporal edge-list file")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--k", type=_positive_int, required=True, help="number of seeds")
    run.add_argument("--phi", type=float, default=1.0, help="smoothing strength")
    run.add_argument("--delta0", type=float, help="initial round threshold (default 1/K)")
    run.add_argument("--ddelta", type=float, help="threshold increment (default 1/(2K))")
    run.add_argument("--threshold", type=float, default=0.999)
    run.add_argument("--resolution", type=_positive_int, help="pursuit resolution (default K)")
    run.add_argument("--mc-sims", type=_positive_int, default=10_000,
                     help="cascades per spread estimate in greedy and celf")
    run.add_argument("--report-sims", type=_positive_int, default=REPORT_SIMS,
                     help="cascades behind the reported spread of every algorithm")
    run.add_argument("--feedback-sims", type=_positive_int, default=1)
    run.add_argument("--dsigma-sims", type=_positive_int, default=1000)
    run.add_argument("--max-iterations", type=_positive_int, default=5_000_000,
                     help="learning iteration cap per snapshot")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--threads", type=_positive_int, default=1)
    run.add_argument("--out", required=True, help="results CSV")
    run.add_argument("--manifest", help="manifest path (default: results path with .manifest)")
    run.add_argument("--trace", help="probability trajectory CSV (dycla and cla-cold)")
    run.add_argument("--trace-every", type=_positive_int, default=1,
                     help="keep every n-th learning iteration in the trace")
    run.add_argument("--timing", action="store_true",
                     help="fill wall_ms; otherwise it is 0 so reruns are byte-identical")

    cmp_ = sub.add_parser("compare", help="join result CSVs by snapshot")
    cmp_.add_argument("results", nargs="+", help="two or more results CSVs")
    cmp_.add_argument("--labels", help="comma-separated labels, one per file")
    cmp_.add_argument("--out", help="output CSV (default stdout)")
    return parser


# ---------------------------------------------------------------- generate

def cmd_generate(args: argparse.Namespace) -> int:
    if args.n < 2:
        raise UsageError(f"--n must be at least 2, got {args.n}")
    bad = [t for t in args.drastic_at if not 0 <= t < args.snapshots]
    if bad:
        raise UsageError(f"--drastic-at outside [0, {args.snapshots}): {bad}")
    net = generate_synthetic(args.n, args.snapshots, args.edge_prob, args.docile_frac,
                             drastic_steps=set(args.drastic_at),
                             drastic_rewire_frac=args.drastic_frac, rng_seed=args.seed,
                             directed=not args.undirected)
    save_temporal_network(net, args.out)
    counts = " ".join(str(len(s.file_edges())) for s in net)
    print(f"N={net.n_vertices} T={len(net)} directed={int(net.directed)} edges={counts}")
    return 0


# ---------------------------------------------------------------- run

def _cla_config(args: argparse.Namespace) -> ClaConfig:
    try:
        return ClaConfig(k_seeds=args.k, delta0=args.delta0, delta_inc=args.ddelta,
                         threshold=args.threshold, resolution=args.resolution,
                         phi=args.phi, feedback_sims=args.feedback_sims,
                         delta_sigma_sims=args.dsigma_sims, rng_seed=args.seed,
                         max_iterations=args.max_iterations, threads=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


class TraceWriter:
    def __init__(self, stream: TextIO, n_vertices: int, every: int):
        self.writer = csv.writer(stream, lineterminator="\n")
        self.writer.writerow(["iteration", "automaton"] + [f"p_{i}" for i in range(n_vertices)])
        self.every = every

    def __call__(self, iteration, k, p):
        if iteration % self.every == 0:
            self.writer.writerow([iteration, k] + [repr(float(x)) for x in p])


def _baseline_records(net, args) -> list[ExperimentRecord]:
    records = []
    for t, snapshot in enumerate(net):
        counter = InteractionCounter()
        tic = time.perf_counter()
        if args.algo == "degree":
            seeds = top_k_degree(snapshot, args.k)
        else:
            select = naive_greedy if args.algo == "greedy" else celf
            seeds = select(snapshot, args.k, args.mc_sims, SimStream([args.seed, 3, t]),
                           counter, threads=args.threads)
        wall_ms = int(round((time.perf_counter() - tic) * 1000))
        est = report_spread(snapshot, seeds, args.seed, t, args.report_sims, args.threads)
        records.append(ExperimentRecord(t, args.algo, seeds, est.mean, est.std_error,
                                        counter.count, wall_ms))
        log.info("t=%d seeds=%s spread=%.3f", t, sorted(seeds), est.mean)
    return records


def write_results(records: list[ExperimentRecord], path, timing: bool) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_HEADER)
        for r in records:
            writer.writerow([r.snapshot_t, r.algorithm, ";".join(map(str, sorted(r.seeds))),
                             repr(float(r.spread_mean)), repr(float(r.spread_stderr)),
                             r.interactions, r.wall_ms if timing else 0])


def write_manifest(path, args, config: Optional[ClaConfig]) -> None:
    items = {
        "tool_version": __version__,
        "network": args.net,
        "algorithm": args.algo,
        "k_seeds": args.k,
        "rng_seed": args.seed,
        "mc_sims": args.mc_sims,
        "report_sims": args.report_sims,
        "threads": args.threads,
        "backend": BACKEND,
    }
    if config is not None:
        items.update(delta0=config.delta0, delta_inc=config.delta_inc,
                     threshold=config.threshold, resolution=config.resolution,
                     phi=config.phi, feedback_sims=config.feedback_sims,
                     delta_sigma_sims=config.delta_sigma_sims,
                     max_iterations=config.max_iterations)
    with open(path, "w") as fh:
        for key, value in items.items():
            fh.write(f"{key}={value}\n")


def cmd_run(args: argparse.Namespace) -> int:
    uses_cla = args.algo in ("dycla", "cla-cold")
    config = _cla_config(args) if uses_cla else None
    if args.trace and not uses_cla:
        raise UsageError("--trace is only meaningful for dycla and cla-cold")
    net = load_temporal_network(args.net)
    if args.k > net.n_vertices:
        raise UsageError(f"--k {args.k} exceeds the {net.n_vertices} vertices of {args.net}")

    if uses_cla:
        runner = run_temporal if args.algo == "dycla" else run_cold
        if args.trace:
            with open(args.trace, "w", newline="") as fh:
                records = runner(net, config, TraceWriter(fh, net.n_vertices, args.trace_every),
                                 args.report_sims)
        else:
            records = runner(net, config, None, args.report_sims)
    else:
        records = _baseline_records(net, args)

    write_results(records, args.out, args.timing)
    manifest = args.manifest or str(Path(args.out).with_suffix(".manifest"))
    write_manifest(manifest, args, config)
    for r in records:
        print(f"t={r.snapshot_t} seeds={';'.join(map(str, sorted(r.seeds)))} "
              f"spread={r.spread_mean:.3f} interactions={r.interactions}")
    return 0


# ---------------------------------------------------------------- compare

def read_results(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RESULT_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = [dict(zip(RESULT_HEADER, row)) for row in reader]
    for row in rows:
        if len(row) != len(RESULT_HEADER):
            raise ValueError(f"{path}: short row {row}")
    return rows


def cmd_compare(args: argparse.Namespace) -> int:
    if len(args.results) < 2:
        raise UsageError("compare needs at least two result files")
    if args.labels:
        labels = args.labels.split(",")
        if len(labels) != len(args.results):
            raise UsageError("--labels needs one label per file")
    else:
        labels = []
        for path in args.results:
            stem = Path(path).stem
            labels.append(stem if stem not in labels else f"{stem}#{labels.count(stem) + 1}")

    tables = [read_results(p) for p in args.results]
    snapshots = [[row["snapshot"] for row in t] for t in tables]
    for path, snaps in zip(args.results[1:], snapshots[1:]):
        if len(snaps) != len(snapshots[0]):
            raise ValueError(f"{path} has {len(snaps)} snapshots, "
                             f"{args.results[0]} has {len(snapshots[0])}")
        if snaps != snapshots[0]:
            raise ValueError(f"{path} covers different snapshots than {args.results[0]}")

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(COMPARE_HEADER)
        for i, snap in enumerate(snapshots[0]):
            for label, table in zip(labels, tables):
                row = table[i]
                writer.writerow([snap, label] + [row[c] for c in RESULT_HEADER[1:]])
    finally:
        if args.out:
            out.close()
    return 0


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "compare": cmd_compare}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)   # exits with 2 on malformed flags
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (NetworkError, OSError, ValueError) as exc:
        print(f"dycla: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
