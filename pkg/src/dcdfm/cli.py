"""Command-line interface.

Subcommands: ``generate`` (expectation matrix or sampled adjacency to CSV),
``detect`` (labels for a matrix CSV or GML file), ``simulate`` (built-in or
custom sweeps to results + summary CSVs), ``realdata`` (noise sweep on a
manifest dataset), ``bound`` (bound quantities as key=value lines).

Exit codes: 0 success, 1 usage/validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import detect as detect_mod
from . import harness, metrics, model, netio
from ._rng import subseed
from .clustering import KMeansConfig
from .errors import DcdfmError
from .model import WeightedAdjacency


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_config(path) -> dict:
    return netio.read_manifest(path)


def cmd_generate(args) -> int:
    cfg = _read_config(args.params)
    params, dist, seed = harness.model_from_config(cfg, seed=args.seed)
    omega = model.expected_adjacency(params)
    if args.what == "omega":
        out = omega
    else:
        if dist is None:
            raise _UsageError("params file needs a 'distribution' key to sample")
        out = model.sample_adjacency(
            omega, dist, subseed(seed, 1), saturate=args.saturate
        ).matrix
    netio.write_matrix_csv(args.out, out)
    return 0


def _load_adjacency(path, fmt):
    path = Path(path)
    if fmt == "auto":
        fmt = "gml" if path.suffix.lower() == ".gml" else "csv"
    if fmt == "gml":
        ds = netio.parse_gml(path.read_text(), name=path.stem)
        return ds.adjacency, ds.truth
    return WeightedAdjacency(netio.read_matrix_csv(path)), None


def cmd_detect(args) -> int:
    A, truth = _load_adjacency(args.input, args.format)
    K = args.k if args.k is not None else (truth.K if truth is not None else None)
    if K is None:
        raise _UsageError("--k is required when the input carries no labels")
    config = KMeansConfig(K=K, restarts=args.restarts, seed=args.seed)
    run = detect_mod.ndfa if args.method == "ndfa" else detect_mod.dfa
    out = run(A, K, config)
    lines = "".join(f"{int(v)}\n" for v in out.labeling.labels)
    if args.out == "-":
        sys.stdout.write(lines)
    else:
        Path(args.out).write_text(lines)
    eigs = ",".join(repr(float(v)) for v in out.embedding.eigenvalues)
    print(f"method={out.method}", file=sys.stderr)
    print(f"eigenvalues={eigs}", file=sys.stderr)
    print(f"kmeans_objective={out.kmeans.objective!r}", file=sys.stderr)
    print(f"kmeans_iterations={out.kmeans.iterations}", file=sys.stderr)
    print(f"degenerate_rows={len(out.embedding.degenerate_rows)}", file=sys.stderr)
    if truth is not None:
        print(f"error_vs_file_labels={metrics.error_rate(out.labeling, truth)!r}", file=sys.stderr)
    return 0


def _summary_path(out_path) -> Path:
    p = Path(out_path)
    if p.suffix == ".csv":
        return p.with_suffix(".summary.csv")
    return Path(str(p) + ".summary.csv")


def cmd_simulate(args) -> int:
    if (args.experiment is None) == (args.spec is None):
        raise _UsageError("exactly one of --experiment or --spec is required")
    if args.experiment is not None:
        spec = harness.preset(
            args.experiment,
            replicates=args.replicates if args.replicates is not None else 50,
            base_seed=args.seed if args.seed is not None else 0,
        )
    else:
        spec = harness.spec_from_config(_read_config(args.spec))
        if args.replicates is not None:
            spec = replace(spec, replicates=args.replicates)
        if args.seed is not None:
            spec = replace(spec, base_seed=args.seed)
    records = harness.run_simulation(spec, jobs=args.jobs)
    netio.write_results_csv(args.out, records)
    netio.write_summary_csv(_summary_path(args.out), harness.summarize(records))
    return 0


def cmd_realdata(args) -> int:
    dataset = netio.load_dataset(args.manifest, args.dataset)
    grid = [float(v) for v in args.sigma2w_grid.split(",")]
    records = harness.run_real_noise(
        dataset, grid, replicates=args.replicates, base_seed=args.seed, jobs=args.jobs
    )
    netio.write_results_csv(args.out, records)
    netio.write_summary_csv(_summary_path(args.out), harness.summarize(records))
    return 0


def cmd_bound(args) -> int:
    cfg = _read_config(args.params)
    params, dist, _seed = harness.model_from_config(cfg)
    if dist is None:
        raise _UsageError("params file needs a 'distribution' key for the variance bound")
    A = WeightedAdjacency(netio.read_matrix_csv(args.matrix))
    report = metrics.bound_report(A, params, model.variance_bound(dist, params))
    for key, value in report.as_dict().items():
        print(f"{key}={value!r}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="dcdfm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit the expectation matrix or a sampled adjacency as CSV")
    p.add_argument("--params", required=True, help="key=value model description file")
    p.add_argument("--what", choices=("omega", "sample"), default="omega")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the params-file seed")
    p.add_argument("--saturate", action="store_true", help="clip probability means into range")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("detect", help="estimate community labels for a network")
    p.add_argument("input", help="adjacency CSV or GML file")
    p.add_argument("--k", type=int, default=None, help="number of communities")
    p.add_argument("--method", choices=("ndfa", "dfa"), default="ndfa")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--format", choices=("auto", "gml", "csv"), default="auto")
    p.add_argument("--out", default="-", help="labels file ('-' = stdout)")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("simulate", help="run a simulation sweep")
    p.add_argument("--experiment", choices=harness.PRESET_IDS, default=None)
    p.add_argument("--spec", default=None, help="custom sweep description file")
    p.add_argument("--out", default="results.csv")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("realdata", help="noise sweep on a manifest dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument(
        "--sigma2w-grid",
        default=",".join(repr(v) for v in harness.DEFAULT_NOISE_GRID),
        help="comma-separated noise variances",
    )
    p.add_argument("--replicates", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="realdata.csv")
    p.set_defaults(func=cmd_realdata)

    p = sub.add_parser("bound", help="print bound quantities for a params/adjacency pair")
    p.add_argument("--params", required=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_bound)

    return parser


def cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DcdfmError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
