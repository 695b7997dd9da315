"""Command-line interface: ``socialsensors <command> ...``.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime error
(the failed precondition is named on stderr).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__
from .analysis.benchmark import benchmark
from .analysis.estimators import VARIANTS, estimate_beta_mom, estimate_gamma_mom
from .analysis.forecast import DEFAULT_HORIZON, DEFAULT_LAG, forecast_peak_cubic
from .analysis.peaks import peak_time
from .config import PEAK_SERIES, ScenarioConfig
from .epidemic import CLAMP_MODES, POPULATION, EpidemicParams, Seeding, simulate
from .errors import InvalidParameterError, PreconditionError, SocialSensorsError
from .graph import (
    Graph,
    generate_chung_lu,
    generate_er,
    largest_connected_component,
    power_law_weights,
    read_edge_list,
    write_edge_list,
)
from .report import TRACE_HEADER, format_value, history_csv_text, read_csv, read_history_csv, read_trace_csv, sha256_file, write_csv, write_text_atomic
from .sensors import ev_select, fos_select, matched_sensor_suite, nev_select
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, ev_centrality, nev_centrality

logger = logging.getLogger("socialsensors")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def write_manifest(path: str, command: str, echo: dict, outputs: list[str], started: float) -> None:
    """Record what ran and checksums of everything it wrote; written last and atomically."""
    manifest = {
        "tool": "socialsensors",
        "version": __version__,
        "command": command,
        "config": echo,
        "outputs": {os.path.basename(p): sha256_file(p) for p in outputs},
        "wall_clock_seconds": round(time.time() - started, 3),
    }
    write_text_atomic(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _echo(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


def _load_graph(path: str, lcc: bool) -> Graph:
    g = read_edge_list(path)
    if lcc:
        g, _ = largest_connected_component(g)
    return g


# commands -------------------------------------------------------------------


def cmd_generate(args) -> int:
    started = time.time()
    if args.model == "er":
        g = generate_er(args.n, args.p, args.seed)
        header = f"erdos-renyi n={args.n} p={args.p!r} seed={args.seed}"
    else:
        if args.weights:
            weights = np.loadtxt(args.weights, ndmin=1)
        else:
            weights = power_law_weights(args.n, args.m, args.exponent)
        g = generate_chung_lu(weights, args.seed)
        header = f"chung-lu n={weights.size} seed={args.seed}"
    write_edge_list(g, args.out, header=header)
    write_manifest(args.out + ".manifest.json", "generate", _echo(args), [args.out], started)
    print(f"n={g.n} m={g.m} -> {args.out}")
    return EXIT_OK


def cmd_sensors(args) -> int:
    started = time.time()
    g = _load_graph(args.graph, args.lcc)
    kw = dict(tol=args.tol, max_iter=args.max_iter)
    if args.method == "all":
        _need(args, "sample_size", "seed")
        sets = list(matched_sensor_suite(g, args.sample_size, args.seed, **kw))
    elif args.method == "fos":
        _need(args, "sample_size", "seed")
        sets = [fos_select(g, args.sample_size, args.seed)]
    else:
        _need(args, "k")
        select = ev_select if args.method == "ev" else nev_select
        sets = [select(g, args.k, **kw)]
    rows = [row for s in sets for row in s.to_rows(g.labels)]
    outputs = [args.out]
    write_csv(args.out, ("node_id", "method", "rank", "score"), rows)
    if args.scores_out:
        methods = [s.method for s in sets if s.method in ("ev", "nev")]
        score_rows = []
        for method in methods:
            c = ev_centrality(g, **kw) if method == "ev" else nev_centrality(g, **kw)
            score_rows += c.to_rows(g.labels)
        write_csv(args.scores_out, ("node_id", "score", "method"), score_rows)
        outputs.append(args.scores_out)
    write_manifest(args.out + ".manifest.json", "sensors", _echo(args), outputs, started)
    for s in sets:
        print(f"{s.method}: k={s.k}")
    return EXIT_OK


def _read_groups(path: str, g: Graph) -> dict[str, np.ndarray]:
    rows = read_csv(path)
    if not rows:
        return {}
    key = "group" if "group" in rows[0] else "method" if "method" in rows[0] else None
    if key is None or "node_id" not in rows[0]:
        raise InvalidParameterError(f"{path}: groups file needs node_id and group (or method) columns")
    groups: dict[str, list] = {}
    for row in rows:
        groups.setdefault(row[key], []).append(row["node_id"])
    try:
        return {name: g.node_ids(labels) for name, labels in groups.items()}
    except KeyError as exc:
        raise InvalidParameterError(f"{path}: node {exc.args[0]!r} is not in the graph") from None


def cmd_simulate(args) -> int:
    started = time.time()
    g = _load_graph(args.graph, args.lcc)
    groups = _read_groups(args.groups, g) if args.groups else {}
    params = EpidemicParams(args.beta, args.gamma, args.clamp_mode)
    rng = np.random.default_rng(args.seed)
    seeding = Seeding.random(args.initial_infected)
    trace = simulate(g, params, seeding, args.T, groups=groups, seed=rng, record_history=bool(args.history))
    write_csv(args.out, TRACE_HEADER, trace.to_rows())
    outputs = [args.out]
    if args.history:
        write_text_atomic(args.history, history_csv_text(trace.history, g.labels))
        outputs.append(args.history)
    write_manifest(args.out + ".manifest.json", "simulate", _echo(args), outputs, started)
    pop = trace.population
    print(f"n={g.n} T={args.T} final R={int(pop.R[-1])} cumulative={int(pop.cumulative[-1])}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    started = time.time()
    history, labels = read_history_csv(args.history)
    g = read_edge_list(args.graph)
    try:
        ids = g.node_ids(labels)
    except KeyError as exc:
        raise InvalidParameterError(f"history column {exc.args[0]!r} is not a node of {args.graph}") from None
    if not np.array_equal(ids, np.arange(g.n)):
        g = g.subgraph(ids)
    T_obs = args.T_obs if args.T_obs is not None else history.shape[0]
    variants = VARIANTS if args.variant == "both" else (args.variant,)
    rows = []
    for v in variants:
        rows.append(("beta", v, estimate_beta_mom(history, g, T_obs, v).beta_hat, T_obs))
        rows.append(("gamma", v, estimate_gamma_mom(history, T_obs, v).gamma_hat, T_obs))
    write_csv(args.out, ("parameter", "variant", "estimate", "T_obs"), rows)
    write_manifest(args.out + ".manifest.json", "estimate", _echo(args), [args.out], started)
    for row in rows:
        print(f"{row[0]} ({row[1]}): {row[2]:.6g}")
    return EXIT_OK


def cmd_forecast(args) -> int:
    started = time.time()
    trace = read_trace_csv(args.trace)
    if POPULATION not in trace:
        raise InvalidParameterError(f"{args.trace}: no population rows")
    if args.sensor_group not in trace:
        raise InvalidParameterError(f"{args.trace}: group {args.sensor_group!r} not in trace")
    column = "I" if args.series == "prevalence" else "new_infections"
    pop, sensor = trace[POPULATION], trace[args.sensor_group]
    sensor_peak = peak_time(sensor[column], args.smoothing_window).peak_time
    actual = peak_time(pop[column], args.smoothing_window).peak_time
    report = forecast_peak_cubic(
        pop["cumulative"], sensor_peak, args.lag, args.horizon, actual_peak=actual, method=args.sensor_group
    )
    write_csv(
        args.out,
        ("method", "predicted_peak", "actual_peak", "bias"),
        [(args.sensor_group, report.predicted_peak, report.actual_peak, report.bias)],
    )
    write_manifest(args.out + ".manifest.json", "forecast", _echo(args), [args.out], started)
    print(f"{args.sensor_group}: predicted {report.predicted_peak}, actual {actual}, bias {report.bias}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    started = time.time()
    config = ScenarioConfig.load(args.config)
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise InvalidParameterError(f"--set expects section.key=value, got {item!r}")
        overrides[key.strip()] = value
    for flag, key in (("replications", "run.replications"), ("master_seed", "run.master_seed"),
                      ("workers", "run.workers"), ("out", "run.output_dir")):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = str(value)
    if overrides:
        config = ScenarioConfig.from_mapping(overrides, base=config)
    result = benchmark(config)
    out = config.output_dir
    checks = result.write(out)
    config_path = os.path.join(out, "config.ini")
    write_text_atomic(config_path, config.to_ini())
    outputs = [os.path.join(out, name) for name in checks] + [config_path]
    write_manifest(os.path.join(out, "manifest.json"), "benchmark", config.to_dict(), outputs, started)
    for method, med_peak, med_lead, iqr, n_eff in result.aggregate_rows():
        med_peak, med_lead, iqr = (format_value(v) for v in (med_peak, med_lead, iqr))
        print(f"{method:>10}: median peak {med_peak}  median lead {med_lead}  IQR {iqr}  n={n_eff}")
    if result.failure_count:
        print(f"{result.failure_count} replication(s) failed; see failures.csv")
    return EXIT_OK


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"method {args.method!r} requires {', '.join(missing)}")


# parser ---------------------------------------------------------------------


def _probability(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def _nonneg_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _add_lcc(p):
    p.add_argument("--no-lcc", dest="lcc", action="store_false", help="use the whole graph, not its largest component")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="socialsensors", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="generate a random graph as an edge list")
    p.add_argument("model", choices=["er", "chung-lu"])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--p", type=_probability, default=0.005, help="ER edge probability")
    p.add_argument("--m", type=float, default=2500.0, help="Chung-Lu target expected edge count")
    p.add_argument("--exponent", type=float, default=2.5, help="Chung-Lu degree power-law exponent")
    p.add_argument("--weights", help="Chung-Lu weights file (one positive number per line)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("sensors", help="select sensor sets")
    p.add_argument("graph")
    p.add_argument("--method", choices=["fos", "ev", "nev", "all"], default="all")
    p.add_argument("--sample-size", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--scores-out", help="also dump centrality scores (node_id,score,method)")
    p.add_argument("--out", required=True)
    _add_lcc(p)
    p.set_defaults(func=cmd_sensors)

    p = sub.add_parser("simulate", help="run one SIR simulation")
    p.add_argument("graph")
    p.add_argument("--beta", type=_nonneg_float, required=True)
    p.add_argument("--gamma", type=_probability, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--initial-infected", type=int, default=10)
    p.add_argument("--clamp-mode", choices=CLAMP_MODES, default="linear")
    p.add_argument("--groups", help="CSV with node_id and group (or method) columns, e.g. sensors output")
    p.add_argument("--history", help="also write the per-node state history here")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_lcc(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="method-of-moments rate estimates from a state history")
    p.add_argument("--history", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--T-obs", dest="T_obs", type=int)
    p.add_argument("--variant", choices=[*VARIANTS, "both"], default="both")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("forecast", help="cubic forecast of the population peak from a trace CSV")
    p.add_argument("trace")
    p.add_argument("--sensor-group", default="ev")
    p.add_argument("--lag", type=int, default=DEFAULT_LAG)
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--series", choices=PEAK_SERIES, default="prevalence")
    p.add_argument("--smoothing-window", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("benchmark", help="replicated lead-time benchmark from a config file")
    p.add_argument("config")
    p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE", help="override a config key")
    p.add_argument("--replications", type=int)
    p.add_argument("--master-seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"error [{exc.precondition}]: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except SocialSensorsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
