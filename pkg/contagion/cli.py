import json
import logging
import sys
import warnings

from argparse import ArgumentParser
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from contagion.cascades import parse_events, split_periods, split_train_test, write_events
from contagion.config import RunConfig, apply_config_file
from contagion.graph import build_graph, filter_edges_min_count, write_graph
from contagion.predictors import compare_predictors
from contagion.sim import (
    GroundTruth,
    draw_ground_truth,
    generate_corpus,
    generate_periods,
    random_topology,
    read_ground_truth,
    read_topology,
    scale_free_topology,
    write_ground_truth,
)
from contagion.solver import jacobian_spectral_radius, solve, write_scores
from contagion.stats import (
    EvalReport,
    Statistic,
    null_pvalue_rewire,
    null_pvalue_weights,
    period_table,
    reconstruction_report,
    robustness_sweep,
    stylized_facts,
)
from contagion.superspreaders import evaluate_superspreaders, seed_table
from contagion.utils.common import derive_seeds, write_frame, write_json
from contagion.utils.log import configure_logging


logger = logging.getLogger(__name__)


def _common_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--out",
        type=str,
        default=".",
        help="Output directory, created if needed.",
    )
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Plain text key=value file providing option defaults.",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Random seed. Drawn from OS entropy and recorded if absent.",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=0,
        help="Number of worker processes, 0 for every available core.",
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level.",
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        help="Whether to display progress bars or not.",
    )
    return parser


def _input_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--events",
        type=str,
        default=None,
        help="Event log with columns cascade_id,user_id,parent_user_id,timestamp.",
    )
    parser.add_argument(
        "--delimiter",
        type=str,
        default=",",
        help="Field delimiter of the event log.",
    )
    return parser


def _solver_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--I0",
        type=float,
        default=1.0,
        help="Initial value of every score.",
    )
    parser.add_argument(
        "--damping",
        type=float,
        default=0.5,
        help="Damping of the iterative map, 1 for the undamped map.",
    )
    parser.add_argument(
        "--tolerance",
        type=float,
        default=1e-8,
        help="Relative change under which the solver stops.",
    )
    parser.add_argument(
        "--max-iter",
        type=int,
        default=100_000,
        help="Maximum number of solver iterations.",
    )
    return parser


def _sim_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--n-nodes",
        type=int,
        default=200,
        help="Number of nodes of the random topology.",
    )
    parser.add_argument(
        "--mean-degree",
        type=float,
        default=3.0,
        help="Mean out-degree of the Erdos-Renyi topology.",
    )
    parser.add_argument(
        "--topology-model",
        type=str,
        default="erdos_renyi",
        choices=["erdos_renyi", "scale_free"],
        help="Generator of the random topology.",
    )
    parser.add_argument(
        "--topology",
        type=str,
        default=None,
        help="Edge list of an observed topology, used instead of a random one.",
    )
    parser.add_argument(
        "--cascades-per-seed",
        type=int,
        default=100,
        help="Cascades started from every node.",
    )
    parser.add_argument(
        "--max-steps",
        type=int,
        default=None,
        help="Safety cap on the steps of a cascade, default to the number of nodes.",
    )
    return parser


def _split_parser(n_periods: int) -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--n-periods",
        type=int,
        default=n_periods,
        help="Number of time periods.",
    )
    parser.add_argument(
        "--split-mode",
        type=str,
        default="duration",
        choices=["duration", "volume"],
        help="Split periods by equal duration or equal number of events.",
    )
    return parser


def _predict_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--min-reshares",
        type=int,
        default=3,
        help="Only predict edges with at least this many training reshares.",
    )
    parser.add_argument(
        "--direction",
        type=str,
        default="in",
        choices=["in", "out"],
        help="Neighbourhoods used by the similarity baselines.",
    )
    return parser


def _superspread_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--train-fraction",
        type=float,
        default=0.8,
        help="Fraction of the cascades, by root time, used for training.",
    )
    parser.add_argument(
        "--precision-fractions",
        type=float,
        default=[0.1, 0.05],
        nargs="+",
        help="Sizes of the top sets for precision.",
    )
    parser.add_argument(
        "--aggregate",
        type=str,
        default="mean",
        choices=["mean", "median"],
        help="Aggregation of the sizes of the cascades of a seed.",
    )
    return parser


def _stats_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--statistics",
        type=str,
        default=None,
        nargs="+",
        help="Statistics 'x~y', default to node-level and assortativity ones.",
    )
    parser.add_argument(
        "--method",
        type=str,
        default="spearman",
        choices=["pearson", "spearman"],
        help="Correlation method of the statistics.",
    )
    parser.add_argument(
        "--n-real",
        type=int,
        default=0,
        help="Null model realizations per statistic, 0 for none.",
    )
    parser.add_argument(
        "--quantile",
        type=float,
        default=0.2,
        help="Size of the top group in stylized facts.",
    )
    parser.add_argument(
        "--removal-fractions",
        type=float,
        default=[0.1, 0.3, 0.5],
        nargs="+",
        help="Fractions of reshare events removed in the robustness sweep.",
    )
    return parser


def build_parser() -> Tuple[ArgumentParser, Dict[str, ArgumentParser]]:
    parser = ArgumentParser(
        prog="contagion",
        description="Influence and susceptibility from cascades of reshares.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common, inputs, solver = _common_parser(), _input_parser(), _solver_parser()

    commands = {
        "ingest": sub.add_parser(
            "ingest",
            parents=[common, inputs],
            help="Parse an event log and build its diffusion network.",
        ),
        "simulate": sub.add_parser(
            "simulate",
            parents=[common, _sim_parser()],
            help="Simulate a corpus on a random or observed topology.",
        ),
        "solve": sub.add_parser(
            "solve",
            parents=[common, inputs, solver],
            help="Solve influence and susceptibility scores.",
        ),
        "predict": sub.add_parser(
            "predict",
            parents=[common, inputs, solver, _split_parser(2), _predict_parser()],
            help="Predict contagion rates of the next period.",
        ),
        "superspread": sub.add_parser(
            "superspread",
            parents=[common, inputs, solver, _superspread_parser()],
            help="Rank seeds and evaluate them on later cascades.",
        ),
        "stats": sub.add_parser(
            "stats",
            parents=[common, inputs, solver, _split_parser(6), _stats_parser()],
            help="Period correlations, stylized facts and reconstruction.",
        ),
        "nulltest": sub.add_parser(
            "nulltest",
            parents=[common, inputs, solver, _stats_parser()],
            help="Null model p-values of statistics.",
        ),
        "pipeline": sub.add_parser(
            "pipeline",
            parents=[
                common,
                solver,
                _sim_parser(),
                _split_parser(6),
                _predict_parser(),
                _superspread_parser(),
                _stats_parser(),
            ],
            help="Simulate, then run every analysis on the synthetic corpus.",
        ),
    }
    commands["stats"].add_argument(
        "--ground-truth",
        type=str,
        default=None,
        help="Ground truth sidecar, adds the reconstruction tables.",
    )
    commands["simulate"].add_argument(
        "--n-periods",
        type=int,
        default=1,
        help="Number of consecutive corpora drawn from the same ground truth.",
    )
    commands["solve"].add_argument(
        "--spectral",
        action="store_true",
        help="Whether to report the spectral radius of the Jacobian or not.",
    )
    commands["nulltest"].add_argument(
        "--model",
        type=str,
        default="auto",
        choices=["auto", "weights", "rewire"],
        help="Null model, auto picks rewiring for assortativity statistics.",
    )
    return parser, commands


def _load_events(cfg: RunConfig):
    if not cfg.events:
        raise ValueError(f"The {cfg.command} command needs --events.")
    return parse_events(cfg.events, delimiter=cfg.delimiter)


def _wide_reconstruction(report: EvalReport) -> pd.DataFrame:
    frame = report.to_frame()
    frame["column"] = "r(" + frame["statistic"].str.replace("~", ",") + ")"
    table = frame.pivot_table(index="fraction", columns="column", values="value")
    return table.reset_index()


def cmd_ingest(cfg: RunConfig) -> None:
    store = _load_events(cfg)
    g = build_graph(store)
    out = cfg.out_dir
    write_events(store, out / "events.csv", config_hash=cfg.hash)
    write_graph(g, out / "edges.csv", out / "nodes.csv", config_hash=cfg.hash)
    write_json(store.summary(), out / "ingest.json", config_hash=cfg.hash)


def _topology(cfg: RunConfig, rng_seed: int):
    if cfg.topology:
        return read_topology(cfg.topology)
    if cfg.topology_model == "scale_free":
        return scale_free_topology(cfg.n_nodes, rng_seed)
    return random_topology(cfg.n_nodes, cfg.mean_degree, rng_seed)


def _ground_truth(cfg: RunConfig):
    topo_seed, truth_seed, corpus_seed = derive_seeds(cfg.seed, 3)
    topology = _topology(cfg, topo_seed)
    truth = draw_ground_truth(topology.n_nodes, truth_seed)
    return topology, truth, cfg.sim_config(corpus_seed)


def cmd_simulate(cfg: RunConfig) -> None:
    topology, truth, sim_cfg = _ground_truth(cfg)
    kwargs = dict(workers=cfg.workers, show_progress=cfg.progress)
    if cfg.n_periods > 1:
        store = generate_periods(topology, truth, cfg.n_periods, sim_cfg, **kwargs)
    else:
        store = generate_corpus(topology, truth, sim_cfg, **kwargs)

    out = cfg.out_dir
    write_events(store, out / "events.csv", config_hash=cfg.hash)
    write_ground_truth(
        truth, topology.node_ids, out / "ground_truth.json", sim_cfg, config_hash=cfg.hash
    )
    write_frame(topology.edges_frame()[["src", "dst"]], out / "topology.csv", cfg.hash)


def cmd_solve(cfg: RunConfig) -> None:
    g = build_graph(_load_events(cfg))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        scores = solve(g, cfg.solver_config(), show_progress=cfg.progress)
    radius = None
    if cfg.spectral and g.n_edges:
        radius = jacobian_spectral_radius(g, scores, damping=cfg.damping)

    report = scores.report()
    report["warnings"] = [str(w.message) for w in caught]
    if radius is not None:
        report["spectral_radius"] = radius
    for message in report["warnings"]:
        logger.warning(message)

    out = cfg.out_dir
    write_scores(scores, g.node_ids, out / "scores.csv", config_hash=cfg.hash)
    write_json(report, out / "solver.json", config_hash=cfg.hash)


def _compare_periods(cfg: RunConfig, periods: Sequence) -> EvalReport:
    report = EvalReport("predictor_comparison")
    for k in range(len(periods) - 1):
        train, test = periods[k], periods[k + 1]
        if train.n_events == 0 or test.n_events == 0:
            warnings.warn(f"Period {k} or {k + 1} is empty, no prediction.")
            continue
        g_train, g_test = build_graph(train), build_graph(test)
        scores = solve(g_train, cfg.solver_config())
        pairs = filter_edges_min_count(g_train, min_reshares=cfg.min_reshares)
        try:
            report.extend(
                compare_predictors(
                    g_train, g_test, scores, pairs=pairs, direction=cfg.direction
                ),
                period=k,
            )
        except ValueError as e:
            warnings.warn(f"No prediction for period {k}: {e}")
    return report


PREDICTION_COLUMNS = ["period", "predictor", "method", "correlation", "n_edges", "degenerate"]


def _prediction_table(report: EvalReport) -> pd.DataFrame:
    frame = report.to_frame().rename(
        columns={"statistic": "method", "value": "correlation", "n": "n_edges"}
    )
    return frame.reindex(columns=PREDICTION_COLUMNS)


def cmd_predict(cfg: RunConfig) -> None:
    periods = split_periods(_load_events(cfg), cfg.n_periods, cfg.split_mode)
    split_dir = cfg.out_dir / "periods"
    split_dir.mkdir(exist_ok=True)
    for k, period in enumerate(periods):
        write_events(period, split_dir / f"period_{k}.csv", config_hash=cfg.hash)
    report = _compare_periods(cfg, periods)
    write_frame(_prediction_table(report), cfg.out_dir / "predictions.csv", cfg.hash)


def _superspread(cfg: RunConfig, store) -> Tuple[EvalReport, pd.DataFrame]:
    train, test = split_train_test(store, cfg.train_fraction)
    g_train = build_graph(train)
    scores = solve(g_train, cfg.solver_config())
    report = evaluate_superspreaders(
        g_train, scores, test, cfg.precision_fractions, cfg.aggregate
    )
    return report, seed_table(g_train, scores, test, cfg.aggregate)


def cmd_superspread(cfg: RunConfig) -> None:
    report, seeds = _superspread(cfg, _load_events(cfg))
    report.write_csv(cfg.out_dir / "superspreaders.csv", cfg.hash)
    write_frame(seeds, cfg.out_dir / "seeds.csv", cfg.hash)


def _stats(cfg: RunConfig, store, truth=None, topology=None) -> None:
    out = cfg.out_dir
    periods = split_periods(store, cfg.n_periods, cfg.split_mode)
    null_seed, removal_seed = derive_seeds(cfg.seed, 2)
    table = period_table(
        periods,
        statistics=cfg.statistics,
        method=cfg.method,
        n_real=cfg.n_real,
        rng_seed=null_seed,
        solver_cfg=cfg.solver_config(),
        workers=cfg.workers,
    )
    table.write_csv(out / "period_table.csv", cfg.hash)

    g = build_graph(store)
    scores = solve(g, cfg.solver_config())
    stylized_facts(scores, g, cfg.quantile).write_json(out / "stylized.json", cfg.hash)

    if truth is not None:
        full = reconstruction_report(g, scores, truth, topology=topology, fraction=0.0)
        sweep = robustness_sweep(
            store,
            truth,
            cfg.removal_fractions,
            rng_seed=removal_seed,
            solver_cfg=cfg.solver_config(),
            topology=topology,
        )
        full.extend(sweep)
        write_frame(_wide_reconstruction(full), out / "reconstruction.csv", cfg.hash)


def cmd_stats(cfg: RunConfig) -> None:
    store = _load_events(cfg)
    truth = None
    if cfg.ground_truth:
        truth, node_ids = read_ground_truth(cfg.ground_truth)
        order = pd.Index(node_ids).get_indexer(store.node_ids)
        if (order < 0).any():
            raise ValueError("The events name nodes missing from the ground truth.")
        truth = GroundTruth(truth.I[order], truth.S[order], truth.rng_seed)
    _stats(cfg, store, truth)


def cmd_nulltest(cfg: RunConfig) -> None:
    if cfg.n_real < 2:
        raise ValueError("The nulltest command needs --n-real of at least 2.")
    if not cfg.statistics:
        raise ValueError("The nulltest command needs --statistics.")
    g = build_graph(_load_events(cfg))
    scores = solve(g, cfg.solver_config())

    rows = []
    for name, seed in zip(cfg.statistics, derive_seeds(cfg.seed, len(cfg.statistics))):
        statistic = Statistic.parse(name, method=cfg.method)
        rewire = cfg.model == "rewire" or (cfg.model == "auto" and statistic.is_assortativity)
        test = null_pvalue_rewire if rewire else null_pvalue_weights
        result = test(
            g,
            statistic,
            n_real=cfg.n_real,
            rng_seed=seed,
            scores=scores,
            solver_cfg=cfg.solver_config(),
            workers=cfg.workers,
            show_progress=cfg.progress,
        )
        rows.append(
            {
                "statistic": result.statistic,
                "model": result.model,
                "observed": result.observed,
                "p_greater": result.p_greater,
                "p_less": result.p_less,
                "significant": result.significant,
                "n_real": result.n_real,
                "n_dropped": result.n_dropped,
            }
        )
    write_frame(pd.DataFrame(rows), cfg.out_dir / "nulltest.csv", cfg.hash)


def cmd_pipeline(cfg: RunConfig) -> None:
    out = cfg.out_dir
    topology, truth, sim_cfg = _ground_truth(cfg)
    kwargs = dict(workers=cfg.workers, show_progress=cfg.progress)
    store = generate_corpus(topology, truth, sim_cfg, **kwargs)
    write_events(store, out / "events.csv", config_hash=cfg.hash)
    write_ground_truth(
        truth, topology.node_ids, out / "ground_truth.json", sim_cfg, config_hash=cfg.hash
    )

    # Read the corpus back as any event log
    store = parse_events(out / "events.csv", node_ids=topology.node_ids)
    g = build_graph(store)
    write_graph(g, out / "edges.csv", out / "nodes.csv", config_hash=cfg.hash)
    scores = solve(g, cfg.solver_config(), show_progress=cfg.progress)
    write_scores(scores, g.node_ids, out / "scores.csv", out / "solver.json", config_hash=cfg.hash)

    (periods_seed,) = derive_seeds(sim_cfg.rng_seed, 1)
    two = generate_periods(topology, truth, 2, cfg.sim_config(periods_seed), **kwargs)
    report = _compare_periods(cfg, split_periods(two, 2, "duration"))
    write_frame(_prediction_table(report), out / "predictions.csv", cfg.hash)

    report, seeds = _superspread(cfg, store)
    report.write_csv(out / "superspreaders.csv", cfg.hash)
    write_frame(seeds, out / "seeds.csv", cfg.hash)

    _stats(cfg, store, truth=truth, topology=topology)


HANDLERS = {
    "ingest": cmd_ingest,
    "simulate": cmd_simulate,
    "solve": cmd_solve,
    "predict": cmd_predict,
    "superspread": cmd_superspread,
    "stats": cmd_stats,
    "nulltest": cmd_nulltest,
    "pipeline": cmd_pipeline,
}


def parse_args(argv: Optional[List[str]] = None):
    parser, commands = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        apply_config_file(commands[args.command], args.config)
        args = parser.parse_args(argv)
    return args


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run a command line.

    Returns:
        int: 0 on success, 1 on failure with a JSON diagnostic on stderr, 2
        on usage errors.
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    except Exception as e:
        return _fail(e)

    configure_logging(args.log_level)
    try:
        cfg = RunConfig.from_namespace(args)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        cfg.write()
        logger.info("command=%s config_hash=%s", cfg.command, cfg.hash)
        HANDLERS[cfg.command](cfg)
    except Exception as e:
        return _fail(e)
    return 0


def _fail(e: Exception) -> int:
    logger.debug("command failed", exc_info=True)
    sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
    return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
