import logging
import warnings

from argparse import ArgumentParser
from typing import List

from contagion.cascades import split_periods, split_train_test
from contagion.graph import build_graph, filter_edges_min_count
from contagion.predictors import compare_predictors
from contagion.sim import (
    SimConfig,
    draw_ground_truth,
    generate_corpus,
    generate_periods,
    random_topology,
)
from contagion.solver import SolverConfig, jacobian_spectral_radius, solve
from contagion.stats import EvalReport, reconstruction_report, robustness_sweep
from contagion.superspreaders import evaluate_superspreaders
from contagion.utils.common import derive_seeds
from contagion.utils.log import configure_logging


warnings.filterwarnings("ignore")


def main(
    experiments: List[str],
    n_nodes: int,
    mean_degrees: List[float],
    cascades_per_seed: int,
    damping: float = 0.5,
    workers: int = 1,
    seed: int = 42,
):
    solver_cfg = SolverConfig(damping=damping)

    # Loop over topologies
    for mean_degree in mean_degrees:
        topo_seed, truth_seed, corpus_seed, periods_seed, removal_seed = derive_seeds(
            seed, 5
        )

        # Create ground truth and corpus
        topology = random_topology(n_nodes, mean_degree, topo_seed)
        truth = draw_ground_truth(n_nodes, truth_seed)
        sim_cfg = SimConfig(cascades_per_seed=cascades_per_seed, rng_seed=corpus_seed)
        store = generate_corpus(topology, truth, sim_cfg, workers=workers)

        # Reconstruct scores
        g = build_graph(store)
        scores = solve(g, solver_cfg)
        print("converged: ", scores.converged, "iterations: ", scores.iterations)

        results = EvalReport("synthetic")
        results.add("converged", float(scores.converged), experiment="solver")
        if g.n_edges:
            results.add(
                "spectral_radius",
                jacobian_spectral_radius(g, scores, damping=damping),
                experiment="solver",
            )

        if "reconstruction" in experiments:
            results.extend(
                reconstruction_report(g, scores, truth, topology=topology),
                experiment="reconstruction",
                fraction=0.0,
            )

        if "robustness" in experiments:
            results.extend(
                robustness_sweep(
                    store,
                    truth,
                    rng_seed=removal_seed,
                    solver_cfg=solver_cfg,
                    topology=topology,
                ),
                experiment="robustness",
            )

        if "prediction" in experiments:
            periods_cfg = SimConfig(
                cascades_per_seed=cascades_per_seed, rng_seed=periods_seed
            )
            train, test = split_periods(
                generate_periods(topology, truth, 2, periods_cfg, workers=workers),
                2,
            )
            g_train, g_test = build_graph(train), build_graph(test)
            results.extend(
                compare_predictors(
                    g_train,
                    g_test,
                    solve(g_train, solver_cfg),
                    pairs=filter_edges_min_count(g_train),
                ),
                experiment="prediction",
            )

        if "superspreaders" in experiments:
            train, test = split_train_test(store)
            g_train = build_graph(train)
            results.extend(
                evaluate_superspreaders(g_train, solve(g_train, solver_cfg), test),
                experiment="superspreaders",
            )

        rows = [
            f"{seed},{mean_degree},{e.tags['experiment']},"
            f"{e.tags.get('predictor', e.tags.get('metric', ''))},"
            f"{e.tags.get('fraction', '')},{e.statistic},{e.value:.4}\n"
            for e in results.entries
        ]
        # One append per topology, runs of main.sh share the file
        with open("results.csv", "a") as fp:
            fp.write("".join(rows))


def parse_args():
    parser = ArgumentParser()
    parser.add_argument(
        "--experiments",
        type=str,
        default=["reconstruction", "robustness", "prediction", "superspreaders"],
        nargs="+",
        metavar="N",
        help="List of experiments to run.",
    )
    parser.add_argument(
        "--n-nodes",
        type=int,
        default=300,
        help="Number of nodes of the topology.",
    )
    parser.add_argument(
        "--mean-degrees",
        type=float,
        default=[2.0, 3.0, 4.0],
        nargs="+",
        metavar="N",
        help="List of mean out-degrees to use.",
    )
    parser.add_argument(
        "--cascades-per-seed",
        type=int,
        default=100,
        help="Number of cascades started from every node.",
    )
    parser.add_argument(
        "--damping",
        type=float,
        default=0.5,
        help="Damping of the solver.",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="Number of processes used to simulate cascades.",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=42,
        help="Random seed for data generation.",
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        help="Logging level.",
    )
    return parser.parse_args()


if __name__ == "__main__":
    args = parse_args()
    configure_logging(args.log_level)
    logging.captureWarnings(True)
    main(
        experiments=args.experiments,
        n_nodes=args.n_nodes,
        mean_degrees=args.mean_degrees,
        cascades_per_seed=args.cascades_per_seed,
        damping=args.damping,
        workers=args.workers,
        seed=args.seed,
    )
