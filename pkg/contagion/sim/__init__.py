from .spread import (
    GroundTruth,
    SimConfig,
    draw_ground_truth,
    generate_corpus,
    generate_periods,
    read_ground_truth,
    remove_events,
    simulate_cascade,
    with_truth_rates,
    write_ground_truth,
)
from .topology import node_labels, random_topology, read_topology, scale_free_topology

__all__ = [
    "GroundTruth",
    "SimConfig",
    "draw_ground_truth",
    "generate_corpus",
    "generate_periods",
    "node_labels",
    "random_topology",
    "read_ground_truth",
    "read_topology",
    "remove_events",
    "scale_free_topology",
    "simulate_cascade",
    "with_truth_rates",
    "write_ground_truth",
]
