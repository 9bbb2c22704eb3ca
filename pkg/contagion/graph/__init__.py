from .diffusion import (
    DiffusionGraph,
    build_graph,
    filter_edges_min_count,
    in_rate,
    out_rate,
    write_graph,
)

__all__ = [
    "DiffusionGraph",
    "build_graph",
    "filter_edges_min_count",
    "in_rate",
    "out_rate",
    "write_graph",
]
