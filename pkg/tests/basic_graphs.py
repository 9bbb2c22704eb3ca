import io
import networkx as nx
import numpy as np

from contagion.cascades import CascadeStore, EventRecord, parse_events
from contagion.graph import DiffusionGraph


HEADER = "cascade_id,user_id,parent_user_id,timestamp\n"


def event_log(rows) -> io.BytesIO:
    """In-memory CSV event log from ``(cascade, user, parent, timestamp)`` rows."""
    body = "".join(f"{c},{u},{p or ''},{t}\n" for c, u, p, t in rows)
    return io.BytesIO((HEADER + body).encode("utf-8"))


def store_from_rows(rows, node_ids=None) -> CascadeStore:
    return CascadeStore.from_records(
        [EventRecord(c, u, p, t) for c, u, p, t in rows], node_ids=node_ids
    )


def graph_from_edges(n, edges) -> DiffusionGraph:
    """Graph on nodes ``v0 .. v{n-1}`` from ``(src, dst, omega)`` triples."""
    ids = [f"v{k}" for k in range(n)]
    if not edges:
        return DiffusionGraph(ids, [], [], [])
    src, dst, omega = zip(*edges)
    return DiffusionGraph(ids, src, dst, omega)


def single_edge(omega: float = 0.25) -> DiffusionGraph:
    return graph_from_edges(2, [(0, 1, omega)])


def two_cycle(omega: float = 0.3) -> DiffusionGraph:
    return graph_from_edges(2, [(0, 1, omega), (1, 0, omega)])


def chain(n: int, omega: float = 1.0) -> DiffusionGraph:
    return graph_from_edges(n, [(k, k + 1, omega) for k in range(n - 1)])


def random_weighted_graph(n: int, p: float, seed: int) -> DiffusionGraph:
    """Directed G(n, p) with weights uniform on [0.05, 1]."""
    graph = nx.gnp_random_graph(n, p, seed=seed, directed=True)
    rng = np.random.default_rng(seed)
    for u, v in graph.edges():
        graph[u][v]["omega"] = float(rng.uniform(0.05, 1.0))
    return DiffusionGraph.from_networkx(graph)


# u1 shares c1 and c2, u2 reshares both, u3 reshares c1 from u2
SMALL_ROWS = [
    ("c1", "u1", None, 100),
    ("c1", "u2", "u1", 110),
    ("c1", "u3", "u2", 120),
    ("c2", "u1", None, 200),
    ("c2", "u2", "u1", 230),
    ("c3", "u3", None, 300),
]


def small_store() -> CascadeStore:
    return parse_events(event_log(SMALL_ROWS))
