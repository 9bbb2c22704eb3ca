import logging
import networkx as nx
import numpy as np
import pandas as pd
import scipy.sparse as sp

from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from contagion.cascades import CascadeStore
from contagion.utils.common import write_frame
from contagion.utils.log import log_usage


logger = logging.getLogger(__name__)


class DiffusionGraph:
    r"""
    Directed diffusion network with empirical contagion rates.

    An edge :math:`i \to j` means that :math:`j` reshared from :math:`i`;
    its weight :math:`\omega_{ij} \in [0, 1]` is the fraction of the
    cascades shared by :math:`i` that :math:`j` subsequently reshared from
    :math:`i`. Edges are stored sorted by ``(src, dst)``, which is the
    compressed sparse row order of :attr:`weights`.

    Args:
        node_ids (sequence): The node id of each dense index.
        src (sequence): Source index of each edge.
        dst (sequence): Destination index of each edge.
        omega (sequence): Contagion rate of each edge.
        raw_count (sequence): Number of reshare events behind each edge.
            Default to ones.
        items_shared (sequence): Number of distinct cascades shared by each
            node. Default to zeros.

    Examples:
        >>> from contagion.graph import DiffusionGraph
        >>> g = DiffusionGraph(["a", "b", "c"], [0, 0], [1, 2], [0.2, 0.4])
        >>> g.f_hat
        array([0.6, 0. , 0. ])
    """

    def __init__(
        self,
        node_ids: Sequence[str],
        src: Sequence[int],
        dst: Sequence[int],
        omega: Sequence[float],
        raw_count: Optional[Sequence[int]] = None,
        items_shared: Optional[Sequence[int]] = None,
    ):
        node_ids = np.asarray(node_ids, dtype=object)
        n = len(node_ids)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        omega = np.asarray(omega, dtype=float)
        raw_count = (
            np.ones(len(src), dtype=np.int64)
            if raw_count is None
            else np.asarray(raw_count, dtype=np.int64)
        )
        items_shared = (
            np.zeros(n, dtype=np.int64)
            if items_shared is None
            else np.asarray(items_shared, dtype=np.int64)
        )

        assert len(src) == len(dst) == len(omega) == len(raw_count), (
            "Inconsistent number of edges."
        )
        assert len(items_shared) == n, "items_shared must have one entry per node."
        assert ((src >= 0) & (src < n) & (dst >= 0) & (dst < n)).all(), (
            "Edge endpoints must be valid node indices."
        )
        assert (src != dst).all(), "Self-loops are not allowed."
        assert ((omega >= 0) & (omega <= 1)).all(), "omega must be within [0, 1]."

        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        key = src * n + dst
        assert (np.diff(key) > 0).all(), "Duplicate edges are not allowed."

        self._node_ids = node_ids
        self._src = src
        self._dst = dst
        self._omega = omega[order]
        self._raw_count = raw_count[order]
        self._items_shared = items_shared
        for x in (self._src, self._dst, self._omega, self._raw_count):
            x.setflags(write=False)

    # ------------------------------------------------------------------ #
    # Constructors
    # ------------------------------------------------------------------ #

    @classmethod
    def from_networkx(
        cls, graph: nx.DiGraph, weight: str = "omega", default: float = 1.0
    ) -> "DiffusionGraph":
        """
        Build a graph from a networkx digraph. Node ids are the string form
        of the networkx nodes, in the graph's node order.

        Args:
            graph (nx.DiGraph): The directed graph.
            weight (str): Edge attribute holding omega. Default to ``'omega'``
            default (float): Omega of edges without the attribute.
                Default to 1.0
        """
        assert graph.is_directed(), "A directed graph is required."
        nodes = list(graph.nodes())
        index = {v: k for k, v in enumerate(nodes)}
        edges = [
            (index[u], index[v], d.get(weight, default))
            for u, v, d in graph.edges(data=True)
        ]
        src, dst, omega = (np.asarray(x) for x in zip(*edges)) if edges else ([], [], [])
        return cls([str(v) for v in nodes], src, dst, omega)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self._node_ids)
        graph.add_edges_from(
            (self._node_ids[i], self._node_ids[j], {"omega": w, "raw_count": int(c)})
            for i, j, w, c in zip(self._src, self._dst, self._omega, self._raw_count)
        )
        return graph

    def with_weights(self, omega: Sequence[float]) -> "DiffusionGraph":
        """Same topology with new edge weights, given in edge order."""
        return DiffusionGraph(
            self._node_ids,
            self._src,
            self._dst,
            omega,
            raw_count=self._raw_count,
            items_shared=self._items_shared,
        )

    def subgraph(self, edge_mask: np.ndarray) -> "DiffusionGraph":
        """Graph keeping the edges selected by a mask; nodes are preserved."""
        edge_mask = np.asarray(edge_mask, dtype=bool)
        assert edge_mask.shape == self._src.shape, "mask must have one entry per edge"
        return DiffusionGraph(
            self._node_ids,
            self._src[edge_mask],
            self._dst[edge_mask],
            self._omega[edge_mask],
            raw_count=self._raw_count[edge_mask],
            items_shared=self._items_shared,
        )

    # ------------------------------------------------------------------ #
    # Accessors
    # ------------------------------------------------------------------ #

    @property
    def node_ids(self) -> np.ndarray:
        return self._node_ids

    @property
    def n_nodes(self) -> int:
        return len(self._node_ids)

    @property
    def n_edges(self) -> int:
        return len(self._src)

    @property
    def src(self) -> np.ndarray:
        return self._src

    @property
    def dst(self) -> np.ndarray:
        return self._dst

    @property
    def omega(self) -> np.ndarray:
        return self._omega

    @property
    def raw_count(self) -> np.ndarray:
        return self._raw_count

    @property
    def items_shared(self) -> np.ndarray:
        return self._items_shared

    @cached_property
    def k_out(self) -> np.ndarray:
        return np.bincount(self._src, minlength=self.n_nodes)

    @cached_property
    def k_in(self) -> np.ndarray:
        return np.bincount(self._dst, minlength=self.n_nodes)

    @cached_property
    def f_hat(self) -> np.ndarray:
        return np.bincount(self._src, weights=self._omega, minlength=self.n_nodes)

    @cached_property
    def g_hat(self) -> np.ndarray:
        return np.bincount(self._dst, weights=self._omega, minlength=self.n_nodes)

    @cached_property
    def indptr(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.k_out)]).astype(np.int64)

    @cached_property
    def weights(self) -> sp.csr_matrix:
        """Contagion rates as a sparse matrix, explicit zeros kept."""
        return sp.csr_matrix(
            (self._omega, self._dst, self.indptr), shape=(self.n_nodes, self.n_nodes)
        )

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Unweighted adjacency matrix :math:`A`."""
        return sp.csr_matrix(
            (np.ones(self.n_edges), self._dst, self.indptr),
            shape=(self.n_nodes, self.n_nodes),
        )

    @cached_property
    def adjacency_t(self) -> sp.csr_matrix:
        """Transpose of :attr:`adjacency`, in row compressed form."""
        return self.adjacency.T.tocsr()

    def edge_position(self, i: int, j: int) -> int:
        """Position of edge ``i -> j`` in edge order, or -1 if absent."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        k = lo + np.searchsorted(self._dst[lo:hi], j)
        return int(k) if k < hi and self._dst[k] == j else -1

    def has_edge(self, i: int, j: int) -> bool:
        return self.edge_position(i, j) >= 0

    def lookup(self, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
        """Weights of the pairs ``(src[k], dst[k])``, 0 for absent edges."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        out = np.zeros(len(src))
        if self.n_edges == 0:
            return out
        keys = self._src * self.n_nodes + self._dst
        wanted = src * self.n_nodes + dst
        pos = np.minimum(np.searchsorted(keys, wanted), self.n_edges - 1)
        found = keys[pos] == wanted
        out[found] = self._omega[pos[found]]
        return out

    def edges_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "src": self._node_ids[self._src],
                "dst": self._node_ids[self._dst],
                "omega": self._omega,
                "raw_count": self._raw_count,
            }
        )

    def nodes_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "node_id": self._node_ids,
                "k_in": self.k_in,
                "k_out": self.k_out,
                "f_hat": self.f_hat,
                "g_hat": self.g_hat,
                "items_shared": self._items_shared,
            }
        )

    def __repr__(self) -> str:
        return f"DiffusionGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"


def _reshare_pairs(store: CascadeStore) -> Tuple[np.ndarray, np.ndarray]:
    # (edge key, cascade code) of every unflagged reshare event
    n = store.n_nodes
    valid = (store.parents >= 0) & ~store.flagged
    key = store.parents[valid] * n + store.users[valid]
    return key, store.cascade_codes[valid]


def _items_shared(store: CascadeStore) -> np.ndarray:
    # A node shares a cascade when it appears in it as user or as parent
    n = store.n_nodes
    has_parent = store.parents >= 0
    codes = np.concatenate([store.cascade_codes, store.cascade_codes[has_parent]])
    nodes = np.concatenate([store.users, store.parents[has_parent]])
    pairs = np.unique(codes * n + nodes)
    return np.bincount(pairs % n, minlength=n) if n else np.zeros(0, dtype=np.int64)


@log_usage()
def build_graph(store: CascadeStore) -> DiffusionGraph:
    r"""
    Build the diffusion network of a cascade store.

    An edge :math:`i \to j` exists iff :math:`j` reshared from :math:`i`
    (``parent_user_id`` is :math:`i`) in at least one cascade, and

    .. math::
        \omega_{ij} = \frac{\#\{c : j \text{ reshared } c \text{ from } i\}}
        {\#\{c : i \text{ shared } c\}}

    where a node shares a cascade when it appears in it as user or parent.
    Several reshares of one cascade by :math:`j` from :math:`i` count once in
    the numerator; events flagged as preceding their parent are ignored.

    Args:
        store (CascadeStore): A nonempty store.

    Returns:
        DiffusionGraph: The diffusion network, on the node set of ``store``.
    """
    assert store.n_events > 0, "Cannot build a graph from an empty store."
    n = store.n_nodes
    items_shared = _items_shared(store)

    key, codes = _reshare_pairs(store)
    edge_key, raw_count = np.unique(key, return_counts=True)
    numerator = (
        pd.DataFrame({"key": key, "code": codes})
        .drop_duplicates()
        .groupby("key")
        .size()
        .to_numpy()
    )

    src, dst = edge_key // n, edge_key % n
    omega = numerator / items_shared[src]

    graph = DiffusionGraph(
        store.node_ids,
        src,
        dst,
        omega,
        raw_count=raw_count,
        items_shared=items_shared,
    )
    logger.info("build_graph n_nodes=%d n_edges=%d", graph.n_nodes, graph.n_edges)
    return graph


def out_rate(g: DiffusionGraph, i: int) -> float:
    r"""Outgoing contagion rate :math:`\hat{f}_i = \sum_j A_{ij} \omega_{ij}`."""
    assert 0 <= i < g.n_nodes, f"Invalid node {i}."
    return float(g.f_hat[i])


def in_rate(g: DiffusionGraph, j: int) -> float:
    r"""Incoming contagion rate :math:`\hat{g}_j = \sum_i A_{ij} \omega_{ij}`."""
    assert 0 <= j < g.n_nodes, f"Invalid node {j}."
    return float(g.g_hat[j])


@log_usage()
def filter_edges_min_count(
    g: DiffusionGraph,
    store: Optional[CascadeStore] = None,
    min_reshares: int = 3,
) -> DiffusionGraph:
    """
    Keep the edges along which at least ``min_reshares`` reshare events
    happened. Weights are kept as is; the node set is preserved.

    Args:
        g (DiffusionGraph): The graph to filter.
        store (CascadeStore): If provided, reshare counts are recounted from
            this store, which must share the node mapping of ``g``.
            Default to the counts recorded in ``g``
        min_reshares (int): Inclusive threshold. Default to 3

    Returns:
        DiffusionGraph: The filtered graph.
    """
    assert min_reshares >= 1, "min_reshares must be at least 1"

    counts = g.raw_count
    if store is not None:
        assert np.array_equal(store.node_ids, g.node_ids), (
            "store and graph must share their node mapping"
        )
        key, _ = _reshare_pairs(store)
        edge_key, raw = np.unique(key, return_counts=True)
        counts = np.zeros(g.n_edges, dtype=np.int64)
        if len(edge_key):
            wanted = g.src * g.n_nodes + g.dst
            pos = np.minimum(np.searchsorted(edge_key, wanted), len(edge_key) - 1)
            found = edge_key[pos] == wanted
            counts[found] = raw[pos[found]]

    return g.subgraph(counts >= min_reshares)


def write_graph(
    g: DiffusionGraph,
    edges_path: Union[str, Path],
    nodes_path: Union[str, Path],
    config_hash: Optional[str] = None,
) -> None:
    """
    Write the edge list ``(src, dst, omega, raw_count)`` and the node table
    ``(node_id, k_in, k_out, f_hat, g_hat, items_shared)`` as CSV.
    """
    write_frame(g.edges_frame(), edges_path, config_hash=config_hash)
    write_frame(g.nodes_frame(), nodes_path, config_hash=config_hash)
