import json
import logging
import numpy as np

from dataclasses import asdict, dataclass
from functools import partial
from pathlib import Path
from typing import List, Optional, Tuple, Union

from contagion.cascades import CascadeStore, EventRecord
from contagion.graph import DiffusionGraph
from contagion.utils.common import floor_fraction, make_generator, write_json
from contagion.utils.log import log_usage
from contagion.utils.parallel import parallel_map


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundTruth:
    """
    Planted influence ``I`` and susceptibility ``S`` of every node. The
    probability that ``j`` gets the information from ``i`` is ``I[i] * S[j]``.
    """

    I: np.ndarray
    S: np.ndarray
    rng_seed: Optional[int] = None

    def __post_init__(self):
        I = np.asarray(self.I, dtype=float)
        S = np.asarray(self.S, dtype=float)
        assert I.shape == S.shape and I.ndim == 1, "I and S must be aligned 1d vectors"
        assert ((I >= 0) & (I <= 1) & (S >= 0) & (S <= 1)).all(), (
            "Ground truth values must be within [0, 1]"
        )
        object.__setattr__(self, "I", I)
        object.__setattr__(self, "S", S)

    @property
    def n_nodes(self) -> int:
        return len(self.I)

    def edge_probabilities(self, g: DiffusionGraph) -> np.ndarray:
        """Success probability of every edge of ``g``, in edge order."""
        assert g.n_nodes == self.n_nodes, "Ground truth and graph are not aligned."
        return self.I[g.src] * self.S[g.dst]

    def rates(self, g: DiffusionGraph) -> Tuple[np.ndarray, np.ndarray]:
        """True outgoing and incoming contagion rates ``f`` and ``g`` on ``g``."""
        p = self.edge_probabilities(g)
        return (
            np.bincount(g.src, weights=p, minlength=g.n_nodes),
            np.bincount(g.dst, weights=p, minlength=g.n_nodes),
        )


@dataclass(frozen=True)
class SimConfig:
    """
    Args:
        cascades_per_seed (int): Cascades started from every node.
            Default to 100
        rng_seed (int): Root seed of the corpus. Default to 0
        max_steps (int): Safety cap on the number of steps of a cascade.
            Default to the number of nodes.
    """

    cascades_per_seed: int = 100
    rng_seed: int = 0
    max_steps: Optional[int] = None

    def __post_init__(self):
        assert self.cascades_per_seed >= 1, "cascades_per_seed must be at least 1"
        assert self.max_steps is None or self.max_steps >= 1, (
            "max_steps must be at least 1"
        )


@log_usage()
def draw_ground_truth(n: int, rng_seed: int) -> GroundTruth:
    """
    Draw ``I`` and ``S`` i.i.d. uniform on ``[0, 1]``.

    Args:
        n (int): Number of nodes.
        rng_seed (int): Seed of the draw.
    """
    assert n >= 1, "n must be at least 1"
    rng = make_generator(rng_seed)
    return GroundTruth(I=rng.random(n), S=rng.random(n), rng_seed=rng_seed)


def with_truth_rates(g: DiffusionGraph, truth: GroundTruth) -> DiffusionGraph:
    """Topology of ``g`` weighted by the planted rates ``I[i] * S[j]``."""
    return g.with_weights(truth.edge_probabilities(g))


def _simulate_batch(
    indptr: np.ndarray,
    dst: np.ndarray,
    p: np.ndarray,
    n_nodes: int,
    seed_node: int,
    n_reps: int,
    rng: np.random.Generator,
    max_steps: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, bool]:
    """
    Run ``n_reps`` independent cascades from one seed node together.

    Returns:
        5-tuple: replicate, user, parent (-1 for the root) and activation
        step of every event, in order of activation; and whether the step
        cap stopped a cascade with attempts left.
    """
    active = np.zeros((n_reps, n_nodes), dtype=bool)
    active[:, seed_node] = True

    frontier_rep = np.arange(n_reps)
    frontier_node = np.full(n_reps, seed_node, dtype=np.int64)
    reps, users, parents, steps = (
        [frontier_rep],
        [frontier_node],
        [np.full(n_reps, -1, dtype=np.int64)],
        [np.zeros(n_reps, dtype=np.int64)],
    )

    step = 0
    aborted = False
    while len(frontier_node):
        deg = indptr[frontier_node + 1] - indptr[frontier_node]
        n_attempts = int(deg.sum())
        if n_attempts == 0:
            break
        if step == max_steps:
            aborted = True
            break
        step += 1

        # One attempt along every out-edge of every newly active node
        starts = np.cumsum(deg) - deg
        edge = (
            np.arange(n_attempts)
            - np.repeat(starts, deg)
            + np.repeat(indptr[frontier_node], deg)
        )
        rep = np.repeat(frontier_rep, deg)
        src = np.repeat(frontier_node, deg)
        tgt = dst[edge]

        success = (rng.random(n_attempts) < p[edge]) & ~active[rep, tgt]
        rep, src, tgt = rep[success], src[success], tgt[success]

        # A node activated by several parents credits one of them uniformly
        shuffle = rng.permutation(len(rep))
        _, first = np.unique((rep * n_nodes + tgt)[shuffle], return_index=True)
        first = np.sort(shuffle[first])
        rep, src, tgt = rep[first], src[first], tgt[first]

        active[rep, tgt] = True
        reps.append(rep)
        users.append(tgt)
        parents.append(src)
        steps.append(np.full(len(rep), step, dtype=np.int64))
        frontier_rep, frontier_node = rep, tgt

    return (
        np.concatenate(reps),
        np.concatenate(users),
        np.concatenate(parents),
        np.concatenate(steps),
        aborted,
    )


def simulate_cascade(
    g: DiffusionGraph,
    truth: GroundTruth,
    seed_node: int,
    rng: np.random.Generator,
    cascade_id: str = "c0",
    max_steps: Optional[int] = None,
) -> List[EventRecord]:
    """
    Simulate one independent cascade on the topology of ``g``.

    The seed is active at step 0. A node activated at step ``t`` makes, at
    step ``t + 1``, exactly one attempt on each out-neighbour that is not
    yet active, succeeding with probability ``I[i] * S[j]``. The cascade
    stops when no attempt is left.

    Args:
        g (DiffusionGraph): The topology. Edge weights are ignored.
        truth (GroundTruth): Planted scores.
        seed_node (int): Index of the seed.
        rng (np.random.Generator): Random stream.
        cascade_id (str): Id given to the events. Default to ``'c0'``
        max_steps (int): Safety cap on the number of steps.
            Default to the number of nodes.

    Returns:
        list: The events, in order of activation. Timestamps are steps.
    """
    assert 0 <= seed_node < g.n_nodes, f"Invalid seed node {seed_node}."
    _, users, parents, steps, aborted = _simulate_batch(
        g.indptr,
        g.dst,
        truth.edge_probabilities(g),
        g.n_nodes,
        seed_node,
        1,
        rng,
        max_steps or g.n_nodes,
    )
    if aborted:
        logger.warning("cascade=%s stopped at max_steps=%s", cascade_id, max_steps)
    ids = g.node_ids
    return [
        EventRecord(cascade_id, ids[u], ids[v] if v >= 0 else None, int(t))
        for u, v, t in zip(users, parents, steps)
    ]


def _simulate_seed(task, indptr, dst, p, n_nodes, n_reps, max_steps):
    seed_node, seed_seq = task
    return _simulate_batch(
        indptr, dst, p, n_nodes, seed_node, n_reps, make_generator(seed_seq), max_steps
    )


def _corpus_arrays(
    g: DiffusionGraph,
    truth: GroundTruth,
    cfg: SimConfig,
    root: np.random.SeedSequence,
    time_offset: int = 0,
    id_prefix: str = "",
    workers: int = 1,
    show_progress: bool = False,
):
    n, reps = g.n_nodes, cfg.cascades_per_seed
    max_steps = cfg.max_steps or n
    stride = max_steps + 1

    func = partial(
        _simulate_seed,
        indptr=g.indptr,
        dst=g.dst,
        p=truth.edge_probabilities(g),
        n_nodes=n,
        n_reps=reps,
        max_steps=max_steps,
    )
    results = parallel_map(
        func,
        zip(range(n), root.spawn(n)),
        workers=workers,
        show_progress=show_progress,
        desc="Simulating cascades",
    )

    n_aborted = sum(r[4] for r in results)
    if n_aborted:
        logger.warning("%d seed nodes hit max_steps=%d", n_aborted, max_steps)

    w_seed, w_rep = len(str(max(n - 1, 0))), len(str(reps - 1))
    names = np.array(
        [
            f"{id_prefix}s{s:0{w_seed}d}-r{r:0{w_rep}d}"
            for s in range(n)
            for r in range(reps)
        ],
        dtype=object,
    )
    cascade = np.concatenate([s * reps + r[0] for s, r in enumerate(results)])
    replicate = np.concatenate([r[0] for r in results])
    users = np.concatenate([r[1] for r in results])
    parents = np.concatenate([r[2] for r in results])
    steps = np.concatenate([r[3] for r in results])
    timestamps = time_offset + replicate * stride + steps
    return names[cascade], users, parents, timestamps


@log_usage()
def generate_corpus(
    g: DiffusionGraph,
    truth: GroundTruth,
    cfg: Optional[SimConfig] = None,
    workers: int = 1,
    show_progress: bool = False,
) -> CascadeStore:
    """
    Simulate ``cfg.cascades_per_seed`` cascades from every node.

    Cascade ids read ``s<seed>-r<replicate>`` with zero padded numbers. The
    timestamp of an event is ``replicate * (max_steps + 1) + step``. Every
    seed node draws from its own substream of ``cfg.rng_seed``, so the
    corpus does not depend on ``workers``.

    Args:
        g (DiffusionGraph): The topology. Edge weights are ignored.
        truth (GroundTruth): Planted scores.
        cfg (SimConfig): Simulation settings. Default to ``SimConfig()``
        workers (int): Number of processes. Default to 1
        show_progress (bool): Display a progress bar. Default to ``False``

    Returns:
        CascadeStore: The corpus, on the node mapping of ``g``.
    """
    cfg = cfg or SimConfig()
    assert truth.n_nodes == g.n_nodes, "Ground truth and graph are not aligned."
    arrays = _corpus_arrays(
        g,
        truth,
        cfg,
        np.random.SeedSequence(cfg.rng_seed),
        workers=workers,
        show_progress=show_progress,
    )
    store = CascadeStore(*arrays, node_ids=g.node_ids)
    logger.info(
        "generate_corpus n_cascades=%d n_events=%d", store.n_cascades, store.n_events
    )
    return store


@log_usage()
def generate_periods(
    g: DiffusionGraph,
    truth: GroundTruth,
    n_periods: int,
    cfg: Optional[SimConfig] = None,
    workers: int = 1,
    show_progress: bool = False,
) -> CascadeStore:
    """
    Concatenate ``n_periods`` independent corpora drawn from the same ground
    truth, each in its own consecutive block of
    ``cascades_per_seed * (max_steps + 1)`` seconds. Cascade ids are
    prefixed by ``p<period>-``.
    """
    assert n_periods >= 1, "n_periods must be at least 1"
    cfg = cfg or SimConfig()
    assert truth.n_nodes == g.n_nodes, "Ground truth and graph are not aligned."
    block = cfg.cascades_per_seed * ((cfg.max_steps or g.n_nodes) + 1)
    w = len(str(n_periods - 1))

    parts = [
        _corpus_arrays(
            g,
            truth,
            cfg,
            root,
            time_offset=k * block,
            id_prefix=f"p{k:0{w}d}-",
            workers=workers,
            show_progress=show_progress,
        )
        for k, root in enumerate(np.random.SeedSequence(cfg.rng_seed).spawn(n_periods))
    ]
    return CascadeStore(
        *(np.concatenate(x) for x in zip(*parts)), node_ids=g.node_ids
    )


@log_usage()
def remove_events(store: CascadeStore, fraction: float, rng_seed: int) -> CascadeStore:
    """
    Remove ``floor(fraction * n)`` of the ``n`` reshare events uniformly at
    random. Roots are kept, and so are the descendants of removed events,
    with their recorded parent.

    Args:
        store (CascadeStore): The corpus.
        fraction (float): Fraction of reshare events to remove, in [0, 1).
        rng_seed (int): Seed of the selection.
    """
    assert 0 <= fraction < 1, "fraction must be within [0, 1)"
    reshares = np.flatnonzero(store.parents >= 0)
    k = floor_fraction(fraction, len(reshares))
    removed = make_generator(rng_seed).choice(reshares, size=k, replace=False)
    keep = np.ones(store.n_events, dtype=bool)
    keep[removed] = False
    logger.info("remove_events removed=%d of reshares=%d", k, len(reshares))
    return store.subset(keep)


def write_ground_truth(
    truth: GroundTruth,
    node_ids,
    dest: Union[str, Path],
    cfg: Optional[SimConfig] = None,
    config_hash: Optional[str] = None,
) -> None:
    """Write the ground truth and simulation settings as a JSON sidecar."""
    write_json(
        {
            "node_ids": list(node_ids),
            "I": truth.I,
            "S": truth.S,
            "rng_seed": truth.rng_seed,
            "sim_config": asdict(cfg) if cfg is not None else None,
        },
        dest,
        config_hash=config_hash,
    )


def read_ground_truth(source: Union[str, Path]) -> Tuple[GroundTruth, np.ndarray]:
    """
    Read a sidecar written by :func:`write_ground_truth`.

    Returns:
        2-tuple: The ground truth and its node ids.
    """
    with open(source, encoding="utf-8") as fp:
        content = json.load(fp)
    missing = {"node_ids", "I", "S"} - set(content)
    if missing:
        raise ValueError(f"Ground truth file is missing keys: {sorted(missing)}")
    truth = GroundTruth(I=content["I"], S=content["S"], rng_seed=content.get("rng_seed"))
    return truth, np.asarray(content["node_ids"], dtype=object)
