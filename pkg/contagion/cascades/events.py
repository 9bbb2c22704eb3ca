import io
import logging
import numpy as np
import pandas as pd
import warnings

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import BinaryIO, Dict, Iterator, List, Optional, Sequence, TextIO, Union

from contagion.utils.log import log_usage


logger = logging.getLogger(__name__)


REQUIRED_COLUMNS = ("cascade_id", "user_id", "parent_user_id", "timestamp")


Source = Union[str, Path, BinaryIO, TextIO]


class CascadeParseError(ValueError):
    """Raised when an event log cannot be read at all."""


@dataclass(frozen=True)
class EventRecord:
    """
    One spreading event: ``user_id`` reshared ``cascade_id`` from
    ``parent_user_id`` at ``timestamp``. Roots have no parent.
    """

    cascade_id: str
    user_id: str
    parent_user_id: Optional[str]
    timestamp: int


@dataclass(frozen=True)
class ParseReport:
    n_rows: int = 0
    dropped_bad_timestamp: int = 0
    dropped_missing_user: int = 0
    dropped_self_retweet: int = 0
    dropped_duplicate: int = 0
    flagged_non_monotone: int = 0

    @property
    def n_dropped(self) -> int:
        return (
            self.dropped_bad_timestamp
            + self.dropped_missing_user
            + self.dropped_self_retweet
            + self.dropped_duplicate
        )


def _readonly(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x)
    x.setflags(write=False)
    return x


def _flag_non_monotone(
    codes: np.ndarray, users: np.ndarray, parents: np.ndarray, timestamps: np.ndarray
) -> np.ndarray:
    # A child is flagged when it precedes every event of its parent in the
    # same cascade. Parents without any event in the cascade are not flagged.
    first = (
        pd.DataFrame({"code": codes, "user": users, "ts": timestamps})
        .groupby(["code", "user"], sort=False)["ts"]
        .min()
    )
    keys = pd.MultiIndex.from_arrays([codes, parents])
    parent_ts = first.reindex(keys).to_numpy()
    return (parents >= 0) & ~np.isnan(parent_ts) & (timestamps < parent_ts)


class CascadeStore:
    """
    Spreading events grouped into cascades.

    Node ids are arbitrary strings externally and dense indices in
    ``[0, n_nodes)`` internally; ``node_ids[k]`` is the id of node ``k``.
    Events are kept sorted by cascade id (lexicographic), then timestamp,
    then input order. The store is immutable: its arrays are read-only and
    every transformation returns a new store sharing the node mapping.

    Args:
        cascade_ids (sequence): Cascade id of each event.
        users (sequence): Dense index of the resharing node.
        parents (sequence): Dense index of the parent node, -1 for roots.
        timestamps (sequence): Integer epoch seconds.
        node_ids (sequence): The node id of each dense index.
        report (ParseReport): Counts of dropped and flagged rows.
            Default to ``None``
    """

    def __init__(
        self,
        cascade_ids: Sequence[str],
        users: Sequence[int],
        parents: Sequence[int],
        timestamps: Sequence[int],
        node_ids: Sequence[str],
        report: Optional[ParseReport] = None,
    ):
        cascade_ids = np.asarray(cascade_ids, dtype=object)
        users = np.asarray(users, dtype=np.int64)
        parents = np.asarray(parents, dtype=np.int64)
        timestamps = np.asarray(timestamps, dtype=np.int64)
        node_ids = np.asarray(node_ids, dtype=object)

        assert len(cascade_ids) == len(users) == len(parents) == len(timestamps), (
            "Inconsistent number of events."
        )
        assert len(np.unique(node_ids)) == len(node_ids), "node_ids must be unique."
        n_nodes = len(node_ids)
        assert ((users >= 0) & (users < n_nodes)).all(), "Invalid user index."
        assert ((parents >= -1) & (parents < n_nodes)).all(), "Invalid parent index."
        assert (users != parents).all(), "Self-retweets are not allowed."

        codes, uniques = pd.factorize(cascade_ids, sort=True)
        order = np.lexsort((np.arange(len(codes)), timestamps, codes))

        self._codes = _readonly(codes[order])
        self._cascade_index = _readonly(np.asarray(uniques, dtype=object))
        self._users = _readonly(users[order])
        self._parents = _readonly(parents[order])
        self._timestamps = _readonly(timestamps[order])
        self._node_ids = _readonly(node_ids)
        self._flagged = _readonly(
            _flag_non_monotone(self._codes, self._users, self._parents, self._timestamps)
        )
        self._node_lookup = None

        report = report or ParseReport(n_rows=len(order))
        self.report = ParseReport(
            **{
                **asdict(report),
                "flagged_non_monotone": int(self._flagged.sum()),
            }
        )

    # ------------------------------------------------------------------ #
    # Constructors
    # ------------------------------------------------------------------ #

    @classmethod
    def from_records(
        cls,
        records: Sequence[EventRecord],
        node_ids: Optional[Sequence[str]] = None,
    ) -> "CascadeStore":
        """
        Build a store from event records.

        Args:
            records (sequence): The events.
            node_ids (sequence): Pinned node mapping. Ids found in the
                records but not in ``node_ids`` are appended in sorted
                order. Default to the sorted ids found in the records.
        """
        seen = {r.user_id for r in records} | {
            r.parent_user_id for r in records if r.parent_user_id
        }
        node_ids = _extend_node_ids(node_ids, seen)
        index = pd.Index(node_ids)
        return cls(
            cascade_ids=[r.cascade_id for r in records],
            users=index.get_indexer([r.user_id for r in records]),
            parents=[
                index.get_loc(r.parent_user_id) if r.parent_user_id else -1
                for r in records
            ],
            timestamps=[int(r.timestamp) for r in records],
            node_ids=node_ids,
        )

    def subset(self, mask: np.ndarray) -> "CascadeStore":
        """
        Store restricted to the events selected by a boolean mask, with the
        same node mapping.
        """
        mask = np.asarray(mask, dtype=bool)
        assert mask.shape == self._codes.shape, "mask must have one entry per event"
        return CascadeStore(
            cascade_ids=self._cascade_index[self._codes[mask]],
            users=self._users[mask],
            parents=self._parents[mask],
            timestamps=self._timestamps[mask],
            node_ids=self._node_ids,
        )

    # ------------------------------------------------------------------ #
    # Accessors
    # ------------------------------------------------------------------ #

    @property
    def node_ids(self) -> np.ndarray:
        return self._node_ids

    @property
    def users(self) -> np.ndarray:
        return self._users

    @property
    def parents(self) -> np.ndarray:
        return self._parents

    @property
    def timestamps(self) -> np.ndarray:
        return self._timestamps

    @property
    def flagged(self) -> np.ndarray:
        return self._flagged

    @property
    def cascade_codes(self) -> np.ndarray:
        """Per-event position of its cascade in ``cascade_index``."""
        return self._codes

    @property
    def cascade_index(self) -> np.ndarray:
        """Sorted ids of the cascades holding at least one event."""
        return self._cascade_index

    @property
    def n_events(self) -> int:
        return len(self._codes)

    @property
    def n_cascades(self) -> int:
        return len(self._cascade_index)

    @property
    def n_nodes(self) -> int:
        return len(self._node_ids)

    @property
    def n_users(self) -> int:
        """Number of nodes appearing in at least one event."""
        parents = self._parents[self._parents >= 0]
        return len(np.union1d(self._users, parents))

    @property
    def time_range(self) -> Optional[tuple]:
        if self.n_events == 0:
            return None
        return int(self._timestamps.min()), int(self._timestamps.max())

    def node_index(self, node_id: str) -> int:
        if self._node_lookup is None:
            self._node_lookup = {k: i for i, k in enumerate(self._node_ids)}
        return self._node_lookup[node_id]

    def root_times(self) -> np.ndarray:
        """
        Per-cascade root timestamp (earliest root event). Cascades without a
        root use their earliest event.
        """
        first = np.full(self.n_cascades, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(first, self._codes, self._timestamps)
        roots = self._parents < 0
        root_first = np.full(self.n_cascades, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(root_first, self._codes[roots], self._timestamps[roots])
        has_root = np.zeros(self.n_cascades, dtype=bool)
        has_root[self._codes[roots]] = True
        return np.where(has_root, root_first, first)

    def records(self) -> Iterator[EventRecord]:
        for code, user, parent, ts in zip(
            self._codes, self._users, self._parents, self._timestamps
        ):
            yield EventRecord(
                cascade_id=self._cascade_index[code],
                user_id=self._node_ids[user],
                parent_user_id=self._node_ids[parent] if parent >= 0 else None,
                timestamp=int(ts),
            )

    def cascade(self, cascade_id: str) -> List[EventRecord]:
        """Events of one cascade, sorted by timestamp."""
        code = np.searchsorted(self._cascade_index, cascade_id)
        if code >= self.n_cascades or self._cascade_index[code] != cascade_id:
            raise KeyError(cascade_id)
        lo, hi = np.searchsorted(self._codes, [code, code + 1])
        return [
            EventRecord(
                cascade_id=cascade_id,
                user_id=self._node_ids[u],
                parent_user_id=self._node_ids[p] if p >= 0 else None,
                timestamp=int(t),
            )
            for u, p, t in zip(
                self._users[lo:hi], self._parents[lo:hi], self._timestamps[lo:hi]
            )
        ]

    def to_frame(self) -> pd.DataFrame:
        """Events with external ids, in the serialized column layout."""
        parent_ids = np.where(
            self._parents >= 0, self._node_ids[np.maximum(self._parents, 0)], ""
        )
        return pd.DataFrame(
            {
                "cascade_id": self._cascade_index[self._codes],
                "user_id": self._node_ids[self._users],
                "parent_user_id": parent_ids,
                "timestamp": self._timestamps,
            },
            columns=list(REQUIRED_COLUMNS),
        )

    def summary(self) -> Dict:
        return {
            "n_events": self.n_events,
            "n_users": self.n_users,
            "n_cascades": self.n_cascades,
            "n_nodes": self.n_nodes,
            "n_roots": int((self._parents < 0).sum()),
            "time_range": list(self.time_range) if self.time_range else None,
            "parse_report": asdict(self.report),
        }

    def equals(self, other: "CascadeStore") -> bool:
        return (
            np.array_equal(self._node_ids, other._node_ids)
            and np.array_equal(self._cascade_index, other._cascade_index)
            and np.array_equal(self._codes, other._codes)
            and np.array_equal(self._users, other._users)
            and np.array_equal(self._parents, other._parents)
            and np.array_equal(self._timestamps, other._timestamps)
        )

    def __repr__(self) -> str:
        return (
            f"CascadeStore(n_events={self.n_events}, n_cascades={self.n_cascades}, "
            f"n_nodes={self.n_nodes})"
        )


def _extend_node_ids(node_ids: Optional[Sequence[str]], seen) -> np.ndarray:
    if node_ids is None:
        return np.asarray(sorted(seen), dtype=object)
    pinned = list(node_ids)
    extra = sorted(set(seen) - set(pinned))
    return np.asarray(pinned + extra, dtype=object)


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fp:
            data = fp.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    # Skip the provenance lines written in front of the header
    lines = data.splitlines(keepends=True)
    start = 0
    while start < len(lines) and lines[start].startswith("#"):
        start += 1
    return "".join(lines[start:])


@log_usage()
def parse_events(
    source: Source,
    delimiter: str = ",",
    node_ids: Optional[Sequence[str]] = None,
) -> CascadeStore:
    """
    Parse a delimiter separated event log into a cascade store.

    The header must name the columns ``cascade_id``, ``user_id``,
    ``parent_user_id`` and ``timestamp``; an empty ``parent_user_id``
    denotes a cascade root. Rows with an unparseable timestamp, an empty
    user or cascade id, or a self-retweet are dropped and counted, as are
    exact duplicate rows. Children timestamped before their parent are
    kept and flagged.

    Args:
        source (str, Path or file): Path or open file (bytes or text).
        delimiter (str): Column separator, ``','`` for CSV and ``'\\t'``
            for TSV. Default to ``','``
        node_ids (sequence): Pinned node mapping, e.g. to align a split
            with its parent store. Default to the sorted ids in the log.

    Returns:
        CascadeStore: The parsed store, with a ``report`` of the counts.

    Examples:
        >>> import io
        >>> from contagion.cascades import parse_events
        >>> log = io.BytesIO(
        ...     b"cascade_id,user_id,parent_user_id,timestamp\\n"
        ...     b"c1,u1,,100\\nc1,u2,u1,110\\nc2,u1,,200\\n"
        ... )
        >>> parse_events(log)
        CascadeStore(n_events=3, n_cascades=2, n_nodes=2)
    """
    text = _read_text(source)
    if not text.strip():
        raise CascadeParseError("Empty event log: a header is required.")

    frame = pd.read_csv(
        io.StringIO(text),
        sep=delimiter,
        dtype=str,
        keep_default_na=False,
        na_filter=False,
    )
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise CascadeParseError(f"Missing required columns: {missing}")

    frame = pd.DataFrame({c: frame[c].str.strip() for c in REQUIRED_COLUMNS})
    n_rows = len(frame)

    timestamps = pd.to_numeric(frame["timestamp"], errors="coerce").to_numpy(float)
    ok_ts = np.isfinite(timestamps) & (timestamps == np.floor(timestamps))
    ok_user = (frame["user_id"] != "").to_numpy() & (frame["cascade_id"] != "").to_numpy()
    ok_self = (frame["parent_user_id"] != frame["user_id"]).to_numpy()

    bad_ts = ~ok_ts
    missing_user = ok_ts & ~ok_user
    self_retweet = ok_ts & ok_user & ~ok_self
    keep = ok_ts & ok_user & ok_self

    duplicated = frame.duplicated(keep="first").to_numpy() & keep
    keep &= ~duplicated

    report = ParseReport(
        n_rows=n_rows,
        dropped_bad_timestamp=int(bad_ts.sum()),
        dropped_missing_user=int(missing_user.sum()),
        dropped_self_retweet=int(self_retweet.sum()),
        dropped_duplicate=int(duplicated.sum()),
    )
    if report.n_dropped:
        logger.info(
            "dropped_rows=%d bad_timestamp=%d missing_user=%d "
            "self_retweet=%d duplicate=%d",
            report.n_dropped,
            report.dropped_bad_timestamp,
            report.dropped_missing_user,
            report.dropped_self_retweet,
            report.dropped_duplicate,
        )

    frame = frame[keep]
    parent_col = frame["parent_user_id"].to_numpy(dtype=object)
    user_col = frame["user_id"].to_numpy(dtype=object)
    seen = set(user_col) | {p for p in parent_col if p}
    node_ids = _extend_node_ids(node_ids, seen)

    index = pd.Index(node_ids)
    users = index.get_indexer(user_col)
    parents = np.full(len(frame), -1, dtype=np.int64)
    has_parent = parent_col != ""
    parents[has_parent] = index.get_indexer(parent_col[has_parent])

    store = CascadeStore(
        cascade_ids=frame["cascade_id"].to_numpy(dtype=object),
        users=users,
        parents=parents,
        timestamps=timestamps[keep].astype(np.int64),
        node_ids=node_ids,
        report=report,
    )
    if store.report.flagged_non_monotone:
        warnings.warn(
            f"{store.report.flagged_non_monotone} events are timestamped before "
            "their parent's event; they are kept but flagged."
        )
    return store


def write_events(
    store: CascadeStore,
    dest: Union[str, Path, TextIO],
    delimiter: str = ",",
    config_hash: Optional[str] = None,
) -> None:
    """
    Serialize a store in the format read by :func:`parse_events`.

    Args:
        store (CascadeStore): The store to write.
        dest (str, Path or text file): Destination.
        delimiter (str): Column separator. Default to ``','``
        config_hash (str): If provided, written as a leading
            ``# config_hash=...`` line. Default to ``None``
    """
    frame = store.to_frame()
    if hasattr(dest, "write"):
        _write(frame, dest, delimiter, config_hash)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fp:
            _write(frame, fp, delimiter, config_hash)


def _write(frame: pd.DataFrame, fp: TextIO, delimiter: str, config_hash: Optional[str]):
    if config_hash is not None:
        fp.write(f"# config_hash={config_hash}\n")
    frame.to_csv(fp, sep=delimiter, index=False, lineterminator="\n")
