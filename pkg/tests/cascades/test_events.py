import io
import numpy as np
import pytest

from contextlib import nullcontext

from contagion.cascades import (
    CascadeParseError,
    CascadeStore,
    EventRecord,
    parse_events,
    write_events,
)
from tests.basic_graphs import SMALL_ROWS, event_log, store_from_rows


def test_parse_small_log():
    log = io.BytesIO(
        b"cascade_id,user_id,parent_user_id,timestamp\n"
        b"c1,u1,,100\nc1,u2,u1,110\nc2,u1,,200\n"
    )
    store = parse_events(log)
    assert store.n_events == 3
    assert store.n_cascades == 2
    assert list(store.node_ids) == ["u1", "u2"]
    assert list(store.parents) == [-1, 0, -1]
    assert store.time_range == (100, 200)
    assert store.report.n_dropped == 0


@pytest.mark.parametrize(
    ["rows", "field", "expected"],
    [
        ([("c1", "u1", None, "abc")], "dropped_bad_timestamp", 1),
        ([("c1", "u1", None, "1.5")], "dropped_bad_timestamp", 1),
        ([("c1", "", None, 100)], "dropped_missing_user", 1),
        ([("", "u1", None, 100)], "dropped_missing_user", 1),
        ([("c1", "u1", "u1", 100)], "dropped_self_retweet", 1),
        ([("c1", "u1", None, 100), ("c1", "u1", None, 100)], "dropped_duplicate", 1),
    ],
)
def test_parse_drops(rows, field, expected):
    rows = [("c0", "u0", None, 50)] + rows
    store = parse_events(event_log(rows))
    assert getattr(store.report, field) == expected
    assert store.report.n_dropped == expected
    assert store.report.n_rows == len(rows)
    assert store.n_events == len(rows) - expected


def test_parse_flags_non_monotone():
    rows = [("c1", "u1", None, 100), ("c1", "u2", "u1", 90), ("c1", "u3", "u9", 80)]
    with pytest.warns(UserWarning):
        store = parse_events(event_log(rows))
    # u2 precedes its parent, u9 never appears in c1
    assert store.report.flagged_non_monotone == 1
    assert store.n_events == 3
    flagged = store.users[store.flagged]
    assert list(store.node_ids[flagged]) == ["u2"]


@pytest.mark.parametrize(
    ["content", "delimiter", "fails"],
    [
        (b"cascade_id,user_id,parent_user_id,timestamp\nc1,u1,,1\n", ",", False),
        (b"cascade_id\tuser_id\tparent_user_id\ttimestamp\nc1\tu1\t\t1\n", "\t", False),
        (b"cascade_id,user_id,timestamp\nc1,u1,1\n", ",", True),
        (b"", ",", True),
        (b"cascade_id,user_id,parent_user_id,timestamp\nc1,u1,,1\n", "\t", True),
    ],
)
def test_parse_schema(content, delimiter, fails):
    with pytest.raises(CascadeParseError) if fails else nullcontext():
        store = parse_events(io.BytesIO(content), delimiter=delimiter)
        assert store.n_events == 1


def test_parse_header_only():
    store = parse_events(event_log([]))
    assert store.n_events == 0
    assert store.n_nodes == 0
    assert store.time_range is None


def test_pinned_node_ids():
    store = parse_events(event_log(SMALL_ROWS), node_ids=["u3", "zz"])
    assert list(store.node_ids) == ["u3", "zz", "u1", "u2"]
    assert store.n_users == 3


def test_events_are_sorted():
    rows = [
        ("c2", "a", None, 5),
        ("c1", "b", "a", 20),
        ("c1", "a", None, 10),
    ]
    store = store_from_rows(rows)
    assert list(store.cascade_index) == ["c1", "c2"]
    assert list(store.timestamps) == [10, 20, 5]


def test_write_then_parse(tmp_path, store):
    path = tmp_path / "events.csv"
    write_events(store, path, config_hash="abc")
    assert path.read_text().startswith("# config_hash=abc\n")
    assert parse_events(path).equals(store)


def test_records_and_cascade(store):
    records = list(store.records())
    assert len(records) == store.n_events
    assert records[0] == EventRecord("c1", "u1", None, 100)
    assert store.cascade("c2") == [
        EventRecord("c2", "u1", None, 200),
        EventRecord("c2", "u2", "u1", 230),
    ]
    with pytest.raises(KeyError):
        store.cascade("c9")


def test_node_index(store):
    assert [store.node_index(u) for u in ("u1", "u2", "u3")] == [0, 1, 2]
    with pytest.raises(KeyError):
        store.node_index("u9")


def test_summary(store):
    summary = store.summary()
    assert summary["n_events"] == 6
    assert summary["n_cascades"] == 3
    assert summary["n_roots"] == 3
    assert summary["time_range"] == [100, 300]
    assert summary["parse_report"]["n_rows"] == 6


def test_store_is_immutable(store):
    with pytest.raises(ValueError):
        store.users[0] = 1


@pytest.mark.parametrize(
    ["users", "parents", "fails"],
    [
        ([0, 1], [-1, 0], False),
        ([0, 1], [-1, 1], True),
        ([0, 2], [-1, 0], True),
        ([0, 1], [-2, 0], True),
    ],
)
def test_store_init(users, parents, fails):
    with pytest.raises(Exception) if fails else nullcontext():
        store = CascadeStore(["c", "c"], users, parents, [1, 2], ["a", "b"])
        assert np.array_equal(store.users, users)
