from .events import (
    CascadeParseError,
    CascadeStore,
    EventRecord,
    ParseReport,
    parse_events,
    write_events,
)
from .splits import split_periods, split_train_test

__all__ = [
    "CascadeParseError",
    "CascadeStore",
    "EventRecord",
    "ParseReport",
    "parse_events",
    "split_periods",
    "split_train_test",
    "write_events",
]
