import pandas as pd

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from contagion.utils.common import write_frame, write_json


@dataclass(frozen=True)
class Entry:
    """One reported value, e.g. a correlation and its null-model p-value."""

    statistic: str
    value: float
    n: Optional[int] = None
    p_value: Optional[float] = None
    degenerate: bool = False
    tags: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        assert self.p_value is None or 0 <= self.p_value <= 1, (
            "p_value must be within [0, 1]"
        )


@dataclass
class EvalReport:
    """
    Named collection of statistics with the metadata of the experiment
    that produced them (period, dataset, seeds, number of realizations...).
    """

    name: str
    entries: List[Entry] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add(
        self,
        statistic: str,
        value: float,
        n: Optional[int] = None,
        p_value: Optional[float] = None,
        degenerate: bool = False,
        **tags,
    ) -> Entry:
        entry = Entry(statistic, float(value), n, p_value, degenerate, tags)
        self.entries.append(entry)
        return entry

    def extend(self, other: "EvalReport", **tags) -> None:
        """Append the entries of another report, with extra tags."""
        for e in other.entries:
            self.entries.append(
                Entry(e.statistic, e.value, e.n, e.p_value, e.degenerate, {**e.tags, **tags})
            )

    def get(self, statistic: str, **tags) -> Entry:
        """The single entry with this statistic name and these tags."""
        found = [
            e
            for e in self.entries
            if e.statistic == statistic
            and all(e.tags.get(k) == v for k, v in tags.items())
        ]
        if len(found) != 1:
            raise KeyError(f"{len(found)} entries match {statistic!r} {tags}")
        return found[0]

    def value(self, statistic: str, **tags) -> float:
        return self.get(statistic, **tags).value

    def to_frame(self) -> pd.DataFrame:
        """Flat table, one row per entry, tags as extra columns."""
        rows = [
            {
                "experiment": self.name,
                **{k: v for k, v in asdict(e).items() if k != "tags"},
                **e.tags,
            }
            for e in self.entries
        ]
        columns = ["experiment", "statistic", "value", "n", "p_value", "degenerate"]
        return pd.DataFrame(rows, columns=columns + _tag_columns(self.entries))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "metadata": self.metadata,
            "entries": [asdict(e) for e in self.entries],
        }

    def write_csv(self, dest: Union[str, Path], config_hash: Optional[str] = None):
        write_frame(self.to_frame(), dest, config_hash=config_hash)

    def write_json(self, dest: Union[str, Path], config_hash: Optional[str] = None):
        write_json(self.to_dict(), dest, config_hash=config_hash)


def _tag_columns(entries: List[Entry]) -> List[str]:
    columns = []
    for e in entries:
        columns.extend(k for k in e.tags if k not in columns)
    return columns
