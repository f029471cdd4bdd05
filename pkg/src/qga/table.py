"""Genus-distribution table of the exceptional mutation classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .catalog import EXCEPTIONAL, REFERENCE_TABLE, named
from .mutation_class import ClassReport, ExplorationLimits, cached_enumerate, enumerate_class, genus_distribution


@dataclass(frozen=True)
class TableRow:
    name: str
    mode: str
    size: int
    planar: int
    genus1: int
    other: int       # higher genus
    bounded: int     # genus search ran out of budget
    complete: bool
    expected: tuple

    @property
    def values(self) -> tuple:
        return (self.size, self.planar, self.genus1)

    @property
    def matches(self) -> bool:
        return self.complete and self.bounded == 0 and self.other == 0 and self.values == self.expected


def table_row(name: str, mode: str = "quiver", genus_budget: float = 60.0,
              limits: Optional[ExplorationLimits] = None, workers: int = 1,
              use_cache: bool = False, cache_dir=None) -> tuple[TableRow, ClassReport]:
    seed = named(name).quiver
    if use_cache:
        report = cached_enumerate(seed, mode, limits, cache_dir, workers)
    else:
        report = enumerate_class(seed, mode, limits, workers)
    if report.truncated:
        row = TableRow(name, mode, report.size, 0, 0, 0, 0, False, REFERENCE_TABLE[name])
        return row, report
    report = genus_distribution(report, genus_budget)
    hist = report.genus_histogram
    other = sum(v for k, v in hist.items() if isinstance(k, int) and k >= 2)
    row = TableRow(name, mode, report.size, hist.get(0, 0), hist.get(1, 0), other,
                   hist.get("bounded", 0), True, REFERENCE_TABLE[name])
    return row, report


def genus_table(only: Optional[Iterable[str]] = None, mode: str = "quiver", **kwargs) -> list[TableRow]:
    """Rows in the listed order of the exceptional types."""
    wanted = list(EXCEPTIONAL) if not only else list(only)
    for name in wanted:
        if name not in REFERENCE_TABLE:
            raise KeyError(f"{name!r} is not an exceptional type")
    return [table_row(name, mode, **kwargs)[0] for name in wanted]
