"""Rectangular numeric datasets: CSV ingestion, standardization, summaries."""

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DataWarning, ParseError, TooFewRows, ZeroVariance

SD_FLOOR = 1e-12


@dataclass(frozen=True)
class VariableSummary:
    name: str
    mean: float
    sd: float
    minimum: float
    maximum: float
    flag_zero_variance: bool


@dataclass(frozen=True)
class Dataset:
    """Immutable named-column numeric data, one row per observation."""

    variables: tuple
    rows: np.ndarray  # (n, k) float64
    dropped: int = field(default=0, compare=False)

    def __post_init__(self):
        names = tuple(str(v) for v in self.variables)
        object.__setattr__(self, "variables", names)
        if len(set(names)) != len(names) or any(not v for v in names):
            raise ParseError("variable names must be unique and nonempty")
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != len(names):
            raise ParseError("rows must be a 2-D block with one column per variable")
        if not np.all(np.isfinite(rows)):
            raise ParseError("all observations must be finite")
        if rows.shape[0] < 3:
            raise TooFewRows(f"need at least 3 rows, got {rows.shape[0]}")
        rows = rows.copy()
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def k(self):
        return self.rows.shape[1]

    def column(self, name):
        try:
            idx = self.variables.index(name)
        except ValueError:
            raise KeyError(name) from None
        return self.rows[:, idx]


def load_csv(path):
    """Read a dataset from a header-first CSV file.

    Rows with missing or unparseable cells are dropped (listwise deletion);
    the count is attached to the result and reported as a DataWarning.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        names = [h.strip() for h in header]
        if any(not n for n in names):
            raise ParseError(f"{path}: blank column name in header")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ParseError(f"{path}: duplicate column names {dupes}")
        kept, dropped = [], 0
        for cells in reader:
            if not cells:
                continue  # blank line
            if len(cells) != len(names):
                dropped += 1
                continue
            try:
                row = [float(c) for c in cells]
            except ValueError:
                dropped += 1
                continue
            if not all(math.isfinite(v) for v in row):
                dropped += 1
                continue
            kept.append(row)
    if len(kept) < 3:
        raise TooFewRows(
            f"{path}: only {len(kept)} usable rows after dropping {dropped}"
        )
    if dropped:
        warnings.warn(
            f"{path}: dropped {dropped} rows with missing or unparseable cells",
            DataWarning,
            stacklevel=2,
        )
    return Dataset(tuple(names), np.array(kept, dtype=np.float64), dropped=dropped)


def write_csv(d, path):
    """Write a dataset in the same CSV dialect load_csv reads."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(d.variables)
        for row in d.rows:
            writer.writerow([repr(float(v)) for v in row])


def column_sds(d):
    """Sample standard deviations (n-1 denominator), one per column."""
    return d.rows.std(axis=0, ddof=1)


def standardize(d):
    """Rescale every column to mean 0, sd 1 (n-1 denominator)."""
    sds = column_sds(d)
    for name, sd in zip(d.variables, sds):
        if sd < SD_FLOOR:
            raise ZeroVariance(name)
    z = (d.rows - d.rows.mean(axis=0)) / sds
    return Dataset(d.variables, z, dropped=d.dropped)


def summarize(d):
    """One VariableSummary per column, in declaration order."""
    sds = column_sds(d)
    out = []
    for j, name in enumerate(d.variables):
        col = d.rows[:, j]
        out.append(
            VariableSummary(
                name=name,
                mean=float(col.mean()),
                sd=float(sds[j]),
                minimum=float(col.min()),
                maximum=float(col.max()),
                flag_zero_variance=bool(sds[j] < SD_FLOOR),
            )
        )
    return out
