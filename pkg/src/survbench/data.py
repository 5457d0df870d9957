"""Covariate tables: synthetic ejection-fraction data, delimited-file
loading, deterministic train/validation/test splits, and per-column
standardization."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, SchemaError

TRAIN, VALIDATION, TEST = 0, 1, 2
SPLIT_NAMES = ("train", "validation", "test")


def _round_half_up(x: float) -> int:
    # round() would use banker's rounding; counts here must round .5 up
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class CovariateTable:
    """An (n, d) matrix of real covariates with named columns.

    ``standardization`` holds the per-column (mean, sd) recorded when the
    table was standardized, so the identical affine transform can be
    applied to other rows later.  Tables are immutable once built.
    """

    rows: np.ndarray
    column_names: tuple[str, ...]
    standardization: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValueError(f"rows must be 2-D, got shape {rows.shape}")
        if rows.shape[1] != len(self.column_names):
            raise ValueError(
                f"{rows.shape[1]} columns but {len(self.column_names)} names"
            )
        if rows.shape[1] < 1:
            raise ValueError("a covariate table needs at least one column")
        if rows.size and not np.isfinite(rows).all():
            raise ValueError("covariates contain non-finite values")
        if self.standardization is not None:
            std = tuple((float(m), float(s)) for m, s in self.standardization)
            if len(std) != rows.shape[1]:
                raise ValueError("one (mean, sd) pair per column required")
            if any(s <= 0 for _, s in std):
                raise ValueError("recorded sd values must be positive")
            object.__setattr__(self, "standardization", std)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "column_names", tuple(self.column_names))

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_cols(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class SplitAssignment:
    """Per-row split labels (codes TRAIN/VALIDATION/TEST) plus the seed
    that produced them."""

    labels: np.ndarray
    seed: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int8)
        if not np.isin(labels, (TRAIN, VALIDATION, TEST)).all():
            raise ValueError("labels must be TRAIN, VALIDATION or TEST codes")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    def indices(self, label: int) -> np.ndarray:
        return np.nonzero(self.labels == label)[0]

    def counts(self) -> tuple[int, int, int]:
        return tuple(int((self.labels == c).sum()) for c in (TRAIN, VALIDATION, TEST))


def synthesize_ef(
    n: int,
    mean: float = 55.77,
    sd: float = 12.40,
    lo: float = 5.0,
    hi: float = 90.0,
    seed: int = 0,
) -> CovariateTable:
    """Draw an n-row, one-column ejection-fraction table.

    Samples come from a normal distribution with the given mean/sd;
    any draw outside [lo, hi] is rejected and redrawn, keeping the values
    physiologic.  Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if sd <= 0:
        raise ValueError("sd must be positive")
    if lo >= hi:
        raise ValueError(f"invalid bounds: lo={lo} must be < hi={hi}")
    if not lo < mean < hi:
        raise ValueError(f"mean={mean} must lie strictly inside [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    out = np.empty(n)
    filled = 0
    for _ in range(1000):
        if filled == n:
            break
        draw = rng.normal(mean, sd, size=n - filled)
        good = draw[(draw >= lo) & (draw <= hi)]
        out[filled : filled + good.size] = good
        filled += good.size
    if filled < n:
        raise RuntimeError("rejection sampling failed to fill the table")
    return CovariateTable(out.reshape(-1, 1), ("EF",))


def load_covariates(path, columns, delimiter: str = ",") -> CovariateTable:
    """Read named numeric columns from a delimited text file.

    The first line must be a header containing every requested column.
    Missing or non-numeric cells raise DataError naming the data row
    (1-based) and column.
    """
    columns = list(columns)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: empty file, expected a header row")
        header = [h.strip() for h in header]
        missing = [c for c in columns if c not in header]
        if missing:
            raise SchemaError(f"{path}: header is missing columns {missing}")
        positions = [header.index(c) for c in columns]
        rows = []
        for rownum, record in enumerate(reader, start=1):
            values = []
            for name, j in zip(columns, positions):
                cell = record[j].strip() if j < len(record) else ""
                if not cell:
                    raise DataError(f"row {rownum}, column {name!r}: missing value")
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"row {rownum}, column {name!r}: cannot parse {cell!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DataError(
                        f"row {rownum}, column {name!r}: non-finite value {cell!r}"
                    )
                values.append(value)
            rows.append(values)
    arr = np.array(rows, dtype=float) if rows else np.empty((0, len(columns)))
    return CovariateTable(arr, tuple(columns))


def make_splits(n: int, proportions, seed: int) -> SplitAssignment:
    """Partition indices 0..n-1 into train/validation/test.

    A uniformly random permutation is cut at the cumulative-proportion
    boundaries, so label counts match the proportions within +/-1.
    """
    p = [float(x) for x in proportions]
    if len(p) != 3 or any(x < 0 for x in p):
        raise ValueError("proportions must be three nonnegative reals")
    if abs(sum(p) - 1.0) > 1e-9:
        raise ValueError(f"proportions must sum to 1, got {sum(p)}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if all(x > 0 for x in p) and n < 3:
        raise ValueError("n must be >= 3 when all three proportions are positive")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    b1 = min(_round_half_up(p[0] * n), n)
    b2 = min(max(_round_half_up((p[0] + p[1]) * n), b1), n)
    labels = np.empty(n, dtype=np.int8)
    labels[perm[:b1]] = TRAIN
    labels[perm[b1:b2]] = VALIDATION
    labels[perm[b2:]] = TEST
    return SplitAssignment(labels, seed)


def standardize(table: CovariateTable, params=None) -> CovariateTable:
    """Transform each column to (x - mean) / sd.

    With ``params=None`` the per-column (mean, sd) are computed from the
    table itself (population sd, divide by n) and recorded on the result;
    pass a recorded tuple to apply a previous fit's transform to new rows.
    """
    X = table.rows
    if params is None:
        if table.n_rows < 1:
            raise ValueError("cannot fit standardization on an empty table")
        means = X.mean(axis=0)
        sds = X.std(axis=0)
        for j, s in enumerate(sds):
            if s <= 0:
                raise ValueError(
                    f"column {table.column_names[j]!r} has zero variance"
                )
        params = tuple((float(m), float(s)) for m, s in zip(means, sds))
    else:
        params = tuple((float(m), float(s)) for m, s in params)
        if len(params) != table.n_cols:
            raise ValueError("one (mean, sd) pair per column required")
    means = np.array([m for m, _ in params])
    sds = np.array([s for _, s in params])
    Z = (X - means) / sds
    return CovariateTable(Z, table.column_names, standardization=params)


def destandardize(table: CovariateTable) -> CovariateTable:
    """Invert the recorded affine transform, recovering original units."""
    if table.standardization is None:
        raise ValueError("table has no recorded standardization")
    means = np.array([m for m, _ in table.standardization])
    sds = np.array([s for _, s in table.standardization])
    return CovariateTable(table.rows * sds + means, table.column_names)
