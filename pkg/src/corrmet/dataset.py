"""Tabular defect-style datasets: CSV loading, validation, summaries, and a
deterministic synthetic generator.

A :class:`Dataset` is an immutable bundle of named numeric metric columns
plus a binary label (1 = defective, 0 = clean).  Column order is preserved
exactly as loaded or constructed, because downstream analyses treat the
ordering of metrics as an experimental variable.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError
from .seeding import rng_for

DEFAULT_POSITIVE_LABELS = frozenset({"1", "true", "TRUE", "yes", "buggy"})


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MetricColumn:
    """One named column of finite float values."""

    name: str
    values: np.ndarray

    def __post_init__(self):
        if not self.name:
            raise DataError("metric name must be non-empty")
        object.__setattr__(self, "values", _frozen_array(self.values, np.float64))
        if self.values.ndim != 1:
            raise DataError(f"metric {self.name!r}: values must be one-dimensional")
        if not np.all(np.isfinite(self.values)):
            raise DataError(f"metric {self.name!r}: values must be finite")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable dataset of metric columns and a binary defect label.

    Invariants enforced at construction: all columns share the row count,
    the label contains both classes, and metric names are unique.
    """

    name: str
    metrics: tuple[MetricColumn, ...]
    label: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "label", _frozen_array(self.label, np.int8))
        if not self.metrics:
            raise DataError("dataset must have at least one metric column")
        if self.label.ndim != 1:
            raise DataError("label must be one-dimensional")
        if not np.all((self.label == 0) | (self.label == 1)):
            raise DataError("label values must be 0 or 1")
        if not (np.any(self.label == 1) and np.any(self.label == 0)):
            raise DataError("single-class label: need at least one defective and one clean row")
        n = len(self.label)
        names = [m.name for m in self.metrics]
        if len(set(names)) != len(names):
            dupes = sorted({x for x in names if names.count(x) > 1})
            raise DataError(f"duplicate metric names: {', '.join(dupes)}")
        for m in self.metrics:
            if len(m) != n:
                raise DataError(f"metric {m.name!r} has {len(m)} rows, label has {n}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.metric_names == other.metric_names
            and np.array_equal(self.label, other.label)
            and all(np.array_equal(a.values, b.values) for a, b in zip(self.metrics, other.metrics))
        )

    @property
    def n_rows(self) -> int:
        return len(self.label)

    @property
    def n_metrics(self) -> int:
        return len(self.metrics)

    @property
    def metric_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.metrics)

    def column(self, name: str) -> np.ndarray:
        for m in self.metrics:
            if m.name == name:
                return m.values
        raise DataError(f"unknown metric {name!r}")

    def matrix(self, names: Sequence[str] | None = None) -> np.ndarray:
        """Row-major matrix of the requested columns (default: all, in order)."""
        names = self.metric_names if names is None else tuple(names)
        return np.column_stack([self.column(n) for n in names])

    def select(self, names: Sequence[str], name: str | None = None) -> "Dataset":
        """New dataset holding the given columns, in the order given."""
        cols = tuple(MetricColumn(n, self.column(n)) for n in names)
        return Dataset(name or self.name, cols, self.label)

    def take_rows(self, indices: np.ndarray, name: str | None = None) -> "Dataset":
        """New dataset with rows selected (possibly repeated) by index."""
        idx = np.asarray(indices)
        cols = tuple(MetricColumn(m.name, m.values[idx]) for m in self.metrics)
        return Dataset(name or self.name, cols, self.label[idx])


def columns_view(rows: Dataset | Mapping[str, np.ndarray], names: Sequence[str]) -> np.ndarray:
    """Matrix of the named columns from a Dataset or a name->array mapping.

    Raises DataError naming any missing metric.
    """
    if isinstance(rows, Dataset):
        missing = [n for n in names if n not in rows.metric_names]
        if missing:
            raise DataError(f"missing metrics: {', '.join(missing)}")
        return rows.matrix(names)
    missing = [n for n in names if n not in rows]
    if missing:
        raise DataError(f"missing metrics: {', '.join(missing)}")
    return np.column_stack([np.asarray(rows[n], dtype=np.float64) for n in names])


@dataclass(frozen=True)
class DatasetSummary:
    """Row/metric/defect counts plus events-per-variable (EPV)."""

    n_modules: int
    n_metrics: int
    n_defective: int
    defect_ratio: float
    epv: float


def summarize(d: Dataset) -> DatasetSummary:
    """Counts and EPV (= defective modules / number of metrics)."""
    n_def = int(np.sum(d.label == 1))
    return DatasetSummary(
        n_modules=d.n_rows,
        n_metrics=d.n_metrics,
        n_defective=n_def,
        defect_ratio=n_def / d.n_rows,
        epv=n_def / d.n_metrics,
    )


def load_csv(
    path: str | Path,
    label_column: str,
    positive_labels: frozenset[str] | set[str] = DEFAULT_POSITIVE_LABELS,
    name: str | None = None,
) -> Dataset:
    """Load a UTF-8, comma-separated file with a header row.

    All columns except ``label_column`` must be numeric and finite; missing
    cells are rejected.  The label becomes 1 iff its (stripped) text is in
    ``positive_labels``.  Column order follows the file.

    Raises:
        DataError: missing label column, non-numeric or missing metric cell
            (reported with 1-based data row and column name), duplicate
            metric names, or a single-class label.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise DataError(f"{path}: label column {label_column!r} not found in header")
        label_idx = header.index(label_column)
        metric_names = [h for i, h in enumerate(header) if i != label_idx]
        if len(set(metric_names)) != len(metric_names):
            dupes = sorted({x for x in metric_names if metric_names.count(x) > 1})
            raise DataError(f"{path}: duplicate metric names: {', '.join(dupes)}")

        values: list[list[float]] = [[] for _ in metric_names]
        label: list[int] = []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise DataError(f"{path}: row {row_no} has {len(row)} cells, expected {len(header)}")
            label.append(1 if row[label_idx].strip() in positive_labels else 0)
            col = 0
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric value {cell!r} at row {row_no}, column {metric_names[col]!r}"
                    ) from None
                if not np.isfinite(v):
                    raise DataError(
                        f"{path}: non-finite value at row {row_no}, column {metric_names[col]!r}"
                    )
                values[col].append(v)
                col += 1

    if not label:
        raise DataError(f"{path}: no data rows")
    columns = tuple(MetricColumn(n, v) for n, v in zip(metric_names, values))
    return Dataset(name or path.stem, columns, np.array(label, dtype=np.int8))


def write_csv(d: Dataset, path: str | Path, label_column: str = "bug") -> None:
    """Write the dataset back out; floats use shortest round-trip rendering."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL)
        writer.writerow(list(d.metric_names) + [label_column])
        cols = [m.values for m in d.metrics]
        for i in range(d.n_rows):
            writer.writerow([repr(float(c[i])) for c in cols] + [int(d.label[i])])


# ---------------------------------------------------------------------------
# Synthetic generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClusterSpec:
    """One latent factor shared by ``size`` metrics.

    Each member is ``factor + noise_scale * eps``; small ``noise_scale``
    therefore means high within-cluster rank correlation.  ``coef`` is the
    factor's weight in the logistic label model.
    """

    size: int
    noise_scale: float = 0.1
    coef: float = 1.0
    prefix: str | None = None


@dataclass(frozen=True)
class ComboSpec:
    """A metric defined as a weighted sum of other generated metrics plus noise.

    Useful for building multi-collinear columns whose pairwise correlations
    stay moderate.
    """

    name: str
    terms: tuple[tuple[str, float], ...]
    noise_scale: float = 0.0


@dataclass(frozen=True)
class SyntheticConfig:
    n_rows: int
    clusters: tuple[ClusterSpec, ...]
    n_noise_metrics: int = 0
    intercept: float = 0.0
    combos: tuple[ComboSpec, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clusters", tuple(self.clusters))
        object.__setattr__(self, "combos", tuple(self.combos))
        if self.n_rows < 10:
            raise DataError(f"n_rows must be >= 10, got {self.n_rows}")
        for c in self.clusters:
            if c.size < 1:
                raise DataError("cluster size must be >= 1")
            if c.noise_scale < 0:
                raise DataError("cluster noise_scale must be >= 0")
        if self.n_noise_metrics < 0:
            raise DataError("n_noise_metrics must be >= 0")
        total = sum(c.size for c in self.clusters) + self.n_noise_metrics + len(self.combos)
        if total < 1:
            raise DataError("config generates no metric columns")


@dataclass(frozen=True)
class SynthesisReport:
    """Achieved within-cluster correlation, reported next to the dataset."""

    cluster_members: tuple[tuple[str, ...], ...]
    min_within_cluster_abs_rho: tuple[float, ...]
    n_defective: int


def synthesize(config: SyntheticConfig, seed: int) -> Dataset:
    """Deterministic synthetic dataset for a (config, seed) pair."""
    return synthesize_with_report(config, seed)[0]


def synthesize_with_report(config: SyntheticConfig, seed: int) -> tuple[Dataset, SynthesisReport]:
    """Generate the dataset and report the realized within-cluster |rho|.

    Labels are Bernoulli(sigmoid(intercept + sum coef_c * factor_c)); combo
    and noise metrics never enter the label model.  A draw that comes out
    single-class is retried with a sub-seed so the Dataset invariant holds.
    """
    # local import: rank_stats depends on nothing here, but keep module load light
    from .rank_stats import spearman

    rng = rng_for(seed, 0)
    n = config.n_rows
    names: list[str] = []
    cols: list[np.ndarray] = []
    factors: list[np.ndarray] = []
    cluster_members: list[tuple[str, ...]] = []

    for ci, cl in enumerate(config.clusters):
        factor = rng.standard_normal(n)
        factors.append(factor * cl.coef)
        prefix = cl.prefix or f"c{ci}"
        members = []
        for j in range(cl.size):
            col = factor + cl.noise_scale * rng.standard_normal(n)
            member = f"{prefix}_m{j}"
            members.append(member)
            names.append(member)
            cols.append(col)
        cluster_members.append(tuple(members))

    for j in range(config.n_noise_metrics):
        names.append(f"noise{j}")
        cols.append(rng.standard_normal(n))

    by_name = dict(zip(names, cols))
    for combo in config.combos:
        acc = np.zeros(n)
        for src, weight in combo.terms:
            if src not in by_name:
                raise DataError(f"combo {combo.name!r} references unknown metric {src!r}")
            acc = acc + weight * by_name[src]
        if combo.noise_scale:
            acc = acc + combo.noise_scale * rng.standard_normal(n)
        names.append(combo.name)
        cols.append(acc)
        by_name[combo.name] = acc

    eta = config.intercept + (np.sum(factors, axis=0) if factors else np.zeros(n))
    prob = 1.0 / (1.0 + np.exp(-eta))
    label = (rng.random(n) < prob).astype(np.int8)
    retry = 1
    while label.sum() == 0 or label.sum() == n:
        label = (rng_for(seed, 0, retry).random(n) < prob).astype(np.int8)
        retry += 1
        if retry > 50:
            raise DataError("synthetic label degenerate; adjust intercept or coefficients")

    dataset = Dataset(
        f"synthetic-{seed}",
        tuple(MetricColumn(nm, c) for nm, c in zip(names, cols)),
        label,
    )
    min_rho = []
    for members in cluster_members:
        if len(members) < 2:
            min_rho.append(1.0)
            continue
        worst = 1.0
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                worst = min(worst, abs(spearman(dataset.column(members[i]), dataset.column(members[j]))))
        min_rho.append(worst)
    report = SynthesisReport(
        cluster_members=tuple(cluster_members),
        min_within_cluster_abs_rho=tuple(min_rho),
        n_defective=int(label.sum()),
    )
    return dataset, report
