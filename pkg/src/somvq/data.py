"""Dataset representation, CSV I/O, normalization, splitting, and synthesis.

The CSV dialect is deliberately narrow: comma-separated, UTF-8, first row
is the header, decimal point ".", no quoting (fields never contain commas).
The optional label column is named "fracture_location" (matched
case-insensitively) and holds non-negative integers; a blank cell means
the record is unlabeled. Label semantics: 0 = fracture at the TMAZ of
copper, 1 = fracture at the TMAZ of aluminium.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from .errors import ConfigurationError, DataError, ParseError, ShapeError

__all__ = [
    "LABEL_COLUMN",
    "SYNTH_FEATURE_NAMES",
    "SYNTH_RANGES",
    "Record",
    "Dataset",
    "NormalizationParams",
    "parse_csv",
    "write_csv",
    "fit_normalizer",
    "apply_normalizer",
    "invert_normalizer",
    "train_test_split",
    "synth_generate",
]

LABEL_COLUMN = "fracture_location"

SYNTH_FEATURE_NAMES = (
    "shoulder_diameter_mm",
    "rotational_speed_rpm",
    "traverse_speed_mm_min",
)
SYNTH_RANGES = ((15.0, 25.0), (600.0, 1200.0), (50.0, 300.0))
SYNTH_LABEL_NOISE = 0.02


@dataclass(frozen=True)
class Record:
    """One sample: a feature vector plus an optional integer class label."""

    features: tuple[float, ...]
    label: int | None = None

    def __post_init__(self):
        feats = tuple(float(v) for v in self.features)
        if not all(math.isfinite(v) for v in feats):
            raise DataError("record features must all be finite")
        object.__setattr__(self, "features", feats)
        if self.label is not None:
            label = int(self.label)
            if label < 0:
                raise DataError(f"class label must be non-negative, got {label}")
            object.__setattr__(self, "label", label)


@dataclass(frozen=True)
class Dataset:
    """Named feature columns plus an ordered sequence of records."""

    feature_names: tuple[str, ...]
    records: tuple[Record, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.feature_names)
        if any(not n for n in names):
            raise DataError("feature names must be non-empty")
        if len(set(names)) != len(names):
            raise DataError("feature names must be unique")
        object.__setattr__(self, "feature_names", names)
        records = tuple(self.records)
        width = len(names)
        for i, rec in enumerate(records):
            if len(rec.features) != width:
                raise ShapeError(
                    f"record {i} has {len(rec.features)} features, expected {width}"
                )
        object.__setattr__(self, "records", records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i: int) -> Record:
        return self.records[i]

    @property
    def feature_count(self) -> int:
        return len(self.feature_names)

    @cached_property
    def _matrix(self) -> np.ndarray:
        out = np.array([r.features for r in self.records], dtype=np.float64)
        out = out.reshape(len(self.records), self.feature_count)
        out.setflags(write=False)
        return out

    def feature_matrix(self) -> np.ndarray:
        """Records as a read-only (n, feature_count) float64 array."""
        return self._matrix

    def labels(self) -> tuple[int | None, ...]:
        return tuple(r.label for r in self.records)

    @property
    def is_fully_labeled(self) -> bool:
        return len(self.records) > 0 and all(r.label is not None for r in self.records)

    @property
    def has_labels(self) -> bool:
        return any(r.label is not None for r in self.records)

    @classmethod
    def from_arrays(cls, features, labels=None, feature_names=None) -> "Dataset":
        """Build a Dataset from an (n, m) array and optional label sequence."""
        arr = np.asarray(features, dtype=np.float64)
        if arr.ndim != 2:
            raise ShapeError(f"features must be 2-dimensional, got shape {arr.shape}")
        if feature_names is None:
            feature_names = tuple(f"x{i}" for i in range(arr.shape[1]))
        if labels is None:
            labels = [None] * arr.shape[0]
        if len(labels) != arr.shape[0]:
            raise ShapeError("labels length must match the number of rows")
        records = tuple(
            Record(tuple(row), None if lab is None else int(lab))
            for row, lab in zip(arr, labels)
        )
        return cls(tuple(feature_names), records)


@dataclass(frozen=True)
class NormalizationParams:
    """Per-feature (min, max) pairs for min-max scaling to [0, 1]."""

    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        for i, (lo, hi) in enumerate(bounds):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise DataError(f"normalization bounds for feature {i} must be finite")
            if lo > hi:
                raise DataError(
                    f"normalization min {lo} exceeds max {hi} for feature {i}"
                )
        object.__setattr__(self, "bounds", bounds)

    @property
    def feature_count(self) -> int:
        return len(self.bounds)


def _format_value(v: float) -> str:
    # repr() is the shortest decimal string that round-trips the float
    return repr(float(v))


def parse_csv(source: str | TextIO | Iterable[str]) -> Dataset:
    """Parse CSV text (a string or text stream) into a Dataset.

    The first row must be a header. A column whose name equals
    "fracture_location" case-insensitively is the label column; every
    other column is parsed as a real-valued feature in header order.
    Raises ParseError (naming the 1-based line) on ragged rows,
    duplicate headers, or cells that fail to parse.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    rows = list(reader)
    if not rows:
        raise ParseError("missing header row", line=1)

    header = [h.strip() for h in rows[0]]
    if any(not h for h in header):
        raise ParseError("header contains an empty column name", line=1)
    lowered = [h.lower() for h in header]
    if len(set(lowered)) != len(lowered):
        raise ParseError("duplicate column name in header", line=1)

    label_idx = lowered.index(LABEL_COLUMN) if LABEL_COLUMN in lowered else None
    feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
    if not feature_names:
        raise ParseError("header has no feature columns", line=1)

    records = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(row)}", line=line
            )
        feats = []
        label: int | None = None
        for i, cell in enumerate(row):
            cell = cell.strip()
            if i == label_idx:
                if cell == "":
                    label = None
                    continue
                try:
                    label = int(cell)
                except ValueError:
                    raise ParseError(
                        f"label cell {cell!r} is not an integer", line=line
                    ) from None
                if label < 0:
                    raise ParseError(f"label {label} is negative", line=line)
            else:
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"feature cell {cell!r} in column {header[i]!r} is not numeric",
                        line=line,
                    ) from None
                if not math.isfinite(value):
                    raise ParseError(
                        f"feature cell {cell!r} in column {header[i]!r} is not finite",
                        line=line,
                    )
                feats.append(value)
        records.append(Record(tuple(feats), label))

    return Dataset(feature_names, tuple(records))


def write_csv(dataset: Dataset) -> str:
    """Render a Dataset as CSV text; inverse of parse_csv.

    The label column is emitted only when at least one record carries a
    label; unlabeled records then get an empty cell. Floats use their
    shortest round-trip decimal form, so parse_csv(write_csv(d)) == d.
    """
    with_labels = dataset.has_labels
    lines = []
    header = list(dataset.feature_names) + ([LABEL_COLUMN] if with_labels else [])
    lines.append(",".join(header))
    for rec in dataset.records:
        cells = [_format_value(v) for v in rec.features]
        if with_labels:
            cells.append("" if rec.label is None else str(rec.label))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def fit_normalizer(dataset: Dataset) -> NormalizationParams:
    """Per-feature min/max fitted on a non-empty dataset."""
    if len(dataset) == 0:
        raise DataError("cannot fit a normalizer on an empty dataset")
    matrix = dataset.feature_matrix()
    mins = matrix.min(axis=0)
    maxs = matrix.max(axis=0)
    return NormalizationParams(tuple(zip(mins, maxs)))


def apply_normalizer(params: NormalizationParams, dataset: Dataset) -> Dataset:
    """Map each feature v to (v - min) / (max - min), into [0, 1].

    A constant feature (min == max) maps to 0.0. Values outside the
    fitted bounds are allowed and land outside [0, 1].
    """
    scaled = _scale_matrix(params, dataset, forward=True)
    return _with_features(dataset, scaled)


def invert_normalizer(params: NormalizationParams, dataset: Dataset) -> Dataset:
    """Inverse of apply_normalizer for non-degenerate features."""
    restored = _scale_matrix(params, dataset, forward=False)
    return _with_features(dataset, restored)


def _scale_matrix(params: NormalizationParams, dataset: Dataset, forward: bool) -> np.ndarray:
    if dataset.feature_count != params.feature_count:
        raise ShapeError(
            f"normalizer covers {params.feature_count} features, "
            f"dataset has {dataset.feature_count}"
        )
    matrix = dataset.feature_matrix()
    lo = np.array([b[0] for b in params.bounds])
    hi = np.array([b[1] for b in params.bounds])
    span = hi - lo
    degenerate = span == 0.0
    safe_span = np.where(degenerate, 1.0, span)
    if forward:
        out = (matrix - lo) / safe_span
        return np.where(degenerate, 0.0, out)
    return np.where(degenerate, lo, matrix * safe_span + lo)


def _with_features(dataset: Dataset, matrix: np.ndarray) -> Dataset:
    records = tuple(
        Record(tuple(row), rec.label) for row, rec in zip(matrix, dataset.records)
    )
    return Dataset(dataset.feature_names, records)


def train_test_split(
    dataset: Dataset, train_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Seeded random split: first ceil(train_fraction * n) permuted records
    go to the training set, the rest to the test set."""
    if not 0.0 < train_fraction < 1.0:
        raise ConfigurationError(
            f"train_fraction must lie in (0, 1), got {train_fraction}"
        )
    n = len(dataset)
    if n < 2:
        raise DataError("splitting requires at least 2 records")
    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(n)
    cut = math.ceil(train_fraction * n)
    train = tuple(dataset.records[i] for i in order[:cut])
    test = tuple(dataset.records[i] for i in order[cut:])
    return (
        Dataset(dataset.feature_names, train),
        Dataset(dataset.feature_names, test),
    )


def synth_generate(n: int, seed: int) -> Dataset:
    """Generate a labeled synthetic friction-stir-weld process dataset.

    Features are drawn uniformly from fixed plausible process windows:
    shoulder_diameter_mm in [15, 25], rotational_speed_rpm in [600, 1200],
    traverse_speed_mm_min in [50, 300]. The label rule is fixed and
    documented: normalize each feature to [0, 1] by its window, take the
    mean of the three normalized values, and assign label 1 when that
    score exceeds 0.5 (the midpoint of its attainable range), else 0.
    Finally, 2% of labels are flipped using the same seeded PCG64 stream
    (features first, then the flip draws), giving a mostly separable
    two-class problem.
    """
    if n < 1:
        raise ConfigurationError(f"synthetic sample count must be >= 1, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    lo = np.array([r[0] for r in SYNTH_RANGES])
    hi = np.array([r[1] for r in SYNTH_RANGES])
    unit = rng.random((n, len(SYNTH_RANGES)))
    features = lo + (hi - lo) * unit
    score = unit.mean(axis=1)
    labels = (score > 0.5).astype(int)
    flip = rng.random(n) < SYNTH_LABEL_NOISE
    labels = np.where(flip, 1 - labels, labels)
    records = tuple(
        Record(tuple(row), int(lab)) for row, lab in zip(features, labels)
    )
    return Dataset(SYNTH_FEATURE_NAMES, records)
