"""Classification metrics and map diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SomModel
from .data import Dataset
from .errors import DataError, ShapeError
from .labeling import LabelMap, predict_batch
from .lattice import LatticeSpec, coord_of, index_of, GridCoord

__all__ = ["EvalReport", "UMatrix", "evaluate", "u_matrix"]


@dataclass(frozen=True)
class EvalReport:
    """Accuracy plus a (true label, predicted label) -> count table."""

    total: int
    correct: int
    accuracy: float
    confusion: dict[tuple[int, int], int] = field(compare=False)

    def __post_init__(self):
        if self.total < 1:
            raise DataError("report requires at least one sample")
        if sum(self.confusion.values()) != self.total:
            raise DataError("confusion cells must sum to the total")
        diagonal = sum(c for (t, p), c in self.confusion.items() if t == p)
        if diagonal != self.correct:
            raise DataError("confusion diagonal must sum to the correct count")
        if self.accuracy != self.correct / self.total:
            raise DataError("accuracy must equal correct / total")

    @property
    def labels(self) -> tuple[int, ...]:
        seen = {t for t, _ in self.confusion} | {p for _, p in self.confusion}
        return tuple(sorted(seen))

    def matrix(self) -> np.ndarray:
        """Dense confusion matrix over self.labels (rows true, cols predicted)."""
        labels = self.labels
        pos = {lab: i for i, lab in enumerate(labels)}
        out = np.zeros((len(labels), len(labels)), dtype=int)
        for (t, p), count in self.confusion.items():
            out[pos[t], pos[p]] = count
        return out


@dataclass(frozen=True)
class UMatrix:
    """Per-neuron mean weight-space distance to its grid neighbors."""

    lattice: LatticeSpec
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if len(values) != self.lattice.neuron_count:
            raise ShapeError(
                f"u-matrix has {len(values)} values, lattice has "
                f"{self.lattice.neuron_count} neurons"
            )
        if not all(math.isfinite(v) and v >= 0.0 for v in values):
            raise DataError("u-matrix values must be finite and non-negative")
        object.__setattr__(self, "values", values)


def evaluate(model: SomModel, label_map: LabelMap, data: Dataset) -> EvalReport:
    """Score predictions on a fully labeled dataset."""
    if len(data) == 0:
        raise DataError("cannot evaluate on an empty dataset")
    if not data.is_fully_labeled:
        raise DataError("evaluation requires every record to be labeled")
    predictions = predict_batch(model, label_map, data)
    confusion: dict[tuple[int, int], int] = {}
    correct = 0
    for record, predicted in zip(data.records, predictions):
        key = (record.label, predicted)
        confusion[key] = confusion.get(key, 0) + 1
        if record.label == predicted:
            correct += 1
    total = len(data)
    return EvalReport(total, correct, correct / total, confusion)


def u_matrix(model: SomModel) -> UMatrix:
    """Mean weight distance from each neuron to its 4-connected neighbors.

    Edge neurons average over the neighbors that exist; a single-neuron
    lattice has no neighbors and gets 0.0.
    """
    spec = model.lattice
    values = []
    for j in range(spec.neuron_count):
        here = coord_of(spec, j)
        distances = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            row, col = here.row + dr, here.col + dc
            if 0 <= row < spec.rows and 0 <= col < spec.cols:
                k = index_of(spec, GridCoord(row, col))
                distances.append(
                    float(np.linalg.norm(model.weights[j] - model.weights[k]))
                )
        values.append(sum(distances) / len(distances) if distances else 0.0)
    return UMatrix(spec, tuple(values))
