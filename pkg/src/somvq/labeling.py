"""Majority-vote neuron labeling and best-matching-unit classification.

A trained map is unsupervised; to use it as a classifier, every labeled
training record votes for its best matching unit and each neuron takes
the majority label of its voters. Neurons that attract no voters stay
unlabeled. Prediction looks up the label of the input's BMU, falling back
to the nearest labeled neuron in weight space when the BMU is unlabeled.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .core import SomModel, find_bmu, _check_vector
from .data import Dataset
from .errors import DataError, ShapeError, SomError, StateError
from .lattice import LatticeSpec

__all__ = ["LabelMap", "build_label_map", "predict_one", "predict_batch"]


@dataclass(frozen=True)
class LabelMap:
    """Per-neuron class assignment; None marks an unlabeled neuron."""

    lattice: LatticeSpec
    entries: tuple[int | None, ...]

    def __post_init__(self):
        entries = tuple(
            None if e is None else int(e) for e in self.entries
        )
        if len(entries) != self.lattice.neuron_count:
            raise ShapeError(
                f"label map has {len(entries)} entries, lattice has "
                f"{self.lattice.neuron_count} neurons"
            )
        if any(e is not None and e < 0 for e in entries):
            raise DataError("labels must be non-negative")
        object.__setattr__(self, "entries", entries)

    @property
    def labeled_count(self) -> int:
        return sum(e is not None for e in self.entries)

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(sorted({e for e in self.entries if e is not None}))


def build_label_map(model: SomModel, data: Dataset) -> LabelMap:
    """Majority-vote a label map from a fully labeled dataset.

    Each record votes for its BMU; a neuron takes the most frequent label
    among its voters, ties breaking toward the smaller numeric label.
    Neurons with no voters are unlabeled. The result is independent of
    record order.
    """
    if len(data) == 0:
        raise DataError("cannot build a label map from an empty dataset")
    if not data.is_fully_labeled:
        raise DataError("building a label map requires every record to be labeled")
    if data.feature_count != model.feature_count:
        raise ShapeError(
            f"dataset has {data.feature_count} features, model expects "
            f"{model.feature_count}"
        )
    votes: list[Counter] = [Counter() for _ in range(model.lattice.neuron_count)]
    matrix = data.feature_matrix()
    for row, record in zip(matrix, data.records):
        winner, _ = find_bmu(model, row)
        votes[winner][record.label] += 1
    entries = []
    for tally in votes:
        if not tally:
            entries.append(None)
            continue
        top = max(tally.values())
        entries.append(min(label for label, count in tally.items() if count == top))
    return LabelMap(model.lattice, tuple(entries))


def predict_one(model: SomModel, label_map: LabelMap, x) -> int:
    """Class of the nearest labeled neuron to x in weight space.

    When the BMU is labeled this is simply its label; otherwise the
    fallback is the labeled neuron whose weight vector is closest to x
    (ties toward the smaller neuron index).
    """
    if label_map.lattice != model.lattice:
        raise ShapeError("label map lattice does not match the model lattice")
    if label_map.labeled_count == 0:
        raise StateError("every neuron is unlabeled; cannot predict")
    x = _check_vector(x, model.feature_count)
    diff = model.weights - x
    sq = np.einsum("ij,ij->i", diff, diff)
    labeled = np.array([e is not None for e in label_map.entries])
    sq = np.where(labeled, sq, np.inf)
    return label_map.entries[int(np.argmin(sq))]


def predict_batch(model: SomModel, label_map: LabelMap, data: Dataset) -> list[int]:
    """predict_one over every record, order-preserving."""
    if label_map.labeled_count == 0:
        raise StateError("every neuron is unlabeled; cannot predict")
    out = []
    for i, row in enumerate(data.feature_matrix()):
        try:
            out.append(predict_one(model, label_map, row))
        except SomError as exc:
            raise type(exc)(f"record {i}: {exc}") from exc
    return out
