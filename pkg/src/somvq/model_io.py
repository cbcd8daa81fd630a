"""Versioned JSON persistence for trained models.

The file layout (format_version 1) is a single JSON object with fixed key
order: format_version, lattice {rows, cols}, feature_count, feature_names,
weights (row-major nested arrays), normalization (per-feature [min, max]
pairs or null), label_map (per-neuron integer or null, or null when
absent), train_config (echo of the resolved training knobs, or null).
Numbers are written in shortest round-trip decimal form, so identical
models serialize to byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import SomModel
from .data import NormalizationParams
from .errors import DataError
from .labeling import LabelMap
from .lattice import LatticeSpec

__all__ = ["MODEL_FORMAT_VERSION", "LoadedModel", "model_to_dict", "write_model_file", "read_model_file"]

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LoadedModel:
    """Everything a model file carries."""

    model: SomModel
    feature_names: tuple[str, ...]
    label_map: LabelMap | None
    train_config: dict | None


def model_to_dict(
    model: SomModel,
    feature_names,
    label_map: LabelMap | None = None,
    train_config: dict | None = None,
) -> dict:
    feature_names = tuple(str(n) for n in feature_names)
    if len(feature_names) != model.feature_count:
        raise DataError(
            f"{len(feature_names)} feature names for {model.feature_count} features"
        )
    if label_map is not None and label_map.lattice != model.lattice:
        raise DataError("label map lattice does not match the model lattice")
    normalization = None
    if model.normalization is not None:
        normalization = [[lo, hi] for lo, hi in model.normalization.bounds]
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "lattice": {"rows": model.lattice.rows, "cols": model.lattice.cols},
        "feature_count": model.feature_count,
        "feature_names": list(feature_names),
        "weights": [[float(v) for v in row] for row in model.weights],
        "normalization": normalization,
        "label_map": None if label_map is None else list(label_map.entries),
        "train_config": train_config,
    }


def write_model_file(
    path,
    model: SomModel,
    feature_names,
    label_map: LabelMap | None = None,
    train_config: dict | None = None,
) -> None:
    payload = model_to_dict(model, feature_names, label_map, train_config)
    text = json.dumps(payload, indent=2) + "\n"
    Path(path).write_text(text, encoding="utf-8", newline="")


def read_model_file(path) -> LoadedModel:
    """Load and validate a model file; rejects format versions above 1."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise DataError("model file must hold a JSON object")

    version = payload.get("format_version")
    if not isinstance(version, int):
        raise DataError("model file lacks an integer format_version")
    if version > MODEL_FORMAT_VERSION:
        raise DataError(
            f"model format_version {version} is newer than supported "
            f"({MODEL_FORMAT_VERSION})"
        )
    if version != MODEL_FORMAT_VERSION:
        raise DataError(f"unknown model format_version {version}")

    try:
        lattice = LatticeSpec(
            int(payload["lattice"]["rows"]), int(payload["lattice"]["cols"])
        )
        feature_count = int(payload["feature_count"])
        feature_names = tuple(str(n) for n in payload["feature_names"])
        weights = np.array(payload["weights"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model file: {exc}") from exc

    if len(feature_names) != feature_count:
        raise DataError("feature_names length does not match feature_count")
    if weights.ndim != 2 or weights.shape != (lattice.neuron_count, feature_count):
        raise DataError(
            f"weights shape {weights.shape} inconsistent with "
            f"{lattice.rows}x{lattice.cols} lattice and {feature_count} features"
        )

    normalization = None
    raw_norm = payload.get("normalization")
    if raw_norm is not None:
        if len(raw_norm) != feature_count:
            raise DataError("normalization entry count does not match feature_count")
        normalization = NormalizationParams(tuple((p[0], p[1]) for p in raw_norm))

    label_map = None
    raw_map = payload.get("label_map")
    if raw_map is not None:
        if len(raw_map) != lattice.neuron_count:
            raise DataError("label_map length does not match the neuron count")
        label_map = LabelMap(
            lattice, tuple(None if e is None else int(e) for e in raw_map)
        )

    model = SomModel(lattice, feature_count, weights, normalization)
    train_config = payload.get("train_config")
    return LoadedModel(model, feature_names, label_map, train_config)
