"""Output-neuron grid geometry.

Neurons live on a rectangular rows x cols grid and are numbered row-major;
a one-dimensional map is simply rows == 1. The grid metric is Euclidean
over integer coordinates, which keeps the Gaussian neighborhood isotropic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "LatticeSpec",
    "GridCoord",
    "coord_of",
    "index_of",
    "grid_distance",
    "distances_from",
]


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry of the output layer: a rows x cols rectangular grid."""

    rows: int
    cols: int

    def __post_init__(self):
        if not (isinstance(self.rows, int) and isinstance(self.cols, int)):
            raise ConfigurationError("lattice rows and cols must be integers")
        if self.rows < 1 or self.cols < 1:
            raise ConfigurationError(
                f"lattice must have rows >= 1 and cols >= 1, "
                f"got rows={self.rows}, cols={self.cols}"
            )

    @property
    def neuron_count(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class GridCoord:
    """Position of a neuron on the grid."""

    row: int
    col: int


def coord_of(spec: LatticeSpec, index: int) -> GridCoord:
    """Map a row-major neuron index to its grid coordinate."""
    if not 0 <= index < spec.neuron_count:
        raise IndexError(
            f"neuron index {index} out of range for {spec.rows}x{spec.cols} lattice"
        )
    return GridCoord(index // spec.cols, index % spec.cols)


def index_of(spec: LatticeSpec, coord: GridCoord) -> int:
    """Inverse of coord_of: row-major index of a grid coordinate."""
    _check_coord(spec, coord)
    return coord.row * spec.cols + coord.col


def grid_distance(spec: LatticeSpec, a: GridCoord, b: GridCoord) -> float:
    """Euclidean distance between two grid coordinates."""
    _check_coord(spec, a)
    _check_coord(spec, b)
    return math.dist((a.row, a.col), (b.row, b.col))


def distances_from(spec: LatticeSpec, index: int) -> np.ndarray:
    """Grid distances from neuron `index` to every neuron, in index order."""
    if not 0 <= index < spec.neuron_count:
        raise IndexError(
            f"neuron index {index} out of range for {spec.rows}x{spec.cols} lattice"
        )
    coords = _coords(spec)
    delta = coords - coords[index]
    return np.sqrt((delta * delta).sum(axis=1))


def _check_coord(spec: LatticeSpec, coord: GridCoord) -> None:
    if not (0 <= coord.row < spec.rows and 0 <= coord.col < spec.cols):
        raise IndexError(
            f"coordinate ({coord.row}, {coord.col}) outside {spec.rows}x{spec.cols} lattice"
        )


@lru_cache(maxsize=64)
def _coords(spec: LatticeSpec) -> np.ndarray:
    # (neuron_count, 2) float array of (row, col), row-major order
    rows, cols = np.divmod(np.arange(spec.neuron_count), spec.cols)
    out = np.stack([rows, cols], axis=1).astype(np.float64)
    out.setflags(write=False)
    return out
