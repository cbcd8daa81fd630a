"""Text and PGM renderings of label maps and U-matrices."""

from __future__ import annotations

import numpy as np

from .errors import DataError
from .evaluation import UMatrix
from .labeling import LabelMap

__all__ = ["render_label_map_text", "render_umatrix_text", "render_umatrix_pgm"]


def render_label_map_text(label_map: LabelMap) -> str:
    """One lattice row per line; a digit per labeled neuron, '.' otherwise.

    Only single-digit labels (0..9) are representable in this format.
    """
    for entry in label_map.entries:
        if entry is not None and entry > 9:
            raise DataError(f"label {entry} cannot be rendered as a single digit")
    cols = label_map.lattice.cols
    lines = []
    for start in range(0, label_map.lattice.neuron_count, cols):
        row = label_map.entries[start : start + cols]
        lines.append("".join("." if e is None else str(e) for e in row))
    return "\n".join(lines) + "\n"


def render_umatrix_text(umatrix: UMatrix) -> str:
    """One lattice row per line, fixed 6-decimal values, space-separated."""
    cols = umatrix.lattice.cols
    lines = []
    for start in range(0, umatrix.lattice.neuron_count, cols):
        row = umatrix.values[start : start + cols]
        lines.append(" ".join(f"{v:.6f}" for v in row))
    return "\n".join(lines) + "\n"


def render_umatrix_pgm(umatrix: UMatrix) -> bytes:
    """Binary PGM (P5, 8-bit): values min-max scaled to 0..255.

    All-equal values map to 0. Scaling rounds to nearest, ties to even.
    """
    spec = umatrix.lattice
    values = np.array(umatrix.values, dtype=np.float64)
    low, high = values.min(), values.max()
    if high > low:
        scaled = np.rint(255.0 * (values - low) / (high - low)).astype(np.uint8)
    else:
        scaled = np.zeros(spec.neuron_count, dtype=np.uint8)
    header = f"P5\n{spec.cols} {spec.rows}\n255\n".encode("ascii")
    return header + scaled.tobytes()
