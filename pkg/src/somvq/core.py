"""Kohonen training engine.

One training step runs the three classic processes on a single stimulus:
competition (best-matching-unit search by Euclidean distance), cooperation
(a Gaussian neighborhood on the lattice around the winner), and synaptic
adaptation (every weight vector moves toward the stimulus, scaled by the
learning rate and its neighborhood value). Learning rate and neighborhood
radius decay exponentially with the global update-step counter.

All randomness flows from NumPy's PCG64 bit generator seeded with
TrainConfig.seed; the draw order is fixed (initial weights first, then one
record permutation per epoch), so identical inputs give bit-identical
models.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, NormalizationParams
from .errors import ConfigurationError, DataError, ShapeError
from .lattice import LatticeSpec, distances_from

__all__ = [
    "SIGMA_FLOOR",
    "INIT_SCHEMES",
    "TrainConfig",
    "SomModel",
    "init_weights",
    "find_bmu",
    "neighborhood_value",
    "learning_rate_at",
    "sigma_at",
    "update_weights",
    "train",
    "quantization_error",
]

# Late-training radius floor (grid units): keeps the winner itself adapting
# after the exponential decay has effectively shut off the neighborhood.
SIGMA_FLOOR = 0.5

INIT_SCHEMES = ("uniform", "sample")


@dataclass(frozen=True)
class TrainConfig:
    """Training knobs.

    sigma0, tau_lr, and tau_sigma may be None, meaning "resolve from the
    lattice and dataset when training starts": sigma0 becomes
    max(rows, cols) / 2 and both time constants become
    (epochs * n_records) / 4. `resolved()` returns the concrete config;
    the schedule functions require one.

    init schemes: "uniform" draws every weight component independently
    from [0, 1); "sample" copies training records chosen uniformly at
    random with replacement.
    """

    epochs: int = 100
    lr0: float = 0.5
    sigma0: float | None = None
    tau_lr: float | None = None
    tau_sigma: float | None = None
    seed: int = 42
    init: str = "uniform"

    def __post_init__(self):
        if not isinstance(self.epochs, int) or self.epochs < 1:
            raise ConfigurationError(f"epochs must be a positive integer, got {self.epochs}")
        if not 0.0 < self.lr0 <= 1.0:
            raise ConfigurationError(f"lr0 must lie in (0, 1], got {self.lr0}")
        for name in ("sigma0", "tau_lr", "tau_sigma"):
            value = getattr(self, name)
            if value is not None and not value > 0.0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        if self.init not in INIT_SCHEMES:
            raise ConfigurationError(
                f"init must be one of {INIT_SCHEMES}, got {self.init!r}"
            )

    @property
    def is_resolved(self) -> bool:
        return None not in (self.sigma0, self.tau_lr, self.tau_sigma)

    def resolved(self, lattice: LatticeSpec, n_records: int) -> "TrainConfig":
        """Fill any None field from the lattice and dataset size."""
        if n_records < 1:
            raise ConfigurationError("resolving a config requires n_records >= 1")
        total_steps = self.epochs * n_records
        return dataclasses.replace(
            self,
            sigma0=self.sigma0 if self.sigma0 is not None else max(lattice.rows, lattice.cols) / 2.0,
            tau_lr=self.tau_lr if self.tau_lr is not None else total_steps / 4.0,
            tau_sigma=self.tau_sigma if self.tau_sigma is not None else total_steps / 4.0,
        )

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "lr0": self.lr0,
            "sigma0": self.sigma0,
            "tau_lr": self.tau_lr,
            "tau_sigma": self.tau_sigma,
            "seed": self.seed,
            "init": self.init,
        }


@dataclass(frozen=True)
class SomModel:
    """Trained map state: lattice geometry plus one weight vector per neuron.

    `weights` is a (neuron_count, feature_count) float64 array in neuron
    index order. The instance is frozen but the array's contents are
    mutated in place by update_weights during training; a returned trained
    model should be treated as immutable.
    """

    lattice: LatticeSpec
    feature_count: int
    weights: np.ndarray
    normalization: NormalizationParams | None = None

    def __post_init__(self):
        if self.feature_count < 1:
            raise ConfigurationError(
                f"feature_count must be >= 1, got {self.feature_count}"
            )
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        expected = (self.lattice.neuron_count, self.feature_count)
        if weights.shape != expected:
            raise ShapeError(f"weights shape {weights.shape} != expected {expected}")
        if not np.isfinite(weights).all():
            raise DataError("weights must be finite")
        object.__setattr__(self, "weights", weights)
        if (
            self.normalization is not None
            and self.normalization.feature_count != self.feature_count
        ):
            raise ShapeError(
                "normalization parameter count does not match feature_count"
            )

    def with_normalization(self, params: NormalizationParams | None) -> "SomModel":
        return dataclasses.replace(self, normalization=params)


def init_weights(
    lattice: LatticeSpec,
    feature_count: int,
    config: TrainConfig,
    data: Dataset | None = None,
) -> SomModel:
    """Initial weights, deterministic given config.seed.

    "uniform" ignores `data`; "sample" requires a non-empty dataset whose
    feature count matches.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    weights = _draw_initial_weights(rng, lattice, feature_count, config, data)
    return SomModel(lattice, feature_count, weights)


def _draw_initial_weights(rng, lattice, feature_count, config, data):
    if feature_count < 1:
        raise ConfigurationError(f"feature_count must be >= 1, got {feature_count}")
    if config.init == "uniform":
        return rng.random((lattice.neuron_count, feature_count))
    if data is None or len(data) == 0:
        raise ConfigurationError("sample-draw init requires a non-empty dataset")
    if data.feature_count != feature_count:
        raise ShapeError(
            f"dataset has {data.feature_count} features, expected {feature_count}"
        )
    picks = rng.integers(0, len(data), size=lattice.neuron_count)
    return data.feature_matrix()[picks].copy()


def find_bmu(model: SomModel, x) -> tuple[int, float]:
    """Best matching unit: index minimizing Euclidean distance to x.

    Ties break toward the smallest neuron index. Returns (index, distance).
    """
    x = _check_vector(x, model.feature_count)
    diff = model.weights - x
    sq = np.einsum("ij,ij->i", diff, diff)
    winner = int(np.argmin(sq))
    return winner, float(math.sqrt(sq[winner]))


def neighborhood_value(grid_dist: float, sigma_t: float) -> float:
    """Gaussian falloff exp(-d^2 / (2 sigma^2)); 1.0 at the winner."""
    if not sigma_t > 0.0:
        raise ConfigurationError(f"sigma_t must be positive, got {sigma_t}")
    return float(np.exp(-(grid_dist**2) / (2.0 * sigma_t**2)))


def learning_rate_at(t: int, config: TrainConfig) -> float:
    """eta(t) = lr0 * exp(-t / tau_lr) for the global step counter t."""
    if t < 0:
        raise ConfigurationError(f"step counter must be >= 0, got {t}")
    if config.tau_lr is None:
        raise ConfigurationError("learning_rate_at requires a resolved config")
    return config.lr0 * math.exp(-t / config.tau_lr)


def sigma_at(t: int, config: TrainConfig) -> float:
    """sigma(t) = sigma0 * exp(-t / tau_sigma), floored at 0.5 grid units."""
    if t < 0:
        raise ConfigurationError(f"step counter must be >= 0, got {t}")
    if config.sigma0 is None or config.tau_sigma is None:
        raise ConfigurationError("sigma_at requires a resolved config")
    return max(SIGMA_FLOOR, config.sigma0 * math.exp(-t / config.tau_sigma))


def update_weights(
    model: SomModel, x, bmu: int, eta_t: float, sigma_t: float
) -> None:
    """One synaptic-adaptation step, in place.

    Every neuron j moves toward the stimulus:
    w_j += eta_t * h(grid_distance(j, bmu), sigma_t) * (x - w_j).
    At the winner h is exactly 1, so its distance to x shrinks by the
    factor (1 - eta_t).
    """
    if not 0.0 < eta_t <= 1.0:
        raise ConfigurationError(f"eta_t must lie in (0, 1], got {eta_t}")
    if not sigma_t > 0.0:
        raise ConfigurationError(f"sigma_t must be positive, got {sigma_t}")
    x = _check_vector(x, model.feature_count)
    grid_d = distances_from(model.lattice, bmu)
    h = np.exp(-(grid_d**2) / (2.0 * sigma_t**2))
    weights = model.weights
    weights += eta_t * h[:, np.newaxis] * (x - weights)


def train(data: Dataset, lattice: LatticeSpec, config: TrainConfig) -> SomModel:
    """Run the full competitive-learning loop and return the trained map.

    Each epoch visits every record once in a fresh seeded permutation.
    Per record: BMU search, schedule evaluation at the global step
    counter, then the neighborhood-weighted update. The caller is
    responsible for normalizing `data` first (the CLI does).
    """
    if len(data) == 0:
        raise DataError("cannot train on an empty dataset")
    matrix = data.feature_matrix()
    if not np.isfinite(matrix).all():
        raise DataError("training data must be finite")
    cfg = config.resolved(lattice, len(data))
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    weights = _draw_initial_weights(rng, lattice, data.feature_count, cfg, data)
    model = SomModel(lattice, data.feature_count, weights)

    step = 0
    for _ in range(cfg.epochs):
        for i in rng.permutation(len(data)):
            x = matrix[i]
            bmu, _ = find_bmu(model, x)
            eta = learning_rate_at(step, cfg)
            sigma = sigma_at(step, cfg)
            update_weights(model, x, bmu, eta, sigma)
            step += 1
    return model


def quantization_error(model: SomModel, data: Dataset) -> float:
    """Mean distance from each record to its best matching unit."""
    if len(data) == 0:
        raise DataError("quantization error of an empty dataset is undefined")
    matrix = data.feature_matrix()
    if matrix.shape[1] != model.feature_count:
        raise ShapeError(
            f"dataset has {matrix.shape[1]} features, model expects {model.feature_count}"
        )
    diff = matrix[:, np.newaxis, :] - model.weights[np.newaxis, :, :]
    sq = (diff * diff).sum(axis=2)
    return float(np.sqrt(sq.min(axis=1)).mean())


def _check_vector(x, feature_count: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (feature_count,):
        raise ShapeError(
            f"expected a feature vector of length {feature_count}, got shape {arr.shape}"
        )
    if not np.isfinite(arr).all():
        raise DataError("feature vector must be finite")
    return arr
