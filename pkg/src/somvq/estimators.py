"""scikit-learn style estimators wrapping the map engine.

SelfOrganizingMap behaves like a clusterer/transformer (fit, predict
gives BMU indices, transform gives distances to every neuron, as KMeans
does with its centers); SomClassifier adds majority-vote neuron labeling
on top and predicts class labels. Both follow the sklearn parameter
contract (constructor stores parameters verbatim, get_params/set_params
work, fit returns self), so they compose with Pipeline and friends.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, ClusterMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import core, labeling
from .data import Dataset, apply_normalizer, fit_normalizer
from .errors import DataError, ShapeError
from .lattice import LatticeSpec

__all__ = ["SelfOrganizingMap", "SomClassifier"]


def _check_matrix(X) -> np.ndarray:
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-dimensional array, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise DataError("at least one sample is required")
    if not np.isfinite(arr).all():
        raise DataError("input contains non-finite values")
    return arr


def _check_labels(y, n_samples: int) -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 1 or arr.shape[0] != n_samples:
        raise ShapeError(
            f"expected {n_samples} labels in a 1-dimensional array, got shape {arr.shape}"
        )
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.asarray(arr, dtype=np.float64)
        if not np.isfinite(rounded).all() or not (rounded == np.rint(rounded)).all():
            raise DataError("labels must be integers")
        arr = rounded.astype(int)
    if (arr < 0).any():
        raise DataError("labels must be non-negative")
    return arr.astype(int)


class _SomParams:
    """Shared constructor/training plumbing for both estimators."""

    def __init__(self, rows, cols, epochs, lr0, sigma0, tau_lr, tau_sigma, init, seed, normalize):
        self.rows = rows
        self.cols = cols
        self.epochs = epochs
        self.lr0 = lr0
        self.sigma0 = sigma0
        self.tau_lr = tau_lr
        self.tau_sigma = tau_sigma
        self.init = init
        self.seed = seed
        self.normalize = normalize

    def _fit_map(self, X: np.ndarray):
        lattice = LatticeSpec(self.rows, self.cols)
        config = core.TrainConfig(
            epochs=self.epochs,
            lr0=self.lr0,
            sigma0=self.sigma0,
            tau_lr=self.tau_lr,
            tau_sigma=self.tau_sigma,
            seed=self.seed,
            init=self.init,
        )
        dataset = Dataset.from_arrays(X)
        params = None
        if self.normalize:
            params = fit_normalizer(dataset)
            dataset = apply_normalizer(params, dataset)
        model = core.train(dataset, lattice, config).with_normalization(params)
        return model, dataset

    def _require_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError(
                f"This {type(self).__name__} instance is not fitted yet; call fit first."
            )

    def _prepared(self, X) -> np.ndarray:
        """Validate X and apply the stored normalization."""
        self._require_fitted()
        X = _check_matrix(X)
        model = self.model_
        if X.shape[1] != model.feature_count:
            raise ShapeError(
                f"X has {X.shape[1]} features, the fitted map expects "
                f"{model.feature_count}"
            )
        if model.normalization is not None:
            dataset = Dataset.from_arrays(X)
            X = apply_normalizer(model.normalization, dataset).feature_matrix()
        return X


class SelfOrganizingMap(_SomParams, ClusterMixin, TransformerMixin, BaseEstimator):
    """Kohonen map as an unsupervised clusterer/vector quantizer.

    Parameters
    ----------
    rows, cols : int, default 10
        Lattice geometry; use rows=1 for a one-dimensional map.
    epochs : int, default 100
        Full passes over the data.
    lr0 : float, default 0.5
        Initial learning rate, in (0, 1].
    sigma0 : float or None, default None
        Initial neighborhood radius in grid units; None means
        max(rows, cols) / 2.
    tau_lr, tau_sigma : float or None, default None
        Exponential decay time constants in update steps; None means a
        quarter of the total update steps.
    init : {"uniform", "sample"}, default "uniform"
        Weight initialization scheme.
    seed : int, default 42
        Seed for the PCG64 generator driving all randomness.
    normalize : bool, default True
        Min-max scale features to [0, 1] at fit time and store the
        parameters for later transform/predict calls.

    Attributes
    ----------
    model_ : SomModel
        The trained map (lattice, weights, normalization).
    weights_ : ndarray of shape (rows * cols, n_features)
    labels_ : ndarray of shape (n_samples,)
        BMU index of each training sample.
    quantization_error_ : float
        Mean training-sample distance to its BMU.
    """

    def __init__(
        self,
        rows: int = 10,
        cols: int = 10,
        epochs: int = 100,
        lr0: float = 0.5,
        sigma0: float | None = None,
        tau_lr: float | None = None,
        tau_sigma: float | None = None,
        init: str = "uniform",
        seed: int = 42,
        normalize: bool = True,
    ):
        super().__init__(rows, cols, epochs, lr0, sigma0, tau_lr, tau_sigma, init, seed, normalize)

    def fit(self, X, y=None):
        X = _check_matrix(X)
        self.model_, prepared = self._fit_map(X)
        self.n_features_in_ = X.shape[1]
        self.labels_ = self._bmu_indices(prepared.feature_matrix())
        self.quantization_error_ = core.quantization_error(self.model_, prepared)
        return self

    @property
    def weights_(self) -> np.ndarray:
        self._require_fitted()
        return self.model_.weights

    def predict(self, X) -> np.ndarray:
        """BMU index for each row of X."""
        return self._bmu_indices(self._prepared(X))

    def transform(self, X) -> np.ndarray:
        """Euclidean distance from each row of X to every neuron weight."""
        X = self._prepared(X)
        diff = X[:, np.newaxis, :] - self.model_.weights[np.newaxis, :, :]
        return np.sqrt((diff * diff).sum(axis=2))

    def quantization_error(self, X) -> float:
        X = self._prepared(X)
        return core.quantization_error(self.model_, Dataset.from_arrays(X))

    def _bmu_indices(self, X: np.ndarray) -> np.ndarray:
        return np.array(
            [core.find_bmu(self.model_, row)[0] for row in X], dtype=int
        )


class SomClassifier(_SomParams, ClassifierMixin, BaseEstimator):
    """Classifier: an unsupervised map plus majority-vote neuron labels.

    fit trains the map on the features alone (labels never touch the
    weights), then lets every training sample vote for its BMU's label.
    predict returns the label of the nearest labeled neuron in weight
    space. Parameters are those of SelfOrganizingMap.

    Attributes
    ----------
    model_ : SomModel
    label_map_ : LabelMap
        Per-neuron majority-vote label (None where no sample landed).
    classes_ : ndarray
        Sorted unique training labels.
    """

    def __init__(
        self,
        rows: int = 10,
        cols: int = 10,
        epochs: int = 100,
        lr0: float = 0.5,
        sigma0: float | None = None,
        tau_lr: float | None = None,
        tau_sigma: float | None = None,
        init: str = "uniform",
        seed: int = 42,
        normalize: bool = True,
    ):
        super().__init__(rows, cols, epochs, lr0, sigma0, tau_lr, tau_sigma, init, seed, normalize)

    def fit(self, X, y):
        X = _check_matrix(X)
        y = _check_labels(y, X.shape[0])
        self.model_, prepared = self._fit_map(X)
        labeled = Dataset.from_arrays(prepared.feature_matrix(), labels=y)
        self.label_map_ = labeling.build_label_map(self.model_, labeled)
        self.classes_ = np.unique(y)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X) -> np.ndarray:
        X = self._prepared(X)
        dataset = Dataset.from_arrays(X)
        return np.array(
            labeling.predict_batch(self.model_, self.label_map_, dataset), dtype=int
        )
