import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import MinMaxScaler

from somvq import core
from somvq.data import Dataset, synth_generate, train_test_split
from somvq.errors import ConfigurationError, DataError, ShapeError
from somvq.estimators import SelfOrganizingMap, SomClassifier


@pytest.fixture(scope="module")
def blobs():
    rng = np.random.Generator(np.random.PCG64(51))
    a = rng.normal(loc=(0.0, 0.0), scale=0.1, size=(40, 2))
    b = rng.normal(loc=(1.0, 1.0), scale=0.1, size=(40, 2))
    X = np.vstack([a, b])
    y = np.array([0] * 40 + [1] * 40)
    return X, y


@pytest.fixture(scope="module")
def synth_arrays():
    full = synth_generate(200, seed=7)
    train, test = train_test_split(full, 0.8, seed=7)
    as_xy = lambda ds: (ds.feature_matrix(), np.array(ds.labels()))
    return as_xy(train), as_xy(test)


SMALL = dict(rows=3, cols=3, epochs=15, seed=42)


class TestSelfOrganizingMap:
    def test_fit_sets_attributes(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL).fit(X)
        assert som.model_.lattice.neuron_count == 9
        assert som.weights_.shape == (9, 2)
        assert som.n_features_in_ == 2
        assert som.labels_.shape == (80,)
        assert som.quantization_error_ > 0.0

    def test_labels_are_bmu_indices_of_training_data(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL).fit(X)
        assert np.array_equal(som.labels_, som.predict(X))

    def test_transform_shape_and_argmin_agree_with_predict(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL).fit(X)
        distances = som.transform(X)
        assert distances.shape == (80, 9)
        assert np.array_equal(distances.argmin(axis=1), som.predict(X))

    def test_transform_matches_direct_distance(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL, normalize=False).fit(X)
        distances = som.transform(X[:3])
        for i in range(3):
            for j in range(9):
                expected = np.linalg.norm(X[i] - som.weights_[j])
                assert distances[i, j] == pytest.approx(expected, rel=1e-12)

    def test_fit_predict(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL)
        assert np.array_equal(som.fit_predict(X), som.labels_)

    def test_deterministic_across_instances(self, blobs):
        X, _ = blobs
        a = SelfOrganizingMap(**SMALL).fit(X)
        b = SelfOrganizingMap(**SMALL).fit(X)
        assert np.array_equal(a.weights_, b.weights_)

    def test_seed_changes_result(self, blobs):
        X, _ = blobs
        a = SelfOrganizingMap(rows=3, cols=3, epochs=15, seed=1).fit(X)
        b = SelfOrganizingMap(rows=3, cols=3, epochs=15, seed=2).fit(X)
        assert not np.array_equal(a.weights_, b.weights_)

    def test_quantization_error_method_matches_core(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL, normalize=False).fit(X)
        expected = core.quantization_error(som.model_, Dataset.from_arrays(X))
        assert som.quantization_error(X) == expected

    def test_normalization_is_stored_and_reapplied(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL, normalize=True).fit(X)
        assert som.model_.normalization is not None
        # power-of-two scaling is exact, so the normalized data is bitwise equal
        scaled = X * 1024.0
        som_scaled = SelfOrganizingMap(**SMALL, normalize=True).fit(scaled)
        assert np.array_equal(som.predict(X), som_scaled.predict(scaled))

    def test_normalize_false_skips_scaling(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL, normalize=False).fit(X)
        assert som.model_.normalization is None

    def test_not_fitted_errors(self):
        som = SelfOrganizingMap()
        with pytest.raises(NotFittedError):
            som.predict(np.ones((1, 2)))
        with pytest.raises(NotFittedError):
            som.transform(np.ones((1, 2)))
        with pytest.raises(NotFittedError):
            som.weights_

    def test_feature_count_checked_at_predict(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL).fit(X)
        with pytest.raises(ShapeError):
            som.predict(np.ones((2, 5)))

    def test_input_validation(self):
        som = SelfOrganizingMap(**SMALL)
        with pytest.raises(ShapeError):
            som.fit(np.ones(4))
        with pytest.raises(DataError):
            som.fit(np.ones((0, 2)))
        with pytest.raises(DataError):
            som.fit(np.array([[np.nan, 1.0]]))

    def test_bad_hyperparameters_fail_at_fit(self, blobs):
        X, _ = blobs
        with pytest.raises(ConfigurationError):
            SelfOrganizingMap(rows=0).fit(X)
        with pytest.raises(ConfigurationError):
            SelfOrganizingMap(lr0=2.0).fit(X)

    def test_get_params_round_trip(self):
        som = SelfOrganizingMap(rows=4, cols=6, lr0=0.3, seed=9)
        params = som.get_params()
        assert params["rows"] == 4 and params["lr0"] == 0.3
        other = SelfOrganizingMap().set_params(**params)
        assert other.get_params() == params

    def test_clone_preserves_params(self, blobs):
        X, _ = blobs
        som = SelfOrganizingMap(**SMALL).fit(X)
        fresh = clone(som)
        assert fresh.get_params() == som.get_params()
        assert not hasattr(fresh, "model_")
        assert np.array_equal(fresh.fit(X).weights_, som.weights_)


class TestSomClassifier:
    def test_separable_blobs(self, blobs):
        X, y = blobs
        clf = SomClassifier(**SMALL).fit(X, y)
        assert clf.score(X, y) == 1.0
        assert np.array_equal(clf.classes_, [0, 1])

    def test_synth_holdout_accuracy(self, synth_arrays):
        (Xtr, ytr), (Xte, yte) = synth_arrays
        clf = SomClassifier(rows=10, cols=10, epochs=100, seed=42).fit(Xtr, ytr)
        assert clf.score(Xte, yte) >= 0.9

    def test_labels_never_touch_weights(self, blobs):
        X, y = blobs
        clf = SomClassifier(**SMALL).fit(X, y)
        som = SelfOrganizingMap(**SMALL).fit(X)
        assert np.array_equal(clf.model_.weights, som.weights_)
        flipped = SomClassifier(**SMALL).fit(X, 1 - y)
        assert np.array_equal(clf.model_.weights, flipped.model_.weights)

    def test_label_map_has_unlabeled_neurons_possible(self, blobs):
        X, y = blobs
        clf = SomClassifier(rows=9, cols=9, epochs=10, seed=3).fit(X, y)
        # 81 neurons, 80 samples: at least one neuron must go unlabeled
        assert clf.label_map_.labeled_count < 81

    def test_predict_values_come_from_training_labels(self, blobs):
        X, y = blobs
        clf = SomClassifier(**SMALL).fit(X, y)
        assert set(clf.predict(X)) <= set(y)

    def test_deterministic(self, blobs):
        X, y = blobs
        a = SomClassifier(**SMALL).fit(X, y).predict(X)
        b = SomClassifier(**SMALL).fit(X, y).predict(X)
        assert np.array_equal(a, b)

    def test_integral_float_labels_accepted(self, blobs):
        X, y = blobs
        clf = SomClassifier(**SMALL).fit(X, y.astype(float))
        assert np.array_equal(clf.classes_, [0, 1])

    def test_fractional_labels_rejected(self, blobs):
        X, _ = blobs
        with pytest.raises(DataError):
            SomClassifier(**SMALL).fit(X, np.full(80, 0.5))

    def test_negative_labels_rejected(self, blobs):
        X, _ = blobs
        with pytest.raises(DataError):
            SomClassifier(**SMALL).fit(X, np.full(80, -1))

    def test_label_length_mismatch(self, blobs):
        X, _ = blobs
        with pytest.raises(ShapeError):
            SomClassifier(**SMALL).fit(X, np.zeros(7))

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            SomClassifier().predict(np.ones((1, 2)))

    def test_composes_with_pipeline(self, blobs):
        X, y = blobs
        pipe = Pipeline(
            [
                ("scale", MinMaxScaler()),
                ("som", SomClassifier(**SMALL, normalize=False)),
            ]
        )
        pipe.fit(X, y)
        assert pipe.score(X, y) == 1.0

    def test_clone_refits_identically(self, blobs):
        X, y = blobs
        clf = SomClassifier(**SMALL).fit(X, y)
        assert np.array_equal(clone(clf).fit(X, y).predict(X), clf.predict(X))
