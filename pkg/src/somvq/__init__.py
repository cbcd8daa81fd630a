"""Self-organizing map (Kohonen) vector quantization and classification.

A lattice of neurons is trained by competitive learning on tabular data,
labeled per neuron by majority vote, and used to classify new samples by
best-matching-unit lookup. The package exposes a functional layer
(lattice, core, labeling, data, evaluation), scikit-learn style
estimators, and the `somvq` command-line pipeline.
"""

from .core import (
    SIGMA_FLOOR,
    SomModel,
    TrainConfig,
    find_bmu,
    init_weights,
    learning_rate_at,
    neighborhood_value,
    quantization_error,
    sigma_at,
    train,
    update_weights,
)
from .data import (
    LABEL_COLUMN,
    Dataset,
    NormalizationParams,
    Record,
    apply_normalizer,
    fit_normalizer,
    invert_normalizer,
    parse_csv,
    synth_generate,
    train_test_split,
    write_csv,
)
from .errors import (
    ConfigurationError,
    DataError,
    ParseError,
    ShapeError,
    SomError,
    StateError,
)
from .estimators import SelfOrganizingMap, SomClassifier
from .evaluation import EvalReport, UMatrix, evaluate, u_matrix
from .labeling import LabelMap, build_label_map, predict_batch, predict_one
from .lattice import GridCoord, LatticeSpec, coord_of, grid_distance, index_of
from .model_io import LoadedModel, read_model_file, write_model_file

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # lattice
    "LatticeSpec", "GridCoord", "coord_of", "index_of", "grid_distance",
    # core
    "TrainConfig", "SomModel", "SIGMA_FLOOR",
    "init_weights", "find_bmu", "neighborhood_value",
    "learning_rate_at", "sigma_at", "update_weights", "train",
    "quantization_error",
    # labeling
    "LabelMap", "build_label_map", "predict_one", "predict_batch",
    # data
    "Record", "Dataset", "NormalizationParams", "LABEL_COLUMN",
    "parse_csv", "write_csv", "fit_normalizer", "apply_normalizer",
    "invert_normalizer", "train_test_split", "synth_generate",
    # evaluation
    "EvalReport", "UMatrix", "evaluate", "u_matrix",
    # estimators
    "SelfOrganizingMap", "SomClassifier",
    # persistence
    "LoadedModel", "read_model_file", "write_model_file",
    # errors
    "SomError", "ConfigurationError", "ShapeError", "DataError",
    "ParseError", "StateError",
]
