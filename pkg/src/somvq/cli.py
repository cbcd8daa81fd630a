"""Command-line pipeline: synth / split / train / predict / evaluate / render.

Exit codes: 0 success, 1 usage or configuration error, 2 data or parse
error (including missing files), 3 state error (e.g. a model without a
label map asked to predict).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import TrainConfig, quantization_error, train
from .data import (
    LABEL_COLUMN,
    Dataset,
    apply_normalizer,
    fit_normalizer,
    parse_csv,
    synth_generate,
    train_test_split,
    write_csv,
    _format_value,
)
from .errors import ConfigurationError, DataError, ParseError, StateError
from .evaluation import evaluate, u_matrix
from .labeling import build_label_map, predict_batch
from .lattice import LatticeSpec
from .model_io import read_model_file, write_model_file
from .render import render_label_map_text, render_umatrix_pgm, render_umatrix_text

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_STATE = 3

PREDICTION_COLUMN = "predicted_fracture_location"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse's own failures through the package exit-code scheme
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="somvq", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("synth", help="generate a labeled synthetic process-parameter CSV")
    p.add_argument("--n", type=int, default=200, help="number of records (default 200)")
    p.add_argument("--seed", type=int, default=42, help="generator seed (default 42)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("split", help="seeded train/test split of a CSV")
    p.add_argument("--data", required=True, help="input CSV path")
    p.add_argument("--ratio", type=float, default=0.8, help="training fraction in (0,1) (default 0.8)")
    p.add_argument("--seed", type=int, default=42, help="shuffle seed (default 42)")
    p.add_argument("--train-out", required=True, help="training CSV path")
    p.add_argument("--test-out", required=True, help="test CSV path")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("train", help="train a map and write a model file")
    p.add_argument("--data", required=True, help="training CSV path")
    p.add_argument("--rows", type=int, default=10, help="lattice rows (default 10)")
    p.add_argument("--cols", type=int, default=10, help="lattice cols (default 10)")
    p.add_argument("--epochs", type=int, default=100, help="training epochs (default 100)")
    p.add_argument("--lr0", type=float, default=0.5, help="initial learning rate (default 0.5)")
    p.add_argument("--sigma0", type=float, default=None,
                   help="initial neighborhood radius (default max(rows,cols)/2)")
    p.add_argument("--tau-lr", type=float, default=None,
                   help="learning-rate decay constant (default total steps / 4)")
    p.add_argument("--tau-sigma", type=float, default=None,
                   help="radius decay constant (default total steps / 4)")
    p.add_argument("--init", choices=("uniform", "sample"), default="uniform",
                   help="weight init scheme (default uniform)")
    p.add_argument("--seed", type=int, default=42, help="training seed (default 42)")
    p.add_argument("--no-normalize", action="store_true",
                   help="skip min-max normalization of the training data")
    p.add_argument("--out", required=True, help="output model JSON path")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("predict", help="classify a CSV with a trained, labeled model")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--data", required=True, help="input CSV path")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("evaluate", help="print accuracy and confusion matrix on a labeled CSV")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--data", required=True, help="labeled CSV path")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("render", help="render the label map or U-matrix")
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--what", required=True, choices=("labelmap", "umatrix"))
    p.add_argument("--format", choices=("text", "pgm"), default="text")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(handler=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "handler", None) is None:
            raise UsageError("a subcommand is required (see --help)")
        args.handler(args)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except StateError as exc:
        print(f"state error: {exc}", file=sys.stderr)
        return EXIT_STATE
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def _read_dataset(path) -> Dataset:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")


def cmd_synth(args) -> None:
    dataset = synth_generate(args.n, args.seed)
    _write_text(args.out, write_csv(dataset))


def cmd_split(args) -> None:
    dataset = _read_dataset(args.data)
    train_set, test_set = train_test_split(dataset, args.ratio, args.seed)
    _write_text(args.train_out, write_csv(train_set))
    _write_text(args.test_out, write_csv(test_set))


def cmd_train(args) -> None:
    dataset = _read_dataset(args.data)
    if len(dataset) == 0:
        raise DataError("training data has no records")
    lattice = LatticeSpec(args.rows, args.cols)
    config = TrainConfig(
        epochs=args.epochs,
        lr0=args.lr0,
        sigma0=args.sigma0,
        tau_lr=args.tau_lr,
        tau_sigma=args.tau_sigma,
        seed=args.seed,
        init=args.init,
    ).resolved(lattice, len(dataset))

    params = None
    features = dataset
    if not args.no_normalize:
        params = fit_normalizer(dataset)
        features = apply_normalizer(params, dataset)

    # unsupervised: labels never reach the training loop
    model = train(features, lattice, config).with_normalization(params)

    label_map = None
    if features.has_labels:
        labeled = Dataset(
            features.feature_names,
            tuple(r for r in features.records if r.label is not None),
        )
        label_map = build_label_map(model, labeled)

    write_model_file(args.out, model, dataset.feature_names, label_map, config.to_dict())
    print(f"quantization error: {quantization_error(model, features):.6f}")


def _align_features(dataset: Dataset, feature_names: tuple[str, ...]) -> Dataset:
    """Reorder dataset columns to the model's feature order."""
    if set(dataset.feature_names) != set(feature_names):
        raise DataError(
            f"data columns {list(dataset.feature_names)} do not match the "
            f"model's features {list(feature_names)}"
        )
    if dataset.feature_names == feature_names:
        return dataset
    order = [dataset.feature_names.index(name) for name in feature_names]
    records = tuple(
        type(r)(tuple(r.features[i] for i in order), r.label) for r in dataset.records
    )
    return Dataset(feature_names, records)


def _normalized_for(loaded, dataset: Dataset) -> Dataset:
    aligned = _align_features(dataset, loaded.feature_names)
    if loaded.model.normalization is not None:
        aligned = apply_normalizer(loaded.model.normalization, aligned)
    return aligned


def cmd_predict(args) -> None:
    loaded = read_model_file(args.model)
    if loaded.label_map is None:
        raise StateError("model has no label map; train it on labeled data first")
    dataset = _read_dataset(args.data)
    if len(dataset) > 0:
        predictions = predict_batch(
            loaded.model, loaded.label_map, _normalized_for(loaded, dataset)
        )
    else:
        predictions = []

    with_labels = dataset.has_labels
    header = list(dataset.feature_names)
    if with_labels:
        header.append(LABEL_COLUMN)
    header.append(PREDICTION_COLUMN)
    lines = [",".join(header)]
    for record, predicted in zip(dataset.records, predictions):
        cells = [_format_value(v) for v in record.features]
        if with_labels:
            cells.append("" if record.label is None else str(record.label))
        cells.append(str(predicted))
        lines.append(",".join(cells))
    _write_text(args.out, "\n".join(lines) + "\n")


def cmd_evaluate(args) -> None:
    loaded = read_model_file(args.model)
    if loaded.label_map is None:
        raise StateError("model has no label map; train it on labeled data first")
    dataset = _read_dataset(args.data)
    if not dataset.is_fully_labeled:
        raise DataError("evaluation requires a non-empty, fully labeled dataset")
    report = evaluate(loaded.model, loaded.label_map, _normalized_for(loaded, dataset))

    print(f"accuracy: {report.accuracy:.4f}")
    labels = report.labels
    matrix = report.matrix()
    print("confusion matrix (rows = true, cols = predicted):")
    print("      " + "".join(f"{label:>6}" for label in labels))
    for i, label in enumerate(labels):
        print(f"{label:>6}" + "".join(f"{count:>6}" for count in matrix[i]))


def cmd_render(args) -> None:
    loaded = read_model_file(args.model)
    if args.what == "labelmap":
        if args.format != "text":
            raise UsageError("labelmap rendering supports only --format text")
        if loaded.label_map is None:
            raise StateError("model has no label map to render")
        _emit_text(args.out, render_label_map_text(loaded.label_map))
        return
    umatrix = u_matrix(loaded.model)
    if args.format == "text":
        _emit_text(args.out, render_umatrix_text(umatrix))
    else:
        _emit_bytes(args.out, render_umatrix_pgm(umatrix))


def _emit_text(out, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        _write_text(out, text)


def _emit_bytes(out, payload: bytes) -> None:
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(payload)


if __name__ == "__main__":
    sys.exit(main())
