"""Out-of-fold committee predictions for a prepared dataset.

Five classifier families are trained with stratified k-fold cross
validation; each prediction column is stitched together from the k
held-out folds, so every case is predicted by a model that never saw
it. The resulting CSV (one column per family, a '# seed=S' comment on
the first line) is what the miner consumes as its prediction matrix.
"""

import csv
import io
import json
import os
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from sklearn.base import clone
from sklearn.model_selection import StratifiedKFold
from sklearn.naive_bayes import CategoricalNB, GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import OneHotEncoder, OrdinalEncoder, StandardScaler
from sklearn.svm import LinearSVC
from sklearn.tree import DecisionTreeClassifier
from sklearn.ensemble import RandomForestClassifier

from .registry import REGISTRY

FAMILIES = ("DT", "NB", "kNN", "RF", "SVM")


@dataclass
class ExperimentSpec:
    dataset_id: str
    families: tuple = FAMILIES
    folds: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.dataset_id not in REGISTRY:
            raise KeyError(f"unknown dataset id: {self.dataset_id!r}")
        unknown = [f for f in self.families if f not in FAMILIES]
        if unknown:
            raise ValueError(f"unknown classifier families: {unknown} "
                             f"(known: {', '.join(FAMILIES)})")


@dataclass
class _Design:
    """Feature matrices and metadata extracted from a prepared dataset."""
    onehot: np.ndarray            # numeric columns + one-hot nominals
    codes: np.ndarray | None      # ordinal codes, only when all-nominal
    code_cardinalities: np.ndarray | None
    y: np.ndarray                 # target label texts
    sentinel_columns: list = field(default_factory=list)  # indices in onehot


def load_prepared(dataset_dir):
    """Read a prepared data.csv + schema.json; returns (frame, roles)."""
    dataset_dir = Path(dataset_dir)
    data_path = dataset_dir / "data.csv"
    schema_path = dataset_dir / "schema.json"
    for path in (data_path, schema_path):
        if not path.exists():
            raise FileNotFoundError(
                f"{path} not found; run: harness prepare {dataset_dir.name}")
    schema = json.loads(schema_path.read_text())
    roles = {c["name"]: c["role"] for c in schema["columns"]}
    nominal = [c for c, r in roles.items() if r == "nominal"]
    frame = pd.read_csv(data_path, comment="#",
                        dtype={c: str for c in nominal})
    targets = [c for c, r in roles.items() if r == "target"]
    if len(targets) != 1:
        raise ValueError(f"{schema_path} must declare exactly one target")
    frame[targets[0]] = frame[targets[0]].astype(str)
    return frame, roles


def build_design(frame, roles, spec):
    numeric = [c for c, r in roles.items() if r == "numeric"]
    nominal = [c for c, r in roles.items() if r == "nominal"]
    target = next(c for c, r in roles.items() if r == "target")
    y = frame[target].to_numpy(dtype=object)

    blocks, sentinel_columns = [], []
    registered = REGISTRY.get(spec.dataset_id)
    sentinels = set(registered.sentinel_missing) if registered else set()
    if numeric:
        block = frame[numeric].to_numpy(dtype=float)
        sentinel_columns = [numeric.index(c) for c in numeric
                            if c in sentinels]
        blocks.append(block)
    if nominal:
        encoder = OneHotEncoder(sparse_output=False, dtype=float,
                                handle_unknown="ignore")
        blocks.append(encoder.fit_transform(frame[nominal]))
    onehot = np.concatenate(blocks, axis=1) if len(blocks) > 1 else blocks[0]

    codes = cardinalities = None
    if nominal and not numeric:
        ordinal = OrdinalEncoder(dtype=np.int64)
        codes = ordinal.fit_transform(frame[nominal])
        cardinalities = np.array([len(c) for c in ordinal.categories_])
    return _Design(onehot, codes, cardinalities, y, sentinel_columns)


def _make_estimator(family, design, seed):
    if family == "DT":
        return DecisionTreeClassifier(random_state=seed)
    if family == "NB":
        # match the naive Bayes variant to the attribute types: count
        # based on all-nominal data, Gaussian on anything with numerics
        if design.codes is not None:
            return CategoricalNB(min_categories=design.code_cardinalities)
        return GaussianNB()
    if family == "kNN":
        return make_pipeline(StandardScaler(),
                             KNeighborsClassifier(n_neighbors=3))
    if family == "RF":
        return RandomForestClassifier(random_state=seed)
    if family == "SVM":
        return make_pipeline(StandardScaler(), LinearSVC(random_state=seed))
    raise ValueError(f"unknown classifier family: {family!r}")


def _family_matrix(family, design):
    if family == "NB" and design.codes is not None:
        return design.codes
    return design.onehot


def _impute_sentinels(train, test, columns):
    """Replace -1 sentinels with the training-fold median, per column."""
    for j in columns:
        real = train[train[:, j] != -1.0, j]
        median = float(np.median(real)) if real.size else -1.0
        train[train[:, j] == -1.0, j] = median
        test[test[:, j] == -1.0, j] = median


def out_of_fold_predictions(frame, roles, spec):
    """Returns (list of family names, dict family -> predicted labels)."""
    design = build_design(frame, roles, spec)
    folds = StratifiedKFold(n_splits=spec.folds, shuffle=True,
                            random_state=spec.seed)
    split = list(folds.split(design.onehot, design.y))

    used, columns = [], {}
    for family in spec.families:
        try:
            base = _make_estimator(family, design, spec.seed)
        except ImportError as exc:  # family's backing toolkit missing
            warnings.warn(f"skipping classifier family {family}: {exc}")
            continue
        matrix = _family_matrix(family, design)
        predicted = np.empty(len(design.y), dtype=object)
        for train_idx, test_idx in split:
            train = matrix[train_idx].copy()
            test = matrix[test_idx].copy()
            if matrix is design.onehot and design.sentinel_columns:
                _impute_sentinels(train, test, design.sentinel_columns)
            model = clone(base)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                model.fit(train, design.y[train_idx])
                predicted[test_idx] = model.predict(test)
        used.append(family)
        columns[family] = predicted
    if len(used) < 2:
        raise RuntimeError(
            f"only {len(used)} classifier families available; the "
            "prediction matrix needs at least 2 columns")
    return used, columns


def write_predictions(path, families, columns, spec):
    """Write the prediction CSV atomically, seed recorded up front."""
    path = Path(path)
    buffer = io.StringIO()
    buffer.write(f"# seed={spec.seed} folds={spec.folds}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(families)
    for row in zip(*(columns[f] for f in families)):
        writer.writerow(row)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(buffer.getvalue())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def predict(dataset_id, data_root="data", seed=0, folds=10,
            families=FAMILIES):
    """Prepare-to-predictions entry point; returns the CSV path."""
    spec = ExperimentSpec(dataset_id, tuple(families), folds, seed)
    dataset_dir = Path(data_root) / dataset_id
    frame, roles = load_prepared(dataset_dir)
    used, columns = out_of_fold_predictions(frame, roles, spec)
    return write_predictions(dataset_dir / "predictions.csv",
                             used, columns, spec)
