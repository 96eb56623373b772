"""Columnar dataset and prediction matrix loading.

Data arrives as CSV (RFC 4180, header row, optional leading '#' comment
lines) plus a JSON schema assigning each column a role: "nominal",
"numeric", "target" or "ignore". Nominal values and class labels are
dictionary encoded in order of first occurrence, so equal inputs always
produce equal code assignments. Values are loaded as-is: there is no
imputation here, producers encode missing values explicitly (for example
with a -1 sentinel) and such values take part in conditions like any
other.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DimensionError, LabelError, LoadError, SchemaError

ROLES = ("nominal", "numeric", "target", "ignore")

# dtype for dictionary codes and ground truth
CODE_DTYPE = np.int32


@dataclass(frozen=True)
class LabelDict:
    """Bidirectional class label dictionary. Code i maps to labels[i]."""

    labels: tuple[str, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {text: code for code, text in enumerate(self.labels)}
        if len(index) != len(self.labels):
            raise SchemaError("label dictionary contains duplicate labels")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, text: str) -> bool:
        return text in self._index

    def code(self, text: str) -> int:
        return self._index[text]

    def text(self, code: int) -> str:
        return self.labels[code]

    def extended(self, texts: Iterable[str]) -> "LabelDict":
        """New dictionary with unseen labels appended in the given order."""
        labels = list(self.labels)
        index = set(labels)
        for text in texts:
            if text not in index:
                labels.append(text)
                index.add(text)
        return LabelDict(tuple(labels))


@dataclass(frozen=True)
class AttributeColumn:
    """One descriptive attribute, dictionary encoded when nominal.

    kind "nominal": values are CODE_DTYPE codes into `labels`.
    kind "numeric": values are float64, labels is None.
    """

    name: str
    kind: str
    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        self.values.setflags(write=False)
        if self.kind == "nominal":
            assert self.labels is not None
        elif self.kind != "numeric":
            raise SchemaError(f"unknown column kind {self.kind!r}")

    @property
    def n_values(self) -> int:
        assert self.labels is not None
        return len(self.labels)


@dataclass(frozen=True)
class Dataset:
    """Immutable columnar dataset with optional ground truth.

    `classes` is the shared class label dictionary. When ground truth is
    present it is fixed by the target column and has at least two
    entries; otherwise it starts empty and the prediction loader extends
    it.
    """

    columns: tuple[AttributeColumn, ...]
    truth: np.ndarray | None
    classes: LabelDict
    target_name: str | None = None

    def __post_init__(self):
        if self.truth is not None:
            self.truth.setflags(write=False)

    @property
    def m(self) -> int:
        if self.columns:
            return len(self.columns[0].values)
        assert self.truth is not None
        return len(self.truth)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> AttributeColumn:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(name)


@dataclass(frozen=True)
class PredictionMatrix:
    """m x n matrix of predicted class codes, one column per classifier."""

    entries: np.ndarray
    names: tuple[str, ...]
    classes: LabelDict

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]


def _open_text(source) -> tuple[IO[str], bool]:
    # returns (file object, whether we own it)
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", newline="", encoding="utf-8"), True
    return source, False


def _read_csv(source, empty_msg: str) -> tuple[list[str], list[list[str]]]:
    """Read header and body rows, skipping leading '#' comment lines."""
    fh, owned = _open_text(source)
    try:
        rows = []
        for row in csv.reader(fh):
            if not rows and row and row[0].startswith("#"):
                continue
            rows.append(row)
    finally:
        if owned:
            fh.close()
    rows = [r for r in rows if r]  # drop blank lines
    if not rows:
        raise LoadError(empty_msg)
    return rows[0], rows[1:]


def _load_schema(schema) -> list[tuple[str, str]]:
    """Normalize a schema document to an ordered (name, role) list."""
    if isinstance(schema, (str, os.PathLike)):
        with open(schema, "r", encoding="utf-8") as fh:
            schema = json.load(fh)
    if not isinstance(schema, dict) or "columns" not in schema:
        raise SchemaError("schema must be an object with a 'columns' list")
    entries = []
    seen = set()
    for item in schema["columns"]:
        try:
            name, role = item["name"], item["role"]
        except (TypeError, KeyError):
            raise SchemaError("schema column entries need 'name' and 'role'")
        if role not in ROLES:
            raise SchemaError(f"unknown role {role!r} for column {name!r}")
        if name in seen:
            raise SchemaError(f"duplicate column {name!r} in schema")
        seen.add(name)
        entries.append((name, role))
    targets = [n for n, r in entries if r == "target"]
    if len(targets) > 1:
        raise SchemaError(f"schema declares {len(targets)} target columns")
    return entries


def _encode_nominal(cells: list[str], prior: tuple[str, ...] = ()) -> tuple[np.ndarray, tuple[str, ...]]:
    # first-occurrence dictionary coding, optionally seeded with prior labels
    labels = list(prior)
    index = {text: code for code, text in enumerate(labels)}
    codes = np.empty(len(cells), dtype=CODE_DTYPE)
    for i, text in enumerate(cells):
        code = index.get(text)
        if code is None:
            code = len(labels)
            labels.append(text)
            index[text] = code
        codes[i] = code
    return codes, tuple(labels)


def load_dataset(source, schema) -> Dataset:
    """Load a CSV dataset against a schema document.

    `source` is a path or an open text stream. `schema` is a parsed
    schema object or a path to a JSON file. Columns appear in the
    returned dataset in schema order regardless of their CSV order.
    """
    entries = _load_schema(schema)
    header, body = _read_csv(source, "dataset has zero cases")
    if len(set(header)) != len(header):
        dupes = sorted({n for n in header if header.count(n) > 1})
        raise SchemaError(f"duplicate column names in data header: {dupes}")
    if not body:
        raise LoadError("dataset has zero cases")

    position = {name: i for i, name in enumerate(header)}
    schema_names = {name for name, _ in entries}
    for name, _ in entries:
        if name not in position:
            raise SchemaError(f"schema column {name!r} not found in data")
    for name in header:
        if name not in schema_names:
            raise SchemaError(f"data column {name!r} has no role in the schema")

    for i, row in enumerate(body):
        if len(row) != len(header):
            raise LoadError(
                f"data row {i + 1} has {len(row)} cells, header has {len(header)}"
            )

    columns = []
    truth = None
    classes = LabelDict()
    target_name = None
    for name, role in entries:
        if role == "ignore":
            continue
        cells = [row[position[name]] for row in body]
        if role == "numeric":
            values = np.empty(len(cells), dtype=np.float64)
            for i, cell in enumerate(cells):
                try:
                    values[i] = float(cell)
                except ValueError:
                    raise LoadError(
                        f"cannot parse {cell!r} as a number"
                        f" at data row {i + 1}, column {name!r}"
                    )
            columns.append(AttributeColumn(name, "numeric", values))
        elif role == "nominal":
            codes, labels = _encode_nominal(cells)
            columns.append(AttributeColumn(name, "nominal", codes, labels))
        else:  # target
            codes, labels = _encode_nominal(cells)
            if len(labels) < 2:
                raise LoadError("ground truth uses fewer than two classes")
            truth = codes
            classes = LabelDict(labels)
            target_name = name

    if not columns and truth is None:
        raise SchemaError("schema keeps no columns")
    return Dataset(tuple(columns), truth, classes, target_name)


def load_predictions(source, ds: Dataset) -> PredictionMatrix:
    """Load a prediction CSV for `ds`.

    The matrix must be full: one row per dataset case and a label in
    every cell. When the dataset has ground truth, every label must
    already be in its class dictionary; without ground truth the
    dictionary is grown from the predictions in first-occurrence order.
    """
    header, body = _read_csv(source, "predictions file has no rows")
    if len(header) < 2:
        raise DimensionError(
            f"prediction matrix needs at least 2 classifiers, got {len(header)}"
        )
    if len(set(header)) != len(header):
        raise SchemaError("duplicate classifier names in predictions header")
    if len(body) != ds.m:
        raise DimensionError(
            f"prediction matrix has {len(body)} rows, dataset has {ds.m}"
        )

    fixed = ds.truth is not None
    classes = ds.classes
    if not fixed:
        flat = []
        for row in body:
            flat.extend(row)
        classes = classes.extended(flat)

    entries = np.empty((len(body), len(header)), dtype=CODE_DTYPE)
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise LoadError(
                f"prediction row {i + 1} has {len(row)} cells, expected {len(header)}"
            )
        for j, cell in enumerate(row):
            if cell == "":
                raise LoadError(
                    "matrix must be full: empty cell at"
                    f" data row {i + 1}, column {header[j]!r}"
                )
            try:
                entries[i, j] = classes.code(cell)
            except KeyError:
                raise LabelError(
                    f"unknown class label {cell!r} at data row {i + 1},"
                    f" column {header[j]!r}; dictionary has {list(classes.labels)}"
                )
    return PredictionMatrix(entries, tuple(header), classes)


def _format_cell(column: AttributeColumn, i: int) -> str:
    if column.kind == "nominal":
        return column.labels[int(column.values[i])]
    return repr(float(column.values[i]))


def save_dataset(ds: Dataset, path) -> None:
    """Write a dataset back to CSV. Reloading with the same schema gives
    identical codes, dictionaries and values."""
    fh, owned = (open(path, "w", newline="", encoding="utf-8"), True) \
        if isinstance(path, (str, os.PathLike)) else (path, False)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        header = [c.name for c in ds.columns]
        if ds.truth is not None:
            header.append(ds.target_name or "class")
        writer.writerow(header)
        for i in range(ds.m):
            row = [_format_cell(c, i) for c in ds.columns]
            if ds.truth is not None:
                row.append(ds.classes.text(int(ds.truth[i])))
            writer.writerow(row)
    finally:
        if owned:
            fh.close()


def save_predictions(matrix: PredictionMatrix, path) -> None:
    """Write a prediction matrix back to CSV (labels, not codes)."""
    fh, owned = (open(path, "w", newline="", encoding="utf-8"), True) \
        if isinstance(path, (str, os.PathLike)) else (path, False)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(matrix.names)
        for i in range(matrix.m):
            writer.writerow(
                [matrix.classes.text(int(c)) for c in matrix.entries[i]]
            )
    finally:
        if owned:
            fh.close()


def dataset_from_arrays(
    names: Sequence[str],
    kinds: Sequence[str],
    arrays: Sequence[np.ndarray],
    labels: Sequence[tuple[str, ...] | None],
    truth: np.ndarray | None = None,
    classes: LabelDict | None = None,
    target_name: str | None = None,
) -> Dataset:
    """Assemble a dataset directly from arrays, mainly for tests and
    synthetic benchmarks."""
    cols = tuple(
        AttributeColumn(n, k, np.asarray(a), l if k == "nominal" else None)
        for n, k, a, l in zip(names, kinds, arrays, labels)
    )
    return Dataset(cols, truth, classes or LabelDict(), target_name)
