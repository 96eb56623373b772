import json

import numpy as np
import pytest

from controversy import Dataset, LabelDict, PredictionMatrix, dataset_from_arrays

# Two small committees of four binary classifiers over eight cases.
# In A, classifier errors look independent; in B the first four cases
# repeat the same 3-vs-1 split, so per-classifier correction matters.
TOY_A = [
    (1, 1, 0, 1),
    (0, 1, 0, 1),
    (1, 0, 1, 1),
    (1, 1, 1, 0),
    (0, 1, 1, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 1),
]
TOY_B = [
    (1, 1, 0, 1),
    (0, 1, 0, 1),
    (1, 1, 0, 1),
    (1, 1, 0, 1),
    (0, 1, 1, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 1),
]


def matrix_from_rows(rows, labels=("0", "1"), names=None) -> PredictionMatrix:
    """Prediction matrix with codes equal to the given ints."""
    entries = np.asarray(rows, dtype=np.int32)
    names = tuple(names or (f"c{j + 1}" for j in range(entries.shape[1])))
    return PredictionMatrix(entries, names, LabelDict(tuple(labels)))


def indicator_dataset(m: int) -> Dataset:
    """One binary indicator attribute per case: I<j> is 1 exactly at case j."""
    arrays = [np.asarray([1 if i == j else 0 for i in range(m)], dtype=np.int32)
              for j in range(m)]
    names = [f"I{j + 1}" for j in range(m)]
    return dataset_from_arrays(
        names, ["nominal"] * m, arrays, [("0", "1")] * m
    )


def write_inputs(tmp_path, rows, labels=("0", "1"), truth=None, numeric_col=None):
    """Write dataset, schema and predictions files for CLI tests.

    The dataset gets one indicator column per case plus one column per
    classifier mirroring its votes (so vote regions are nameable),
    optionally a numeric column and a target column. The predictions
    hold `rows`.
    """
    import string

    m, n = len(rows), len(rows[0])
    names = [f"I{j + 1}" for j in range(m)]
    mirrors = [string.ascii_uppercase[j] for j in range(n)]
    header = list(names) + mirrors
    schema_cols = [{"name": c, "role": "nominal"} for c in header]
    if numeric_col is not None:
        header.append("x")
        schema_cols.append({"name": "x", "role": "numeric"})
    if truth is not None:
        header.append("class")
        schema_cols.append({"name": "class", "role": "target"})

    lines = [",".join(header)]
    for i in range(m):
        cells = ["1" if i == j else "0" for j in range(m)]
        cells += [str(v) for v in rows[i]]
        if numeric_col is not None:
            cells.append(repr(float(numeric_col[i])))
        if truth is not None:
            cells.append(str(truth[i]))
        lines.append(",".join(cells))

    data = tmp_path / "data.csv"
    data.write_text("\n".join(lines) + "\n")
    schema = tmp_path / "schema.json"
    schema.write_text(json.dumps({"columns": schema_cols}))
    preds = tmp_path / "predictions.csv"
    pred_lines = [",".join(f"c{j + 1}" for j in range(len(rows[0])))]
    pred_lines += [",".join(str(v) for v in r) for r in rows]
    preds.write_text("\n".join(pred_lines) + "\n")
    return data, schema, preds


def random_instance(rng, m_max=30, cols_max=4, n_max=5, k=2, with_truth=True,
                    numeric_cols=0):
    """Small random dataset plus prediction matrix for property tests."""
    m = int(rng.integers(6, m_max + 1))
    n_cols = int(rng.integers(1, cols_max + 1))
    n = int(rng.integers(2, n_max + 1))
    labels = tuple(str(c) for c in range(k))
    names = [f"a{i}" for i in range(n_cols)]
    kinds = ["nominal"] * n_cols
    arrays = [rng.integers(0, 2, m).astype(np.int32) for _ in range(n_cols)]
    col_labels: list = [("0", "1")] * n_cols
    for i in range(numeric_cols):
        names.append(f"x{i}")
        kinds.append("numeric")
        arrays.append(np.round(rng.normal(size=m), 3))
        col_labels.append(None)
    truth = None
    classes = LabelDict(labels)
    if with_truth:
        truth = rng.integers(0, k, m).astype(np.int32)
        # both classes must occur so every measure stays defined
        truth[0] = 0
        truth[1] = 1
    ds = dataset_from_arrays(
        names,
        kinds,
        arrays,
        col_labels,
        truth=truth,
        classes=classes,
        target_name="class" if with_truth else None,
    )
    entries = rng.integers(0, k, (m, n)).astype(np.int32)
    matrix = PredictionMatrix(
        entries, tuple(f"c{j}" for j in range(n)), classes
    )
    return ds, matrix


@pytest.fixture
def toy_a():
    return matrix_from_rows(TOY_A)


@pytest.fixture
def toy_b():
    return matrix_from_rows(TOY_B)


@pytest.fixture
def toy_a_ds():
    return indicator_dataset(8)


@pytest.fixture
def toy_b_ds():
    # descriptors mirror the four prediction columns, so regions of
    # consistent dissent are nameable with single conditions
    cols = np.asarray(TOY_B, dtype=np.int32)
    return dataset_from_arrays(
        list("ABCD"), ["nominal"] * 4,
        [cols[:, j].copy() for j in range(4)], [("0", "1")] * 4,
    )
