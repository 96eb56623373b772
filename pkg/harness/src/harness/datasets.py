"""Turn raw dataset sources into the miner's data.csv + schema.json pair.

prepare() writes, per dataset, a cleaned CSV with one descriptor per
column plus a target column, and a schema JSON assigning each column a
role (nominal, numeric, target). Raw files are never fetched over the
network: they must be placed under <data_root>/raw/<id>/ first, except
for balance-scale which is generated in closed form.
"""

import gzip
import itertools
import json
import os
import tempfile
from pathlib import Path

import pandas as pd

from .registry import REGISTRY


class FetchError(RuntimeError):
    """A raw source file is missing; the message says how to get it."""


class PrepareError(RuntimeError):
    """A raw source file is present but does not look like the dataset."""


def _missing(spec, raw_dir, missing_files):
    lines = [
        f"raw source for dataset '{spec.id}' not found",
        f"expected under {raw_dir}/: " + ", ".join(missing_files),
        f"download from: {spec.source}",
        "then rerun: harness prepare " + spec.id,
    ]
    return FetchError("\n".join(lines))


def _atomic_write(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(out_dir: Path, frame: pd.DataFrame, roles: dict):
    """Write data.csv and schema.json; returns their paths."""
    out_dir.mkdir(parents=True, exist_ok=True)
    data_path = out_dir / "data.csv"
    schema_path = out_dir / "schema.json"
    _atomic_write(data_path, frame.to_csv(index=False))
    schema = {"columns": [{"name": c, "role": roles[c]} for c in frame.columns]}
    _atomic_write(schema_path, json.dumps(schema, indent=2) + "\n")
    return data_path, schema_path


def _raw_dir(spec, data_root: Path) -> Path:
    raw = data_root / "raw" / spec.id
    missing = [f for f in spec.raw_files if not (raw / f).exists()]
    if missing:
        raise _missing(spec, raw, missing)
    return raw


def prepare(dataset_id: str, data_root="data"):
    """Prepare one dataset; returns (data.csv path, schema.json path)."""
    if dataset_id not in REGISTRY:
        raise KeyError(f"unknown dataset id: {dataset_id!r}")
    spec = REGISTRY[dataset_id]
    data_root = Path(data_root)
    builder = _BUILDERS[dataset_id]
    if spec.generated:
        frame, roles = builder()
    else:
        frame, roles = builder(_raw_dir(spec, data_root))
    if len(frame) != spec.cases:
        raise PrepareError(
            f"dataset '{dataset_id}': expected {spec.cases} cases, "
            f"raw source produced {len(frame)}")
    return _emit(data_root / dataset_id, frame, roles)


# ---------------------------------------------------------------- builders

def _build_balance_scale():
    rows = list(itertools.product(range(1, 6), repeat=4))
    frame = pd.DataFrame(
        rows,
        columns=["Left_Weight", "Left_Distance",
                 "Right_Weight", "Right_Distance"])
    left = frame["Left_Weight"] * frame["Left_Distance"]
    right = frame["Right_Weight"] * frame["Right_Distance"]
    frame["class"] = ["L" if l > r else "R" if r > l else "B"
                      for l, r in zip(left, right)]
    roles = {c: "numeric" for c in frame.columns[:4]}
    roles["class"] = "target"
    return frame, roles


_MUSHROOM_ATTRS = [
    "cap_shape", "cap_surface", "cap_color", "bruises", "odor",
    "gill_attachment", "gill_spacing", "gill_size", "gill_color",
    "stalk_shape", "stalk_root", "stalk_surface_above_ring",
    "stalk_surface_below_ring", "stalk_color_above_ring",
    "stalk_color_below_ring", "veil_type", "veil_color", "ring_number",
    "ring_type", "spore_print_color", "population", "habitat",
]


def _build_mushroom(raw):
    frame = pd.read_csv(raw / "agaricus-lepiota.data", header=None,
                        names=["class"] + _MUSHROOM_ATTRS, dtype=str)
    frame = frame[_MUSHROOM_ATTRS + ["class"]]
    roles = {c: "nominal" for c in _MUSHROOM_ATTRS}
    roles["class"] = "target"
    return frame, roles


def _build_titanic(raw):
    src = pd.read_csv(raw / "train.csv")
    frame = pd.DataFrame({
        "Pclass": src["Pclass"].astype(float),
        "Sex": src["Sex"].astype(str),
        "Age": src["Age"].fillna(-1.0).astype(float),
        "SibSp": src["SibSp"].astype(float),
        "Parch": src["Parch"].astype(float),
        "Fare": src["Fare"].astype(float),
        "Embarked": src["Embarked"].fillna("?").astype(str),
        "Survived": src["Survived"].astype(str),
    })
    roles = {"Pclass": "numeric", "Sex": "nominal", "Age": "numeric",
             "SibSp": "numeric", "Parch": "numeric", "Fare": "numeric",
             "Embarked": "nominal", "Survived": "target"}
    return frame, roles


_ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num",
    "marital_status", "occupation", "relationship", "race", "sex",
    "capital_gain", "capital_loss", "hours_per_week", "native_country",
    "income",
]
_ADULT_NUMERIC = ["age", "fnlwgt", "education_num", "capital_gain",
                  "capital_loss", "hours_per_week"]


def _build_adult(raw):
    parts = []
    for name, skip in (("adult.data", 0), ("adult.test", 1)):
        part = pd.read_csv(raw / name, header=None, names=_ADULT_COLUMNS,
                           skiprows=skip, skipinitialspace=True,
                           dtype=str).dropna(how="all")
        parts.append(part)
    frame = pd.concat(parts, ignore_index=True)
    frame["income"] = frame["income"].str.rstrip(".")
    for col in _ADULT_NUMERIC:
        frame[col] = frame[col].astype(float)
    roles = {c: "numeric" if c in _ADULT_NUMERIC else "nominal"
             for c in _ADULT_COLUMNS}
    roles["income"] = "target"
    return frame, roles


def _build_car(raw):
    columns = ["buying", "maint", "doors", "persons", "lug_boot",
               "safety", "class"]
    frame = pd.read_csv(raw / "car.data", header=None, names=columns,
                        dtype=str)
    roles = {c: "nominal" for c in columns}
    roles["class"] = "target"
    return frame, roles


_PIMA_COLUMNS = ["Pregnancies", "Glucose", "BloodPressure", "SkinThickness",
                 "Insulin", "BMI", "DiabetesPedigreeFunction", "Age",
                 "Outcome"]


def _build_pima(raw):
    path = raw / "diabetes.csv"
    first = path.open().readline()
    header = 0 if first and not first[0].isdigit() else None
    frame = pd.read_csv(path, header=header, names=_PIMA_COLUMNS)
    for col in _PIMA_COLUMNS[:-1]:
        frame[col] = frame[col].astype(float)
    frame["Outcome"] = frame["Outcome"].astype(int).astype(str)
    roles = {c: "numeric" for c in _PIMA_COLUMNS[:-1]}
    roles["Outcome"] = "target"
    return frame, roles


_COVERTYPE_NUMERIC = [
    "Elevation", "Aspect", "Slope", "Horizontal_Distance_To_Hydrology",
    "Vertical_Distance_To_Hydrology", "Horizontal_Distance_To_Roadways",
    "Hillshade_9am", "Hillshade_Noon", "Hillshade_3pm",
    "Horizontal_Distance_To_Fire_Points",
]


def _build_covertype(raw):
    indicators = ([f"Wilderness_Area{i}" for i in range(1, 5)]
                  + [f"Soil_Type{i}" for i in range(1, 41)])
    columns = _COVERTYPE_NUMERIC + indicators + ["Cover_Type"]
    path = raw / "covtype.data.gz"
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt") as handle:
        frame = pd.read_csv(handle, header=None, names=columns)
    for col in _COVERTYPE_NUMERIC:
        frame[col] = frame[col].astype(float)
    for col in indicators:
        frame[col] = frame[col].astype(int).astype(str)
    frame["Cover_Type"] = frame["Cover_Type"].astype(int).astype(str)
    roles = {c: "numeric" for c in _COVERTYPE_NUMERIC}
    roles.update({c: "nominal" for c in indicators})
    roles["Cover_Type"] = "target"
    return frame, roles


def _build_msd_decade(raw):
    names = (["year"] + [f"TimbreAvg{i:02d}" for i in range(1, 13)]
             + [f"TimbreCov{i:02d}" for i in range(1, 79)])
    frame = pd.read_csv(raw / "YearPredictionMSD.txt", header=None,
                        names=names)
    frame["decade"] = (frame["year"].astype(int) // 10).astype(str)
    frame = frame.drop(columns=["year"])
    roles = {c: "numeric" for c in frame.columns if c != "decade"}
    roles["decade"] = "target"
    return frame, roles


_BUILDERS = {
    "balance-scale": _build_balance_scale,
    "mushroom": _build_mushroom,
    "titanic": _build_titanic,
    "adult": _build_adult,
    "car": _build_car,
    "pima": _build_pima,
    "covertype": _build_covertype,
    "msd-decade": _build_msd_decade,
}
