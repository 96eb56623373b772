"""Registry of the benchmark datasets the harness knows how to prepare.

Each entry records the expected shape of the emitted dataset (cases,
discrete descriptors, numeric descriptors, classes), where the raw
source lives, and any preprocessing quirks. Shapes are checked by the
tests against what prepare() actually writes.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class DatasetSpec:
    id: str
    cases: int
    discrete: int
    numeric: int
    classes: int
    source: str
    # files that must be placed under <data_root>/raw/<id>/ before
    # prepare() can run; empty means the dataset is generated locally
    raw_files: tuple = ()
    generated: bool = False
    # discrete-by-nature columns that are emitted with the numeric role
    # so that ordered cuts (<=, >) over their codes are expressible;
    # they count toward `discrete` above, not `numeric`
    cut_coded: tuple = ()
    # numeric columns where -1 is a missing-value sentinel that the
    # classifiers must impute (training-fold median) but that stays in
    # the emitted data so the miner can name the region
    sentinel_missing: tuple = ()
    notes: str = ""


REGISTRY = {
    spec.id: spec
    for spec in (
        DatasetSpec(
            id="mushroom",
            cases=8124, discrete=22, numeric=0, classes=2,
            source="https://archive.ics.uci.edu/dataset/73/mushroom "
                   "(direct file: https://archive.ics.uci.edu/ml/"
                   "machine-learning-databases/mushroom/agaricus-lepiota.data)",
            raw_files=("agaricus-lepiota.data",),
            notes="'?' in stalk_root is kept as an ordinary category.",
        ),
        DatasetSpec(
            id="titanic",
            cases=891, discrete=3, numeric=4, classes=2,
            source="https://www.kaggle.com/c/titanic/data (train.csv)",
            raw_files=("train.csv",),
            cut_coded=("Pclass",),
            sentinel_missing=("Age",),
            notes="Missing Age -> -1 sentinel; missing Embarked -> '?'. "
                  "Pclass is ordinal, emitted numeric so Pclass <= 2 style "
                  "cuts are expressible.",
        ),
        DatasetSpec(
            id="adult",
            cases=48842, discrete=8, numeric=6, classes=2,
            source="https://archive.ics.uci.edu/dataset/2/adult "
                   "(files adult.data and adult.test)",
            raw_files=("adult.data", "adult.test"),
            notes="Both splits concatenated; trailing '.' stripped from "
                  "test labels; '?' kept as a category.",
        ),
        DatasetSpec(
            id="balance-scale",
            cases=625, discrete=0, numeric=4, classes=3,
            source="generated locally (every (weight, distance) pair in "
                   "1..5 on each side; class by torque comparison)",
            generated=True,
        ),
        DatasetSpec(
            id="car",
            cases=1728, discrete=6, numeric=0, classes=4,
            source="https://archive.ics.uci.edu/dataset/19/car+evaluation "
                   "(file car.data)",
            raw_files=("car.data",),
        ),
        DatasetSpec(
            id="pima",
            cases=768, discrete=0, numeric=8, classes=2,
            source="https://www.kaggle.com/uciml/pima-indians-diabetes-database "
                   "(file diabetes.csv)",
            raw_files=("diabetes.csv",),
        ),
        DatasetSpec(
            id="covertype",
            cases=581012, discrete=44, numeric=10, classes=7,
            source="https://archive.ics.uci.edu/dataset/31/covertype "
                   "(file covtype.data.gz)",
            raw_files=("covtype.data.gz",),
            notes="44 binary indicator columns (wilderness areas, soil "
                  "types) are nominal; 10 terrain measurements numeric.",
        ),
        DatasetSpec(
            id="msd-decade",
            cases=515345, discrete=0, numeric=90, classes=10,
            source="https://archive.ics.uci.edu/dataset/203/"
                   "yearpredictionmsd (file YearPredictionMSD.txt)",
            raw_files=("YearPredictionMSD.txt",),
            notes="Release year mapped to its decade (year // 10) as the "
                  "class label.",
        ),
    )
}

DATASET_IDS = tuple(sorted(REGISTRY))
