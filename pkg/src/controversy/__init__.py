"""Find and name dataset regions where classifiers exceptionally
(dis-)agree.

The pieces compose in one line each: load a dataset and a prediction
matrix, pick a quality measure, run beam_search, render the results.

    from controversy import load_dataset, load_predictions
    from controversy import SearchConfig, beam_search, render

    ds = load_dataset("data.csv", "schema.json")
    matrix = load_predictions("predictions.csv", ds)
    for entry in beam_search(ds, matrix, SearchConfig(measure="ccl")):
        print(entry.count, entry.quality, render(entry.description, ds))
"""

from .data import (
    AttributeColumn,
    Dataset,
    LabelDict,
    PredictionMatrix,
    dataset_from_arrays,
    load_dataset,
    load_predictions,
    save_dataset,
    save_predictions,
)
from .descriptions import (
    Condition,
    Description,
    EMPTY,
    RowSet,
    candidate_conditions,
    canonicalize,
    evaluate,
    parse_description,
    refine,
    render,
    split_points,
)
from .errors import (
    BinaryTargetError,
    ConfigError,
    DimensionError,
    LabelError,
    LoadError,
    MiningError,
    MissingTruthError,
    OracleBudgetError,
    SchemaError,
    UndefinedInputError,
    UndefinedSubgroupError,
)
from .measures import (
    MEASURES,
    BinaryIndicatorMatrix,
    QualityValue,
    accordance_matrix,
    build_scorer,
    correctness_matrix,
    ensemble_positive_prob,
    entropy,
    measure_baseline,
    phi_cac,
    phi_ccl,
    phi_cco,
    phi_gt_yac,
    phi_gt_yac_prime,
    phi_rasl,
    phi_row,
)
from .search import (
    ResultEntry,
    ResultList,
    SearchConfig,
    beam_search,
    exhaustive_search,
    min_count,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeColumn", "BinaryIndicatorMatrix", "BinaryTargetError",
    "Condition", "ConfigError", "Dataset", "Description", "DimensionError",
    "EMPTY", "LabelDict", "LabelError", "LoadError", "MEASURES",
    "MiningError", "MissingTruthError", "OracleBudgetError",
    "PredictionMatrix", "QualityValue", "ResultEntry", "ResultList",
    "RowSet", "SchemaError", "SearchConfig", "UndefinedInputError",
    "UndefinedSubgroupError", "accordance_matrix", "beam_search",
    "build_scorer", "candidate_conditions", "canonicalize",
    "correctness_matrix", "dataset_from_arrays", "ensemble_positive_prob",
    "entropy", "evaluate", "exhaustive_search", "load_dataset",
    "load_predictions", "measure_baseline", "min_count",
    "parse_description", "phi_cac", "phi_ccl", "phi_cco", "phi_gt_yac",
    "phi_gt_yac_prime", "phi_rasl", "phi_row", "refine", "render",
    "save_dataset", "save_predictions", "split_points",
]
