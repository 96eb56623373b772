"""Quality measures over subgroups of a prediction matrix.

All measures reduce a subgroup to a single float through base-2 Shannon
entropy of class count vectors. Per-row entropy reads one case across
all classifiers, per-column entropy reads one classifier across the
subgroup. The class probabilities are vote fractions, so a count vector
(c_1, ..., c_k) with total t scores H = -sum(c_i/t * log2(c_i/t)) over
the nonzero counts.

Measure tokens, also used by the CLI:

  row      mean per-row entropy (controversy among classifiers)
  ccl      row minus mean per-column entropy (penalizes unstable columns)
  cac      ccl on the accordance indicator (agrees with the row majority)
  cco      ccl on the correctness indicator (agrees with ground truth)
  gt-yac   row entropy with ground truth added as one extra vote
  gt-yac2  row entropy with ground truth weighted as n extra votes
  rasl     average subranking loss of ensemble positive-class
           probabilities over the ground-truth positives (binary only)

Every public phi_* function returns a QualityValue carrying the value,
the measure token and the whole-dataset baseline. Search code uses
build_scorer() instead, which does the per-matrix precomputation once
and then scores row masks cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, PredictionMatrix
from .descriptions import RowSet
from .errors import (
    BinaryTargetError,
    ConfigError,
    MissingTruthError,
    UndefinedInputError,
    UndefinedSubgroupError,
)


@dataclass(frozen=True)
class QualityValue:
    value: float
    measure: str
    baseline: float


@dataclass(frozen=True)
class BinaryIndicatorMatrix:
    """0/1 matrix derived from a prediction matrix; kind names the
    derivation ("accordance" or "correctness")."""

    entries: np.ndarray
    kind: str

    def __post_init__(self):
        self.entries.setflags(write=False)


def entropy(counts) -> float:
    """Base-2 entropy of a nonnegative count vector.

    Zero counts contribute nothing. A zero total leaves the distribution
    undefined and raises.
    """
    c = np.asarray(counts, dtype=np.float64)
    if c.size and (c < 0).any():
        raise UndefinedInputError("counts must be nonnegative")
    total = c.sum()
    if total <= 0:
        raise UndefinedInputError("entropy needs a positive total count")
    p = c[c > 0] / total
    return float(-(p * np.log2(p)).sum())


def _entropies_from_counts(counts: np.ndarray) -> np.ndarray:
    """Row-wise entropy of an (m, k) count array with equal row totals."""
    totals = counts.sum(axis=1, keepdims=True)
    p = counts / totals
    safe = np.where(counts > 0, p, 1.0)  # log2(1) = 0 for empty classes
    return -(np.where(counts > 0, p * np.log2(safe), 0.0)).sum(axis=1)


def _class_counts(codes: np.ndarray, k: int) -> np.ndarray:
    m, _ = codes.shape
    counts = np.empty((m, k), dtype=np.int64)
    for c in range(k):
        counts[:, c] = (codes == c).sum(axis=1)
    return counts


def _row_entropies(codes: np.ndarray, k: int) -> np.ndarray:
    return _entropies_from_counts(_class_counts(codes, k))


def _n_classes(matrix: PredictionMatrix) -> int:
    k = len(matrix.classes)
    if k == 0:  # matrices built directly from arrays, without a dictionary
        k = int(matrix.entries.max()) + 1
    return k


class Scorer:
    """Scores row masks of one fixed prediction matrix under one measure."""

    measure: str

    def score(self, mask: np.ndarray) -> float:
        raise NotImplementedError


class _RowMeanScorer(Scorer):
    # mean over the subgroup of a precomputed per-row value
    def __init__(self, measure: str, per_row: np.ndarray):
        self.measure = measure
        self.per_row = per_row

    def score(self, mask: np.ndarray) -> float:
        picked = self.per_row[mask]
        if picked.size == 0:
            raise UndefinedInputError("measure undefined on an empty subgroup")
        return float(picked.mean())


class _CclScorer(Scorer):
    # mean row entropy minus mean column entropy, both over the subgroup
    def __init__(self, measure: str, codes: np.ndarray, k: int):
        self.measure = measure
        self.codes = codes
        self.k = k
        self.per_row = _row_entropies(codes, k)

    def score(self, mask: np.ndarray) -> float:
        picked = self.per_row[mask]
        if picked.size == 0:
            raise UndefinedInputError("measure undefined on an empty subgroup")
        sub = self.codes[mask]
        n = sub.shape[1]
        col_counts = np.empty((n, self.k), dtype=np.int64)
        for j in range(n):
            col_counts[j] = np.bincount(sub[:, j], minlength=self.k)
        column_term = float(_entropies_from_counts(col_counts).mean())
        return float(picked.mean()) - column_term


class _RaslScorer(Scorer):
    # average, over ground-truth positives, of the number of negatives
    # ranked above them by ensemble positive probability; ties half
    def __init__(self, votes: np.ndarray, is_pos: np.ndarray, n: int):
        self.measure = "rasl"
        self.votes = votes
        self.is_pos = is_pos
        self.n = n

    def score(self, mask: np.ndarray) -> float:
        pos = mask & self.is_pos
        neg = mask & ~self.is_pos
        n_pos = int(np.count_nonzero(pos))
        n_neg = int(np.count_nonzero(neg))
        if n_pos == 0 or n_neg == 0:
            raise UndefinedSubgroupError(
                "subranking loss needs both classes in the subgroup"
            )
        pos_at = np.bincount(self.votes[pos], minlength=self.n + 1)
        neg_at = np.bincount(self.votes[neg], minlength=self.n + 1)
        neg_above = n_neg - np.cumsum(neg_at)
        loss = float((pos_at * (neg_above + 0.5 * neg_at)).sum())
        return loss / n_pos


def accordance_matrix(matrix: PredictionMatrix) -> BinaryIndicatorMatrix:
    """Per entry: does this classifier agree with the row's most frequent
    prediction? Count ties resolve to the smallest class code."""
    k = _n_classes(matrix)
    counts = _class_counts(matrix.entries, k)
    top = counts.argmax(axis=1)  # argmax takes the first, i.e. smallest, code
    ind = (matrix.entries == top[:, None]).astype(matrix.entries.dtype)
    return BinaryIndicatorMatrix(ind, "accordance")


def correctness_matrix(matrix: PredictionMatrix, truth: np.ndarray | None) -> BinaryIndicatorMatrix:
    """Per entry: does this classifier agree with the ground truth?"""
    if truth is None:
        raise MissingTruthError("measure requires ground truth")
    ind = (matrix.entries == np.asarray(truth)[:, None]).astype(matrix.entries.dtype)
    return BinaryIndicatorMatrix(ind, "correctness")


def _positive_code(matrix: PredictionMatrix, positive: int | str) -> int:
    if isinstance(positive, str):
        try:
            return matrix.classes.code(positive)
        except KeyError:
            raise ConfigError(f"unknown positive class label {positive!r}")
    return int(positive)


def ensemble_positive_prob(matrix: PredictionMatrix, positive: int | str = 1) -> np.ndarray:
    """Fraction of classifiers voting for the positive class, per case.

    Values are multiples of 1/n. Only defined for two-class problems.
    """
    if _n_classes(matrix) != 2:
        raise BinaryTargetError("measure requires binary target")
    return (matrix.entries == _positive_code(matrix, positive)).sum(axis=1) / matrix.n


@dataclass(frozen=True)
class MeasureSpec:
    token: str
    needs_truth: bool
    binary_only: bool
    direction_default: str = "max"


MEASURES = {
    spec.token: spec
    for spec in (
        MeasureSpec("row", needs_truth=False, binary_only=False),
        MeasureSpec("ccl", needs_truth=False, binary_only=False),
        MeasureSpec("cac", needs_truth=False, binary_only=False),
        MeasureSpec("cco", needs_truth=True, binary_only=False),
        MeasureSpec("gt-yac", needs_truth=True, binary_only=False),
        MeasureSpec("gt-yac2", needs_truth=True, binary_only=False),
        MeasureSpec("rasl", needs_truth=True, binary_only=True, direction_default="min"),
    )
}


def build_scorer(
    measure: str,
    matrix: PredictionMatrix,
    truth: np.ndarray | None = None,
    positive: int | str = 1,
) -> Scorer:
    """Precompute everything a measure needs on this matrix and return a
    mask scorer. Raises the measure's precondition errors up front."""
    if measure not in MEASURES:
        raise ConfigError(f"unknown measure {measure!r}")
    spec = MEASURES[measure]
    if spec.needs_truth and truth is None:
        raise MissingTruthError("measure requires ground truth")
    k = _n_classes(matrix)
    codes = matrix.entries

    if measure == "row":
        return _RowMeanScorer("row", _row_entropies(codes, k))
    if measure == "ccl":
        return _CclScorer("ccl", codes, k)
    if measure == "cac":
        ind = accordance_matrix(matrix).entries
        return _CclScorer("cac", ind, 2)
    if measure == "cco":
        ind = correctness_matrix(matrix, truth).entries
        return _CclScorer("cco", ind, 2)
    if measure == "gt-yac":
        augmented = np.concatenate([codes, np.asarray(truth)[:, None]], axis=1)
        return _RowMeanScorer("gt-yac", _row_entropies(augmented, k))
    if measure == "gt-yac2":
        counts = _class_counts(codes, k)
        for c in range(k):  # ground truth weighs as much as the committee
            counts[:, c] += matrix.n * (np.asarray(truth) == c)
        return _RowMeanScorer("gt-yac2", _entropies_from_counts(counts))
    # rasl
    if _n_classes(matrix) != 2:
        raise BinaryTargetError("measure requires binary target")
    code = _positive_code(matrix, positive)
    votes = (matrix.entries == code).sum(axis=1).astype(np.int64)
    is_pos = np.asarray(truth) == code
    return _RaslScorer(votes, is_pos, matrix.n)


def _with_baseline(scorer: Scorer, sg: RowSet, m: int) -> QualityValue:
    baseline = scorer.score(np.ones(m, dtype=bool))
    return QualityValue(scorer.score(sg.mask), scorer.measure, baseline)


def phi_row(sg: RowSet, matrix: PredictionMatrix) -> QualityValue:
    """Mean per-row prediction entropy over the subgroup."""
    return _with_baseline(build_scorer("row", matrix), sg, matrix.m)


def phi_ccl(sg: RowSet, matrix: PredictionMatrix) -> QualityValue:
    """Row controversy corrected by mean per-classifier entropy."""
    return _with_baseline(build_scorer("ccl", matrix), sg, matrix.m)


def phi_cac(sg: RowSet, matrix: PredictionMatrix) -> QualityValue:
    """ccl over the accordance indicator matrix."""
    return _with_baseline(build_scorer("cac", matrix), sg, matrix.m)


def phi_cco(sg: RowSet, matrix: PredictionMatrix, truth: np.ndarray) -> QualityValue:
    """ccl over the correctness indicator matrix."""
    return _with_baseline(build_scorer("cco", matrix, truth), sg, matrix.m)


def phi_gt_yac(sg: RowSet, matrix: PredictionMatrix, truth: np.ndarray) -> QualityValue:
    """Row entropy with ground truth included as one additional vote."""
    return _with_baseline(build_scorer("gt-yac", matrix, truth), sg, matrix.m)


def phi_gt_yac_prime(sg: RowSet, matrix: PredictionMatrix, truth: np.ndarray) -> QualityValue:
    """Row entropy with ground truth weighted as n additional votes."""
    return _with_baseline(build_scorer("gt-yac2", matrix, truth), sg, matrix.m)


def phi_rasl(
    sg: RowSet,
    prob: np.ndarray,
    truth: np.ndarray,
    positive: int = 1,
) -> QualityValue:
    """Average subranking loss over the subgroup's ground-truth positives.

    For each positive case, count the negatives with a strictly larger
    ensemble positive probability plus half the ties; average over the
    positives. Zero means the ensemble separates the subgroup perfectly.
    The value stands on its own, it is not relative to the baseline.
    """
    prob = np.asarray(prob, dtype=np.float64)
    is_pos = np.asarray(truth) == positive

    def loss(mask: np.ndarray) -> float:
        p_pos = prob[mask & is_pos]
        p_neg = prob[mask & ~is_pos]
        if p_pos.size == 0 or p_neg.size == 0:
            raise UndefinedSubgroupError(
                "subranking loss needs both classes in the subgroup"
            )
        neg_sorted = np.sort(p_neg)
        below_eq = np.searchsorted(neg_sorted, p_pos, side="right")
        below = np.searchsorted(neg_sorted, p_pos, side="left")
        above = neg_sorted.size - below_eq
        return float((above + 0.5 * (below_eq - below)).sum()) / p_pos.size

    baseline = loss(np.ones(prob.size, dtype=bool))
    return QualityValue(loss(sg.mask), "rasl", baseline)


def measure_baseline(
    measure: str,
    ds: Dataset,
    matrix: PredictionMatrix,
    truth: np.ndarray | None = None,
    positive: int | str = 1,
) -> float:
    """Measure value over the whole dataset, as quoted in report headers."""
    if truth is None:
        truth = ds.truth
    scorer = build_scorer(measure, matrix, truth, positive)
    return scorer.score(np.ones(matrix.m, dtype=bool))
