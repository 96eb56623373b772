"""Conjunctive descriptions over dataset attributes.

A description is a conjunction of conditions, each on a single
attribute: equals / not-equals for nominal columns, at-most / above for
numeric ones. The empty conjunction covers every row. Descriptions are
kept canonical: conditions sorted by (column, operator, value) with
duplicates removed, so equal condition sets compare and render equal.

Numeric conditions use thresholds from a fixed set of split points
computed once on the whole column, never per subgroup. Equal-width
points are min + i * (max - min) / bins; equal-frequency points are the
realized i/bins quantiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ConfigError

OP_EQ = "="
OP_NE = "!="
OP_LE = "<="
OP_GT = ">"

NOMINAL_OPS = (OP_EQ, OP_NE)
NUMERIC_OPS = (OP_LE, OP_GT)

# order of operators within one column in the canonical condition order
_OP_RANK = {OP_EQ: 0, OP_NE: 1, OP_LE: 0, OP_GT: 1}

# display form of each operator when unicode output is wanted
_PRETTY = {OP_EQ: "=", OP_NE: "≠", OP_LE: "≤", OP_GT: ">"}


@dataclass(frozen=True)
class Condition:
    """column is an index into Dataset.columns; value is a label code
    for nominal columns and a float threshold for numeric ones."""

    column: int
    op: str
    value: float | int


def condition_key(cond: Condition):
    # total order; unique per condition since ops of equal rank never
    # share a column (column kind fixes the operator pair)
    return (cond.column, _OP_RANK[cond.op], cond.value)


@dataclass(frozen=True)
class Description:
    conditions: tuple[Condition, ...] = ()

    def __len__(self) -> int:
        return len(self.conditions)


EMPTY = Description()


def canonicalize(desc: Description) -> Description:
    """Sorted, duplicate-free form. Conjunction order never matters."""
    return Description(tuple(sorted(set(desc.conditions), key=condition_key)))


class RowSet:
    """Immutable set of row indices, stored as a boolean mask."""

    __slots__ = ("mask", "count")

    def __init__(self, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        mask.setflags(write=False)
        self.mask = mask
        self.count = int(np.count_nonzero(mask))

    @classmethod
    def all_rows(cls, m: int) -> "RowSet":
        return cls(np.ones(m, dtype=bool))

    @classmethod
    def from_indices(cls, indices, m: int) -> "RowSet":
        mask = np.zeros(m, dtype=bool)
        mask[np.asarray(indices, dtype=np.intp)] = True
        return cls(mask)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self) -> int:
        return self.count

    def __and__(self, other: "RowSet") -> "RowSet":
        return RowSet(self.mask & other.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, RowSet) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.mask.tobytes())

    def __repr__(self) -> str:
        return f"RowSet({self.count} of {self.mask.size})"


def condition_mask(cond: Condition, ds: Dataset) -> np.ndarray:
    col = ds.columns[cond.column]
    if cond.op not in (NOMINAL_OPS if col.kind == "nominal" else NUMERIC_OPS):
        raise ConfigError(
            f"operator {cond.op!r} not valid for {col.kind} column {col.name!r}"
        )
    if cond.op == OP_EQ:
        return col.values == cond.value
    if cond.op == OP_NE:
        return col.values != cond.value
    if cond.op == OP_LE:
        return col.values <= cond.value
    return col.values > cond.value


def evaluate(desc: Description, ds: Dataset) -> RowSet:
    """Rows covered by the conjunction; the empty description covers all."""
    mask = np.ones(ds.m, dtype=bool)
    for cond in desc.conditions:
        mask &= condition_mask(cond, ds)
    return RowSet(mask)


def split_points(values: np.ndarray, bins: int = 7, strategy: str = "equal-width") -> list[float]:
    """Candidate thresholds for one numeric column, computed on the full
    column. Constant columns yield no split points."""
    if bins < 2:
        raise ConfigError(f"bins must be at least 2, got {bins}")
    lo = float(np.min(values))
    hi = float(np.max(values))
    if lo == hi:
        return []
    if strategy == "equal-width":
        points = [lo + i * (hi - lo) / bins for i in range(1, bins)]
    elif strategy == "equal-frequency":
        quantiles = np.quantile(values, [i / bins for i in range(1, bins)], method="lower")
        points = [float(q) for q in quantiles]
    else:
        raise ConfigError(f"unknown binning strategy {strategy!r}")
    return sorted(set(points))


def candidate_conditions(ds: Dataset, bins: int = 7, strategy: str = "equal-width") -> list[Condition]:
    """The full condition pool for a dataset, in canonical order.

    Nominal columns contribute one equals and one not-equals condition
    per dictionary value, numeric columns an at-most and an above
    condition per split point.
    """
    pool = []
    for idx, col in enumerate(ds.columns):
        if col.kind == "nominal":
            for op in NOMINAL_OPS:
                for code in range(col.n_values):
                    pool.append(Condition(idx, op, code))
        else:
            for op in NUMERIC_OPS:
                for t in split_points(col.values, bins, strategy):
                    pool.append(Condition(idx, op, t))
    pool.sort(key=condition_key)
    return pool


def refine(
    desc: Description,
    ds: Dataset,
    current: RowSet | None = None,
    bins: int = 7,
    strategy: str = "equal-width",
) -> list[Description]:
    """All one-condition specializations of `desc`, canonical, without
    re-adding conditions already present.

    `current` (the rows desc covers) is accepted so callers can carry it
    alongside, but refinement never depends on it: thresholds come from
    the whole column, which keeps the candidate space identical at every
    search level.
    """
    have = set(desc.conditions)
    out = []
    for cond in candidate_conditions(ds, bins, strategy):
        if cond in have:
            continue
        out.append(Description(tuple(sorted(have | {cond}, key=condition_key))))
    return out


def render_condition(cond: Condition, ds: Dataset, ascii_ops: bool = False) -> str:
    col = ds.columns[cond.column]
    if col.kind == "nominal":
        value = col.labels[int(cond.value)]
    else:
        value = repr(float(cond.value))
    op = cond.op if ascii_ops else _PRETTY[cond.op]
    return f"{col.name} {op} {value}"


def render(desc: Description, ds: Dataset, ascii_ops: bool = False) -> str:
    """Human-readable conjunction, e.g. "Sex = male ∧ Fare > 73.18988571428572".

    ASCII mode writes "Sex = male AND Fare > 73.18988571428572" instead;
    numeric thresholds keep full precision in both modes.
    """
    joiner = " AND " if ascii_ops else " ∧ "
    return joiner.join(render_condition(c, ds, ascii_ops) for c in desc.conditions)


def _parse_atom(atom: str, ds: Dataset) -> Condition:
    # longest name first so column names that prefix each other resolve
    for idx, col in sorted(enumerate(ds.columns), key=lambda t: -len(t[1].name)):
        if atom.startswith(col.name + " "):
            rest = atom[len(col.name) + 1:]
            try:
                op_text, value_text = rest.split(" ", 1)
            except ValueError:
                raise ConfigError(f"cannot parse condition {atom!r}")
            op = {"≠": OP_NE, "≤": OP_LE}.get(op_text, op_text)
            if col.kind == "nominal":
                if op not in NOMINAL_OPS:
                    raise ConfigError(
                        f"operator {op_text!r} not valid for nominal column {col.name!r}"
                    )
                if col.labels is None or value_text not in col.labels:
                    raise ConfigError(
                        f"unknown value {value_text!r} for column {col.name!r}"
                    )
                return Condition(idx, op, col.labels.index(value_text))
            if op not in NUMERIC_OPS:
                raise ConfigError(
                    f"operator {op_text!r} not valid for numeric column {col.name!r}"
                )
            try:
                return Condition(idx, op, float(value_text))
            except ValueError:
                raise ConfigError(f"cannot parse number {value_text!r} in {atom!r}")
    raise ConfigError(f"condition {atom!r} references an unknown column")


def parse_description(text: str, ds: Dataset) -> Description:
    """Inverse of render() for both output modes. Empty text gives the
    empty description."""
    text = text.strip()
    if not text:
        return EMPTY
    normalized = text.replace(" ∧ ", " AND ")
    atoms = normalized.split(" AND ")
    return canonicalize(Description(tuple(_parse_atom(a.strip(), ds) for a in atoms)))
