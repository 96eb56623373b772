"""Beam search and exhaustive search over the description space.

Both searches share one candidate pipeline: the condition pool is built
once on the full dataset, candidates below minimum coverage or violating
a measure precondition are dropped before scoring, and every canonical
description is evaluated at most once per run. Results are kept in a
deterministic total order: quality in the search direction first, then
fewer conditions, then the lexicographic ASCII rendering. Two runs on
equal inputs therefore return identical results, with any number of
worker threads.

The exhaustive search enumerates canonical descriptions depth-first in
pool order, pruning on coverage (coverage only shrinks when conditions
are added) and on undefined subgroups (a subgroup undefined for a
measure stays undefined when it shrinks). It exists as a ground-truth
oracle for the beam on small instances.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset, PredictionMatrix
from .descriptions import (
    Condition,
    Description,
    candidate_conditions,
    condition_key,
    condition_mask,
    render,
)
from .errors import (
    ConfigError,
    DimensionError,
    OracleBudgetError,
    UndefinedInputError,
)
from .measures import MEASURES, Scorer, build_scorer

BINNINGS = ("equal-width", "equal-frequency")


@dataclass(frozen=True)
class SearchConfig:
    measure: str = "row"
    direction: str = "max"
    beam_width: int = 25
    depth: int = 3
    min_support: float = 0.04
    top_q: int = 10
    bins: int = 7
    binning: str = "equal-width"
    positive: int | str = 1
    jobs: int = 1

    def validated(self) -> "SearchConfig":
        if self.measure not in MEASURES:
            raise ConfigError(f"unknown measure {self.measure!r}")
        if self.direction not in ("max", "min"):
            raise ConfigError(f"direction must be 'max' or 'min', got {self.direction!r}")
        if self.beam_width < 1:
            raise ConfigError(f"beam width must be positive, got {self.beam_width}")
        if self.depth < 1:
            raise ConfigError(f"depth must be positive, got {self.depth}")
        if not 0.0 < self.min_support <= 1.0:
            raise ConfigError(
                f"min support must be a fraction in (0, 1], got {self.min_support}"
            )
        if self.top_q < 1:
            raise ConfigError(f"top_q must be positive, got {self.top_q}")
        if self.bins < 2:
            raise ConfigError(f"bins must be at least 2, got {self.bins}")
        if self.binning not in BINNINGS:
            raise ConfigError(f"unknown binning strategy {self.binning!r}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be positive, got {self.jobs}")
        return self


@dataclass(frozen=True)
class ResultEntry:
    description: Description
    count: int
    quality: float
    text: str  # canonical ASCII rendering, also the final tie break


@dataclass(frozen=True)
class ResultList:
    entries: tuple[ResultEntry, ...]
    measure: str
    direction: str
    baseline: float

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def min_count(cfg: SearchConfig, m: int) -> int:
    """Minimum subgroup size: the support fraction of m, rounded up."""
    return math.ceil(cfg.min_support * m)


def _entry_sort_key(direction: str):
    sign = -1.0 if direction == "max" else 1.0

    def key(e: ResultEntry):
        return (sign * e.quality, len(e.description), e.text)

    return key


class _Run:
    """Shared per-run state for both search strategies."""

    def __init__(self, ds: Dataset, matrix: PredictionMatrix, cfg: SearchConfig,
                 scorer: Scorer | None):
        cfg.validated()
        if matrix.m != ds.m:
            raise DimensionError(
                f"prediction matrix has {matrix.m} rows, dataset has {ds.m}"
            )
        self.ds = ds
        self.cfg = cfg
        self.scorer = scorer or build_scorer(
            cfg.measure, matrix, ds.truth, cfg.positive
        )
        try:
            # also the dataset-level precondition check: a measure that is
            # undefined on the whole dataset cannot guide a search
            self.baseline = self.scorer.score(np.ones(ds.m, dtype=bool))
        except UndefinedInputError as e:
            raise ConfigError(str(e))
        self.conditions = candidate_conditions(ds, cfg.bins, cfg.binning)
        self.masks = [condition_mask(c, ds) for c in self.conditions]
        self.min_count = min_count(cfg, ds.m)
        self.key = _entry_sort_key(cfg.direction)

    def entry(self, conditions: tuple[Condition, ...], count: int, quality: float) -> ResultEntry:
        desc = Description(conditions)
        return ResultEntry(desc, count, quality, render(desc, self.ds, ascii_ops=True))

    def results(self, top: list[ResultEntry]) -> ResultList:
        return ResultList(
            tuple(sorted(top, key=self.key)[: self.cfg.top_q]),
            self.scorer.measure,
            self.cfg.direction,
            self.baseline,
        )


def beam_search(
    ds: Dataset,
    matrix: PredictionMatrix,
    cfg: SearchConfig = SearchConfig(),
    scorer: Scorer | None = None,
) -> ResultList:
    """Level-wise beam search, beam_width candidates wide, depth levels deep.

    Candidates failing minimum coverage are dropped before scoring;
    candidates whose subgroup leaves the measure undefined are dropped
    after. The returned list holds the up to top_q best descriptions
    seen anywhere during the search, never the empty description.

    `scorer` overrides the measure from cfg, for tests and custom
    measures.
    """
    run = _Run(ds, matrix, cfg, scorer)
    top: list[ResultEntry] = []
    # beam items are (conditions, covered mask); the root is the empty
    # description, which is expanded but never scored or reported
    beam: list[tuple[tuple[Condition, ...], np.ndarray]] = [
        ((), np.ones(ds.m, dtype=bool))
    ]

    for _ in range(cfg.depth):
        seen: set[tuple[Condition, ...]] = set()
        todo: list[tuple[tuple[Condition, ...], np.ndarray, int]] = []
        for conditions, parent_mask in beam:
            have = set(conditions)
            for ci, cond in enumerate(run.conditions):
                if cond in have:
                    continue
                merged = tuple(sorted(have | {cond}, key=condition_key))
                if merged in seen:
                    continue
                seen.add(merged)
                todo.append((merged, parent_mask, ci))

        def evaluate(item):
            conditions, parent_mask, ci = item
            mask = parent_mask & run.masks[ci]
            count = int(np.count_nonzero(mask))
            if count < run.min_count:
                return None
            try:
                quality = run.scorer.score(mask)
            except UndefinedInputError:
                return None
            return conditions, mask, count, quality

        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                scored = [r for r in pool.map(evaluate, todo) if r is not None]
        else:
            scored = [r for r in map(evaluate, todo) if r is not None]
        if not scored:
            break

        entries = [run.entry(c, count, q) for c, _, count, q in scored]
        top = sorted(top + entries, key=run.key)[: cfg.top_q]
        order = sorted(range(len(scored)), key=lambda i: run.key(entries[i]))
        beam = [(scored[i][0], scored[i][1]) for i in order[: cfg.beam_width]]

    return run.results(top)


def exhaustive_search(
    ds: Dataset,
    matrix: PredictionMatrix,
    cfg: SearchConfig = SearchConfig(),
    scorer: Scorer | None = None,
    candidate_budget: int = 1_000_000,
) -> ResultList:
    """Enumerate every canonical description of up to cfg.depth conditions.

    beam_width is ignored; everything else (coverage, scoring, ordering,
    top_q) matches beam_search exactly, so on instances small enough to
    enumerate the two agree whenever the beam never overflows.

    Raises when more than candidate_budget candidates would be touched.
    """
    run = _Run(ds, matrix, cfg, scorer)
    top: list[ResultEntry] = []
    touched = 0

    # pool order is canonical order, so appending conditions with rising
    # pool index yields each canonical description exactly once
    def expand(conditions: tuple[Condition, ...], mask: np.ndarray, start: int):
        nonlocal top, touched
        for ci in range(start, len(run.conditions)):
            touched += 1
            if touched > candidate_budget:
                raise OracleBudgetError(
                    f"exhaustive search exceeds candidate budget {candidate_budget}"
                )
            narrowed = mask & run.masks[ci]
            count = int(np.count_nonzero(narrowed))
            if count < run.min_count:
                continue  # coverage is anti-monotone, prune the subtree
            merged = conditions + (run.conditions[ci],)
            try:
                quality = run.scorer.score(narrowed)
            except UndefinedInputError:
                # undefined subgroups stay undefined when narrowed further
                continue
            top = sorted(top + [run.entry(merged, count, quality)], key=run.key)
            top = top[: cfg.top_q]
            if len(merged) < cfg.depth:
                expand(merged, narrowed, ci + 1)

    expand((), np.ones(ds.m, dtype=bool), 0)
    return run.results(top)
