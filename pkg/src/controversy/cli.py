"""Command line interface.

Three subcommands, all fed by the same trio of inputs (--data, --schema,
--predictions):

  mine            beam search for exceptional subgroups, report as a
                  table, CSV or JSON
  export-matrix   dump the prediction matrix sorted by predicted labels,
                  as a PPM image plus an ordering CSV
  baseline        whole-dataset measure values, as quoted in report
                  headers

Exit codes: 0 success, 1 data content or runtime error, 2 usage or
configuration error (including unreadable input files).
"""

from __future__ import annotations

import argparse
import colorsys
import hashlib
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .data import Dataset, PredictionMatrix, load_dataset, load_predictions
from .descriptions import evaluate, parse_description, render
from .errors import ConfigError, MiningError
from .measures import MEASURES, build_scorer, measure_baseline
from .search import BINNINGS, ResultList, SearchConfig, beam_search


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunReport:
    """Everything one mine run produced, ready for serialization."""

    config: SearchConfig
    baseline: float
    results: ResultList
    duration_seconds: float
    fingerprints: dict

    def as_dict(self) -> dict:
        return {
            "measure": self.results.measure,
            "direction": self.results.direction,
            "baseline": self.baseline,
            "config": asdict(self.config),
            "inputs": self.fingerprints,
            "results": [
                {
                    "rank": i + 1,
                    "description": e.text,
                    "cases": e.count,
                    "quality": e.quality,
                }
                for i, e in enumerate(self.results)
            ],
            "duration_seconds": self.duration_seconds,
        }


def _load_inputs(args) -> tuple[Dataset, PredictionMatrix]:
    try:
        ds = load_dataset(args.data, args.schema)
    except OSError:
        raise ConfigError("cannot open data or schema file")
    try:
        matrix = load_predictions(args.predictions, ds)
    except OSError:
        raise ConfigError("cannot open predictions file")
    return ds, matrix


def _fingerprints(args, ds: Dataset, matrix: PredictionMatrix) -> dict:
    return {
        "data": {"path": str(args.data), "sha256": _sha256(args.data),
                 "cases": ds.m, "descriptors": len(ds.columns)},
        "schema": {"path": str(args.schema), "sha256": _sha256(args.schema)},
        "predictions": {"path": str(args.predictions),
                        "sha256": _sha256(args.predictions),
                        "classifiers": matrix.n},
    }


def _positive(args) -> int | str:
    # default: class code 1, the second label of the dictionary
    return args.positive if args.positive is not None else 1


def _write_out(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


def _report_table(report: RunReport, ds: Dataset, ascii_ops: bool) -> str:
    measure = report.results.measure
    rows = [
        (render(e.description, ds, ascii_ops=ascii_ops), str(e.count), f"{e.quality:.3f}")
        for e in report.results
    ]
    head = ("description", "#cases", f"quality ({measure})")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(3)]
    lines = [f"{measure}(DS)={report.baseline:.3f}"]
    lines.append(" | ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip())
    lines.append("-+-".join("-" * w for w in widths))
    for r in rows:
        lines.append(
            f"{r[0].ljust(widths[0])} | {r[1].rjust(widths[1])} | {r[2].rjust(widths[2])}"
        )
    return "\n".join(lines) + "\n"


def _report_csv(report: RunReport) -> str:
    import csv as _csv

    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["rank", "description", "cases", "quality", "baseline", "measure"])
    for i, e in enumerate(report.results):
        writer.writerow([
            i + 1, e.text, e.count, repr(float(e.quality)),
            repr(float(report.baseline)), report.results.measure,
        ])
    return buf.getvalue()


def cmd_mine(args) -> int:
    ds, matrix = _load_inputs(args)
    direction = args.direction or MEASURES[args.measure].direction_default
    cfg = SearchConfig(
        measure=args.measure,
        direction=direction,
        beam_width=args.beam_width,
        depth=args.depth,
        min_support=args.min_support,
        top_q=args.top,
        bins=args.bins,
        binning=args.binning,
        positive=_positive(args),
        jobs=args.jobs,
    )
    started = time.perf_counter()
    results = beam_search(ds, matrix, cfg)
    report = RunReport(
        cfg, results.baseline, results,
        time.perf_counter() - started, _fingerprints(args, ds, matrix),
    )
    if args.format == "table":
        _write_out(_report_table(report, ds, args.ascii), args.out)
    elif args.format == "csv":
        _write_out(_report_csv(report), args.out)
    else:
        _write_out(json.dumps(report.as_dict(), indent=2) + "\n", args.out)
    return 0


def _palette(k: int) -> np.ndarray:
    # evenly spaced hues stay distinct for any class count
    colors = [colorsys.hsv_to_rgb(i / k, 0.85, 0.95) for i in range(k)]
    return (np.asarray(colors) * 255).astype(np.uint8)


_BAND_WIDTH = 3
_MEMBER_RGB = (178, 34, 34)
_BLANK_RGB = (255, 255, 255)


def cmd_export_matrix(args) -> int:
    ds, matrix = _load_inputs(args)
    member = np.zeros(ds.m, dtype=bool)
    banded = args.description is not None
    if banded:
        member = evaluate(parse_description(args.description, ds), ds).mask

    # lexicographic by the row's predicted label codes; ties keep input order
    order = np.lexsort(tuple(matrix.entries[:, j] for j in reversed(range(matrix.n))))

    base, ext = os.path.splitext(args.out)
    if ext.lower() not in (".ppm", ".pgm", ".csv"):
        base = args.out
    csv_path, ppm_path = base + ".csv", base + ".ppm"

    import csv as _csv

    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        header = ["sorted_pos", "original_index", *matrix.names]
        if ds.truth is not None:
            header.append("truth")
        header.append("member")
        writer.writerow(header)
        for pos, idx in enumerate(order):
            row = [pos, int(idx)]
            row += [matrix.classes.text(int(c)) for c in matrix.entries[idx]]
            if ds.truth is not None:
                row.append(ds.classes.text(int(ds.truth[idx])))
            row.append(int(member[idx]))
            writer.writerow(row)

    k = max(len(matrix.classes), int(matrix.entries.max()) + 1)
    palette = _palette(k)
    body = palette[matrix.entries[order]]  # (m, n, 3)
    if banded:
        band = np.where(
            member[order][:, None, None],
            np.array(_MEMBER_RGB, dtype=np.uint8),
            np.array(_BLANK_RGB, dtype=np.uint8),
        )
        band = np.broadcast_to(band, (ds.m, _BAND_WIDTH, 3))
        gap = np.full((ds.m, 1, 3), 255, dtype=np.uint8)
        body = np.concatenate([band, gap, body], axis=1)
    height, width = body.shape[0], body.shape[1]
    with open(ppm_path, "wb") as fh:
        fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(body, dtype=np.uint8).tobytes())

    print(csv_path)
    print(ppm_path)
    return 0


def cmd_baseline(args) -> int:
    ds, matrix = _load_inputs(args)
    requested = args.measure
    tokens = requested if requested else sorted(MEASURES)
    for token in tokens:
        if token not in MEASURES:
            raise ConfigError(f"unknown measure {token!r}")
    for token in tokens:
        try:
            value = measure_baseline(token, ds, matrix, positive=_positive(args))
        except ConfigError as e:
            if requested:
                raise
            print(f"note: skipping {token}: {e}", file=sys.stderr)
            continue
        print(f"{token}(DS)={value:.3f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="controversy",
        description="Find subgroups of a dataset where classifiers "
                    "exceptionally agree or disagree.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p):
        p.add_argument("--data", required=True, help="dataset CSV")
        p.add_argument("--schema", required=True, help="schema JSON with column roles")
        p.add_argument("--predictions", required=True, help="prediction matrix CSV")

    mine = sub.add_parser("mine", help="search for exceptional subgroups")
    add_inputs(mine)
    mine.add_argument("--measure", default="row", choices=sorted(MEASURES))
    mine.add_argument("--direction", choices=("max", "min"), default=None,
                      help="default: max, except min for rasl")
    mine.add_argument("--beam-width", type=int, default=25)
    mine.add_argument("--depth", type=int, default=3)
    mine.add_argument("--min-support", type=float, default=0.04,
                      help="minimum subgroup size as a fraction of the dataset")
    mine.add_argument("--bins", type=int, default=7)
    mine.add_argument("--binning", choices=BINNINGS, default="equal-width")
    mine.add_argument("--top", type=int, default=10)
    mine.add_argument("--positive", default=None,
                      help="positive class label for rasl; default: the "
                           "dictionary's second label")
    mine.add_argument("--jobs", type=int, default=1,
                      help="worker threads; results do not depend on this")
    mine.add_argument("--seed", type=int, default=None,
                      help="reserved; the search is deterministic and ignores it")
    mine.add_argument("--format", choices=("table", "csv", "json"), default="table")
    mine.add_argument("--ascii", action="store_true",
                      help="ASCII operators in table output")
    mine.add_argument("--out", default=None, help="write output here instead of stdout")
    mine.set_defaults(func=cmd_mine)

    export = sub.add_parser(
        "export-matrix",
        help="write the label-sorted prediction matrix as image plus CSV",
    )
    add_inputs(export)
    export.add_argument("--description", default=None,
                        help="mark this subgroup's rows with a margin band")
    export.add_argument("--out", required=True, help="output base path")
    export.set_defaults(func=cmd_export_matrix)

    baseline = sub.add_parser("baseline", help="whole-dataset measure values")
    add_inputs(baseline)
    baseline.add_argument("--measure", action="append", default=None,
                          help="repeatable; default: every supported measure")
    baseline.add_argument("--positive", default=None)
    baseline.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except MiningError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
