"""Command line interface: prepare datasets, predict, render figures."""

import argparse
import sys

from . import datasets, figures
from .predict import FAMILIES
from .predict import predict as run_predict
from .registry import DATASET_IDS, REGISTRY


def cmd_prepare(args):
    data_path, schema_path = datasets.prepare(args.dataset, args.data_root)
    print(data_path)
    print(schema_path)
    return 0


def cmd_predict(args):
    path = run_predict(args.dataset, data_root=args.data_root,
                           seed=args.seed, folds=args.folds,
                           families=tuple(args.families))
    print(path)
    return 0


def cmd_figures(args):
    for path in figures.render(args.ordering, args.out_dir):
        print(path)
    return 0


def cmd_list(args):
    for dataset_id in DATASET_IDS:
        spec = REGISTRY[dataset_id]
        origin = "generated" if spec.generated else "raw files required"
        print(f"{dataset_id}: {spec.cases} cases, {spec.discrete} discrete, "
              f"{spec.numeric} numeric, {spec.classes} classes ({origin})")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="harness",
        description="Prepare benchmark datasets, generate cross-validated "
                    "committee predictions, and render figures from miner "
                    "output.")
    sub = parser.add_subparsers(dest="command", required=True)

    prepare = sub.add_parser("prepare",
                             help="write data.csv + schema.json for a dataset")
    prepare.add_argument("dataset", choices=DATASET_IDS)
    prepare.add_argument("--data-root", default="data")
    prepare.set_defaults(func=cmd_prepare)

    pred = sub.add_parser("predict",
                          help="write out-of-fold predictions.csv")
    pred.add_argument("dataset", choices=DATASET_IDS)
    pred.add_argument("--seed", type=int, default=0)
    pred.add_argument("--folds", type=int, default=10)
    pred.add_argument("--families", nargs="+", default=list(FAMILIES),
                      choices=list(FAMILIES))
    pred.add_argument("--data-root", default="data")
    pred.set_defaults(func=cmd_predict)

    figs = sub.add_parser("figures",
                          help="render figures from an export-matrix CSV")
    figs.add_argument("ordering", help="ordering CSV written by the miner")
    figs.add_argument("--out-dir", default=None)
    figs.set_defaults(func=cmd_figures)

    listing = sub.add_parser("list", help="list known datasets")
    listing.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (datasets.FetchError, datasets.PrepareError, FileNotFoundError,
            figures.RenderError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
