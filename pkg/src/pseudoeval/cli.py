"""Command-line front end.

Subcommands:
  cluster    features -> pseudo label CSV
  evaluate   manifest -> pseudo-supervised report (no true labels)
  baselines  two feature files -> baseline metric scores
  validate   manifest + true labels -> full report with curves/panels

Exit codes: 0 success, 1 input error, 2 numerical failure.
Warnings never change the exit code.
"""

import argparse
import json
import sys

from . import baselines as bl
from . import data_io, report
from .errors import InputError, NumericalError
from .gmm import GmmConfig
from .pseudo import PcaConfig, generate_pseudo_labels
from .stats import Kernel


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="output file path")


def _add_gmm(parser):
    parser.add_argument("--classes", type=int, default=None,
                        help="number of classes N (default: manifest class_count)")
    parser.add_argument("--pca", action="store_true",
                        help="project features with whitened PCA before clustering")


def _add_metric_flags(parser):
    parser.add_argument("--metrics", default=None,
                        help="comma-separated pseudo metrics (balanced_accuracy,auc)")
    parser.add_argument("--mmd-bandwidth", type=float, default=None,
                        help="gaussian MMD bandwidth (default: median heuristic)")
    parser.add_argument("--kid-subsets", type=int, default=100)
    parser.add_argument("--kid-subset-size", type=int, default=None)
    parser.add_argument("--is-splits", type=int, default=1)
    parser.add_argument("--plot-data", default=None, metavar="DIR",
                        help="also write per-curve CSV plot data into DIR")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pseudoeval",
        description="Pseudo-supervised checkpoint evaluation for "
        "image-to-image translation models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster target features into pseudo labels")
    p.add_argument("--features", required=True)
    _add_gmm(p)
    _add_common(p)

    p = sub.add_parser("evaluate", help="score all checkpoints in a manifest")
    p.add_argument("--manifest", required=True)
    _add_gmm(p)
    _add_metric_flags(p)
    _add_common(p)

    p = sub.add_parser("baselines", help="baseline metrics for two feature files")
    p.add_argument("--real", required=True, help="reference feature file")
    p.add_argument("--fake", required=True, help="generated-set feature file")
    p.add_argument("--preds", default=None,
                   help="prediction CSV for the Inception Score")
    _add_metric_flags(p)
    _add_common(p)

    p = sub.add_parser("validate", help="full report against true labels")
    p.add_argument("--manifest", required=True)
    p.add_argument("--labels", required=True, help="true label CSV")
    _add_gmm(p)
    _add_metric_flags(p)
    _add_common(p)
    return parser


def _cmd_cluster(args):
    features = data_io.load_features(args.features)
    if args.classes is None:
        raise InputError("cluster requires --classes")
    cfg = GmmConfig(n_components=args.classes, seed=args.seed)
    pseudo = generate_pseudo_labels(
        features, args.classes, cfg, PcaConfig() if args.pca else None
    )
    lf = data_io.LabelFile(
        ids=pseudo.ids, labels=pseudo.cluster_of, class_count=args.classes
    )
    data_io.save_labels(lf, args.out)
    if not pseudo.converged:
        print("warning: GMM did not converge within max_iter", file=sys.stderr)
    print(f"wrote {args.out} ({len(pseudo.ids)} pseudo labels)")


def _report_kwargs(args, manifest):
    metrics = None
    if args.metrics:
        metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    cfg = GmmConfig(
        n_components=args.classes or manifest.class_count, seed=args.seed
    )
    return dict(
        seed=args.seed,
        metrics=metrics,
        pca=PcaConfig() if args.pca else None,
        gmm_cfg=cfg,
        mmd_bandwidth=args.mmd_bandwidth,
        kid_subsets=args.kid_subsets,
        kid_subset_size=args.kid_subset_size,
        is_splits=args.is_splits,
    )


def _emit_report(rep, args):
    data_io.save_report(rep, args.out)
    if getattr(args, "plot_data", None):
        report.write_plot_data(rep, args.plot_data)
    for warning in rep.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {args.out}")


def _cmd_evaluate(args):
    manifest = data_io.load_manifest(args.manifest)
    rep = report.build_report(manifest, **_report_kwargs(args, manifest))
    _emit_report(rep, args)


def _cmd_validate(args):
    manifest = data_io.load_manifest(args.manifest)
    rep = report.build_report(
        manifest, true_labels_path=args.labels, **_report_kwargs(args, manifest)
    )
    _emit_report(rep, args)


def _cmd_baselines(args):
    real = data_io.load_features(args.real)
    fake = data_io.load_features(args.fake)
    bw = args.mmd_bandwidth or bl.median_heuristic_bandwidth(real, fake, seed=args.seed)
    scores = [
        bl.fid(real, fake),
        bl.mmd_unbiased(real, fake, Kernel("linear")),
        bl.mmd_unbiased(real, fake, Kernel("gaussian", bandwidth=bw)),
        bl.kid(
            real,
            fake,
            subset_size=args.kid_subset_size,
            n_subsets=args.kid_subsets,
            seed=args.seed,
        ),
    ]
    if args.preds:
        preds = data_io.load_predictions(args.preds)
        scores.append(bl.inception_score(preds, n_splits=args.is_splits))
    doc = {
        s.metric: {
            "value": s.value,
            "orientation": s.orientation,
            "sample_sizes": list(s.sample_sizes),
        }
        for s in scores
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}")


_COMMANDS = {
    "cluster": _cmd_cluster,
    "evaluate": _cmd_evaluate,
    "baselines": _cmd_baselines,
    "validate": _cmd_validate,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
