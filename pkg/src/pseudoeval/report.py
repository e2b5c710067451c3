"""Report assembly: ranking curves, correlation panels, picked-model
rows, and the JSON report document behind the CLI."""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import baselines as bl
from . import stats
from .data_io import load_features, load_labels, load_predictions
from .errors import InputError, MissingTrueLabels, NotBinary, ZeroVariance
from .gmm import GmmConfig
from .pseudo import (
    AUC,
    BALANCED_ACCURACY,
    PseudoLabeling,
    Scenario,
    evaluate_checkpoints,
    generate_pseudo_labels,
    pseudo_auc,
    pseudo_balanced_accuracy,
)

SCHEMA_VERSION = 1

ORIENTATION = {
    "pseudo_balanced_accuracy": bl.HIGHER_BETTER,
    "pseudo_auc": bl.HIGHER_BETTER,
    "fid": bl.LOWER_BETTER,
    "kid": bl.LOWER_BETTER,
    "mmd_linear": bl.LOWER_BETTER,
    "mmd_gaussian": bl.LOWER_BETTER,
    "is": bl.HIGHER_BETTER,
}


@dataclass(frozen=True)
class RankingCurve:
    metric: str
    true_metric: str
    # rows: (rank, iteration, ranking metric value, true metric value)
    rows: tuple

    def true_values_in_rank_order(self):
        return [r[3] for r in self.rows]


@dataclass(frozen=True)
class CorrelationPanel:
    metric: str
    true_metric: str
    values: tuple
    true_values: tuple
    r_squared: float | None = None
    pearson: float | None = None
    spearman: float | None = None
    kendall: float | None = None
    warnings: tuple = ()


def rank_checkpoints(
    iterations, values, orientation, true_values, metric="", true_metric=""
):
    """Best-first ranking of checkpoints by `values`; ties resolve to
    the lower iteration. `true_values` fills the reference column."""
    if true_values is None:
        raise MissingTrueLabels("ranking curves need true metric values")
    if len(iterations) < 2:
        raise InputError("need at least 2 checkpoints to rank")
    if not (len(iterations) == len(values) == len(true_values)):
        raise InputError("iterations/values/true_values lengths differ")
    sign = -1.0 if orientation == bl.HIGHER_BETTER else 1.0
    order = sorted(
        range(len(iterations)), key=lambda i: (sign * values[i], iterations[i])
    )
    rows = tuple(
        (rank, int(iterations[i]), float(values[i]), float(true_values[i]))
        for rank, i in enumerate(order, start=1)
    )
    return RankingCurve(metric=metric, true_metric=true_metric, rows=rows)


def correlate(values, true_values):
    """All four correlation measures; constant inputs degrade to a
    ZeroVariance warning instead of failing."""
    warnings = []
    out = {}
    for name, func in (
        ("r_squared", stats.r_squared),
        ("pearson", stats.pearson),
        ("spearman", stats.spearman),
        ("kendall", stats.kendall_tau_b),
    ):
        try:
            out[name] = func(values, true_values)
        except ZeroVariance as exc:
            out[name] = None
            warnings.append(f"ZeroVariance: {name}: {exc}")
    return out, warnings


@dataclass(frozen=True)
class EvaluationReport:
    schema_version: int
    manifest_digest: str
    class_count: int
    iterations: tuple
    pseudo: dict
    baselines: dict            # metric -> list of values aligned with iterations
    true_metrics: dict         # metric -> list of values (validation mode only)
    curves: tuple              # RankingCurve
    panels: tuple              # CorrelationPanel
    picked: tuple              # per-metric picked-model rows
    warnings: tuple = ()

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "manifest_digest": self.manifest_digest,
            "class_count": self.class_count,
            "iterations": list(self.iterations),
            "pseudo": self.pseudo,
            "baselines": self.baselines,
            "true_metrics": self.true_metrics,
            "curves": [
                {
                    "metric": c.metric,
                    "true_metric": c.true_metric,
                    "rows": [list(r) for r in c.rows],
                }
                for c in self.curves
            ],
            "panels": [
                {
                    "metric": p.metric,
                    "true_metric": p.true_metric,
                    "values": list(p.values),
                    "true_values": list(p.true_values),
                    "r_squared": p.r_squared,
                    "pearson": p.pearson,
                    "spearman": p.spearman,
                    "kendall": p.kendall,
                    "warnings": list(p.warnings),
                }
                for p in self.panels
            ],
            "picked": [dict(row) for row in self.picked],
            "warnings": list(self.warnings),
        }


def _manifest_digest(manifest):
    doc = {
        "class_count": manifest.class_count,
        "target_feature_path": manifest.target_feature_path,
        "checkpoints": [
            [c.iteration, c.prediction_path, c.feature_path]
            for c in manifest.checkpoints
        ],
    }
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def _labeling_from_truth(label_file):
    return PseudoLabeling(
        ids=label_file.ids,
        cluster_of=label_file.labels,
        n_clusters=label_file.class_count,
    )


def _identity_scenario(n):
    return Scenario(assignment=tuple(range(n)))


def true_balanced_accuracy(label_file, preds):
    return pseudo_balanced_accuracy(
        _labeling_from_truth(label_file), _identity_scenario(label_file.class_count), preds
    )


def true_auc(label_file, preds):
    return pseudo_auc(_labeling_from_truth(label_file), _identity_scenario(2), preds)


def build_report(
    manifest,
    *,
    seed=0,
    metrics=None,
    pca=None,
    gmm_cfg=None,
    mmd_bandwidth=None,
    kid_subsets=100,
    kid_subset_size=None,
    is_splits=1,
    true_labels_path=None,
):
    """Run pseudo-supervised scoring plus the baseline suite over every
    checkpoint; with true labels, add curves, panels, and picked-model
    comparison rows."""
    warnings = []
    binary = manifest.class_count == 2
    if metrics is None:
        metrics = (BALANCED_ACCURACY, AUC) if binary else (BALANCED_ACCURACY,)
    if AUC in metrics and not binary:
        raise NotBinary("pseudo AUC requires exactly 2 classes")

    target = load_features(manifest.target_feature_path)
    if gmm_cfg is None:
        gmm_cfg = GmmConfig(n_components=manifest.class_count, seed=seed)
    pseudo = generate_pseudo_labels(target, manifest.class_count, gmm_cfg, pca)
    if not pseudo.converged:
        warnings.append("GMM did not converge within max_iter")

    table = evaluate_checkpoints(manifest, pseudo, metrics)

    # per-checkpoint metric columns, aligned with manifest iterations
    columns = {}
    columns["pseudo_balanced_accuracy"] = list(table.adopted_scores(BALANCED_ACCURACY))
    if AUC in metrics:
        columns["pseudo_auc"] = list(table.adopted_scores(AUC))

    baseline_values = {m: [] for m in ("fid", "kid", "mmd_linear", "mmd_gaussian")}
    is_values = []
    have_features = all(c.feature_path for c in manifest.checkpoints)
    for record in manifest.checkpoints:
        preds = load_predictions(record.prediction_path)
        is_values.append(bl.inception_score(preds, n_splits=is_splits).value)
        if not have_features:
            continue
        fake = load_features(record.feature_path)
        if min(target.n, fake.n) < target.d:
            warnings.append(
                f"fid at iteration {record.iteration}: sample count "
                f"{min(target.n, fake.n)} below feature dimension {target.d}"
            )
        baseline_values["fid"].append(bl.fid(target, fake).value)
        bw = mmd_bandwidth or bl.median_heuristic_bandwidth(target, fake, seed=seed)
        baseline_values["mmd_linear"].append(
            bl.mmd_unbiased(target, fake, stats.Kernel("linear")).value
        )
        baseline_values["mmd_gaussian"].append(
            bl.mmd_unbiased(target, fake, stats.Kernel("gaussian", bandwidth=bw)).value
        )
        baseline_values["kid"].append(
            bl.kid(
                target,
                fake,
                subset_size=kid_subset_size,
                n_subsets=kid_subsets,
                seed=seed,
            ).value
        )
    columns["is"] = is_values
    if have_features:
        columns.update(baseline_values)

    # validation mode
    true_metrics = {}
    curves = []
    panels = []
    label_file = None
    if true_labels_path is not None:
        label_file = load_labels(true_labels_path, manifest.class_count)
        tba, tauc = [], []
        for record in manifest.checkpoints:
            preds = load_predictions(record.prediction_path)
            tba.append(true_balanced_accuracy(label_file, preds))
            if binary:
                tauc.append(true_auc(label_file, preds))
        true_metrics[BALANCED_ACCURACY] = tba
        if binary:
            true_metrics[AUC] = tauc
        for true_name, true_vals in true_metrics.items():
            for metric, vals in columns.items():
                curves.append(
                    rank_checkpoints(
                        list(manifest.iterations),
                        vals,
                        ORIENTATION[metric],
                        true_vals,
                        metric=metric,
                        true_metric=true_name,
                    )
                )
                corr, corr_warnings = correlate(vals, true_vals)
                warnings.extend(
                    f"panel {metric} vs {true_name}: {w}" for w in corr_warnings
                )
                panels.append(
                    CorrelationPanel(
                        metric=metric,
                        true_metric=true_name,
                        values=tuple(float(v) for v in vals),
                        true_values=tuple(float(v) for v in true_vals),
                        warnings=tuple(corr_warnings),
                        **corr,
                    )
                )

    # picked-model comparison rows
    picked = []
    iterations = list(manifest.iterations)
    for metric, vals in columns.items():
        if metric == "pseudo_balanced_accuracy":
            iteration = table.best_checkpoint[BALANCED_ACCURACY]
        elif metric == "pseudo_auc":
            iteration = table.best_checkpoint[AUC]
        else:
            sign = -1.0 if ORIENTATION[metric] == bl.HIGHER_BETTER else 1.0
            iteration = iterations[
                min(range(len(vals)), key=lambda i: (sign * vals[i], iterations[i]))
            ]
        row = {"metric": metric, "iteration": int(iteration)}
        if label_file is not None:
            idx = iterations.index(iteration)
            row["true_balanced_accuracy"] = true_metrics[BALANCED_ACCURACY][idx]
            row["true_auc"] = true_metrics[AUC][idx] if binary else None
        picked.append(row)

    pseudo_doc = {
        "metrics": list(table.metrics),
        "scenarios": [list(s.assignment) for s in table.scenarios],
        "cluster_sizes": np.bincount(
            pseudo.cluster_of, minlength=pseudo.n_clusters
        ).tolist(),
        "scores": {m: table.scores[m].tolist() for m in table.metrics},
        "scenario_means": {m: table.scenario_means[m].tolist() for m in table.metrics},
        "adopted_scenario": {
            m: {
                "index": table.adopted_scenario[m],
                "assignment": list(table.adopted_assignment(m)),
            }
            for m in table.metrics
        },
        "best_checkpoint": dict(table.best_checkpoint),
        "gmm_converged": bool(pseudo.converged),
        "gmm_final_log_likelihood": float(pseudo.final_log_likelihood),
    }

    return EvaluationReport(
        schema_version=SCHEMA_VERSION,
        manifest_digest=_manifest_digest(manifest),
        class_count=manifest.class_count,
        iterations=tuple(int(i) for i in manifest.iterations),
        pseudo=pseudo_doc,
        baselines={m: [float(v) for v in vals] for m, vals in columns.items()},
        true_metrics={m: [float(v) for v in vals] for m, vals in true_metrics.items()},
        curves=tuple(curves),
        panels=tuple(panels),
        picked=tuple(picked),
        warnings=tuple(warnings),
    )


def write_plot_data(report, out_dir):
    """One CSV per ranking curve with header rank,metric_value,true_value
    so external tools can redraw the ranking figures."""
    import csv
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for curve in report.curves:
        path = os.path.join(out_dir, f"curve_{curve.metric}_vs_{curve.true_metric}.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["rank", "metric_value", "true_value"])
            for rank, _, value, true_value in curve.rows:
                writer.writerow([rank, repr(value), repr(true_value)])
        paths.append(path)
    return paths
