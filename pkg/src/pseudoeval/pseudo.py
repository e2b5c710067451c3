"""Pseudo-supervised checkpoint scoring.

Target-domain features (pre-translation) are clustered into N groups;
every bijective cluster-to-class assignment ("scenario") is scored
against each checkpoint's predictions with balanced accuracy and, for
the binary case, AUC. Per metric, the scenario with the best mean over
checkpoints is adopted and the best checkpoint inside it is selected.

Balanced accuracy and AUC are computed in exact rational arithmetic
(counts and half-integer rank sums), so the binary complement identity
score(s) + score(swapped s) = 1 holds exactly.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .data_io import join_by_id, load_predictions
from .errors import (
    EmptyCluster,
    IdMismatch,
    InputError,
    NotBinary,
    SingleClassPresent,
    TooManyClasses,
)
from .gmm import GmmConfig, fit_gmm
from .stats import as_matrix, average_ranks

MAX_CLASSES = 8
BALANCED_ACCURACY = "balanced_accuracy"
AUC = "auc"


@dataclass(frozen=True)
class PcaConfig:
    n_components: int | None = None  # default min(d, n-1, 64)
    whiten: bool = True


@dataclass(frozen=True)
class PseudoLabeling:
    ids: tuple
    cluster_of: np.ndarray  # (n,) ints in [0, N)
    n_clusters: int
    converged: bool = True
    final_log_likelihood: float = float("nan")

    def __post_init__(self):
        clusters = np.asarray(self.cluster_of, dtype=np.int64)
        counts = np.bincount(clusters, minlength=self.n_clusters)
        empty = np.nonzero(counts == 0)[0]
        if empty.size:
            raise EmptyCluster(f"clusters {empty.tolist()} captured no samples")
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "cluster_of", clusters)
        self.cluster_of.setflags(write=False)


@dataclass(frozen=True)
class Scenario:
    assignment: tuple  # assignment[cluster] = class label

    def __post_init__(self):
        if sorted(self.assignment) != list(range(len(self.assignment))):
            raise InputError(f"not a permutation: {self.assignment}")
        object.__setattr__(self, "assignment", tuple(self.assignment))

    def apply(self, cluster_of):
        return np.asarray(self.assignment)[cluster_of]

    def swapped(self):
        """Binary complement scenario."""
        if len(self.assignment) != 2:
            raise NotBinary("swap is defined for two clusters only")
        return Scenario(assignment=(self.assignment[1], self.assignment[0]))


def enumerate_scenarios(n_classes):
    """All bijective cluster-to-class maps, lexicographically ordered."""
    if n_classes > MAX_CLASSES:
        raise TooManyClasses(
            f"{n_classes}! scenarios: the scenario count grows factorially, "
            f"at most {MAX_CLASSES} classes are supported"
        )
    if n_classes < 2:
        raise InputError("need at least 2 classes")
    return [Scenario(assignment=p) for p in itertools.permutations(range(n_classes))]


def _pca_project(x, cfg):
    n, d = x.shape
    k = min(d, n - 1, cfg.n_components if cfg.n_components else 64)
    centered = x - x.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    proj = centered @ vt[:k].T
    if cfg.whiten:
        scale = s[:k] / math.sqrt(n - 1)
        proj = proj / np.maximum(scale, np.finfo(np.float64).tiny)
    return proj


def generate_pseudo_labels(target_features, n_classes, cfg=None, pca=None):
    """Cluster the untranslated target validation features into
    n_classes groups; cluster indices become the pseudo labels."""
    if n_classes < 2:
        raise InputError("pseudo-labeling needs at least 2 classes")
    if cfg is None:
        cfg = GmmConfig(n_components=n_classes)
    elif cfg.n_components != n_classes:
        raise InputError(
            f"cfg.n_components={cfg.n_components} disagrees with n_classes={n_classes}"
        )
    x = as_matrix(target_features)
    if pca is not None:
        x = _pca_project(x, pca)
    fit = fit_gmm(x, cfg)
    return PseudoLabeling(
        ids=tuple(target_features.ids),
        cluster_of=fit.assignments,
        n_clusters=n_classes,
        converged=fit.converged,
        final_log_likelihood=fit.final_log_likelihood,
    )


def _joined_predictions(pseudo, preds):
    if set(pseudo.ids) != set(preds.ids):
        missing = sorted(set(pseudo.ids) - set(preds.ids))[:3]
        raise IdMismatch(f"prediction ids do not cover pseudo ids (e.g. {missing})")
    return join_by_id(pseudo.ids, preds.ids, preds.probs)


def hard_labels(probs):
    """Argmax class per row; ties resolve to the lowest class index."""
    return np.argmax(probs, axis=1)


def pseudo_balanced_accuracy(pseudo, scenario, preds):
    """Macro-averaged recall of the argmax predictions against the
    scenario-mapped pseudo labels; exact rational arithmetic."""
    probs = _joined_predictions(pseudo, preds)
    y_true = scenario.apply(pseudo.cluster_of)
    y_pred = hard_labels(probs)
    total = Fraction(0)
    for c in range(pseudo.n_clusters):
        mask = y_true == c
        count = int(mask.sum())
        if count == 0:
            raise SingleClassPresent(f"pseudo class {c} is empty")
        total += Fraction(int(np.sum(y_pred[mask] == c)), count)
    return float(total / pseudo.n_clusters)


def pseudo_auc(pseudo, scenario, preds):
    """Mann-Whitney AUC of the positive-class probability column
    against the scenario-mapped pseudo labels; ties count half."""
    if pseudo.n_clusters != 2:
        raise NotBinary("pseudo AUC is defined for two clusters only")
    if preds.class_count != 2:
        raise NotBinary(f"expected 2 probability columns, got {preds.class_count}")
    probs = _joined_predictions(pseudo, preds)
    y_true = scenario.apply(pseudo.cluster_of)
    scores = probs[:, 1]
    n_pos = int(np.sum(y_true == 1))
    n_neg = y_true.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassPresent("one pseudo class is empty after the join")
    ranks = average_ranks(scores)
    # rank sums are exact multiples of 1/2: keep everything rational
    double_rank_sum = int(round(2.0 * float(ranks[y_true == 1].sum())))
    u = Fraction(double_rank_sum, 2) - Fraction(n_pos * (n_pos + 1), 2)
    return float(u / (n_pos * n_neg))


@dataclass(frozen=True)
class PseudoScoreTable:
    iterations: tuple                 # checkpoint iterations, ascending
    scenarios: tuple                  # Scenario list, lexicographic
    metrics: tuple
    scores: dict                      # metric -> (n_ckpt, n_scenario) array
    scenario_means: dict              # metric -> (n_scenario,) array
    adopted_scenario: dict            # metric -> scenario index
    best_checkpoint: dict             # metric -> iteration

    def adopted_assignment(self, metric):
        return self.scenarios[self.adopted_scenario[metric]].assignment

    def adopted_scores(self, metric):
        """Per-checkpoint scores under the adopted scenario."""
        return self.scores[metric][:, self.adopted_scenario[metric]]


_METRIC_FUNCS = {
    BALANCED_ACCURACY: pseudo_balanced_accuracy,
    AUC: pseudo_auc,
}


def evaluate_checkpoints(manifest, pseudo, metrics=(BALANCED_ACCURACY, AUC)):
    """Score every checkpoint under every scenario and metric, adopt
    the best-mean scenario per metric, and pick the best checkpoint
    (ties go to the lowest iteration)."""
    metrics = tuple(metrics)
    for m in metrics:
        if m not in _METRIC_FUNCS:
            raise InputError(f"unknown pseudo metric {m!r}")
    scenarios = enumerate_scenarios(pseudo.n_clusters)
    iterations = manifest.iterations
    scores = {m: np.zeros((len(iterations), len(scenarios))) for m in metrics}
    for ci, record in enumerate(manifest.checkpoints):
        try:
            preds = load_predictions(record.prediction_path)
            for si, scenario in enumerate(scenarios):
                for m in metrics:
                    scores[m][ci, si] = _METRIC_FUNCS[m](pseudo, scenario, preds)
        except InputError as exc:
            raise type(exc)(f"checkpoint {record.iteration}: {exc}") from exc
    scenario_means = {m: scores[m].mean(axis=0) for m in metrics}
    adopted = {m: int(np.argmax(scenario_means[m])) for m in metrics}
    best = {
        m: int(iterations[int(np.argmax(scores[m][:, adopted[m]]))]) for m in metrics
    }
    return PseudoScoreTable(
        iterations=tuple(iterations),
        scenarios=tuple(scenarios),
        metrics=metrics,
        scores=scores,
        scenario_means=scenario_means,
        adopted_scenario=adopted,
        best_checkpoint=best,
    )
