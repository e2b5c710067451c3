"""Pseudo-supervised checkpoint evaluation toolkit.

Clusters unlabeled target-domain features into pseudo classes, scores
image-to-image translation checkpoints with pseudo-supervised metrics
(balanced accuracy, AUC), computes the usual generative baselines
(FID, KID, MMD, Inception Score), and selects the best checkpoint.
"""

from . import errors
from .baselines import (
    BaselineScore,
    fid,
    fid_from_summaries,
    inception_score,
    kid,
    median_heuristic_bandwidth,
    mmd_unbiased,
)
from .data_io import (
    CheckpointManifest,
    CheckpointRecord,
    FeatureMatrix,
    LabelFile,
    PredictionSet,
    load_features,
    load_labels,
    load_manifest,
    load_predictions,
    load_report,
    save_features,
    save_labels,
    save_manifest,
    save_predictions,
    save_report,
)
from .gmm import GmmConfig, GmmFit, fit_gmm, predict_responsibilities
from .pseudo import (
    PcaConfig,
    PseudoLabeling,
    PseudoScoreTable,
    Scenario,
    enumerate_scenarios,
    evaluate_checkpoints,
    generate_pseudo_labels,
    pseudo_auc,
    pseudo_balanced_accuracy,
)
from .report import (
    CorrelationPanel,
    EvaluationReport,
    RankingCurve,
    build_report,
    correlate,
    rank_checkpoints,
    true_auc,
    true_balanced_accuracy,
    write_plot_data,
)
from .stats import (
    ConfusionMatrix,
    GaussianSummary,
    Kernel,
    average_ranks,
    confusion,
    gaussian_summary,
    kendall_tau_b,
    kernel_eval,
    pearson,
    r_squared,
    spearman,
    sqrtm_psd,
)

__version__ = "0.1.0"
