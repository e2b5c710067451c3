import os

import numpy as np
import pytest

from pseudoeval import (
    CheckpointManifest,
    CheckpointRecord,
    FeatureMatrix,
    LabelFile,
    PredictionSet,
    save_features,
    save_labels,
    save_manifest,
    save_predictions,
)


def make_features(values, prefix="s"):
    values = np.asarray(values)
    ids = tuple(f"{prefix}{i:05d}" for i in range(values.shape[0]))
    return FeatureMatrix(ids=ids, values=values)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def two_blob_features(n_per_blob=200, d=16, separation=100.0, seed=0):
    """Two spherical unit-variance blobs whose centers sit `separation`
    standard deviations apart along the all-ones direction."""
    gen = np.random.default_rng(seed)
    offset = separation / np.sqrt(d)
    a = gen.normal(0.0, 1.0, size=(n_per_blob, d))
    b = gen.normal(0.0, 1.0, size=(n_per_blob, d)) + offset
    values = np.vstack([a, b])
    labels = np.array([0] * n_per_blob + [1] * n_per_blob)
    return make_features(values), labels


def write_synthetic_suite(
    root,
    n=600,
    d=32,
    n_checkpoints=30,
    seed=7,
    separation=30.0,
    with_checkpoint_features=False,
):
    """A toy target set with two well-separated Gaussian classes plus a
    ladder of checkpoints whose prediction quality degrades with the
    checkpoint index. Returns (manifest_path, labels_path, true_labels)."""
    os.makedirs(root, exist_ok=True)
    gen = np.random.default_rng(seed)
    labels = gen.integers(0, 2, size=n)
    labels[:2] = [0, 1]  # both classes guaranteed
    offset = separation / np.sqrt(d)
    values = gen.normal(0.0, 1.0, size=(n, d)) + offset * labels[:, None]
    features = make_features(values)
    target_path = os.path.join(root, "target.f32")
    save_features(features, target_path)

    labels_path = os.path.join(root, "labels.csv")
    save_labels(LabelFile(ids=features.ids, labels=labels, class_count=2), labels_path)

    records = []
    for t in range(1, n_checkpoints + 1):
        noise_level = t / (n_checkpoints + 1)
        uniform = gen.random(n)
        scores = (1.0 - noise_level) * labels + noise_level * uniform
        probs = np.column_stack([1.0 - scores, scores])
        pred_path = os.path.join(root, f"preds_{t:03d}.csv")
        save_predictions(PredictionSet(ids=features.ids, probs=probs), pred_path)
        feature_path = None
        if with_checkpoint_features:
            fake = values + gen.normal(0.0, 3.0 * noise_level, size=(n, d))
            feature_path = os.path.join(root, f"features_{t:03d}.f32")
            save_features(make_features(fake), feature_path)
        records.append(
            CheckpointRecord(
                iteration=10000 * t,
                prediction_path=pred_path,
                feature_path=feature_path,
            )
        )
    manifest = CheckpointManifest(
        class_count=2, target_feature_path=target_path, checkpoints=tuple(records)
    )
    manifest_path = os.path.join(root, "manifest.json")
    save_manifest(manifest, manifest_path)
    return manifest_path, labels_path, labels
