"""On-disk artifact formats and their loaders/writers.

Formats:
  * feature matrix: ``<name>.f32`` (little-endian float32, row-major)
    with JSON sidecar ``<name>.json`` holding ``{n, d, ids}``; a CSV
    alternative (``id,f0,...``) is accepted for small data
  * predictions / labels: UTF-8 CSV with a mandatory header
  * checkpoint manifest: JSON

Samples are always joined by string id, never by row position.
Loading is pure; loaded values are treated as immutable.
"""

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DuplicateId,
    IdMismatch,
    IoFailure,
    LabelOutOfRange,
    MalformedHeader,
    NegativeProbability,
    NonFiniteValue,
    RowSumViolation,
    UnsortedIterations,
)

ROW_SUM_TOL = 1e-6
# a parsed row whose sum is this close to 1 is kept verbatim so that
# save -> load round-trips bit-exactly; anything between this and
# ROW_SUM_TOL gets renormalized, beyond ROW_SUM_TOL is an error
ROW_SUM_EXACT = 1e-12


def _check_unique_ids(ids):
    seen = set()
    for sid in ids:
        if sid in seen:
            raise DuplicateId(f"duplicate sample id {sid!r}")
        seen.add(sid)


@dataclass(frozen=True)
class FeatureMatrix:
    ids: tuple
    values: np.ndarray  # (n, d) float32

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float32)
        if vals.ndim != 2:
            raise MalformedHeader("feature values must be a 2-d matrix")
        n, d = vals.shape
        if n < 2 or d < 1:
            raise MalformedHeader(f"need n >= 2 and d >= 1, got n={n}, d={d}")
        if len(self.ids) != n:
            raise MalformedHeader(f"{len(self.ids)} ids for {n} rows")
        _check_unique_ids(self.ids)
        bad = np.argwhere(~np.isfinite(vals))
        if bad.size:
            r, c = bad[0]
            raise NonFiniteValue(f"non-finite value at row {r}, column {c}")
        object.__setattr__(self, "ids", tuple(str(s) for s in self.ids))
        object.__setattr__(self, "values", vals)
        self.values.setflags(write=False)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class PredictionSet:
    ids: tuple
    probs: np.ndarray  # (n, K) float64

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 2 or probs.shape[1] < 2:
            raise MalformedHeader("predictions need an n x K matrix, K >= 2")
        if len(self.ids) != probs.shape[0]:
            raise MalformedHeader(
                f"{len(self.ids)} ids for {probs.shape[0]} rows"
            )
        _check_unique_ids(self.ids)
        if (probs < 0).any():
            i, j = np.argwhere(probs < 0)[0]
            raise NegativeProbability(f"negative probability at row {i}, column {j}")
        sums = probs.sum(axis=1)
        dev = np.abs(sums - 1.0)
        worst = int(np.argmax(dev))
        if dev[worst] > ROW_SUM_TOL:
            raise RowSumViolation(
                f"row {worst} (id {self.ids[worst]!r}) sums to {sums[worst]!r}"
            )
        fix = dev > ROW_SUM_EXACT
        if fix.any():
            probs = probs.copy()
            probs[fix] /= sums[fix, None]
        object.__setattr__(self, "ids", tuple(str(s) for s in self.ids))
        object.__setattr__(self, "probs", probs)
        self.probs.setflags(write=False)

    @property
    def n(self):
        return self.probs.shape[0]

    @property
    def class_count(self):
        return self.probs.shape[1]


@dataclass(frozen=True)
class CheckpointRecord:
    iteration: int
    prediction_path: str
    feature_path: str | None = None


@dataclass(frozen=True)
class CheckpointManifest:
    class_count: int
    target_feature_path: str
    checkpoints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.class_count < 2:
            raise MalformedHeader(f"class_count must be >= 2, got {self.class_count}")
        iters = [c.iteration for c in self.checkpoints]
        if any(i <= 0 for i in iters):
            raise MalformedHeader("iterations must be positive integers")
        if any(b <= a for a, b in zip(iters, iters[1:])):
            raise UnsortedIterations(f"iterations not strictly increasing: {iters}")
        object.__setattr__(self, "checkpoints", tuple(self.checkpoints))

    @property
    def iterations(self):
        return [c.iteration for c in self.checkpoints]


@dataclass(frozen=True)
class LabelFile:
    ids: tuple
    labels: np.ndarray  # (n,) int
    class_count: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or len(self.ids) != labels.shape[0]:
            raise MalformedHeader("ids and labels must have equal length")
        _check_unique_ids(self.ids)
        if labels.size and (labels.min() < 0 or labels.max() >= self.class_count):
            raise LabelOutOfRange(
                f"labels must lie in [0, {self.class_count})"
            )
        object.__setattr__(self, "ids", tuple(str(s) for s in self.ids))
        object.__setattr__(self, "labels", labels)
        self.labels.setflags(write=False)


# ------------------------------------------------------------------ features

def _sidecar_path(path):
    base, _ = os.path.splitext(path)
    return base + ".json"


def load_features(path):
    if not os.path.exists(path):
        raise IoFailure(f"no such file: {path}")
    if path.endswith(".csv"):
        return _load_features_csv(path)
    sidecar = _sidecar_path(path)
    if not os.path.exists(sidecar):
        raise MalformedHeader(f"missing sidecar {sidecar}")
    try:
        with open(sidecar, encoding="utf-8") as fh:
            header = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedHeader(f"unreadable sidecar {sidecar}: {exc}") from exc
    try:
        n, d, ids = int(header["n"]), int(header["d"]), list(header["ids"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHeader(f"sidecar {sidecar} missing n/d/ids") from exc
    if len(ids) != n:
        raise MalformedHeader(f"sidecar claims n={n} but lists {len(ids)} ids")
    payload = np.fromfile(path, dtype="<f4")
    if payload.size != n * d:
        raise MalformedHeader(
            f"payload holds {payload.size} floats, header claims {n}x{d}"
        )
    return FeatureMatrix(ids=tuple(ids), values=payload.reshape(n, d))


def _load_features_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path} is empty") from None
        if not header or header[0] != "id":
            raise MalformedHeader(f"{path}: first header column must be 'id'")
        d = len(header) - 1
        ids, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != d + 1:
                raise MalformedHeader(f"{path}:{lineno}: expected {d + 1} columns")
            ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return FeatureMatrix(ids=tuple(ids), values=np.array(rows, dtype=np.float32))


def save_features(fm, path):
    try:
        if path.endswith(".csv"):
            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(["id"] + [f"f{j}" for j in range(fm.d)])
                for sid, row in zip(fm.ids, fm.values):
                    writer.writerow([sid] + [repr(float(v)) for v in row])
            return
        np.asarray(fm.values, dtype="<f4").tofile(path)
        with open(_sidecar_path(path), "w", encoding="utf-8") as fh:
            json.dump({"n": fm.n, "d": fm.d, "ids": list(fm.ids)}, fh)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# --------------------------------------------------------------- predictions

def load_predictions(path):
    if not os.path.exists(path):
        raise IoFailure(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path} is empty") from None
        expected = ["id"] + [f"p{j}" for j in range(len(header) - 1)]
        if header != expected:
            raise MalformedHeader(f"{path}: header must be id,p0,...,p{{K-1}}")
        k = len(header) - 1
        ids, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != k + 1:
                raise MalformedHeader(f"{path}:{lineno}: expected {k + 1} columns")
            ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return PredictionSet(ids=tuple(ids), probs=np.array(rows, dtype=np.float64))


def save_predictions(ps, path):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id"] + [f"p{j}" for j in range(ps.class_count)])
            for sid, row in zip(ps.ids, ps.probs):
                writer.writerow([sid] + [repr(float(v)) for v in row])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# -------------------------------------------------------------------- labels

def load_labels(path, class_count):
    if not os.path.exists(path):
        raise IoFailure(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedHeader(f"{path} is empty") from None
        if header != ["id", "label"]:
            raise MalformedHeader(f"{path}: header must be id,label")
        ids, labels = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise MalformedHeader(f"{path}:{lineno}: expected 2 columns")
            ids.append(row[0])
            try:
                labels.append(int(row[1]))
            except ValueError:
                raise LabelOutOfRange(
                    f"{path}:{lineno}: label {row[1]!r} is not an integer"
                ) from None
    return LabelFile(ids=tuple(ids), labels=np.array(labels), class_count=class_count)


def save_labels(lf, path):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "label"])
            for sid, lab in zip(lf.ids, lf.labels):
                writer.writerow([sid, int(lab)])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# ------------------------------------------------------------------ manifest

def load_manifest(path):
    if not os.path.exists(path):
        raise IoFailure(f"no such file: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedHeader(f"unreadable manifest {path}: {exc}") from exc
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        full = p if os.path.isabs(p) else os.path.join(base, p)
        if not os.path.exists(full):
            raise IoFailure(f"manifest references missing file: {p}")
        return full

    try:
        class_count = int(doc["class_count"])
        target = resolve(doc["target_feature_path"])
        records = []
        for entry in doc["checkpoints"]:
            feat = entry.get("feature_path")
            records.append(
                CheckpointRecord(
                    iteration=int(entry["iteration"]),
                    prediction_path=resolve(entry["prediction_path"]),
                    feature_path=resolve(feat) if feat else None,
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHeader(f"manifest {path} malformed: {exc}") from exc
    return CheckpointManifest(
        class_count=class_count, target_feature_path=target, checkpoints=tuple(records)
    )


def save_manifest(manifest, path):
    doc = {
        "class_count": manifest.class_count,
        "target_feature_path": manifest.target_feature_path,
        "checkpoints": [
            {
                "iteration": c.iteration,
                "prediction_path": c.prediction_path,
                **({"feature_path": c.feature_path} if c.feature_path else {}),
            }
            for c in manifest.checkpoints
        ],
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# -------------------------------------------------------------------- report

def save_report(report, path):
    """Write an EvaluationReport (or any JSON-ready dict) to disk."""
    doc = report.to_dict() if hasattr(report, "to_dict") else report
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=False)
            fh.write("\n")
    except ValueError as exc:
        raise NonFiniteValue(f"report contains non-finite values: {exc}") from exc
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_report(path):
    if not os.path.exists(path):
        raise IoFailure(f"no such file: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedHeader(f"unreadable report {path}: {exc}") from exc


def join_by_id(ids, other_ids, other_rows):
    """Reorder other_rows so its rows line up with ids; ids are matched
    as sets."""
    index = {sid: i for i, sid in enumerate(other_ids)}
    if set(ids) != set(other_ids):
        missing = sorted(set(ids) - set(other_ids))[:3]
        extra = sorted(set(other_ids) - set(ids))[:3]
        raise IdMismatch(
            f"id sets differ (missing e.g. {missing}, unexpected e.g. {extra})"
        )
    order = np.array([index[sid] for sid in ids])
    return other_rows[order]
