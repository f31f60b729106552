"""Weak-supervision classifiers over instance-score features.

Two modes mirror the evaluation setup: a class-weighted boosted-tree model,
and a five-learner stacking ensemble in which every base learner trains on
a balanced sample (all minority rows plus a disjoint fifth of the majority)
and a regularized logistic combiner blends the base probabilities. The
combiner is fit on honest base predictions: rows inside a learner's own
sample get cross-fitted predictions, rows outside it get direct ones.

Base-learner fits are independent once samples are assigned, so they may be
parallelised; the meta fit is a single reduction. Fitted models are
immutable and prediction is pure. Identical data, config, and seed give
bit-identical models and reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    FeatureMismatch,
    FoldWithoutMinority,
    InvalidHyperparameter,
    LengthMismatch,
    SingleClassData,
    TooFewMinority,
)
from .learners import (
    BaseLearnerSpec,
    LearnerKind,
    LogisticCombiner,
    model_from_dict,
    model_to_dict,
)
from .scoring import ScoreMatrix, ScoreVector, Standardization, apply_standardization, standardize

N_STACK = 5

DEFAULT_STACKING_SPECS = (
    BaseLearnerSpec(LearnerKind.RANDOM_FOREST, {"trees": 100, "depth": 12}),
    BaseLearnerSpec(LearnerKind.K_NEAREST_NEIGHBORS, {"k": 5}),
    BaseLearnerSpec(LearnerKind.LINEAR_MAX_MARGIN,
                    {"iterations": 300, "regularization": 0.01}),
    BaseLearnerSpec(LearnerKind.NAIVE_BAYES, {"var_smoothing": 1e-9}),
    BaseLearnerSpec(LearnerKind.BOOSTED_TREES,
                    {"rounds": 200, "depth": 3, "learning_rate": 0.1}),
)

DEFAULT_BOOSTING_SPEC = BaseLearnerSpec(
    LearnerKind.BOOSTED_TREES, {"rounds": 200, "depth": 3, "learning_rate": 0.1})


class EnsembleMode(str, Enum):
    WEIGHTED_BOOSTING = "WeightedBoosting"
    STACKING = "Stacking"


@dataclass(frozen=True)
class LabeledFeatures:
    """Standardized feature rows paired with their 0/1 labels."""

    values: np.ndarray           # (n, d) float64, already standardized
    labels: np.ndarray           # (n,) int
    feature_order: tuple[str, ...]
    standardization: Standardization

    @classmethod
    def from_matrix(cls, matrix: ScoreMatrix) -> "LabeledFeatures":
        if matrix.is_raw:
            raise ValueError("matrix must be standardized before training")
        rows = matrix.labeled_indices()
        return cls(
            values=matrix.values[np.asarray(rows, dtype=np.int64)],
            labels=np.asarray([matrix.labels[i] for i in rows], dtype=np.int64),
            feature_order=matrix.feature_order,
            standardization=matrix.standardization,
        )

    def class_counts(self) -> tuple[int, int]:
        ones = int(self.labels.sum())
        return len(self.labels) - ones, ones


def _require_both_classes(labels: np.ndarray) -> None:
    if len(np.unique(labels)) < 2:
        raise SingleClassData("training data contains a single class")


def minority_class(labels: np.ndarray) -> int:
    ones = int((labels == 1).sum())
    zeros = len(labels) - ones
    return 1 if ones <= zeros else 0


@dataclass
class EnsembleModel:
    mode: EnsembleMode
    feature_order: tuple[str, ...]
    standardization: Standardization
    seed: int
    threshold: float
    base: list[dict]  # {"spec", "model", "sample"} per base learner
    meta: LogisticCombiner | None = None

    def _base_probs(self, values: np.ndarray) -> np.ndarray:
        cols = [entry["model"].predict_proba(values) for entry in self.base]
        return np.stack(cols, axis=1)

    def predict_values(self, values: np.ndarray) -> np.ndarray:
        """Class-1 probability for already-standardized feature rows."""
        probs = self._base_probs(values)
        if self.mode is EnsembleMode.WEIGHTED_BOOSTING:
            return probs[:, 0]
        return self.meta.predict_proba(probs)

    def predict_matrix(self, matrix: ScoreMatrix) -> np.ndarray:
        if matrix.feature_order != self.feature_order:
            raise FeatureMismatch(
                f"matrix features {matrix.feature_order} do not match model "
                f"features {self.feature_order}")
        if matrix.is_raw:
            raise FeatureMismatch(
                "matrix is raw; standardize with the model's statistics first")
        return self.predict_values(matrix.values)

    def predict_row(self, row: ScoreVector) -> float:
        if row.raw:
            raise FeatureMismatch(
                "row is raw; standardize with the model's statistics first")
        values = row.as_array(self.feature_order).reshape(1, -1)
        return float(self.predict_values(values)[0])

    def standardize_raw(self, matrix: ScoreMatrix) -> ScoreMatrix:
        """Standardize a raw matrix with this model's stored statistics."""
        return apply_standardization(matrix, self.standardization)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "feature_order": list(self.feature_order),
            "standardization": self.standardization.to_dict(),
            "seed": self.seed,
            "threshold": self.threshold,
            "base": [
                {
                    "spec": entry["spec"].to_dict(),
                    "model": model_to_dict(entry["spec"].kind, entry["model"]),
                    "sample": entry["sample"],
                }
                for entry in self.base
            ],
            "meta": self.meta.to_dict() if self.meta else None,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "EnsembleModel":
        base = []
        for entry in raw["base"]:
            _, model = model_from_dict(entry["model"])
            base.append({
                "spec": BaseLearnerSpec.from_dict(entry["spec"]),
                "model": model,
                "sample": entry["sample"],
            })
        return cls(
            mode=EnsembleMode(raw["mode"]),
            feature_order=tuple(raw["feature_order"]),
            standardization=Standardization.from_dict(raw["standardization"]),
            seed=int(raw["seed"]),
            threshold=float(raw["threshold"]),
            base=base,
            meta=LogisticCombiner.from_dict(raw["meta"]) if raw.get("meta") else None,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "EnsembleModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def train_weighted_boosting(
    data: LabeledFeatures,
    spec: BaseLearnerSpec = DEFAULT_BOOSTING_SPEC,
    class_weight_ratio: float = 0.0,
    threshold: float = 0.5,
    seed: int = 0,
) -> EnsembleModel:
    """Fit one learner with minority rows up-weighted by ``class_weight_ratio``.

    A ratio of 0 means auto: majority count / minority count.
    """
    _require_both_classes(data.labels)
    if class_weight_ratio < 0:
        raise InvalidHyperparameter(
            f"class_weight_ratio must be > 0, got {class_weight_ratio}")
    minority = minority_class(data.labels)
    n_minority = int((data.labels == minority).sum())
    if class_weight_ratio == 0.0:
        class_weight_ratio = (len(data.labels) - n_minority) / n_minority
    weights = np.where(data.labels == minority, class_weight_ratio, 1.0)
    model = spec.build()
    model.fit(data.values, data.labels.astype(np.float64), sample_weight=weights)
    return EnsembleModel(
        mode=EnsembleMode.WEIGHTED_BOOSTING,
        feature_order=data.feature_order,
        standardization=data.standardization,
        seed=seed,
        threshold=threshold,
        base=[{
            "spec": spec,
            "model": model,
            "sample": {
                "rows": list(range(len(data.labels))),
                "class_weight_ratio": class_weight_ratio,
            },
        }],
        meta=None,
    )


def stacking_samples(
    labels: np.ndarray, seed: int
) -> list[dict]:
    """Balanced down-samples: all minority rows + a disjoint majority fifth.

    The majority rows are shuffled once and partitioned; when the majority
    count is not divisible by five the first parts carry one extra row, so
    sizes are ceil(M/5) or floor(M/5) and the parts stay pairwise disjoint.
    """
    minority = minority_class(labels)
    minority_rows = np.flatnonzero(labels == minority)
    majority_rows = np.flatnonzero(labels != minority)
    if len(minority_rows) < 2:
        raise TooFewMinority(
            f"need at least 2 minority rows, got {len(minority_rows)}")
    rng = np.random.Generator(np.random.PCG64(seed))
    shuffled = majority_rows[rng.permutation(len(majority_rows))]
    parts = np.array_split(shuffled, N_STACK)
    samples = []
    for part in parts:
        rows = np.concatenate([minority_rows, part])
        samples.append({
            "minority_rows": [int(r) for r in minority_rows],
            "majority_rows": sorted(int(r) for r in part),
            "rows": [int(r) for r in rows],
        })
    return samples


def _cross_fit_probs(spec, X, y, rng_seed: int) -> np.ndarray:
    """Honest in-sample predictions via a stratified two-fold cross fit."""
    probs = np.zeros(len(y), dtype=np.float64)
    fold = np.zeros(len(y), dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    for cls_label in (0, 1):
        rows = np.flatnonzero(y == cls_label)
        rows = rows[rng.permutation(len(rows))]
        fold[rows[1::2]] = 1
    for half in (0, 1):
        test = fold == half
        train = ~test
        if len(np.unique(y[train])) < 2 or not test.any():
            # Degenerate split: fall back to a full fit for these rows.
            model = spec.build()
            model.fit(X, y.astype(np.float64))
            probs[test] = model.predict_proba(X[test])
            continue
        model = spec.build()
        model.fit(X[train], y[train].astype(np.float64))
        probs[test] = model.predict_proba(X[test])
    return probs


def train_stacking(
    data: LabeledFeatures,
    specs: tuple[BaseLearnerSpec, ...] = DEFAULT_STACKING_SPECS,
    seed: int = 0,
    meta_regularization: float = 1.0,
    threshold: float = 0.5,
) -> EnsembleModel:
    """Fit the five-learner stacking ensemble on balanced down-samples."""
    _require_both_classes(data.labels)
    if len(specs) != N_STACK:
        raise InvalidHyperparameter(
            f"stacking requires exactly {N_STACK} base learner specs, "
            f"got {len(specs)}")
    samples = stacking_samples(data.labels, seed)
    base = []
    meta_features = np.zeros((len(data.labels), N_STACK), dtype=np.float64)
    for i, (spec, sample) in enumerate(zip(specs, samples)):
        spec = BaseLearnerSpec(spec.kind, dict(spec.hyperparameters),
                               seed=seed + 101 * i + spec.seed)
        rows = np.asarray(sample["rows"], dtype=np.int64)
        X_sample = data.values[rows]
        y_sample = data.labels[rows]
        model = spec.build()
        model.fit(X_sample, y_sample.astype(np.float64))
        outside = np.setdiff1d(np.arange(len(data.labels)), rows)
        if len(outside):
            meta_features[outside, i] = model.predict_proba(data.values[outside])
        meta_features[rows, i] = _cross_fit_probs(
            spec, X_sample, y_sample, rng_seed=seed + 977 * (i + 1))
        base.append({"spec": spec, "model": model, "sample": sample})
    meta = LogisticCombiner(regularization=meta_regularization)
    meta.fit(meta_features, data.labels.astype(np.float64))
    return EnsembleModel(
        mode=EnsembleMode.STACKING,
        feature_order=data.feature_order,
        standardization=data.standardization,
        seed=seed,
        threshold=threshold,
        base=base,
        meta=meta,
    )


# --- reports and metrics ---


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    per_class: dict[int, ClassMetrics]
    accuracy: float
    confusion: tuple[tuple[int, int], tuple[int, int]]  # [[TN, FP], [FN, TP]]

    def to_dict(self) -> dict:
        return {
            "per_class": {
                str(label): {
                    "precision": m.precision, "recall": m.recall,
                    "f1": m.f1, "support": m.support,
                }
                for label, m in self.per_class.items()
            },
            "accuracy": self.accuracy,
            "confusion": [list(row) for row in self.confusion],
        }

    def to_text(self) -> str:
        lines = [
            f"{'':>12}{'precision':>11}{'recall':>11}{'f1-score':>11}{'support':>11}",
            "",
        ]
        for label in (0, 1):
            m = self.per_class[label]
            lines.append(
                f"{label:>12}{m.precision:>11.3f}{m.recall:>11.3f}"
                f"{m.f1:>11.3f}{m.support:>11d}")
        total = sum(m.support for m in self.per_class.values())
        lines.append("")
        lines.append(f"{'accuracy':>12}{'':>22}{self.accuracy:>11.3f}{total:>11d}")
        (tn, fp), (fn, tp) = self.confusion
        lines.append(f"{'confusion':>12}   [[TN={tn} FP={fp}] [FN={fn} TP={tp}]]")
        return "\n".join(lines)


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def report(y_true, y_pred) -> ClassificationReport:
    """Per-class precision/recall/F1 with the 0/0 -> 0 convention."""
    y_true = list(y_true)
    y_pred = list(y_pred)
    if len(y_true) != len(y_pred):
        raise LengthMismatch(
            f"y_true has {len(y_true)} items, y_pred has {len(y_pred)}")
    for value in (*y_true, *y_pred):
        if value not in (0, 1):
            raise ValueError(f"labels must be 0 or 1, got {value!r}")
    tp = sum(1 for t, p in zip(y_true, y_pred) if t == 1 and p == 1)
    tn = sum(1 for t, p in zip(y_true, y_pred) if t == 0 and p == 0)
    fp = sum(1 for t, p in zip(y_true, y_pred) if t == 0 and p == 1)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t == 1 and p == 0)
    per_class = {}
    for label, (tp_k, fp_k, fn_k) in {0: (tn, fn, fp), 1: (tp, fp, fn)}.items():
        precision = _safe_div(tp_k, tp_k + fp_k)
        recall = _safe_div(tp_k, tp_k + fn_k)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[label] = ClassMetrics(
            precision=precision, recall=recall, f1=f1,
            support=sum(1 for t in y_true if t == label))
    return ClassificationReport(
        per_class=per_class,
        accuracy=_safe_div(tp + tn, len(y_true)),
        confusion=((tn, fp), (fn, tp)),
    )


def roc_auc(y_true, probs) -> float:
    """Rank-based AUC with average ranks over probability ties."""
    y_true = np.asarray(list(y_true), dtype=np.float64)
    probs = np.asarray(list(probs), dtype=np.float64)
    n_pos = float((y_true == 1).sum())
    n_neg = float((y_true == 0).sum())
    if n_pos == 0 or n_neg == 0:
        return float("nan")
    order = np.argsort(probs, kind="stable")
    ranks = np.empty(len(probs), dtype=np.float64)
    sorted_probs = probs[order]
    i = 0
    while i < len(sorted_probs):
        j = i
        while j + 1 < len(sorted_probs) and sorted_probs[j + 1] == sorted_probs[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    rank_sum = float(ranks[y_true == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


# --- cross validation ---


@dataclass(frozen=True)
class TrainConfig:
    mode: EnsembleMode = EnsembleMode.WEIGHTED_BOOSTING
    boosting_spec: BaseLearnerSpec = DEFAULT_BOOSTING_SPEC
    stacking_specs: tuple[BaseLearnerSpec, ...] = DEFAULT_STACKING_SPECS
    class_weight_ratio: float = 0.0
    meta_regularization: float = 1.0
    threshold: float = 0.5
    standardize_all: bool = True
    cv_folds: int = 10


def train(matrix: ScoreMatrix, config: TrainConfig, seed: int) -> EnsembleModel:
    """Train the configured ensemble on a standardized matrix's labeled rows."""
    data = LabeledFeatures.from_matrix(matrix)
    if config.mode is EnsembleMode.WEIGHTED_BOOSTING:
        return train_weighted_boosting(
            data, config.boosting_spec, config.class_weight_ratio,
            threshold=config.threshold, seed=seed)
    return train_stacking(
        data, config.stacking_specs, seed=seed,
        meta_regularization=config.meta_regularization,
        threshold=config.threshold)


def stratified_folds(labels: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Fold index per row; each class is spread round-robin across folds."""
    if k < 2:
        raise InvalidHyperparameter(f"k must be >= 2, got {k}")
    minority = minority_class(labels)
    if int((labels == minority).sum()) < k:
        raise FoldWithoutMinority(
            f"{k} folds but only {int((labels == minority).sum())} minority rows")
    rng = np.random.Generator(np.random.PCG64(seed))
    fold = np.empty(len(labels), dtype=np.int64)
    for cls_label in (0, 1):
        rows = np.flatnonzero(labels == cls_label)
        rows = rows[rng.permutation(len(rows))]
        for position, row in enumerate(rows):
            fold[row] = position % k
    return fold


@dataclass(frozen=True)
class CVResult:
    fold_reports: list[ClassificationReport]
    mean_accuracy: float
    std_accuracy: float
    mean_f1: dict[int, float]
    pooled_report: ClassificationReport
    oof_probs: np.ndarray    # aligned with the labeled rows passed in
    oof_labels: np.ndarray
    auc: float

    def to_dict(self) -> dict:
        return {
            "folds": [r.to_dict() for r in self.fold_reports],
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "mean_f1": {str(k): v for k, v in self.mean_f1.items()},
            "pooled": self.pooled_report.to_dict(),
            "auc": self.auc,
        }


def cross_validate(
    raw_matrix: ScoreMatrix,
    config: TrainConfig,
    k: int,
    seed: int,
) -> CVResult:
    """Stratified k-fold; standardization is refit on each fold's train rows."""
    if not raw_matrix.is_raw:
        raise ValueError("cross_validate expects the raw matrix; "
                         "standardization is refit per fold")
    labeled = raw_matrix.labeled_indices()
    labels = np.asarray([raw_matrix.labels[i] for i in labeled], dtype=np.int64)
    _require_both_classes(labels)
    fold_of = stratified_folds(labels, k, seed)
    columns = (None if config.standardize_all
               else [raw_matrix.feature_order.index("suicidal_behaviours")]
               if "suicidal_behaviours" in raw_matrix.feature_order else None)
    oof_probs = np.zeros(len(labels), dtype=np.float64)
    fold_reports = []
    for fold_no in range(k):
        test_mask = fold_of == fold_no
        train_rows = [labeled[i] for i in np.flatnonzero(~test_mask)]
        std_matrix = standardize(raw_matrix, fit_rows=train_rows,
                                 columns=columns)
        model = train(
            ScoreMatrix(
                feature_order=std_matrix.feature_order,
                user_ids=tuple(std_matrix.user_ids[i] for i in train_rows),
                labels=tuple(std_matrix.labels[i] for i in train_rows),
                values=std_matrix.values[np.asarray(train_rows, dtype=np.int64)],
                standardization=std_matrix.standardization,
            ),
            config,
            seed=seed + fold_no,
        )
        test_rows = np.asarray([labeled[i] for i in np.flatnonzero(test_mask)],
                               dtype=np.int64)
        probs = model.predict_values(std_matrix.values[test_rows])
        oof_probs[test_mask] = probs
        preds = (probs >= config.threshold).astype(int)
        fold_reports.append(report(labels[test_mask].tolist(), preds.tolist()))
    accuracies = np.array([r.accuracy for r in fold_reports])
    pooled_preds = (oof_probs >= config.threshold).astype(int)
    pooled = report(labels.tolist(), pooled_preds.tolist())
    return CVResult(
        fold_reports=fold_reports,
        mean_accuracy=float(accuracies.mean()),
        std_accuracy=float(accuracies.std(ddof=0)),
        mean_f1={
            label: float(np.mean([r.per_class[label].f1 for r in fold_reports]))
            for label in (0, 1)
        },
        pooled_report=pooled,
        oof_probs=oof_probs,
        oof_labels=labels,
        auc=roc_auc(labels, oof_probs),
    )


# --- labelling output ---


def label_corpus(
    model: EnsembleModel, matrix: ScoreMatrix
) -> list[tuple[str, float, int]]:
    """(user_id, probability, label) per row; the weak-supervision output."""
    if len(matrix.user_ids) == 0:
        return []
    probs = model.predict_matrix(matrix)
    return [
        (user_id, float(p), int(p >= model.threshold))
        for user_id, p in zip(matrix.user_ids, probs)
    ]


def write_labels_csv(rows: list[tuple[str, float, int]],
                     path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("user_id,probability,label\n")
        for user_id, probability, label in rows:
            handle.write(f"{user_id},{repr(probability)},{label}\n")
