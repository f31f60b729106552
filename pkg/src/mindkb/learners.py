"""Base learners implemented from first principles over numpy.

Five classifier families cover the ensemble: gradient-boosted trees on
logistic loss, bagged randomized trees, k-nearest-neighbours, a hinge-loss
linear model trained by batch subgradient descent, and Gaussian naive
Bayes, plus the regularized logistic combiner used by stacking. Everything
is deterministic under a fixed seed, ties break toward the lowest feature
index / threshold / row index, and every fitted model serialises to plain
JSON-compatible dicts (tree structures, weights, training data for KNN).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidHyperparameter

_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


# --- regression tree (squared error, used inside boosting) ---


def _best_split(x: np.ndarray, grad: np.ndarray, weight: np.ndarray,
                min_leaf: int) -> tuple[float, float] | None:
    """Best (gain, threshold) for one feature, or None if unsplittable."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ws = weight[order]
    wg = (weight * grad)[order]
    cw = np.cumsum(ws)
    cwg = np.cumsum(wg)
    total_w = cw[-1]
    total_wg = cwg[-1]
    n = len(xs)
    positions = np.arange(min_leaf - 1, n - min_leaf)
    if len(positions) == 0:
        return None
    valid = xs[positions] < xs[positions + 1]
    positions = positions[valid]
    if len(positions) == 0:
        return None
    lw = cw[positions]
    lwg = cwg[positions]
    rw = total_w - lw
    rwg = total_wg - lwg
    ok = (lw > 0) & (rw > 0)
    if not ok.any():
        return None
    positions, lw, lwg, rw, rwg = (a[ok] for a in (positions, lw, lwg, rw, rwg))
    gains = lwg * lwg / lw + rwg * rwg / rw
    best = int(np.argmax(gains))  # first maximum wins: lowest threshold
    threshold = float((xs[positions[best]] + xs[positions[best] + 1]) / 2.0)
    return float(gains[best]), threshold


class RegressionTree:
    """Depth-limited CART regressor on weighted squared error."""

    def __init__(self, max_depth: int, min_samples_leaf: int = 1):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.root: dict | None = None

    def fit(self, X: np.ndarray, grad: np.ndarray,
            weight: np.ndarray) -> "RegressionTree":
        index = np.arange(len(grad))
        self.root = self._build(X, grad, weight, index, depth=0)
        return self

    def _leaf(self, grad, weight, index) -> dict:
        w = weight[index]
        g = grad[index]
        value = float(np.dot(w, g) / max(float(w.sum()), _EPS))
        return {"value": value, "idx": index}

    def _build(self, X, grad, weight, index, depth) -> dict:
        if depth >= self.max_depth or len(index) < 2 * self.min_samples_leaf:
            return self._leaf(grad, weight, index)
        best_gain = -math.inf
        best_feature = -1
        best_threshold = 0.0
        g = grad[index]
        w = weight[index]
        base = float(np.dot(w, g)) ** 2 / max(float(w.sum()), _EPS)
        for feature in range(X.shape[1]):
            found = _best_split(X[index, feature], g, w, self.min_samples_leaf)
            if found is None:
                continue
            gain, threshold = found
            if gain > best_gain + 1e-12 and gain > base + 1e-12:
                best_gain = gain
                best_feature = feature
                best_threshold = threshold
        if best_feature < 0:
            return self._leaf(grad, weight, index)
        mask = X[index, best_feature] <= best_threshold
        left_index = index[mask]
        right_index = index[~mask]
        if len(left_index) == 0 or len(right_index) == 0:
            return self._leaf(grad, weight, index)
        return {
            "feature": best_feature,
            "threshold": best_threshold,
            "left": self._build(X, grad, weight, left_index, depth + 1),
            "right": self._build(X, grad, weight, right_index, depth + 1),
        }

    def leaves(self) -> list[dict]:
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if "value" in node:
                out.append(node)
            else:
                stack.extend((node["left"], node["right"]))
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X), dtype=np.float64)
        for i, row in enumerate(X):
            node = self.root
            while "value" not in node:
                node = node["left"] if row[node["feature"]] <= node["threshold"] \
                    else node["right"]
            out[i] = node["value"]
        return out

    def to_dict(self) -> dict:
        def strip(node: dict) -> dict:
            if "value" in node:
                return {"value": node["value"]}
            return {
                "feature": node["feature"],
                "threshold": node["threshold"],
                "left": strip(node["left"]),
                "right": strip(node["right"]),
            }
        return strip(self.root)

    @classmethod
    def from_dict(cls, raw: dict, max_depth: int = 0,
                  min_samples_leaf: int = 1) -> "RegressionTree":
        tree = cls(max_depth, min_samples_leaf)
        tree.root = raw
        return tree


# --- gradient boosted trees on logistic loss ---


class GradientBoostedTrees:
    """Boosting of depth-limited regression trees on the logistic loss.

    Each round fits a tree to the residual y - p and replaces leaf values
    with a Newton step; minority rows can be up-weighted through
    ``sample_weight``. No subsampling, so the fit is fully deterministic.
    """

    def __init__(self, rounds: int = 200, depth: int = 3,
                 learning_rate: float = 0.1, min_samples_leaf: int = 1):
        if rounds < 1:
            raise InvalidHyperparameter(f"rounds must be >= 1, got {rounds}")
        if depth < 1:
            raise InvalidHyperparameter(f"depth must be >= 1, got {depth}")
        if not (0.0 < learning_rate <= 1.0):
            raise InvalidHyperparameter(
                f"learning rate must be in (0, 1], got {learning_rate}")
        self.rounds = rounds
        self.depth = depth
        self.learning_rate = learning_rate
        self.min_samples_leaf = min_samples_leaf
        self.base_score = 0.0
        self.trees: list[RegressionTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray,
            sample_weight: np.ndarray | None = None) -> "GradientBoostedTrees":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = (np.ones(len(y)) if sample_weight is None
             else np.asarray(sample_weight, dtype=np.float64))
        p_bar = min(max(float(np.dot(w, y) / w.sum()), _EPS), 1.0 - _EPS)
        self.base_score = math.log(p_bar / (1.0 - p_bar))
        raw = np.full(len(y), self.base_score, dtype=np.float64)
        self.trees = []
        for _ in range(self.rounds):
            p = _sigmoid(raw)
            residual = y - p
            tree = RegressionTree(self.depth, self.min_samples_leaf)
            tree.fit(X, residual, w)
            hessian = p * (1.0 - p)
            for leaf in tree.leaves():
                idx = leaf.pop("idx")
                num = float(np.dot(w[idx], residual[idx]))
                den = float(np.dot(w[idx], hessian[idx]))
                leaf["value"] = num / max(den, _EPS)
            raw += self.learning_rate * tree.predict(X)
            self.trees.append(tree)
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        raw = np.full(len(X), self.base_score, dtype=np.float64)
        for tree in self.trees:
            raw += self.learning_rate * tree.predict(X)
        return raw

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "depth": self.depth,
            "learning_rate": self.learning_rate,
            "min_samples_leaf": self.min_samples_leaf,
            "base_score": self.base_score,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "GradientBoostedTrees":
        model = cls(raw["rounds"], raw["depth"], raw["learning_rate"],
                    raw["min_samples_leaf"])
        model.base_score = raw["base_score"]
        model.trees = [RegressionTree.from_dict(t) for t in raw["trees"]]
        return model


# --- random forest (bagged randomized gini trees, majority-vote probability) ---


def _gini_split(x: np.ndarray, y: np.ndarray,
                min_leaf: int) -> tuple[float, float] | None:
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    n = len(xs)
    c1 = np.cumsum(ys)
    total1 = c1[-1]
    positions = np.arange(min_leaf - 1, n - min_leaf)
    if len(positions) == 0:
        return None
    valid = xs[positions] < xs[positions + 1]
    positions = positions[valid]
    if len(positions) == 0:
        return None
    nl = positions + 1.0
    nr = n - nl
    l1 = c1[positions]
    r1 = total1 - l1
    gini_left = 1.0 - (l1 / nl) ** 2 - ((nl - l1) / nl) ** 2
    gini_right = 1.0 - (r1 / nr) ** 2 - ((nr - r1) / nr) ** 2
    impurity = (nl * gini_left + nr * gini_right) / n
    best = int(np.argmin(impurity))
    threshold = float((xs[positions[best]] + xs[positions[best] + 1]) / 2.0)
    return float(impurity[best]), threshold


class _VoteTree:
    def __init__(self, max_depth: int, min_samples_leaf: int,
                 n_sub_features: int, rng: np.random.Generator):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.n_sub_features = n_sub_features
        self.rng = rng
        self.root: dict | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "_VoteTree":
        self.root = self._build(X, y, np.arange(len(y)), 0)
        return self

    def _leaf(self, y, index) -> dict:
        ones = int(y[index].sum())
        return {"value": 1 if 2 * ones > len(index) else 0}

    def _build(self, X, y, index, depth) -> dict:
        ones = int(y[index].sum())
        if (depth >= self.max_depth or len(index) < 2 * self.min_samples_leaf
                or ones == 0 or ones == len(index)):
            return self._leaf(y, index)
        chosen = np.sort(self.rng.choice(
            X.shape[1], size=min(self.n_sub_features, X.shape[1]),
            replace=False))
        parent1 = ones / len(index)
        parent_gini = 1.0 - parent1 ** 2 - (1.0 - parent1) ** 2
        best_impurity = math.inf
        best_feature = -1
        best_threshold = 0.0
        for feature in chosen:
            found = _gini_split(X[index, feature], y[index],
                                self.min_samples_leaf)
            if found is None:
                continue
            impurity, threshold = found
            if impurity < best_impurity - 1e-12:
                best_impurity = impurity
                best_feature = int(feature)
                best_threshold = threshold
        if best_feature < 0 or best_impurity >= parent_gini - 1e-12:
            return self._leaf(y, index)
        mask = X[index, best_feature] <= best_threshold
        return {
            "feature": best_feature,
            "threshold": best_threshold,
            "left": self._build(X, y, index[mask], depth + 1),
            "right": self._build(X, y, index[~mask], depth + 1),
        }

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X), dtype=np.float64)
        for i, row in enumerate(X):
            node = self.root
            while "value" not in node:
                node = node["left"] if row[node["feature"]] <= node["threshold"] \
                    else node["right"]
            out[i] = node["value"]
        return out


class RandomForest:
    """Bagged randomized trees; the probability is the fraction of votes."""

    def __init__(self, trees: int = 100, depth: int = 12,
                 min_samples_leaf: int = 1, seed: int = 0):
        if trees < 1:
            raise InvalidHyperparameter(f"trees must be >= 1, got {trees}")
        if depth < 1:
            raise InvalidHyperparameter(f"depth must be >= 1, got {depth}")
        self.n_trees = trees
        self.depth = depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.trees: list[_VoteTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray,
            sample_weight: np.ndarray | None = None) -> "RandomForest":
        # Bagging subsumes sample weighting at this scale; weights ignored.
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        rng = np.random.Generator(np.random.PCG64(self.seed))
        n_sub = max(1, int(math.sqrt(X.shape[1])))
        self.trees = []
        for _ in range(self.n_trees):
            boot = rng.integers(0, len(y), size=len(y))
            tree = _VoteTree(self.depth, self.min_samples_leaf, n_sub, rng)
            tree.fit(X[boot], y[boot])
            self.trees.append(tree)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros(len(X), dtype=np.float64)
        for tree in self.trees:
            votes += tree.predict(X)
        return votes / float(len(self.trees))

    def to_dict(self) -> dict:
        def strip(node):
            if "value" in node:
                return {"value": node["value"]}
            return {"feature": node["feature"], "threshold": node["threshold"],
                    "left": strip(node["left"]), "right": strip(node["right"])}
        return {
            "trees": self.n_trees, "depth": self.depth,
            "min_samples_leaf": self.min_samples_leaf, "seed": self.seed,
            "fitted": [strip(t.root) for t in self.trees],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "RandomForest":
        model = cls(raw["trees"], raw["depth"], raw["min_samples_leaf"],
                    raw["seed"])
        model.trees = []
        for root in raw["fitted"]:
            tree = _VoteTree(raw["depth"], raw["min_samples_leaf"], 1,
                             np.random.Generator(np.random.PCG64(0)))
            tree.root = root
            model.trees.append(tree)
        return model


# --- k nearest neighbours ---


class KNearestNeighbors:
    """Euclidean KNN; distance ties break toward the lower training row."""

    def __init__(self, k: int = 5):
        if k < 1:
            raise InvalidHyperparameter(f"k must be >= 1, got {k}")
        self.k = k
        self.X: np.ndarray | None = None
        self.y: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray,
            sample_weight: np.ndarray | None = None) -> "KNearestNeighbors":
        self.X = np.asarray(X, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        k = min(self.k, len(self.y))
        out = np.empty(len(X), dtype=np.float64)
        for i, row in enumerate(X):
            d2 = ((self.X - row) ** 2).sum(axis=1)
            order = np.lexsort((np.arange(len(d2)), d2))
            out[i] = float(self.y[order[:k]].mean())
        return out

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "X": [[float(v) for v in row] for row in self.X],
            "y": [int(v) for v in self.y],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "KNearestNeighbors":
        model = cls(raw["k"])
        model.X = np.asarray(raw["X"], dtype=np.float64)
        model.y = np.asarray(raw["y"], dtype=np.float64)
        return model


# --- linear max-margin (hinge loss, batch subgradient descent) ---


class LinearMaxMargin:
    """L2-regularized hinge-loss linear model, batch subgradient descent.

    The probability is a logistic squashing of the margin; the decision
    boundary itself is margin >= 0. With imbalanced data and weak signal the
    averaged subgradient is dominated by the majority class, which is
    exactly the degenerate all-majority behaviour the evaluation reproduces.
    """

    def __init__(self, iterations: int = 300, regularization: float = 0.01):
        if iterations < 1:
            raise InvalidHyperparameter(
                f"iterations must be >= 1, got {iterations}")
        if regularization <= 0:
            raise InvalidHyperparameter(
                f"regularization must be > 0, got {regularization}")
        self.iterations = iterations
        self.regularization = regularization
        self.w: np.ndarray | None = None
        self.b = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray,
            sample_weight: np.ndarray | None = None) -> "LinearMaxMargin":
        X = np.asarray(X, dtype=np.float64)
        y_signed = np.where(np.asarray(y, dtype=np.float64) > 0.5, 1.0, -1.0)
        weight = (np.ones(len(y_signed)) if sample_weight is None
                  else np.asarray(sample_weight, dtype=np.float64))
        weight = weight / weight.sum()
        lam = self.regularization
        w = np.zeros(X.shape[1], dtype=np.float64)
        b = 0.0
        for t in range(self.iterations):
            eta = 1.0 / (lam * (t + 1.0))
            margins = y_signed * (X @ w + b)
            viol = margins < 1.0
            if viol.any():
                coeff = weight[viol] * y_signed[viol]
                grad_w = lam * w - coeff @ X[viol]
                grad_b = -float(coeff.sum())
            else:
                grad_w = lam * w
                grad_b = 0.0
            w -= eta * grad_w
            b -= eta * grad_b
        self.w = w
        self.b = b
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.w + self.b

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_function(X))

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "regularization": self.regularization,
            "w": [float(v) for v in self.w],
            "b": float(self.b),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "LinearMaxMargin":
        model = cls(raw["iterations"], raw["regularization"])
        model.w = np.asarray(raw["w"], dtype=np.float64)
        model.b = raw["b"]
        return model


# --- Gaussian naive Bayes ---


class GaussianNaiveBayes:
    def __init__(self, var_smoothing: float = 1e-9):
        if var_smoothing <= 0:
            raise InvalidHyperparameter(
                f"var_smoothing must be > 0, got {var_smoothing}")
        self.var_smoothing = var_smoothing
        self.priors: np.ndarray | None = None  # [p(0), p(1)]
        self.means: np.ndarray | None = None   # (2, d)
        self.vars: np.ndarray | None = None    # (2, d)

    def fit(self, X: np.ndarray, y: np.ndarray,
            sample_weight: np.ndarray | None = None) -> "GaussianNaiveBayes":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = (np.ones(len(y)) if sample_weight is None
             else np.asarray(sample_weight, dtype=np.float64))
        means = np.zeros((2, X.shape[1]))
        variances = np.zeros((2, X.shape[1]))
        priors = np.zeros(2)
        for cls_label in (0, 1):
            mask = y == cls_label
            cw = w[mask]
            cw_sum = max(float(cw.sum()), _EPS)
            priors[cls_label] = cw_sum
            means[cls_label] = (cw[:, None] * X[mask]).sum(axis=0) / cw_sum
            centered = X[mask] - means[cls_label]
            variances[cls_label] = (cw[:, None] * centered ** 2).sum(axis=0) / cw_sum
        priors /= priors.sum()
        epsilon = self.var_smoothing * max(float(X.var(axis=0).max()), 1.0)
        self.priors = priors
        self.means = means
        self.vars = variances + epsilon
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        log_posterior = np.zeros((len(X), 2))
        for cls_label in (0, 1):
            log_prior = math.log(max(float(self.priors[cls_label]), _EPS))
            var = self.vars[cls_label]
            mean = self.means[cls_label]
            log_lik = (-0.5 * np.log(2.0 * math.pi * var)
                       - (X - mean) ** 2 / (2.0 * var)).sum(axis=1)
            log_posterior[:, cls_label] = log_prior + log_lik
        shifted = log_posterior - log_posterior.max(axis=1, keepdims=True)
        probs = np.exp(shifted)
        probs /= probs.sum(axis=1, keepdims=True)
        return probs[:, 1]

    def to_dict(self) -> dict:
        return {
            "var_smoothing": self.var_smoothing,
            "priors": [float(v) for v in self.priors],
            "means": [[float(v) for v in row] for row in self.means],
            "vars": [[float(v) for v in row] for row in self.vars],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "GaussianNaiveBayes":
        model = cls(raw["var_smoothing"])
        model.priors = np.asarray(raw["priors"], dtype=np.float64)
        model.means = np.asarray(raw["means"], dtype=np.float64)
        model.vars = np.asarray(raw["vars"], dtype=np.float64)
        return model


# --- logistic combiner (stacking meta model) ---


class LogisticCombiner:
    """L2-regularized logistic regression fit by Newton iterations."""

    def __init__(self, regularization: float = 1.0, iterations: int = 50):
        self.regularization = regularization
        self.iterations = iterations
        self.w: np.ndarray | None = None  # includes bias as last entry

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LogisticCombiner":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        design = np.hstack([X, np.ones((len(X), 1))])
        d = design.shape[1]
        penalty = self.regularization * np.eye(d)
        penalty[-1, -1] = 0.0  # bias unpenalized
        w = np.zeros(d)
        for _ in range(self.iterations):
            p = _sigmoid(design @ w)
            gradient = design.T @ (p - y) + penalty @ w
            hessian = design.T @ (design * (p * (1.0 - p))[:, None]) + penalty
            hessian += 1e-10 * np.eye(d)
            step = np.linalg.solve(hessian, gradient)
            w = w - step
            if float(np.abs(step).max()) < 1e-10:
                break
        self.w = w
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        design = np.hstack([np.asarray(X, dtype=np.float64),
                            np.ones((len(X), 1))])
        return _sigmoid(design @ self.w)

    def to_dict(self) -> dict:
        return {
            "regularization": self.regularization,
            "iterations": self.iterations,
            "w": [float(v) for v in self.w],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "LogisticCombiner":
        model = cls(raw["regularization"], raw["iterations"])
        model.w = np.asarray(raw["w"], dtype=np.float64)
        return model


# --- learner specs ---


class LearnerKind(str, Enum):
    BOOSTED_TREES = "BoostedTrees"
    RANDOM_FOREST = "RandomForest"
    K_NEAREST_NEIGHBORS = "KNearestNeighbors"
    LINEAR_MAX_MARGIN = "LinearMaxMargin"
    NAIVE_BAYES = "NaiveBayes"


@dataclass(frozen=True)
class BaseLearnerSpec:
    kind: LearnerKind
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def build(self):
        hp = self.hyperparameters
        if self.kind is LearnerKind.BOOSTED_TREES:
            return GradientBoostedTrees(
                rounds=hp.get("rounds", 200),
                depth=hp.get("depth", 3),
                learning_rate=hp.get("learning_rate", 0.1),
                min_samples_leaf=hp.get("min_samples_leaf", 1),
            )
        if self.kind is LearnerKind.RANDOM_FOREST:
            return RandomForest(
                trees=hp.get("trees", 100),
                depth=hp.get("depth", 12),
                min_samples_leaf=hp.get("min_samples_leaf", 1),
                seed=self.seed,
            )
        if self.kind is LearnerKind.K_NEAREST_NEIGHBORS:
            return KNearestNeighbors(k=hp.get("k", 5))
        if self.kind is LearnerKind.LINEAR_MAX_MARGIN:
            return LinearMaxMargin(
                iterations=hp.get("iterations", 300),
                regularization=hp.get("regularization", 0.01),
            )
        if self.kind is LearnerKind.NAIVE_BAYES:
            return GaussianNaiveBayes(
                var_smoothing=hp.get("var_smoothing", 1e-9))
        raise InvalidHyperparameter(f"unknown learner kind {self.kind}")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "hyperparameters": dict(self.hyperparameters),
                "seed": self.seed}

    @classmethod
    def from_dict(cls, raw: dict) -> "BaseLearnerSpec":
        return cls(kind=LearnerKind(raw["kind"]),
                   hyperparameters=dict(raw.get("hyperparameters", {})),
                   seed=int(raw.get("seed", 0)))


_MODEL_CLASSES = {
    LearnerKind.BOOSTED_TREES: GradientBoostedTrees,
    LearnerKind.RANDOM_FOREST: RandomForest,
    LearnerKind.K_NEAREST_NEIGHBORS: KNearestNeighbors,
    LearnerKind.LINEAR_MAX_MARGIN: LinearMaxMargin,
    LearnerKind.NAIVE_BAYES: GaussianNaiveBayes,
}


def model_to_dict(kind: LearnerKind, model) -> dict:
    return {"kind": kind.value, "model": model.to_dict()}


def model_from_dict(raw: dict):
    kind = LearnerKind(raw["kind"])
    return kind, _MODEL_CLASSES[kind].from_dict(raw["model"])
