"""Pipeline configuration: TOML file, --set overrides, bundled defaults.

Any path-valued key may be the literal string ``"bundled"`` to use the
data files shipped with the package. ``MINDKB_SEED`` in the environment
overrides the configured seed.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import resources
from .classifier import BaseLearnerSpec, EnsembleMode, TrainConfig
from .errors import ConfigError
from .learners import LearnerKind

MODE_NAMES = {
    "weighted_boosting": EnsembleMode.WEIGHTED_BOOSTING,
    "stacking": EnsembleMode.STACKING,
}

DEFAULT_LEXICONS = tuple(
    {"source": source, "path": "bundled"}
    for source in resources.BUNDLED_LEXICONS
)


@dataclass
class PipelineConfig:
    corpus_root: str = ""
    output_dir: str = "out"
    taxonomy: str = "bundled"
    bindings: str = "bundled"
    phrase_list: str = "bundled"
    stopwords: str = "bundled"
    enrichment_dict: str = ""
    classifier: str = "bundled"
    lexicons: list[dict] = field(
        default_factory=lambda: [dict(d) for d in DEFAULT_LEXICONS])
    include_titles: bool = True
    stemmer: str = "porter2"
    user_vector_mode: str = "concatenated"
    weight_lexicon_by_idf: bool = False
    standardize_all: bool = True
    mode: str = "weighted_boosting"
    class_weight_ratio: float = 0.0
    threshold: float = 0.5
    cv_folds: int = 10
    seed: int = 0

    # --- path resolution ---

    def _resolve(self, value: str, bundled: str, what: str,
                 required: bool = True) -> Path | None:
        if not value:
            if required:
                raise ConfigError(f"config has no path for {what}")
            return None
        if value == "bundled":
            return resources.bundled_path(bundled)
        path = Path(value)
        if not path.exists():
            raise ConfigError(f"{what} path does not exist: {path}")
        return path

    def taxonomy_path(self) -> Path:
        return self._resolve(self.taxonomy, resources.TAXONOMY_FIXTURE,
                             "taxonomy")

    def bindings_path(self) -> Path:
        return self._resolve(self.bindings, resources.BINDINGS_CONFIG,
                             "bindings")

    def phrase_list_path(self) -> Path:
        return self._resolve(self.phrase_list, resources.SUICIDAL_PHRASES,
                             "phrase list")

    def stopwords_path(self) -> Path:
        return self._resolve(self.stopwords, resources.STOPWORDS, "stopwords")

    def enrichment_dict_path(self) -> Path | None:
        return self._resolve(self.enrichment_dict, "", "enrichment dict",
                             required=False)

    def classifier_path(self) -> Path:
        return self._resolve(self.classifier, resources.CLASSIFIER_CONFIG,
                             "classifier config")

    def corpus_root_path(self) -> Path:
        if not self.corpus_root:
            raise ConfigError("config has no corpus_root")
        path = Path(self.corpus_root)
        if not path.is_dir():
            raise ConfigError(f"corpus_root is not a directory: {path}")
        return path

    def output_dir_path(self) -> Path:
        if not self.output_dir:
            raise ConfigError("config has no output_dir")
        return Path(self.output_dir)

    def lexicon_paths(self) -> list[tuple[str, Path]]:
        out = []
        for entry in self.lexicons:
            source = entry.get("source", "")
            if not source:
                raise ConfigError(f"lexicon entry without a source: {entry}")
            value = entry.get("path", "bundled")
            if value == "bundled":
                if source not in resources.BUNDLED_LEXICONS:
                    raise ConfigError(
                        f"no bundled lexicon for source {source!r}")
                out.append((source, resources.bundled_path(
                    resources.BUNDLED_LEXICONS[source])))
            else:
                path = Path(value)
                if not path.exists():
                    raise ConfigError(
                        f"lexicon path does not exist: {path}")
                out.append((source, path))
        return out

    # --- classifier config ---

    def train_config(self) -> TrainConfig:
        raw = tomllib.loads(self.classifier_path().read_text(encoding="utf-8"))
        boosting = raw.get("boosting", {})
        forest = raw.get("forest", {})
        knn = raw.get("knn", {})
        linear = raw.get("linear", {})
        nb = raw.get("naive_bayes", {})
        stacking = raw.get("stacking", {})
        training = raw.get("training", {})
        mode_name = self.mode or training.get("mode", "weighted_boosting")
        if mode_name not in MODE_NAMES:
            raise ConfigError(
                f"unknown classifier mode {mode_name!r}; "
                f"expected one of {sorted(MODE_NAMES)}")
        boosting_spec = BaseLearnerSpec(LearnerKind.BOOSTED_TREES, {
            "rounds": boosting.get("rounds", 200),
            "depth": boosting.get("depth", 3),
            "learning_rate": boosting.get("learning_rate", 0.1),
            "min_samples_leaf": boosting.get("min_samples_leaf", 1),
        })
        stacking_specs = (
            BaseLearnerSpec(LearnerKind.RANDOM_FOREST, {
                "trees": forest.get("trees", 100),
                "depth": forest.get("depth", 12),
                "min_samples_leaf": forest.get("min_samples_leaf", 1),
            }),
            BaseLearnerSpec(LearnerKind.K_NEAREST_NEIGHBORS,
                            {"k": knn.get("k", 5)}),
            BaseLearnerSpec(LearnerKind.LINEAR_MAX_MARGIN, {
                "iterations": linear.get("iterations", 300),
                "regularization": linear.get("regularization", 0.01),
            }),
            BaseLearnerSpec(LearnerKind.NAIVE_BAYES, {
                "var_smoothing": nb.get("var_smoothing", 1e-9),
            }),
            boosting_spec,
        )
        ratio = self.class_weight_ratio
        if ratio == 0.0:
            ratio = float(training.get("class_weight_ratio", 0.0))
        return TrainConfig(
            mode=MODE_NAMES[mode_name],
            boosting_spec=boosting_spec,
            stacking_specs=stacking_specs,
            class_weight_ratio=ratio,
            meta_regularization=stacking.get("meta_regularization", 1.0),
            threshold=self.threshold,
            standardize_all=self.standardize_all,
            cv_folds=self.cv_folds,
        )

    # --- serialization / hashing ---

    def to_dict(self) -> dict:
        return {
            "corpus_root": self.corpus_root,
            "output_dir": self.output_dir,
            "taxonomy": self.taxonomy,
            "bindings": self.bindings,
            "phrase_list": self.phrase_list,
            "stopwords": self.stopwords,
            "enrichment_dict": self.enrichment_dict,
            "classifier": self.classifier,
            "lexicons": [dict(e) for e in self.lexicons],
            "include_titles": self.include_titles,
            "stemmer": self.stemmer,
            "user_vector_mode": self.user_vector_mode,
            "weight_lexicon_by_idf": self.weight_lexicon_by_idf,
            "standardize_all": self.standardize_all,
            "mode": self.mode,
            "class_weight_ratio": self.class_weight_ratio,
            "threshold": self.threshold,
            "cv_folds": self.cv_folds,
            "seed": self.seed,
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_TOML_KEYMAP = {
    # (section, key) -> attribute
    ("paths", "corpus_root"): "corpus_root",
    ("paths", "output_dir"): "output_dir",
    ("paths", "taxonomy"): "taxonomy",
    ("paths", "bindings"): "bindings",
    ("paths", "phrase_list"): "phrase_list",
    ("paths", "stopwords"): "stopwords",
    ("paths", "stopwords_path"): "stopwords",
    ("paths", "enrichment_dict"): "enrichment_dict",
    ("paths", "enrichment_dict_path"): "enrichment_dict",
    ("paths", "classifier"): "classifier",
    ("curation", "include_titles"): "include_titles",
    ("curation", "stemmer"): "stemmer",
    ("scoring", "user_vector_mode"): "user_vector_mode",
    ("scoring", "weight_lexicon_by_idf"): "weight_lexicon_by_idf",
    ("scoring", "standardize_all"): "standardize_all",
    ("training", "mode"): "mode",
    ("training", "class_weight_ratio"): "class_weight_ratio",
    ("training", "threshold"): "threshold",
    ("training", "cv_folds"): "cv_folds",
}


def load_config(
    path: str | Path | None = None,
    overrides: list[str] | None = None,
    env: dict | None = None,
) -> PipelineConfig:
    """Build a config from an optional TOML file plus ``--set`` overrides."""
    config = PipelineConfig()
    if path is not None:
        try:
            raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path}: {exc}") from exc
        for (section, key), attr in _TOML_KEYMAP.items():
            if section in raw and key in raw[section]:
                setattr(config, attr, raw[section][key])
        if "lexicons" in raw:
            config.lexicons = [dict(e) for e in raw["lexicons"]]
        if "seed" in raw:
            config.seed = int(raw["seed"])
    for item in overrides or []:
        _apply_override(config, item)
    env = os.environ if env is None else env
    if env.get("MINDKB_SEED"):
        try:
            config.seed = int(env["MINDKB_SEED"])
        except ValueError:
            raise ConfigError(
                f"MINDKB_SEED must be an integer, got {env['MINDKB_SEED']!r}")
    return config


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    return value


_FLAT_KEYS = {
    "corpus_root", "output_dir", "taxonomy", "bindings", "phrase_list",
    "stopwords", "enrichment_dict", "classifier", "include_titles", "stemmer",
    "user_vector_mode", "weight_lexicon_by_idf", "standardize_all", "mode",
    "class_weight_ratio", "threshold", "cv_folds", "seed",
}

_FLAT_ALIASES = {"stopwords_path": "stopwords",
                 "enrichment_dict_path": "enrichment_dict"}


def _apply_override(config: PipelineConfig, item: str) -> None:
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, value = item.split("=", 1)
    key = key.strip()
    attr = key.split(".")[-1] if "." in key else key
    attr = _FLAT_ALIASES.get(attr, attr)
    if attr not in _FLAT_KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    current = getattr(PipelineConfig, "__dataclass_fields__")[attr]
    coerced = _coerce(value.strip())
    if current.type in ("bool",) and not isinstance(coerced, bool):
        raise ConfigError(f"{key} expects true/false, got {value!r}")
    setattr(config, attr, coerced)
