"""Checkpointed pipeline stages: ingest -> curate -> score -> train ->
evaluate -> label.

Each stage reads the previous stage's artifact from the output directory
and writes its own, so analysts can inspect or re-run any slice of the
workflow. A manifest records config hash, seed, tool version, artifact
checksums, and stage timings; its ``fingerprint`` field covers everything
except timings, so identical inputs always reproduce identical
fingerprints and artifact bytes.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import classifier as cl
from . import curation as cu
from . import lexicon as lx
from . import scoring as sc
from . import taxonomy as tx
from .config import PipelineConfig
from .errors import ConfigError, SingleClassData
from .stemmer import get_stemmer

STAGES = ("ingest", "curate", "score", "train", "evaluate", "label")

ARTIFACTS = {
    "ingest": ("corpus.jsonl",),
    "curate": ("curated.jsonl",),
    "score": ("scores_raw.csv", "scores_std.csv", "scoring_model.json"),
    "train": ("model.json",),
    "evaluate": ("evaluation.json", "evaluation.txt"),
    "label": ("labels.csv",),
}

MANIFEST = "manifest.json"


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def _require(out_dir: Path, stage: str, filename: str) -> Path:
    path = out_dir / filename
    if not path.is_file():
        raise ConfigError(
            f"stage {stage!r} needs {filename} in {out_dir}; "
            f"run the earlier stages first")
    return path


def _load_kb(config: PipelineConfig):
    stemmer = get_stemmer(config.stemmer)
    taxonomy = tx.load_taxonomy(config.taxonomy_path())
    lexicons = {
        source: lx.load_lexicon(path, source)
        for source, path in config.lexicon_paths()
    }
    bindings = lx.load_bindings_config(
        config.bindings_path(), lexicons, taxonomy, stemmer)
    phrases = lx.load_phrase_list(config.phrase_list_path())
    stopwords = cu.load_stopwords(config.stopwords_path())
    return stemmer, taxonomy, bindings, phrases, stopwords


def stage_ingest(config: PipelineConfig, out_dir: Path) -> None:
    corpora = cu.ingest_corpus(config.corpus_root_path())
    cu.write_corpora(corpora, out_dir / "corpus.jsonl")


def stage_curate(config: PipelineConfig, out_dir: Path) -> None:
    corpora = cu.read_corpora(_require(out_dir, "curate", "corpus.jsonl"))
    stemmer = get_stemmer(config.stemmer)
    stopwords = cu.load_stopwords(config.stopwords_path())
    enrichment_path = config.enrichment_dict_path()
    enrichment = (cu.DictionaryEnrichment.from_json(enrichment_path)
                  if enrichment_path else cu.NoOpEnrichment())
    records = [
        cu.curate(corpus, stopwords, stemmer, enrichment,
                  include_titles=config.include_titles)
        for corpus in corpora
    ]
    cu.write_records(records, out_dir / "curated.jsonl")


def stage_score(config: PipelineConfig, out_dir: Path) -> None:
    records = cu.read_records(_require(out_dir, "score", "curated.jsonl"))
    stemmer, _, bindings, phrases, stopwords = _load_kb(config)
    stop_stems = cu.stem_stopwords(stopwords, stemmer)
    docs = []
    for record in records:
        for doc in record.chunk_docs:
            docs.append(cu.stem_document(doc, stemmer, stop_stems))
    model = sc.fit_tfidf(docs)
    matrix = sc.compute_scores(
        records, bindings, phrases, model,
        user_vector_mode=config.user_vector_mode,
        weight_lexicon_by_idf=config.weight_lexicon_by_idf,
        stemmer=stemmer,
        stop_stems=stop_stems,
    )
    labeled = matrix.labeled_indices()
    fit_rows = labeled if labeled else list(range(len(matrix.user_ids)))
    columns = None
    if not config.standardize_all:
        columns = [matrix.feature_order.index(bindings.phrase_instance)] \
            if bindings.phrase_instance in matrix.feature_order else None
    std_matrix = sc.standardize(matrix, fit_rows=fit_rows, columns=columns)
    sc.write_matrix_csv(matrix, out_dir / "scores_raw.csv")
    sc.write_matrix_csv(std_matrix, out_dir / "scores_std.csv")
    payload = {
        "tfidf": model.to_dict(),
        "standardization": std_matrix.standardization.to_dict(),
        "feature_order": list(matrix.feature_order),
    }
    (out_dir / "scoring_model.json").write_text(
        json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")


def _read_std_matrix(out_dir: Path, stage: str) -> sc.ScoreMatrix:
    scoring_model = json.loads(
        _require(out_dir, stage, "scoring_model.json").read_text(encoding="utf-8"))
    stats = sc.Standardization.from_dict(scoring_model["standardization"])
    return sc.read_matrix_csv(_require(out_dir, stage, "scores_std.csv"),
                              standardization=stats)


def stage_train(config: PipelineConfig, out_dir: Path) -> None:
    matrix = _read_std_matrix(out_dir, "train")
    model = cl.train(matrix, config.train_config(), seed=config.seed)
    model.save(out_dir / "model.json")


def stage_evaluate(config: PipelineConfig, out_dir: Path) -> None:
    raw = sc.read_matrix_csv(_require(out_dir, "evaluate", "scores_raw.csv"))
    model = cl.EnsembleModel.load(_require(out_dir, "evaluate", "model.json"))
    train_config = config.train_config()
    labeled = raw.labeled_indices()
    if not labeled:
        raise SingleClassData("no labeled rows to evaluate on")
    std = model.standardize_raw(raw)
    rows = np.asarray(labeled, dtype=np.int64)
    labels = [std.labels[i] for i in labeled]
    probs = model.predict_values(std.values[rows])
    train_report = cl.report(
        labels, (probs >= model.threshold).astype(int).tolist())
    cv = cl.cross_validate(raw, train_config, k=train_config.cv_folds,
                           seed=config.seed)
    payload = {
        "mode": train_config.mode.value,
        "training_set": {
            "report": train_report.to_dict(),
            "auc": cl.roc_auc(labels, probs),
        },
        "cross_validation": cv.to_dict(),
        "n_users": len(raw.user_ids),
        "n_labeled": len(labeled),
    }
    (out_dir / "evaluation.json").write_text(
        json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    lines = [
        f"mode: {train_config.mode.value}",
        f"users: {len(raw.user_ids)} (labeled: {len(labeled)})",
        "",
        "training-set report",
        train_report.to_text(),
        "",
        f"{train_config.cv_folds}-fold cross-validation",
        f"mean accuracy: {cv.mean_accuracy:.4f} (+/- {cv.std_accuracy:.4f})",
        f"mean f1 (class 0 / 1): {cv.mean_f1[0]:.4f} / {cv.mean_f1[1]:.4f}",
        f"out-of-fold AUC: {cv.auc:.4f}",
        "",
        "pooled out-of-fold report",
        cv.pooled_report.to_text(),
        "",
    ]
    (out_dir / "evaluation.txt").write_text(
        "\n".join(lines), encoding="utf-8")


def stage_label(config: PipelineConfig, out_dir: Path) -> None:
    raw = sc.read_matrix_csv(_require(out_dir, "label", "scores_raw.csv"))
    model = cl.EnsembleModel.load(_require(out_dir, "label", "model.json"))
    rows = cl.label_corpus(model, model.standardize_raw(raw))
    cl.write_labels_csv(rows, out_dir / "labels.csv")


_STAGE_FUNCS = {
    "ingest": stage_ingest,
    "curate": stage_curate,
    "score": stage_score,
    "train": stage_train,
    "evaluate": stage_evaluate,
    "label": stage_label,
}


def _corpus_checksum(root: Path) -> str:
    digest = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            digest.update(str(path.relative_to(root)).encode("utf-8"))
            digest.update(_sha256(path).encode("ascii"))
    return digest.hexdigest()


def run_stages(config: PipelineConfig,
               stages: list[str] | None = None) -> dict:
    """Run the requested stages in pipeline order; returns the manifest."""
    stages = list(stages) if stages else list(STAGES)
    unknown = [s for s in stages if s not in STAGES]
    if unknown:
        raise ConfigError(
            f"unknown stages {unknown}; expected a subset of {list(STAGES)}")
    stages = [s for s in STAGES if s in stages]
    out_dir = config.output_dir_path()
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "tool_version": __version__,
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "input_checksums": {},
        "stages": {},
    }
    if (out_dir / MANIFEST).is_file():
        try:
            previous = json.loads((out_dir / MANIFEST).read_text(encoding="utf-8"))
            manifest["stages"].update(previous.get("stages", {}))
            manifest["input_checksums"].update(
                previous.get("input_checksums", {}))
        except (json.JSONDecodeError, KeyError):
            pass
    if "ingest" in stages:
        manifest["input_checksums"]["corpus_root"] = _corpus_checksum(
            config.corpus_root_path())
    for stage in stages:
        started = time.monotonic()
        _STAGE_FUNCS[stage](config, out_dir)
        duration = time.monotonic() - started
        artifacts = {
            name: _sha256(out_dir / name) for name in ARTIFACTS[stage]
        }
        manifest["stages"][stage] = {
            "artifacts": artifacts,
            "duration_s": round(duration, 3),
        }
    fingerprint = hashlib.sha256()
    fingerprint.update(manifest["config_hash"].encode("ascii"))
    fingerprint.update(str(manifest["seed"]).encode("ascii"))
    fingerprint.update(manifest["tool_version"].encode("ascii"))
    for key in sorted(manifest["input_checksums"]):
        fingerprint.update(manifest["input_checksums"][key].encode("ascii"))
    for stage in sorted(manifest["stages"]):
        for name in sorted(manifest["stages"][stage]["artifacts"]):
            fingerprint.update(
                manifest["stages"][stage]["artifacts"][name].encode("ascii"))
    manifest["fingerprint"] = fingerprint.hexdigest()
    (out_dir / MANIFEST).write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    return manifest
