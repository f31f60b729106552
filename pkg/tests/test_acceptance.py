"""Acceptance gate: one test per criterion, each printing a PASS line.

Criterion 1 needs the license-gated 820-user corpus and is skipped when the
corpus is not installed (point MINDKB_ERISK_ROOT at its root directory);
criteria 2-7 then constitute acceptance, as specified.
"""

from __future__ import annotations

import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

import oracle
from conftest import write_corpus
from mindkb import classifier as cl
from mindkb import curation as cu
from mindkb import pipeline
from mindkb import scoring as sc
from mindkb import synth
from mindkb import taxonomy as tx
from mindkb.config import load_config
from mindkb.learners import BaseLearnerSpec, LearnerKind
from mindkb.lexicon import load_lexicon, load_phrase_list
from mindkb.resources import SUICIDAL_PHRASES, TAXONOMY_FIXTURE, bundled_path

ERISK_ROOT = os.environ.get("MINDKB_ERISK_ROOT", "")


def _passed(line: str) -> None:
    print(f"\nACCEPTANCE {line}: PASS")


@pytest.mark.skipif(
    not (ERISK_ROOT and Path(ERISK_ROOT).is_dir()),
    reason="license-gated eRisk 2018 corpus not installed "
           "(set MINDKB_ERISK_ROOT); criteria 2-7 constitute acceptance",
)
def test_criterion_1_paper_numbers_on_licensed_corpus(tmp_path):
    started = time.monotonic()
    out_dir = tmp_path / "erisk_out"
    config = load_config(None, [
        f"corpus_root={ERISK_ROOT}", f"output_dir={out_dir}",
        "cv_folds=10", "seed=0"])
    pipeline.run_stages(config)
    import json
    evaluation = json.loads((out_dir / "evaluation.json").read_text())
    raw = sc.read_matrix_csv(out_dir / "scores_raw.csv")
    assert len(raw.user_ids) == 820
    assert sum(1 for lab in raw.labels if lab == 1) == 79
    suicidal = raw.values[:, raw.feature_order.index("suicidal_behaviours")]
    assert suicidal.min() >= 0
    assert suicidal.max() <= 31
    assert (suicidal == suicidal.astype(int)).all()
    train_accuracy = evaluation["training_set"]["report"]["accuracy"]
    cv_accuracy = evaluation["cross_validation"]["mean_accuracy"]
    assert abs(train_accuracy - 0.82) <= 0.05
    assert abs(cv_accuracy - 0.87) <= 0.05
    elapsed = time.monotonic() - started
    assert elapsed < 15 * 60
    _passed(f"1 paper-number reproduction (accuracy {train_accuracy:.3f}, "
            f"10-fold {cv_accuracy:.3f}, {elapsed:.0f}s)")


def test_criterion_2_planted_signal_synthetic(tmp_path):
    started = time.monotonic()
    corpus = tmp_path / "corpus"
    synth.generate_corpus(
        synth.SyntheticSpec(n_users=200, minority_fraction=0.1,
                            signal_strength=0.3, posts_per_user=8,
                            vocabulary_size=300, seed=11),
        corpus)
    out_dir = tmp_path / "out"
    config = load_config(None, [
        f"corpus_root={corpus}", f"output_dir={out_dir}",
        "cv_folds=5", "seed=11"])
    pipeline.run_stages(config, ["ingest", "curate", "score"])
    raw = sc.read_matrix_csv(out_dir / "scores_raw.csv")
    results = {}
    for mode in ("weighted_boosting", "stacking"):
        train_config = load_config(None, [
            f"corpus_root={corpus}", f"output_dir={out_dir}",
            "cv_folds=5", "seed=11", f"mode={mode}"]).train_config()
        cv = cl.cross_validate(raw, train_config, k=5, seed=11)
        results[mode] = cv
        assert cv.auc >= 0.9, f"{mode}: AUC {cv.auc:.3f}"
        assert cv.pooled_report.per_class[1].f1 >= 0.6, \
            f"{mode}: minority F1 {cv.pooled_report.per_class[1].f1:.3f}"

    null_corpus = tmp_path / "null_corpus"
    synth.generate_corpus(
        synth.SyntheticSpec(n_users=200, minority_fraction=0.1,
                            signal_strength=0.0, posts_per_user=8,
                            vocabulary_size=300, seed=11),
        null_corpus)
    null_out = tmp_path / "null_out"
    null_config = load_config(None, [
        f"corpus_root={null_corpus}", f"output_dir={null_out}",
        "cv_folds=5", "seed=11"])
    pipeline.run_stages(null_config, ["ingest", "curate", "score"])
    null_raw = sc.read_matrix_csv(null_out / "scores_raw.csv")
    null_cv = cl.cross_validate(null_raw, null_config.train_config(),
                                k=5, seed=11)
    assert 0.4 <= null_cv.auc <= 0.6, f"null AUC {null_cv.auc:.3f}"

    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"runtime {elapsed:.1f}s"
    _passed(
        "2 planted-signal synthetic (boosting AUC "
        f"{results['weighted_boosting'].auc:.3f}, stacking AUC "
        f"{results['stacking'].auc:.3f}, null AUC {null_cv.auc:.3f}, "
        f"{elapsed:.1f}s)")


def test_criterion_3_scoring_matches_brute_force_oracle():
    rng = np.random.Generator(np.random.PCG64(33))
    vocabulary_pool = [f"w{c}{d}" for c in "abcdefghij" for d in "klmnopqrst"]
    checked = 0
    for case in range(12):
        n_docs = int(rng.integers(2, 11))
        vocab_size = int(rng.integers(5, 51))
        terms = list(rng.choice(vocabulary_pool, size=vocab_size,
                                replace=False))
        docs = []
        for _ in range(n_docs):
            length = int(rng.integers(0, 12))
            docs.append(list(rng.choice(terms, size=length)))
        if not any(docs):
            docs[0] = [terms[0]]
        model = sc.fit_tfidf(docs)
        idf_o = oracle.oracle_idf(docs)
        for term, idx in model.vocabulary.items():
            assert abs(model.idf[idx] - idf_o[term]) < 1e-12
            checked += 1
        binding_stems = frozenset(rng.choice(terms, size=min(6, vocab_size),
                                             replace=False))
        lex_vec = sc.lexicon_vector(model, binding_stems)
        lex_o = oracle.oracle_lexicon_weights(binding_stems, idf_o)
        dense_lex = lex_vec.to_dense()
        for term, idx in model.vocabulary.items():
            assert abs(dense_lex[idx] - lex_o.get(term, 0.0)) < 1e-12
            checked += 1
        for _ in range(4):
            tokens = list(rng.choice(terms + ["oov1", "oov2"],
                                     size=int(rng.integers(0, 20))))
            record = cu.CuratedRecord(
                user_id="u", label=None,
                cleaned_full_text=" ".join(tokens),
                stemmed_tokens=tuple(tokens), chunk_docs=(),
                phrase_text=" ".join(tokens))
            user_vec = sc.user_vector(model, record)
            user_o = oracle.oracle_user_weights(tokens, idf_o)
            dense_user = user_vec.to_dense()
            for term, idx in model.vocabulary.items():
                assert abs(dense_user[idx] - user_o.get(term, 0.0)) < 1e-12
                checked += 1
            cosine = sc.cosine_score(user_vec, lex_vec)
            cosine_o = oracle.oracle_cosine(user_o, lex_o)
            assert abs(cosine - cosine_o) < 1e-12
            checked += 1
    assert checked > 500
    _passed(f"3 scoring oracle equivalence ({checked} quantities at 1e-12)")


def test_criterion_4_degenerate_imbalance_reproduction():
    rng = np.random.Generator(np.random.PCG64(11))
    values = rng.normal(0, 1, size=(200, 5))
    labels = [0] * 180 + [1] * 20
    values[180:] += 0.15  # weak signal
    matrix = sc.ScoreMatrix(
        feature_order=tuple(f"f{i}" for i in range(5)),
        user_ids=tuple(f"u{i}" for i in range(200)),
        labels=tuple(labels),
        values=values)
    std = sc.standardize(matrix)
    data = cl.LabeledFeatures.from_matrix(std)

    linear = BaseLearnerSpec(LearnerKind.LINEAR_MAX_MARGIN,
                             {"iterations": 300}).build()
    linear.fit(data.values, data.labels.astype(float))
    linear_report = cl.report(
        data.labels.tolist(),
        (linear.predict_proba(data.values) >= 0.5).astype(int).tolist())
    assert linear_report.per_class[1].precision == 0.0
    assert linear_report.per_class[1].recall == 0.0
    assert linear_report.per_class[1].f1 == 0.0

    boosted = cl.train_weighted_boosting(
        data, class_weight_ratio=9.0)
    boosted_report = cl.report(
        data.labels.tolist(),
        (boosted.predict_values(data.values) >= 0.5).astype(int).tolist())
    assert boosted_report.per_class[1].recall > 0.0
    _passed(
        "4 degenerate imbalance (linear class-1 P=R=F1=0; weighted boosting "
        f"recall {boosted_report.per_class[1].recall:.2f})")


@pytest.mark.xfail(
    strict=True,
    reason="arithmetically unattainable as stated: five pairwise-disjoint "
           "majority subsets of exactly ceil(741/5)=149 rows each would "
           "need 745 distinct rows, but only 741 exist; the implementation "
           "partitions disjointly with sizes {149, 148, 148, 148, 148}",
)
def test_criterion_5_stacking_structure_as_stated():
    labels = np.array([1] * 79 + [0] * 741)
    samples = cl.stacking_samples(labels, seed=0)
    majority_per_sample = math.ceil(741 / 5)
    seen: set[int] = set()
    for sample in samples:
        assert len(sample["minority_rows"]) == 79
        assert len(sample["majority_rows"]) == majority_per_sample
        rows = set(sample["majority_rows"])
        assert not rows & seen
        seen |= rows


def test_criterion_5_stacking_structure_attainable_half():
    """Everything criterion 5 asks that arithmetic permits at (79, 741)."""
    labels = np.array([1] * 79 + [0] * 741)
    samples = cl.stacking_samples(labels, seed=0)
    assert len(samples) == 5
    seen: set[int] = set()
    sizes = []
    for sample in samples:
        assert sample["minority_rows"] == list(range(79))
        rows = set(sample["majority_rows"])
        assert not rows & seen, "majority subsets must be pairwise disjoint"
        seen |= rows
        sizes.append(len(rows))
    assert seen == set(range(79, 820))
    assert sorted(sizes) == [148, 148, 148, 148, 149]
    # and where 5 divides M the stated form holds exactly
    even = cl.stacking_samples(np.array([1] * 10 + [0] * 50), seed=0)
    assert all(len(s["majority_rows"]) == 10 for s in even)
    _passed("5 stacking structure (disjoint partition; exact ceil(M/5) "
            "whenever 5 | M; off-by-one documented for M=741)")


def test_criterion_6_standardization_and_bounds(tmp_path, stopwords, stemmer,
                                                bindings, phrases):
    corpora_dirs = []
    fixture = write_corpus(tmp_path / "fixture")
    corpora_dirs.append(fixture)
    for seed, strength in ((1, 0.0), (2, 0.5)):
        corpus_dir = tmp_path / f"synth{seed}"
        synth.generate_corpus(
            synth.SyntheticSpec(n_users=20, minority_fraction=0.2,
                                signal_strength=strength, posts_per_user=4,
                                vocabulary_size=80, seed=seed),
            corpus_dir)
        corpora_dirs.append(corpus_dir)

    stop_stems = cu.stem_stopwords(stopwords, stemmer)
    lexical_columns = [i for i, name in enumerate(bindings.feature_order)
                       if name != bindings.phrase_instance]
    for corpus_dir in corpora_dirs:
        records = [cu.curate(c, stopwords, stemmer)
                   for c in cu.ingest_corpus(corpus_dir)]
        docs = [cu.stem_document(doc, stemmer, stop_stems)
                for record in records for doc in record.chunk_docs]
        model = sc.fit_tfidf(docs)
        matrix = sc.compute_scores(records, bindings, phrases, model)
        lexical = matrix.values[:, lexical_columns]
        assert lexical.min() >= 0.0
        assert lexical.max() <= 1.0

        std = sc.standardize(matrix)
        fitted = std.values
        raw_std = matrix.values.std(axis=0, ddof=0)
        for column in range(fitted.shape[1]):
            if raw_std[column] == 0.0:
                assert np.allclose(fitted[:, column], 0.0)
                continue
            assert abs(fitted[:, column].mean()) < 1e-9
            assert abs(fitted[:, column].std(ddof=0) - 1.0) < 1e-9
        back = sc.unstandardize(std)
        assert np.abs(back.values - matrix.values).max() < 1e-9
    _passed("6 standardization and bounds (3 corpora, 16 lexical scores in "
            "[0,1], fit-set z-columns exact, inverse recovers raw)")


def test_criterion_7_determinism(tmp_path):
    corpus = tmp_path / "corpus"
    synth.generate_corpus(
        synth.SyntheticSpec(n_users=16, minority_fraction=0.25,
                            signal_strength=0.4, posts_per_user=4,
                            vocabulary_size=60, seed=4),
        corpus)
    artifact_bytes = []
    fingerprints = []
    for name in ("run_a", "run_b"):
        out_dir = tmp_path / name
        config = load_config(None, [
            f"corpus_root={corpus}", f"output_dir={out_dir}",
            "cv_folds=2", "seed=4"])
        manifest = pipeline.run_stages(config)
        fingerprints.append(manifest["fingerprint"])
        artifact_bytes.append({
            filename: (out_dir / filename).read_bytes()
            for filename in ("scores_raw.csv", "scores_std.csv",
                             "model.json", "evaluation.json",
                             "evaluation.txt", "labels.csv")
        })
    for filename in artifact_bytes[0]:
        assert artifact_bytes[0][filename] == artifact_bytes[1][filename], \
            filename

    # taxonomy round trip is identity on content
    taxonomy = tx.load_taxonomy(bundled_path(TAXONOMY_FIXTURE))
    out_path = tmp_path / "taxonomy.json"
    tx.save_taxonomy(taxonomy, out_path)
    reloaded = tx.load_taxonomy(out_path)
    assert set(reloaded.nodes) == set(taxonomy.nodes)
    assert set(reloaded.edges) == set(taxonomy.edges)

    # lexicon and phrase-list loads are stable on identical content
    from mindkb.resources import BUNDLED_LEXICONS
    for source, rel in BUNDLED_LEXICONS.items():
        first = load_lexicon(bundled_path(rel), source)
        second = load_lexicon(bundled_path(rel), source)
        assert first == second
    phrases_a = load_phrase_list(bundled_path(SUICIDAL_PHRASES))
    phrases_b = load_phrase_list(bundled_path(SUICIDAL_PHRASES))
    assert phrases_a == phrases_b
    _passed("7 determinism (byte-identical artifacts across runs; "
            "round-trips are identity)")
