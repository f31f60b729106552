"""Per-user instance scores: TF-IDF cosine similarities plus a phrase count.

The TF-IDF variant is fully pinned so every run agrees bit-for-bit at double
precision: raw term counts, smoothed idf ``ln((1+N)/(1+df)) + 1`` over the
per-chunk documents (10 per user), L2 normalization, lexicographic
vocabulary order. Lexicon vectors are binary indicators over the vocabulary
intersection (idf weighting available behind a toggle). The suicidal
instance is a non-overlapping, word-boundary-anchored phrase count rather
than a similarity.

Models and matrices are immutable; per-user scoring is pure.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .curation import CuratedRecord, stem_document
from .errors import EmptyCorpus, FeatureMismatch, MissingBinding
from .lexicon import BindingSet, PhraseList
from .stemmer import PorterStemmer

USER_VECTOR_MODES = ("concatenated", "chunk_mean")


@dataclass(frozen=True)
class TfIdfModel:
    vocabulary: dict[str, int]  # stem -> column, lexicographic order
    idf: np.ndarray
    doc_count: int

    def to_dict(self) -> dict:
        terms = sorted(self.vocabulary, key=self.vocabulary.get)
        return {
            "vocabulary": terms,
            "idf": [float(x) for x in self.idf],
            "doc_count": self.doc_count,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TfIdfModel":
        vocab = {term: i for i, term in enumerate(raw["vocabulary"])}
        return cls(
            vocabulary=vocab,
            idf=np.asarray(raw["idf"], dtype=np.float64),
            doc_count=int(raw["doc_count"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TfIdfModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class SparseVector:
    """L2-normalizable sparse vector over a fixed vocabulary."""

    indices: np.ndarray  # sorted int32 column indices
    values: np.ndarray   # float64, parallel to indices
    size: int

    @classmethod
    def empty(cls, size: int) -> "SparseVector":
        return cls(np.empty(0, dtype=np.int64),
                   np.empty(0, dtype=np.float64), size)

    def norm(self) -> float:
        return float(math.sqrt(float(np.dot(self.values, self.values))))

    def normalized(self) -> "SparseVector":
        n = self.norm()
        if n == 0.0:
            return self
        return SparseVector(self.indices, self.values / n, self.size)

    def dot(self, other: "SparseVector") -> float:
        if self.size != other.size:
            raise FeatureMismatch("vectors built over different vocabularies")
        i = j = 0
        total = 0.0
        a_idx, b_idx = self.indices, other.indices
        a_val, b_val = self.values, other.values
        while i < len(a_idx) and j < len(b_idx):
            if a_idx[i] == b_idx[j]:
                total += float(a_val[i]) * float(b_val[j])
                i += 1
                j += 1
            elif a_idx[i] < b_idx[j]:
                i += 1
            else:
                j += 1
        return total

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.size, dtype=np.float64)
        dense[self.indices] = self.values
        return dense


def fit_tfidf(docs: list[list[str]]) -> TfIdfModel:
    """Fit vocabulary and smoothed idf over per-chunk stem lists.

    Every document counts toward N, including empty ones; df is the number
    of documents containing a stem at least once.
    """
    if not any(docs):
        raise EmptyCorpus("no non-empty documents to fit on")
    df: Counter[str] = Counter()
    for doc in docs:
        df.update(set(doc))
    terms = sorted(df)
    vocabulary = {term: i for i, term in enumerate(terms)}
    n_docs = len(docs)
    idf = np.array(
        [math.log((1.0 + n_docs) / (1.0 + df[t])) + 1.0 for t in terms],
        dtype=np.float64,
    )
    return TfIdfModel(vocabulary=vocabulary, idf=idf, doc_count=n_docs)


def _tf_vector(model: TfIdfModel, stems: list[str] | tuple[str, ...]) -> SparseVector:
    counts: Counter[str] = Counter(stems)
    pairs = sorted(
        (model.vocabulary[t], float(c))
        for t, c in counts.items() if t in model.vocabulary
    )
    if not pairs:
        return SparseVector.empty(len(model.vocabulary))
    indices = np.array([p[0] for p in pairs], dtype=np.int64)
    tf = np.array([p[1] for p in pairs], dtype=np.float64)
    return SparseVector(indices, tf * model.idf[indices], len(model.vocabulary))


def user_vector(model: TfIdfModel, record: CuratedRecord) -> SparseVector:
    """L2-normalized tf-idf vector of the user's concatenated stems.

    Out-of-vocabulary stems are ignored; an all-OOV or empty user yields the
    zero vector.
    """
    return _tf_vector(model, record.stemmed_tokens).normalized()


def chunk_mean_vector(
    model: TfIdfModel,
    record: CuratedRecord,
    stemmer: PorterStemmer,
    stop_stems: frozenset[str],
) -> SparseVector:
    """Mean of the user's per-chunk normalized tf-idf vectors."""
    dense = np.zeros(len(model.vocabulary), dtype=np.float64)
    n_chunks = max(len(record.chunk_docs), 1)
    for doc in record.chunk_docs:
        vec = _tf_vector(
            model, stem_document(doc, stemmer, stop_stems)).normalized()
        if len(vec.indices):
            dense[vec.indices] += vec.values
    dense /= float(n_chunks)
    indices = np.nonzero(dense)[0]
    return SparseVector(indices, dense[indices], len(model.vocabulary))


def lexicon_vector(
    model: TfIdfModel,
    binding_stems: frozenset[str],
    weight_by_idf: bool = False,
) -> SparseVector:
    """Normalized indicator vector of a binding over the model vocabulary."""
    indices = np.array(
        sorted(model.vocabulary[s] for s in binding_stems
               if s in model.vocabulary),
        dtype=np.int64,
    )
    if len(indices) == 0:
        return SparseVector.empty(len(model.vocabulary))
    if weight_by_idf:
        values = model.idf[indices].astype(np.float64)
    else:
        values = np.ones(len(indices), dtype=np.float64)
    return SparseVector(indices, values, len(model.vocabulary)).normalized()


def cosine_score(u: SparseVector, lex: SparseVector) -> float:
    """dot(u, l) / (|u||l|); 0.0 whenever either norm is zero."""
    nu, nl = u.norm(), lex.norm()
    if nu == 0.0 or nl == 0.0:
        return 0.0
    return u.dot(lex) / (nu * nl)


def compile_phrase_pattern(phrases: PhraseList) -> re.Pattern:
    # Longer phrases first so the scan prefers the most specific match;
    # finditer then yields leftmost non-overlapping occurrences.
    ordered = sorted(phrases.phrases, key=len, reverse=True)
    alternatives = [r"\s+".join(re.escape(w) for w in p.split())
                    for p in ordered]
    return re.compile(r"\b(?:" + "|".join(alternatives) + r")\b")


def suicidal_count(cleaned_full_text: str, phrases: PhraseList) -> int:
    """Total non-overlapping, word-boundary-anchored phrase occurrences."""
    if not cleaned_full_text:
        return 0
    pattern = compile_phrase_pattern(phrases)
    return sum(1 for _ in pattern.finditer(cleaned_full_text))


# --- score matrices ---


@dataclass(frozen=True)
class Standardization:
    mean: np.ndarray
    std: np.ndarray      # population std of the fit rows; 0 marks a constant column
    columns: tuple[int, ...]

    def transform(self, values: np.ndarray) -> np.ndarray:
        out = values.astype(np.float64).copy()
        cols = np.asarray(self.columns, dtype=np.int64)
        safe_std = np.where(self.std == 0.0, 1.0, self.std)
        out[:, cols] = (out[:, cols] - self.mean) / safe_std
        return out

    def inverse(self, values: np.ndarray) -> np.ndarray:
        out = values.astype(np.float64).copy()
        cols = np.asarray(self.columns, dtype=np.int64)
        safe_std = np.where(self.std == 0.0, 1.0, self.std)
        out[:, cols] = out[:, cols] * safe_std + self.mean
        return out

    def to_dict(self) -> dict:
        return {
            "mean": [float(x) for x in self.mean],
            "std": [float(x) for x in self.std],
            "columns": list(self.columns),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Standardization":
        return cls(
            mean=np.asarray(raw["mean"], dtype=np.float64),
            std=np.asarray(raw["std"], dtype=np.float64),
            columns=tuple(raw["columns"]),
        )


@dataclass(frozen=True)
class ScoreMatrix:
    feature_order: tuple[str, ...]
    user_ids: tuple[str, ...]
    labels: tuple[int | None, ...]
    values: np.ndarray  # (n_users, n_features) float64
    standardization: Standardization | None = None

    @property
    def is_raw(self) -> bool:
        return self.standardization is None

    def row(self, index: int) -> "ScoreVector":
        return ScoreVector(
            user_id=self.user_ids[index],
            scores=dict(zip(self.feature_order, self.values[index])),
            raw=self.is_raw,
        )

    def labeled_indices(self) -> list[int]:
        return [i for i, label in enumerate(self.labels) if label is not None]


@dataclass(frozen=True)
class ScoreVector:
    user_id: str
    scores: dict[str, float]
    raw: bool

    def as_array(self, feature_order: tuple[str, ...]) -> np.ndarray:
        missing = [f for f in feature_order if f not in self.scores]
        extra = [f for f in self.scores if f not in feature_order]
        if missing or extra:
            raise FeatureMismatch(
                f"score vector features do not match (missing={missing}, "
                f"extra={extra})")
        return np.array([self.scores[f] for f in feature_order],
                        dtype=np.float64)


def compute_scores(
    records: list[CuratedRecord],
    bindings: BindingSet,
    phrases: PhraseList,
    model: TfIdfModel,
    *,
    user_vector_mode: str = "concatenated",
    weight_lexicon_by_idf: bool = False,
    stemmer: PorterStemmer | None = None,
    stop_stems: frozenset[str] = frozenset(),
) -> ScoreMatrix:
    """One raw 17-score row per user, in binding feature order."""
    if user_vector_mode not in USER_VECTOR_MODES:
        raise ValueError(f"user_vector_mode must be one of {USER_VECTOR_MODES}")
    if user_vector_mode == "chunk_mean" and stemmer is None:
        stemmer = PorterStemmer()
    lex_vectors: dict[str, SparseVector] = {}
    for name in bindings.feature_order:
        if name == bindings.phrase_instance:
            continue
        binding = bindings.binding(name)  # raises MissingBinding
        lex_vectors[name] = lexicon_vector(
            model, binding.merged_stems, weight_by_idf=weight_lexicon_by_idf)
    if bindings.phrase_instance is None and len(bindings.feature_order) != len(
            lex_vectors):
        raise MissingBinding("phrase instance missing from binding set")
    phrase_pattern = compile_phrase_pattern(phrases)

    rows = np.zeros((len(records), len(bindings.feature_order)),
                    dtype=np.float64)
    for r, record in enumerate(records):
        if user_vector_mode == "concatenated":
            uvec = user_vector(model, record)
        else:
            uvec = chunk_mean_vector(model, record, stemmer, stop_stems)
        for c, name in enumerate(bindings.feature_order):
            if name == bindings.phrase_instance:
                text = record.phrase_text or record.cleaned_full_text
                rows[r, c] = float(
                    sum(1 for _ in phrase_pattern.finditer(text)))
            else:
                rows[r, c] = cosine_score(uvec, lex_vectors[name])
    return ScoreMatrix(
        feature_order=bindings.feature_order,
        user_ids=tuple(rec.user_id for rec in records),
        labels=tuple(rec.label for rec in records),
        values=rows,
    )


def standardize(
    matrix: ScoreMatrix,
    fit_rows: list[int] | None = None,
    columns: list[int] | None = None,
) -> ScoreMatrix:
    """Z-score features using statistics from ``fit_rows`` only.

    Population statistics (ddof 0). Constant columns transform to zero.
    ``columns`` restricts standardization to a subset of features (the
    count-valued instance alone, when configured that way).
    """
    if not matrix.is_raw:
        raise ValueError("matrix is already standardized")
    if fit_rows is None:
        fit_rows = list(range(len(matrix.user_ids)))
    if not fit_rows:
        raise ValueError("fit_rows must be non-empty")
    if columns is None:
        columns = list(range(len(matrix.feature_order)))
    fit = matrix.values[np.asarray(fit_rows, dtype=np.int64)][:, columns]
    stats = Standardization(
        mean=fit.mean(axis=0),
        std=fit.std(axis=0, ddof=0),
        columns=tuple(columns),
    )
    return replace(matrix, values=stats.transform(matrix.values),
                   standardization=stats)


def apply_standardization(matrix: ScoreMatrix,
                          stats: Standardization) -> ScoreMatrix:
    """Standardize a raw matrix with previously fitted statistics."""
    if not matrix.is_raw:
        raise ValueError("matrix is already standardized")
    return replace(matrix, values=stats.transform(matrix.values),
                   standardization=stats)


def unstandardize(matrix: ScoreMatrix) -> ScoreMatrix:
    if matrix.standardization is None:
        raise ValueError("matrix is not standardized")
    return replace(matrix, values=matrix.standardization.inverse(matrix.values),
                   standardization=None)


# --- CSV output ---


def write_matrix_csv(matrix: ScoreMatrix, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("user_id,label," + ",".join(matrix.feature_order) + "\n")
        for i, user_id in enumerate(matrix.user_ids):
            label = "" if matrix.labels[i] is None else str(matrix.labels[i])
            cells = ",".join(repr(float(v)) for v in matrix.values[i])
            handle.write(f"{user_id},{label},{cells}\n")


def read_matrix_csv(path: str | Path,
                    standardization: Standardization | None = None) -> ScoreMatrix:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    feature_order = tuple(header[2:])
    user_ids, labels, rows = [], [], []
    for line in lines[1:]:
        if not line:
            continue
        cells = line.split(",")
        user_ids.append(cells[0])
        labels.append(int(cells[1]) if cells[1] else None)
        rows.append([float(x) for x in cells[2:]])
    return ScoreMatrix(
        feature_order=feature_order,
        user_ids=tuple(user_ids),
        labels=tuple(labels),
        values=np.asarray(rows, dtype=np.float64).reshape(
            len(user_ids), len(feature_order)),
        standardization=standardization,
    )
