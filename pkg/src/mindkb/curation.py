"""Raw corpus ingestion and per-user text curation.

Input corpora follow the chunked XML layout: ``chunk1..chunk10/<user>.xml``
where each file holds ``<INDIVIDUAL><ID/><WRITING><TITLE/><DATE/><TEXT/>
</WRITING>...</INDIVIDUAL>``, plus an optional ``golden_truth.txt`` labels
file (``user_id<space>label``). Curation cleans, tokenizes, and stems each
user's posts; per-user work is pure, so callers may parallelise it.

Cleaning removes stopwords at the surface level and curation drops any stem
that collapses onto a stemmed stopword (e.g. "willing" -> "will"), so
curated token streams never contain stopword stems.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedXml
from .stemmer import PorterStemmer

log = logging.getLogger(__name__)

CHUNK_COUNT = 10
LABELS_FILENAME = "golden_truth.txt"

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_TAG_RE = re.compile(r"<[^>]*>")
_ENTITY_RE = re.compile(r"&#?\w+;")
_APOSTROPHE_DIGIT_RE = re.compile(r"[’'0-9]")


@dataclass(frozen=True)
class Post:
    title: str
    date: str | None
    text: str


@dataclass(frozen=True)
class UserCorpus:
    user_id: str
    label: int | None
    chunks: tuple[tuple[Post, ...], ...]

    def post_count(self) -> int:
        return sum(len(chunk) for chunk in self.chunks)


@dataclass(frozen=True)
class CuratedRecord:
    user_id: str
    label: int | None
    cleaned_full_text: str
    stemmed_tokens: tuple[str, ...]
    chunk_docs: tuple[str, ...]
    # Lowercased, symbol-stripped text with stopwords retained; phrase
    # counting needs the function words that cleaning throws away.
    phrase_text: str = ""


class EnrichmentProvider:
    """Expands a term into related terms; unknown terms expand to nothing."""

    def expand(self, term: str) -> list[str]:
        raise NotImplementedError


class NoOpEnrichment(EnrichmentProvider):
    def expand(self, term: str) -> list[str]:
        return []


class DictionaryEnrichment(EnrichmentProvider):
    """File-backed enrichment: a JSON object mapping term -> expansion list."""

    def __init__(self, mapping: dict[str, list[str]]):
        self.mapping = {k.lower(): list(v) for k, v in mapping.items()}

    @classmethod
    def from_json(cls, path: str | Path) -> "DictionaryEnrichment":
        with Path(path).open(encoding="utf-8") as handle:
            return cls(json.load(handle))

    def expand(self, term: str) -> list[str]:
        return list(self.mapping.get(term.lower(), ()))


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def stem_stopwords(stopwords: frozenset[str],
                   stemmer: PorterStemmer) -> frozenset[str]:
    return frozenset(stemmer.stem(w) for w in stopwords)


# --- ingestion ---


def _parse_user_xml(path: Path) -> list[Post]:
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = None
        try:
            raw = path.read_bytes().splitlines(keepends=True)
            offset = sum(len(l) for l in raw[: line - 1]) + column
        except OSError:
            pass
        raise MalformedXml(str(path), str(exc), offset) from exc
    posts = []
    for writing in tree.getroot().iter("WRITING"):
        title = (writing.findtext("TITLE") or "").strip()
        date = (writing.findtext("DATE") or "").strip() or None
        text = (writing.findtext("TEXT") or "").strip()
        posts.append(Post(title=title, date=date, text=text))
    return posts


def read_labels(path: Path) -> dict[str, int]:
    labels: dict[str, int] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(),
                                  start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise MalformedXml(str(path), f"bad label line {lineno}: {line!r}")
        labels[parts[0]] = int(parts[1])
    return labels


def ingest_corpus(root_dir: str | Path) -> list[UserCorpus]:
    """Read a chunked XML corpus into one :class:`UserCorpus` per user.

    Users are discovered as the union of file stems across chunk
    directories, so directory read order cannot change the result. Missing
    chunk files produce empty post lists and a warning rather than failure.
    A labels file is optional; users and labels that fail to pair up are
    reported as warnings, never fatally.
    """
    root = Path(root_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root {root} is not a directory")
    user_ids: set[str] = set()
    for chunk_no in range(1, CHUNK_COUNT + 1):
        chunk_dir = root / f"chunk{chunk_no}"
        if chunk_dir.is_dir():
            user_ids.update(p.stem for p in chunk_dir.glob("*.xml"))
    labels: dict[str, int] = {}
    labels_path = root / LABELS_FILENAME
    if labels_path.is_file():
        labels = read_labels(labels_path)
        for missing in sorted(set(labels) - user_ids):
            log.warning("label file lists %s but the corpus has no such user",
                        missing)
        for unlabeled in sorted(user_ids - set(labels)):
            log.warning("user %s has no entry in the label file", unlabeled)
    corpora = []
    for user_id in sorted(user_ids):
        chunks = []
        for chunk_no in range(1, CHUNK_COUNT + 1):
            path = root / f"chunk{chunk_no}" / f"{user_id}.xml"
            if path.is_file():
                chunks.append(tuple(_parse_user_xml(path)))
            else:
                log.warning("user %s is missing chunk%d", user_id, chunk_no)
                chunks.append(())
        corpora.append(UserCorpus(
            user_id=user_id,
            label=labels.get(user_id),
            chunks=tuple(chunks),
        ))
    return corpora


# --- cleaning ---


def _strip_markup(text: str) -> str:
    text = _URL_RE.sub(" ", text)
    text = _TAG_RE.sub(" ", text)
    return _ENTITY_RE.sub(" ", text)


def _letters_only(text: str) -> str:
    # Apostrophes and digits vanish in place (can't -> cant, 3am -> am);
    # every other non-alphabetic codepoint becomes a word break.
    text = _APOSTROPHE_DIGIT_RE.sub("", text)
    return "".join(ch if ch.isalpha() else " " for ch in text)


def clean_text(raw: str, stopwords: frozenset[str]) -> str:
    """Lowercase; drop URLs, markup, punctuation, digits, and stopwords."""
    if not raw:
        return ""
    text = unicodedata.normalize("NFC", raw).lower()
    text = _strip_markup(text)
    text = _letters_only(text)
    kept = [tok for tok in text.split() if tok not in stopwords]
    return " ".join(kept)


def phrase_clean_text(raw: str) -> str:
    """Like :func:`clean_text` but keeps stopwords, for phrase counting."""
    if not raw:
        return ""
    text = unicodedata.normalize("NFC", raw).lower()
    text = _strip_markup(text)
    return " ".join(_letters_only(text).split())


def tokenize_and_stem(cleaned: str, stemmer: PorterStemmer) -> list[str]:
    """Whitespace-tokenize already-cleaned text and stem each token."""
    out = []
    for token in cleaned.split():
        stemmed = stemmer.stem(token)
        if stemmed:
            out.append(stemmed)
    return out


def stem_document(cleaned: str, stemmer: PorterStemmer,
                  stop_stems: frozenset[str]) -> list[str]:
    """Stems of a cleaned document with stopword stems filtered out."""
    return [s for s in tokenize_and_stem(cleaned, stemmer)
            if s not in stop_stems]


# --- curation ---


def _post_text(post: Post, include_titles: bool) -> str:
    if include_titles and post.title:
        return f"{post.title} {post.text}" if post.text else post.title
    return post.text


def curate(
    corpus: UserCorpus,
    stopwords: frozenset[str],
    stemmer: PorterStemmer,
    enrichment: EnrichmentProvider | None = None,
    include_titles: bool = True,
) -> CuratedRecord:
    """Produce the cleaned, tokenized, stemmed record for one user.

    ``cleaned_full_text`` is the chunk-order concatenation of the cleaned
    chunk documents, so its token count always equals the sum over chunks.
    Enrichment expansions (if any) are cleaned, stemmed, and appended after
    the base token stream in token order.
    """
    enrichment = enrichment or NoOpEnrichment()
    stop_stems = stem_stopwords(stopwords, stemmer)
    chunk_docs = []
    phrase_parts = []
    for chunk in corpus.chunks:
        parts = [_post_text(post, include_titles) for post in chunk]
        joined = " ".join(p for p in parts if p)
        chunk_docs.append(clean_text(joined, stopwords))
        phrase_parts.append(phrase_clean_text(joined))
    cleaned_full_text = " ".join(doc for doc in chunk_docs if doc)
    phrase_text = " ".join(p for p in phrase_parts if p)
    if not cleaned_full_text:
        log.warning("user %s has no text after cleaning", corpus.user_id)

    base_tokens = cleaned_full_text.split()
    stems = [s for s in (stemmer.stem(t) for t in base_tokens)
             if s and s not in stop_stems]
    expansions: list[str] = []
    for token in base_tokens:
        for term in enrichment.expand(token):
            cleaned_term = clean_text(term, stopwords)
            for stemmed in tokenize_and_stem(cleaned_term, stemmer):
                if stemmed not in stop_stems:
                    expansions.append(stemmed)
    return CuratedRecord(
        user_id=corpus.user_id,
        label=corpus.label,
        cleaned_full_text=cleaned_full_text,
        stemmed_tokens=tuple(stems + expansions),
        chunk_docs=tuple(chunk_docs),
        phrase_text=phrase_text,
    )


# --- JSON-lines checkpointing ---


def record_to_dict(record: CuratedRecord) -> dict:
    return {
        "user_id": record.user_id,
        "label": record.label,
        "cleaned_full_text": record.cleaned_full_text,
        "stemmed_tokens": list(record.stemmed_tokens),
        "chunk_docs": list(record.chunk_docs),
        "phrase_text": record.phrase_text,
    }


def record_from_dict(raw: dict) -> CuratedRecord:
    return CuratedRecord(
        user_id=raw["user_id"],
        label=raw.get("label"),
        cleaned_full_text=raw["cleaned_full_text"],
        stemmed_tokens=tuple(raw["stemmed_tokens"]),
        chunk_docs=tuple(raw["chunk_docs"]),
        phrase_text=raw.get("phrase_text", ""),
    )


def write_records(records: list[CuratedRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record_to_dict(record), sort_keys=True))
            handle.write("\n")


def read_records(path: str | Path) -> list[CuratedRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                records.append(record_from_dict(json.loads(line)))
    return records


def corpus_to_dict(corpus: UserCorpus) -> dict:
    return {
        "user_id": corpus.user_id,
        "label": corpus.label,
        "chunks": [
            [{"title": p.title, "date": p.date, "text": p.text} for p in chunk]
            for chunk in corpus.chunks
        ],
    }


def corpus_from_dict(raw: dict) -> UserCorpus:
    return UserCorpus(
        user_id=raw["user_id"],
        label=raw.get("label"),
        chunks=tuple(
            tuple(Post(p["title"], p.get("date"), p["text"]) for p in chunk)
            for chunk in raw["chunks"]
        ),
    )


def write_corpora(corpora: list[UserCorpus], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as handle:
        for corpus in corpora:
            handle.write(json.dumps(corpus_to_dict(corpus), sort_keys=True))
            handle.write("\n")


def read_corpora(path: str | Path) -> list[UserCorpus]:
    corpora = []
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                corpora.append(corpus_from_dict(json.loads(line)))
    return corpora
