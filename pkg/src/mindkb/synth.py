"""Deterministic synthetic corpora in the chunked XML layout.

Minority ("depressed") users draw words from the bundled binding lexicons
at an elevated rate controlled by ``signal_strength``; at strength zero the
two classes are statistically identical, which is the null case the
acceptance suite checks. Everything is a pure function of the spec, so the
same spec always writes byte-identical files.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import lexicon as lx
from . import taxonomy as tx
from .curation import LABELS_FILENAME
from .errors import InvalidSpec
from .resources import (
    BINDINGS_CONFIG,
    BUNDLED_LEXICONS,
    SUICIDAL_PHRASES,
    TAXONOMY_FIXTURE,
    bundled_path,
)
from .stemmer import PorterStemmer

_BASE_SIGNAL_RATE = 0.05
_NOISE_SNIPPETS = (
    "!!", "...", "https://example.org/post 123", "42", "<b>ok</b>", "&amp;",
)


@dataclass(frozen=True)
class SyntheticSpec:
    n_users: int = 100
    minority_fraction: float = 0.1
    signal_strength: float = 0.3
    posts_per_user: int = 20
    vocabulary_size: int = 400
    seed: int = 0

    def validate(self) -> None:
        if self.n_users < 2:
            raise InvalidSpec(f"n_users must be >= 2, got {self.n_users}")
        if not (0.0 < self.minority_fraction < 1.0):
            raise InvalidSpec(
                f"minority_fraction must be in (0, 1), got "
                f"{self.minority_fraction}")
        if self.signal_strength < 0.0:
            raise InvalidSpec(
                f"signal_strength must be >= 0, got {self.signal_strength}")
        if self.posts_per_user < 1:
            raise InvalidSpec(
                f"posts_per_user must be >= 1, got {self.posts_per_user}")
        if self.vocabulary_size < 10:
            raise InvalidSpec(
                f"vocabulary_size must be >= 10, got {self.vocabulary_size}")


def _filler_word(index: int) -> str:
    # Alphabetic-only pseudo-words; an "x" prefix keeps them clear of both
    # the stopword list and every bundled lexicon.
    letters = []
    index += 1
    while index:
        index, digit = divmod(index, 26)
        letters.append(chr(ord("a") + digit))
    return "x" + "".join(reversed(letters))


def _signal_words() -> list[str]:
    """Surface words of all bundled lexical bindings, deduplicated, sorted."""
    taxonomy = tx.load_taxonomy(bundled_path(TAXONOMY_FIXTURE))
    lexicons = {
        name: lx.load_lexicon(bundled_path(rel), name)
        for name, rel in BUNDLED_LEXICONS.items()
    }
    bindings = lx.load_bindings_config(
        bundled_path(BINDINGS_CONFIG), lexicons, taxonomy, PorterStemmer())
    words: set[str] = set()
    for entry_name in bindings.feature_order:
        if entry_name == bindings.phrase_instance:
            continue
        for source_name, category in bindings.lexical[entry_name].sources:
            words.update(lexicons[source_name].words(category))
    return sorted(words)


def _suicidal_phrases() -> list[str]:
    return list(lx.load_phrase_list(bundled_path(SUICIDAL_PHRASES)).phrases)


def generate_corpus(spec: SyntheticSpec, out_dir: str | Path) -> dict:
    """Write the corpus under ``out_dir``; returns a small summary dict."""
    spec.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    n_minority = min(max(1, round(spec.n_users * spec.minority_fraction)),
                     spec.n_users - 1)
    width = len(str(spec.n_users))
    user_ids = [f"user{str(i).zfill(width)}" for i in range(spec.n_users)]
    minority_users = set(
        np.array(user_ids)[rng.permutation(spec.n_users)[:n_minority]])

    filler = [_filler_word(i) for i in range(spec.vocabulary_size)]
    signal = _signal_words()
    phrases = _suicidal_phrases()

    signal_rate = {
        0: _BASE_SIGNAL_RATE,
        1: min(0.95, _BASE_SIGNAL_RATE + spec.signal_strength),
    }
    phrase_rate = {0: 0.02, 1: min(0.9, 0.02 + spec.signal_strength)}

    labels: dict[str, int] = {}
    for chunk_no in range(1, 11):
        (out / f"chunk{chunk_no}").mkdir(exist_ok=True)
    for user_id in user_ids:
        label = 1 if user_id in minority_users else 0
        labels[user_id] = label
        chunks: list[list[tuple[str, str, str]]] = [[] for _ in range(10)]
        for post_no in range(spec.posts_per_user):
            n_tokens = int(rng.integers(30, 51))
            is_signal = rng.random(n_tokens) < signal_rate[label]
            tokens = []
            for flag in is_signal:
                pool = signal if flag else filler
                tokens.append(pool[int(rng.integers(0, len(pool)))])
            if rng.random() < phrase_rate[label]:
                insert_at = int(rng.integers(0, len(tokens) + 1))
                phrase = phrases[int(rng.integers(0, len(phrases)))]
                tokens[insert_at:insert_at] = phrase.split()
            if rng.random() < 0.3:
                snippet = _NOISE_SNIPPETS[int(rng.integers(0, len(_NOISE_SNIPPETS)))]
                tokens.append(snippet)
            title = f"note {post_no}" if rng.random() < 0.2 else ""
            day = 1 + (post_no % 28)
            date = f"2017-{1 + post_no % 12:02d}-{day:02d}T{post_no % 24:02d}:14:54"
            chunks[post_no % 10].append((title, date, " ".join(tokens)))
        for chunk_no, posts in enumerate(chunks, start=1):
            _write_user_xml(out / f"chunk{chunk_no}" / f"{user_id}.xml",
                            user_id, posts)
    with (out / LABELS_FILENAME).open("w", encoding="utf-8", newline="\n") as fh:
        for user_id in user_ids:
            fh.write(f"{user_id} {labels[user_id]}\n")
    return {
        "n_users": spec.n_users,
        "n_minority": n_minority,
        "out_dir": str(out),
    }


def _write_user_xml(path: Path, user_id: str,
                    posts: list[tuple[str, str, str]]) -> None:
    individual = ET.Element("INDIVIDUAL")
    id_el = ET.SubElement(individual, "ID")
    id_el.text = user_id
    for title, date, text in posts:
        writing = ET.SubElement(individual, "WRITING")
        ET.SubElement(writing, "TITLE").text = title
        ET.SubElement(writing, "DATE").text = date
        ET.SubElement(writing, "TEXT").text = text
    ET.indent(individual)
    payload = ET.tostring(individual, encoding="unicode")
    path.write_text(payload + "\n", encoding="utf-8")
