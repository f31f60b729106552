"""Lexical sources and their connection to taxonomy instances.

A :class:`Lexicon` is a named set of word categories parsed from TSV
(``word<TAB>category``). Binding an instance merges one or more categories
into a single stemmed word set; the merged set is what the scoring stage
matches against user text. Multi-word cues live in a :class:`PhraseList`
instead and are counted, not vectorised.

All values are immutable after construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from . import taxonomy as tx
from .errors import (
    EmptyCategory,
    EmptyFile,
    MissingBinding,
    ParseError,
    UnknownCategory,
    UnknownInstance,
)
from .stemmer import PorterStemmer

#: Number of named scores a full configuration produces.
EXPECTED_FEATURES = 17


@dataclass(frozen=True)
class Lexicon:
    source_name: str
    categories: dict[str, tuple[str, ...]]
    license_note: str = ""

    def words(self, category: str) -> tuple[str, ...]:
        try:
            return self.categories[category]
        except KeyError:
            raise UnknownCategory(
                f"lexicon {self.source_name!r} has no category {category!r}"
            ) from None


@dataclass(frozen=True)
class PhraseList:
    name: str
    phrases: tuple[str, ...]


@dataclass(frozen=True)
class InstanceBinding:
    instance: str
    sources: tuple[tuple[str, str], ...]  # (source_name, category)
    merged_stems: frozenset[str]


@dataclass(frozen=True)
class BindingSet:
    """Ordered bindings for one scoring run.

    ``feature_order`` fixes the column order of every score matrix; it
    contains the 16 lexical instances plus the phrase-count instance.
    """

    feature_order: tuple[str, ...]
    lexical: dict[str, InstanceBinding]
    phrase_instance: str | None

    def binding(self, instance: str) -> InstanceBinding:
        try:
            return self.lexical[instance]
        except KeyError:
            raise MissingBinding(f"no lexical binding for {instance!r}") from None


def _normalize_word(word: str) -> str:
    return word.strip().lower()


def load_lexicon(path: str | Path, source_name: str,
                 license_note: str = "") -> Lexicon:
    """Parse a lexicon TSV; lines are ``word<TAB>category``, ``#`` comments."""
    path = Path(path)
    categories: dict[str, list[str]] = {}
    seen: set[tuple[str, str]] = set()
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(
                    f"{path}:{lineno}: expected word<TAB>category, got {line!r}")
            word, category = _normalize_word(parts[0]), parts[1].strip()
            if not category:
                raise ParseError(f"{path}:{lineno}: empty category name")
            categories.setdefault(category, [])
            if not word:
                continue  # category declared without a word
            if (category, word) in seen:
                continue
            seen.add((category, word))
            categories[category].append(word)
    for category, words in categories.items():
        if not words:
            raise EmptyCategory(
                f"{path}: category {category!r} contains no words")
    return Lexicon(
        source_name=source_name,
        categories={c: tuple(w) for c, w in categories.items()},
        license_note=license_note,
    )


def _strip_symbols(word: str) -> str:
    return "".join(ch for ch in word if ch.isalpha())


def preprocess_lexicon(lexicon: Lexicon, stemmer: PorterStemmer) -> Lexicon:
    """Strip punctuation/symbols from every word and stem it.

    Empty results are dropped and each category deduplicated, preserving
    first-occurrence order. Idempotent: stemming a stemmed lexicon again is
    the identity.
    """
    categories: dict[str, tuple[str, ...]] = {}
    for category, words in lexicon.categories.items():
        out: list[str] = []
        seen: set[str] = set()
        for word in words:
            stripped = _strip_symbols(word.lower())
            if not stripped:
                continue
            stemmed = stemmer.stem(stripped)
            if stemmed and stemmed not in seen:
                seen.add(stemmed)
                out.append(stemmed)
        categories[category] = tuple(out)
    return Lexicon(lexicon.source_name, categories, lexicon.license_note)


def bind_instance(
    taxonomy: tx.Taxonomy,
    instance: str,
    selections: list[tuple[Lexicon, str]],
    stemmer: PorterStemmer | None = None,
) -> InstanceBinding:
    """Merge the stemmed words of ``selections`` into one instance binding.

    The merged set is a plain union, so selection order never matters.
    """
    stemmer = stemmer or PorterStemmer()
    if not taxonomy.has_node(instance):
        raise UnknownInstance(f"instance {instance!r} is not in the taxonomy")
    node = taxonomy.node(instance)
    if node.kind not in (tx.NodeKind.INSTANCE, tx.NodeKind.SUB_INSTANCE):
        raise UnknownInstance(
            f"node {instance!r} has kind {node.kind.value}, not an instance")
    merged: set[str] = set()
    sources: list[tuple[str, str]] = []
    for lexicon, category in selections:
        words = lexicon.words(category)  # raises UnknownCategory
        sources.append((lexicon.source_name, category))
        for word in words:
            stripped = _strip_symbols(word.lower())
            if not stripped:
                continue
            stemmed = stemmer.stem(stripped)
            if stemmed:
                merged.add(stemmed)
    return InstanceBinding(
        instance=instance,
        sources=tuple(sources),
        merged_stems=frozenset(merged),
    )


def load_phrase_list(path: str | Path, name: str = "") -> PhraseList:
    """One phrase per line; ``#`` comments and blank lines are skipped."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc})") from exc
    phrases: list[str] = []
    for line in raw.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        phrases.append(" ".join(line.lower().split()))
    if not phrases:
        raise EmptyFile(f"{path}: no phrases found")
    return PhraseList(name=name or path.stem, phrases=tuple(phrases))


def load_bindings_config(
    path: str | Path,
    lexicons: dict[str, Lexicon],
    taxonomy: tx.Taxonomy,
    stemmer: PorterStemmer | None = None,
) -> BindingSet:
    """Build a :class:`BindingSet` from the bindings JSON document.

    The document is an array of ``{"instance", "selections": [{"source",
    "category"}]}`` objects in feature order; an entry with ``"kind":
    "phrase_count"`` marks the phrase-counted instance.
    """
    stemmer = stemmer or PorterStemmer()
    path = Path(path)
    try:
        entries = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(entries, list):
        raise ParseError(f"{path}: bindings document must be a JSON array")
    feature_order: list[str] = []
    lexical: dict[str, InstanceBinding] = {}
    phrase_instance: str | None = None
    for entry in entries:
        instance = entry.get("instance")
        if not instance:
            raise ParseError(f"{path}: binding entry without an instance id")
        feature_order.append(instance)
        if entry.get("kind") == "phrase_count":
            phrase_instance = instance
            continue
        selections = []
        for sel in entry.get("selections", []):
            source = sel.get("source")
            if source not in lexicons:
                raise ParseError(
                    f"{path}: binding {instance!r} references unknown "
                    f"lexicon source {source!r}")
            selections.append((lexicons[source], sel.get("category", "")))
        lexical[instance] = bind_instance(taxonomy, instance, selections, stemmer)
    return BindingSet(
        feature_order=tuple(feature_order),
        lexical=lexical,
        phrase_instance=phrase_instance,
    )
