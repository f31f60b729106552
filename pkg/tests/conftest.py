from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mindkb import curation as cu
from mindkb import lexicon as lx
from mindkb import taxonomy as tx
from mindkb.resources import (
    BINDINGS_CONFIG,
    BUNDLED_LEXICONS,
    STOPWORDS,
    SUICIDAL_PHRASES,
    TAXONOMY_FIXTURE,
    bundled_path,
)
from mindkb.stemmer import PorterStemmer


@pytest.fixture(scope="session")
def stemmer():
    return PorterStemmer()


@pytest.fixture(scope="session")
def stopwords():
    return cu.load_stopwords(bundled_path(STOPWORDS))


@pytest.fixture(scope="session")
def depression_taxonomy():
    return tx.load_taxonomy(bundled_path(TAXONOMY_FIXTURE))


@pytest.fixture(scope="session")
def lexicons():
    return {
        name: lx.load_lexicon(bundled_path(rel), name)
        for name, rel in BUNDLED_LEXICONS.items()
    }


@pytest.fixture(scope="session")
def bindings(depression_taxonomy, lexicons, stemmer):
    return lx.load_bindings_config(
        bundled_path(BINDINGS_CONFIG), lexicons, depression_taxonomy, stemmer)


@pytest.fixture(scope="session")
def phrases():
    return lx.load_phrase_list(bundled_path(SUICIDAL_PHRASES))


def build_taxonomy(nodes, edges, name="test", version="0"):
    """Hand-build a taxonomy from (id, label, level, kind) and edge tuples."""
    return tx.Taxonomy(
        name=name,
        version=version,
        nodes=tuple(tx.TaxonomyNode(i, lab, lev, tx.NodeKind(k))
                    for i, lab, lev, k in nodes),
        edges=tuple(
            tx.Relationship(a, b, tx.RelationKind(kind), cross)
            for a, b, kind, cross in edges
        ),
    )


MINI_NODES = [
    ("root", "Mental Disorders", 1, "Root"),
    ("group", "Depressive Disorders", 2, "DisorderGroup"),
    ("mdd", "MDD", 3, "Disorder"),
    ("sym", "Symptoms", 4, "Concept"),
    ("sadness", "Sadness", 5, "Instance"),
    ("fatigue", "Fatigue", 5, "Instance"),
]

MINI_EDGES = [
    ("root", "group", "Hierarchical", None),
    ("group", "mdd", "Hierarchical", None),
    ("mdd", "sym", "Hierarchical", None),
    ("sym", "sadness", "Hierarchical", None),
    ("sym", "fatigue", "Hierarchical", None),
]


@pytest.fixture
def mini_taxonomy():
    return build_taxonomy(MINI_NODES, MINI_EDGES)


# Four-user deterministic corpus: two clearly signal-laden users, two plain.
FIXTURE_USERS = {
    "alice": {
        "label": 1,
        "posts": {
            1: [("bad day", "2017-02-21T14:14:54",
                 "I feel hopeless and worthless, crying all night. "
                 "Visit https://example.org/x and see 42 things!")],
            2: [("", "2017-03-01T08:00:00",
                 "My insomnia is terrible and I want to end my life.")],
        },
    },
    "bob": {
        "label": 1,
        "posts": {
            1: [("", None, "Sadness and grief overwhelm me; I am so lonely."),
                ("", None, "The doctor prescribed zoloft for my depression.")],
            3: [("", "2017-04-02T23:59:59", "miserable, hopeless, exhausted")],
        },
    },
    "carol": {
        "label": 0,
        "posts": {
            1: [("trip", "2017-05-05T10:10:10",
                 "We went hiking by the lake and the weather stayed sunny.")],
            2: [("", None, "Baked sourdough bread today, lovely crust!")],
        },
    },
    "dave": {
        "label": 0,
        "posts": {
            4: [("", None, "The football match ended in a draw, classic game."),
                ("", None, "New guitar strings arrived, practicing chords.")],
        },
    },
}


def write_corpus(root: Path, users: dict = None, labels: bool = True) -> Path:
    """Write a chunked XML corpus; returns the corpus root."""
    users = FIXTURE_USERS if users is None else users
    import xml.etree.ElementTree as ET

    for chunk_no in range(1, 11):
        (root / f"chunk{chunk_no}").mkdir(parents=True, exist_ok=True)
    for user_id, info in users.items():
        for chunk_no in range(1, 11):
            posts = info["posts"].get(chunk_no, [])
            individual = ET.Element("INDIVIDUAL")
            ET.SubElement(individual, "ID").text = user_id
            for title, date, text in posts:
                writing = ET.SubElement(individual, "WRITING")
                ET.SubElement(writing, "TITLE").text = title
                ET.SubElement(writing, "DATE").text = date or ""
                ET.SubElement(writing, "TEXT").text = text
            ET.indent(individual)
            (root / f"chunk{chunk_no}" / f"{user_id}.xml").write_text(
                ET.tostring(individual, encoding="unicode") + "\n",
                encoding="utf-8")
    if labels:
        lines = [f"{u} {info['label']}" for u, info in users.items()]
        (root / "golden_truth.txt").write_text("\n".join(lines) + "\n",
                                               encoding="utf-8")
    return root


@pytest.fixture
def fixture_corpus(tmp_path):
    return write_corpus(tmp_path / "corpus")
