"""Access to the data files bundled with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import ConfigError

#: Lexicon TSVs shipped with the package, keyed by source name.
BUNDLED_LEXICONS = {
    "liwc2015-subset": "lexicons/liwc2015_subset.tsv",
    "nrc-emotion": "lexicons/nrc_emotion.tsv",
    "absolutist": "lexicons/absolutist.tsv",
    "depression-unigrams": "lexicons/depression_unigrams.tsv",
}

TAXONOMY_FIXTURE = "fixtures/depression.mkb.json"
BINDINGS_CONFIG = "config/depression_bindings.json"
CLASSIFIER_CONFIG = "config/classifier.toml"
ACRONYMS_SAMPLE = "config/acronyms.json"
STOPWORDS = "stopwords.txt"
SUICIDAL_PHRASES = "lexicons/suicidal_phrases.txt"


def bundled_path(relative: str) -> Path:
    """Resolve a bundled data file to a real filesystem path."""
    root = resources.files("mindkb") / "data"
    path = Path(str(root / relative))
    if not path.exists():
        raise ConfigError(f"bundled resource missing: {relative}")
    return path
