"""Snowball English (Porter2) stemmer.

Pure-Python implementation of the standard algorithm so that stems and the
golden files derived from them are stable across platforms and runtimes.
Words of two letters or fewer are returned unchanged. Results are cached;
the vocabulary of a corpus is tiny relative to its token stream.

:func:`stem` is the textbook single pass. The pinned pipeline stemmer,
:class:`PorterStemmer`, iterates it to a fixed point: a single pass is not
idempotent on a handful of words ("agree" -> "agre" -> "agr"), and lexicon
preprocessing is contractually idempotent, so every consumer in the
pipeline stems through the fixed-point form.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import ConfigError

_VOWELS = frozenset("aeiouy")
# 'll' is deliberately absent from the undoubling set.
_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")
_LI_ENDINGS = frozenset("cdeghkmnrt")

_SPECIAL = {
    "skis": "ski", "skies": "sky", "dying": "die", "lying": "lie",
    "tying": "tie", "idly": "idl", "gently": "gentl", "ugly": "ugli",
    "early": "earli", "only": "onli", "singly": "singl", "sky": "sky",
    "news": "news", "howe": "howe", "atlas": "atlas", "cosmos": "cosmos",
    "bias": "bias", "andes": "andes",
    "inning": "inning", "innings": "inning",
    "outing": "outing", "outings": "outing",
    "canning": "canning", "cannings": "canning",
    "herring": "herring", "herrings": "herring",
    "earring": "earring", "earrings": "earring",
    "proceed": "proceed", "proceeds": "proceed",
    "proceeded": "proceed", "proceeding": "proceed",
    "exceed": "exceed", "exceeds": "exceed",
    "exceeded": "exceed", "exceeding": "exceed",
    "succeed": "succeed", "succeeds": "succeed",
    "succeeded": "succeed", "succeeding": "succeed",
}

# Longest suffix first; the first textual match ends the step whether or not
# the region condition lets the rewrite happen.
_STEP2 = (
    ("ization", "ize"), ("ational", "ate"), ("fulness", "ful"),
    ("ousness", "ous"), ("iveness", "ive"),
    ("tional", "tion"), ("biliti", "ble"), ("lessli", "less"),
    ("entli", "ent"), ("ation", "ate"), ("alism", "al"), ("aliti", "al"),
    ("ousli", "ous"), ("iviti", "ive"), ("fulli", "ful"),
    ("enci", "ence"), ("anci", "ance"), ("abli", "able"),
    ("izer", "ize"), ("ator", "ate"), ("alli", "al"),
    ("bli", "ble"),
)

_STEP3 = (
    ("ational", "ate"), ("tional", "tion"),
    ("alize", "al"), ("icate", "ic"), ("iciti", "ic"), ("ative", None),
    ("ical", "ic"), ("ness", ""), ("ful", ""),
)

_STEP4 = (
    "ement",
    "ance", "ence", "able", "ible", "ment",
    "ant", "ent", "ism", "ate", "iti", "ous", "ive", "ize", "ion",
    "al", "er", "ic",
)


def _r1_start(word: str) -> int:
    for prefix in ("gener", "commun", "arsen"):
        if word.startswith(prefix):
            return len(prefix)
    for i in range(1, len(word)):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            return i + 1
    return len(word)


def _r2_start(word: str, r1: int) -> int:
    for i in range(r1 + 1, len(word)):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            return i + 1
    return len(word)


def _ends_short_syllable(word: str) -> bool:
    if len(word) == 2:
        return word[0] in _VOWELS and word[1] not in _VOWELS
    if len(word) >= 3:
        a, b, c = word[-3], word[-2], word[-1]
        return (a not in _VOWELS and b in _VOWELS
                and c not in _VOWELS and c not in "wxY")
    return False


def _is_short(word: str, r1: int) -> bool:
    return r1 >= len(word) and _ends_short_syllable(word)


@lru_cache(maxsize=1 << 18)
def stem(word: str) -> str:
    """Return the Porter2 stem of ``word`` (lowercased first)."""
    word = word.lower().replace("’", "'")
    if word.startswith("'"):
        word = word[1:]
    if len(word) <= 2:
        return word
    if word in _SPECIAL:
        return _SPECIAL[word]

    # Mark y that functions as a consonant.
    chars = list(word)
    if chars[0] == "y":
        chars[0] = "Y"
    for i in range(1, len(chars)):
        if chars[i] == "y" and chars[i - 1] in _VOWELS:
            chars[i] = "Y"
    word = "".join(chars)

    r1 = _r1_start(word)
    r2 = _r2_start(word, r1)

    # Step 0: possessive endings.
    for suf in ("'s'", "'s", "'"):
        if word.endswith(suf):
            word = word[: -len(suf)]
            break

    # Step 1a: plural-ish endings.
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith(("ied", "ies")):
        word = word[:-3] + ("i" if len(word) > 4 else "ie")
    elif word.endswith(("us", "ss")):
        pass
    elif word.endswith("s"):
        if any(ch in _VOWELS for ch in word[:-2]):
            word = word[:-1]

    # Step 1b: -ed / -ing family.
    matched_eed = False
    for suf in ("eedly", "eed"):
        if word.endswith(suf):
            matched_eed = True
            if len(word) - len(suf) >= r1:
                word = word[: -len(suf)] + "ee"
            break
    if not matched_eed:
        for suf in ("ingly", "edly", "ing", "ed"):
            if word.endswith(suf):
                remainder = word[: -len(suf)]
                if any(ch in _VOWELS for ch in remainder):
                    word = remainder
                    if word.endswith(("at", "bl", "iz")):
                        word += "e"
                    elif word.endswith(_DOUBLES):
                        word = word[:-1]
                    elif _is_short(word, r1):
                        word += "e"
                break

    # Step 1c: terminal y -> i after a consonant that is not word-initial.
    if word[-1:] in ("y", "Y") and len(word) > 2 and word[-2] not in _VOWELS:
        word = word[:-1] + "i"

    # Step 2.
    matched = False
    for suf, repl in _STEP2:
        if word.endswith(suf):
            matched = True
            if len(word) - len(suf) >= r1:
                word = word[: -len(suf)] + repl
            break
    if not matched:
        if word.endswith("ogi"):
            if len(word) - 3 >= r1 and len(word) >= 4 and word[-4] == "l":
                word = word[:-3] + "og"
        elif word.endswith("li"):
            if len(word) - 2 >= r1 and len(word) >= 3 and word[-3] in _LI_ENDINGS:
                word = word[:-2]

    # Step 3.
    for suf, repl in _STEP3:
        if word.endswith(suf):
            if len(word) - len(suf) >= r1:
                if repl is None:  # 'ative' deletes only inside R2
                    if len(word) - len(suf) >= r2:
                        word = word[: -len(suf)]
                else:
                    word = word[: -len(suf)] + repl
            break

    # Step 4.
    for suf in _STEP4:
        if word.endswith(suf):
            if len(word) - len(suf) >= r2:
                if suf == "ion":
                    if len(word) >= 4 and word[-4] in ("s", "t"):
                        word = word[:-3]
                else:
                    word = word[: -len(suf)]
            break

    # Step 5.
    if word.endswith("e"):
        if len(word) - 1 >= r2:
            word = word[:-1]
        elif len(word) - 1 >= r1 and not _ends_short_syllable(word[:-1]):
            word = word[:-1]
    elif word.endswith("l"):
        if len(word) - 1 >= r2 and len(word) >= 2 and word[-2] == "l":
            word = word[:-1]

    return word.replace("Y", "y")


@lru_cache(maxsize=1 << 18)
def stem_fixed(word: str) -> str:
    """Apply :func:`stem` until the output stops changing."""
    current = stem(word)
    for _ in range(8):
        again = stem(current)
        if again == current:
            break
        current = again
    return current


class PorterStemmer:
    """The pinned default stemmer: Porter2 iterated to a fixed point."""

    name = "porter2"

    def stem(self, word: str) -> str:
        return stem_fixed(word)


def get_stemmer(name: str = "porter2") -> PorterStemmer:
    """Resolve a stemmer by its pinned config name."""
    if name != "porter2":
        raise ConfigError(f"unknown stemmer {name!r}; supported: porter2")
    return PorterStemmer()
