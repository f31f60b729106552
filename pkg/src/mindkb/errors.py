"""Exception hierarchy shared across the toolkit.

Two broad families matter for the CLI exit-code contract: parse/config
problems (exit code 2) and domain errors raised by otherwise well-formed
inputs (exit code 1).
"""

from __future__ import annotations


class MindkbError(Exception):
    """Base class for all toolkit errors."""


# --- input / configuration problems (CLI exit code 2) ---


class ParseError(MindkbError):
    """A file exists but does not parse as the expected format."""


class MalformedXml(ParseError):
    """Corpus XML that the reader cannot parse; carries file and byte offset."""

    def __init__(self, path: str, message: str, byte_offset: int | None = None):
        detail = f"{path}: {message}"
        if byte_offset is not None:
            detail += f" (byte offset {byte_offset})"
        super().__init__(detail)
        self.path = path
        self.byte_offset = byte_offset


class EmptyCategory(ParseError):
    """A lexicon category was declared but holds no words."""


class EmptyFile(ParseError):
    """A phrase list file contains no phrases."""


class ConfigError(MindkbError):
    """Invalid or unresolvable pipeline configuration."""


# --- taxonomy domain errors ---


class ValidationError(MindkbError):
    """A taxonomy violates its structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"taxonomy invalid: {lines}")


class UnknownNode(MindkbError):
    pass


class UnknownParent(MindkbError):
    pass


class DuplicateId(MindkbError):
    pass


class CannotRemoveRoot(MindkbError):
    pass


# --- lexicon domain errors ---


class UnknownInstance(MindkbError):
    pass


class UnknownCategory(MindkbError):
    pass


# --- scoring domain errors ---


class EmptyCorpus(MindkbError):
    pass


class MissingBinding(MindkbError):
    pass


# --- classifier domain errors ---


class SingleClassData(MindkbError):
    pass


class TooFewMinority(MindkbError):
    pass


class InvalidHyperparameter(MindkbError):
    pass


class FeatureMismatch(MindkbError):
    pass


class LengthMismatch(MindkbError):
    pass


class FoldWithoutMinority(MindkbError):
    pass


# --- synthetic corpus errors ---


class InvalidSpec(MindkbError):
    pass
