"""mindkb: a mental-health knowledge base as a weak-supervision source.

The package encodes a six-level disorder taxonomy, binds its instances to
merged psycholinguistic word lists, scores user corpora against those
bindings, and trains imbalance-aware ensemble classifiers that emit
depressed / not-depressed labels plus evaluation reports.
"""

__version__ = "0.1.0"
