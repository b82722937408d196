"""Exact verifiers and a counterexample search for two-translate swelling of compact sets."""

__version__ = "0.1.0"
