"""Harvest, re-sample and evaluate NL-to-code corpora built from API docs."""

from extknow.errors import DataError, ConfigError
from extknow.pairs import NLCodePair, make_pair_id

__version__ = "0.1.0"

__all__ = ["NLCodePair", "make_pair_id", "DataError", "ConfigError"]
