"""Evolved part-of-speech compressors that preserve sentiment."""

from ._parsec import (
    Analyzer,
    Compressor,
    ConfigError,
    Corpus,
    CorpusError,
    InitializationFailure,
    Instance,
    ModelError,
    Sentence,
    evolve,
    fitness,
    format_report,
    generate_synthetic,
    parse_corpus,
    read_corpus,
    split_train_test,
    synthetic_lexicon,
)

__all__ = [
    "Analyzer",
    "Compressor",
    "ConfigError",
    "Corpus",
    "CorpusError",
    "InitializationFailure",
    "Instance",
    "ModelError",
    "Sentence",
    "evolve",
    "fitness",
    "format_report",
    "generate_synthetic",
    "parse_corpus",
    "read_corpus",
    "split_train_test",
    "synthetic_lexicon",
]
