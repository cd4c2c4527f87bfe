"""Hilbert-style proof scripts for the two fusion calculi."""
from .checker import ProofError, ProofResult, check_proof, match_pattern
from .library import (
    CORPUS,
    DEFAULT_LIBRARY,
    LemmaEntry,
    LemmaRejected,
    LibraryReport,
    ProofLibrary,
    build,
    corpus_text,
    lemma_instances,
    lemma_name,
    load_corpus,
    verify_library,
)
from .schemas import SCHEMAS, SYSTEMS, SchemaError, match_axiom, matches_schema
from .script import ProofScript, ScriptError, parse_script, render_script

__all__ = [
    "CORPUS",
    "DEFAULT_LIBRARY",
    "LemmaEntry",
    "LemmaRejected",
    "LibraryReport",
    "ProofError",
    "ProofLibrary",
    "ProofResult",
    "ProofScript",
    "SCHEMAS",
    "SYSTEMS",
    "SchemaError",
    "ScriptError",
    "build",
    "check_proof",
    "corpus_text",
    "lemma_instances",
    "lemma_name",
    "load_corpus",
    "match_axiom",
    "match_pattern",
    "matches_schema",
    "parse_script",
    "render_script",
    "verify_library",
]
