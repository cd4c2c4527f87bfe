"""Modal logic of belief fusion: formulas, models, proofs and merging."""
__version__ = "0.1.0"

from .formula import ParseError, Wff, canonical, parse, parse_index, render, render_index
from .kripke import KripkeModel, ModelError, assignment_model, load_model, save_model
from .semantics import Evaluator, Strategy, satisfies, truth_set

__all__ = [
    "Evaluator",
    "KripkeModel",
    "ModelError",
    "ParseError",
    "Strategy",
    "Wff",
    "assignment_model",
    "canonical",
    "load_model",
    "parse",
    "parse_index",
    "render",
    "render_index",
    "satisfies",
    "save_model",
    "truth_set",
]
