"""Modal Łukasiewicz many-valued logic: exact evaluation on finite Kripke
models, threshold terms, n+1-frames and bounded counter-model search."""

from .frames import (
    Frame, NFrame, enumerate_models, find_frame_countermodel, frame_property,
    frame_valid, is_pi_morphism, nframe_valid, validate_nframe,
)
from .mvcore import (
    DOUBLE_PLUS, DOUBLE_TIMES, UnaryTerm, eval_term, grid, implies, is_dyadic,
    join, meet, neg, odot, oplus, synthesize_tau, synthesize_tau_for_grid,
    truth_value,
)
from .search import (
    CounterModelReport, SearchBudget, Verdict, certify_theorem_list,
    check_box_tau_commutation, find_countermodel,
)
from .semantics import (
    KripkeModel, evaluate, is_model_of, is_n_valued, satisfies, true_in_model,
)
from .syntax import (
    Formula, instantiate_axiom, modal_degree, normalize, parse, substitute,
    to_text, variables,
)

__version__ = "0.1.0"

__all__ = [
    "Frame", "NFrame", "enumerate_models", "find_frame_countermodel", "frame_property",
    "frame_valid", "is_pi_morphism", "nframe_valid", "validate_nframe",
    "DOUBLE_PLUS", "DOUBLE_TIMES", "UnaryTerm", "eval_term", "grid", "implies", "is_dyadic",
    "join", "meet", "neg", "odot", "oplus", "synthesize_tau", "synthesize_tau_for_grid",
    "truth_value",
    "CounterModelReport", "SearchBudget", "Verdict", "certify_theorem_list",
    "check_box_tau_commutation", "find_countermodel",
    "KripkeModel", "evaluate", "is_model_of", "is_n_valued", "satisfies", "true_in_model",
    "Formula", "instantiate_axiom", "modal_degree", "normalize", "parse", "substitute",
    "to_text", "variables",
]
