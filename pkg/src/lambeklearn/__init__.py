"""Learning rigid Lambek grammars with product from S proof frames."""

from .syntax import (
    Atom,
    Grammar,
    Over,
    Prod,
    Under,
    canonicalize,
    format_grammar,
    parse_category,
    parse_grammar,
    variabilize,
)
from .proofnet import ProofNet, ProofStructure, parse_structure, validate
from .frames import Example, ProofFrame, erase, most_general_labelling, parse_examples
from .unification import unify, unify_grammar, unify_set
from .learner import check_learner_properties, converge, gf, phi, rg
from .parser import enumerate_spf, match_frame, parse
from .natded import nd_to_pn, parse_nd, pn_to_nd

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Example",
    "Grammar",
    "Over",
    "Prod",
    "ProofFrame",
    "ProofNet",
    "ProofStructure",
    "Under",
    "canonicalize",
    "check_learner_properties",
    "converge",
    "enumerate_spf",
    "erase",
    "format_grammar",
    "gf",
    "match_frame",
    "most_general_labelling",
    "nd_to_pn",
    "parse",
    "parse_category",
    "parse_examples",
    "parse_grammar",
    "parse_nd",
    "parse_structure",
    "phi",
    "pn_to_nd",
    "rg",
    "unify",
    "unify_grammar",
    "unify_set",
    "validate",
    "variabilize",
]
