"""Quantifier elimination over finite fields via Gröbner basis elimination."""
from .field import FieldElement, FieldError, FieldSpec, enumerate_elements, field_of_order, make_field
from .groebner import Budget, BudgetExhausted, GroebnerBasis, Ideal, buchberger, eliminate, groebner_basis
from .logic import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    NegAtom,
    Not,
    Or,
    PrenexFormula,
    free_variables,
    parse,
    to_nnf,
    to_prenex,
)
from .oracle import equivalent, realization
from .polynomial import MonomialOrder, Polynomial, Ring, normal_form, parse_polynomial
from .qe import QEOptions, QEOutput, decide, qe, witness
from .syntax import ParseError

__all__ = [
    "FieldElement", "FieldError", "FieldSpec", "enumerate_elements", "field_of_order", "make_field",
    "Budget", "BudgetExhausted", "GroebnerBasis", "Ideal", "buchberger", "eliminate", "groebner_basis",
    "FALSE", "TRUE", "And", "Atom", "Exists", "Forall", "Formula", "NegAtom", "Not", "Or",
    "PrenexFormula", "free_variables", "parse", "to_nnf", "to_prenex",
    "equivalent", "realization",
    "MonomialOrder", "Polynomial", "Ring", "normal_form", "parse_polynomial",
    "QEOptions", "QEOutput", "decide", "qe", "witness", "ParseError",
]
