"""Poly-infix operator families: n-ary chains of one kernel as first-class syntax."""

from polyinfix.errors import PolyInfixError
from polyinfix.terms import (
    Const,
    FixedApp,
    KernelSpec,
    OperatorTable,
    PolyApp,
    PsiContext,
    Var,
    context_length,
    default_table,
    equal_syntactic,
    psi_length,
    subst_context,
)
from polyinfix.syntax import ParseError, parse, print_term
from polyinfix.rewrite import (
    LEFT,
    RIGHT,
    Span,
    att_contract,
    att_expand,
    enumerate_bracketings,
    equiv_pure,
    flatten,
    fold_left,
    fold_right,
    group,
    ungroup,
)

__all__ = [
    "Const",
    "FixedApp",
    "KernelSpec",
    "LEFT",
    "OperatorTable",
    "ParseError",
    "PolyApp",
    "PolyInfixError",
    "PsiContext",
    "RIGHT",
    "Span",
    "Var",
    "att_contract",
    "att_expand",
    "context_length",
    "default_table",
    "enumerate_bracketings",
    "equal_syntactic",
    "equiv_pure",
    "flatten",
    "fold_left",
    "fold_right",
    "group",
    "parse",
    "print_term",
    "psi_length",
    "subst_context",
    "ungroup",
]

__version__ = "0.1.0"
