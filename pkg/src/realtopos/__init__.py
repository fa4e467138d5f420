"""Executable models of nested realizability: SK terms with oracles, the
nested tripos, its open and closed subtoposes, assemblies, small maps and a
small declaration language for running checks."""

from .pca import K, S, App, Oracle, Term, app, format_term, reduce, in_subpca
from .combinators import I, KBAR, PAIR, P0, P1, numeral, standard_realizer, DEFAULT_CONTEXT, NestedPca
from .lam import compile, lam
from .logic import (
    BOT, TOP, NestedProp, Predicate, Verdict, YES, NO, UNKNOWN, base, nested, entails_search,
    entails_verify,
)
from .subtopos import OPEN, CLOSED, U
from .dsl import parse, pretty
from .session import Config, run, run_source
from .suites import SUITES, run_suite

__version__ = "0.1.0"
