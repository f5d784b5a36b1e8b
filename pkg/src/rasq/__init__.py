"""Query answering for ground logic programs under resource-based answer set semantics."""

from .program import (
    Atom,
    Constraint,
    Literal,
    Program,
    Rule,
    ParseError,
    GroundingError,
    parse,
    parse_literal,
    parse_query,
    ground,
    normalize_constraint,
    format_program,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Constraint",
    "Literal",
    "Program",
    "Rule",
    "ParseError",
    "GroundingError",
    "parse",
    "parse_literal",
    "parse_query",
    "ground",
    "normalize_constraint",
    "format_program",
]
