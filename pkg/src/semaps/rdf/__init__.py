"""RDF data model, indexed triple store, and Turtle I/O."""

from semaps.rdf.store import TripleStore
from semaps.rdf.terms import Blank, Iri, Literal, Term, Triple
from semaps.rdf.turtle import parse_turtle, serialize_turtle

__all__ = [
    "Blank",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "TripleStore",
    "parse_turtle",
    "serialize_turtle",
]
