"""RDF term and triple data model.

Terms are immutable and hashable so they can live in sets and serve as
index keys. Comparison helpers define the single canonical ordering used
everywhere results must be deterministic (match results, serialization,
query output).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from semaps.errors import ValidationError

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_FLOAT = XSD + "float"
XSD_BOOLEAN = XSD + "boolean"
XSD_DATETIME = XSD + "dateTime"

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_TYPE = RDF_NS + "type"
RDF_LANGSTRING = RDF_NS + "langString"

OWL_CLASS = "http://www.w3.org/2002/07/owl#Class"

# Datatypes whose values take part in numeric FILTER comparisons.
NUMERIC_DATATYPES = frozenset(
    {XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE, XSD_FLOAT, XSD + "int", XSD + "long"}
)

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_BLANK_LABEL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.\-]*$")


def is_absolute_iri(value: str) -> bool:
    """True when the string starts with a scheme followed by ':'."""
    return bool(_SCHEME_RE.match(value))


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not is_absolute_iri(self.value):
            raise ValidationError(f"not an absolute IRI: {self.value!r}")

    def __repr__(self):
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: str | None = None

    def __post_init__(self):
        if self.lang is not None:
            if self.datatype not in (XSD_STRING, RDF_LANGSTRING):
                raise ValidationError(
                    "language-tagged literal must use the language-string datatype"
                )
            object.__setattr__(self, "datatype", RDF_LANGSTRING)
        elif not self.datatype:
            object.__setattr__(self, "datatype", XSD_STRING)
        elif self.datatype == RDF_LANGSTRING:
            raise ValidationError("language-string literal requires a language tag")

    def __repr__(self):
        if self.lang:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype != XSD_STRING:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


@dataclass(frozen=True, slots=True)
class Blank:
    label: str

    def __post_init__(self):
        if not _BLANK_LABEL_RE.match(self.label):
            raise ValidationError(f"invalid blank node label: {self.label!r}")

    def __repr__(self):
        return f"_:{self.label}"


Term = Union[Iri, Literal, Blank]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValidationError("literal is not allowed in subject position", field="subject")
        if not isinstance(self.subject, (Iri, Blank)):
            raise ValidationError("subject must be an IRI or blank node", field="subject")
        if not isinstance(self.predicate, Iri):
            raise ValidationError("predicate must be an IRI", field="predicate")
        if not isinstance(self.object, (Iri, Literal, Blank)):
            raise ValidationError("object must be an RDF term", field="object")

    def __repr__(self):
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


def term_key(t: Term) -> tuple:
    """Canonical sort key: IRIs, then blanks, then literals, each by lexical form."""
    if isinstance(t, Iri):
        return (0, t.value, "", "")
    if isinstance(t, Blank):
        return (1, t.label, "", "")
    return (2, t.lexical, t.datatype, t.lang or "")


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


def term_to_json(t: Term) -> dict:
    """Encode a term in the SPARQL JSON results convention."""
    if isinstance(t, Iri):
        return {"type": "uri", "value": t.value}
    if isinstance(t, Blank):
        return {"type": "bnode", "value": t.label}
    out = {"type": "literal", "value": t.lexical}
    if t.lang:
        out["xml:lang"] = t.lang
    elif t.datatype != XSD_STRING:
        out["datatype"] = t.datatype
    return out


def term_from_json(obj: dict) -> Term:
    kind = obj.get("type")
    if kind == "uri":
        return Iri(obj["value"])
    if kind == "bnode":
        return Blank(obj["value"])
    if kind == "literal":
        return Literal(obj["value"], obj.get("datatype", XSD_STRING), obj.get("xml:lang"))
    raise ValidationError(f"unknown term encoding: {obj!r}")
