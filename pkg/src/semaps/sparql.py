"""SPARQL SELECT subset: parser, evaluator, and JSON results encoding.

Grammar:

    PREFIX* SELECT (?v)+ WHERE { pattern (. pattern)* (FILTER(expr))* } (LIMIT n)?

where a pattern is three positions, each a term or ?variable, and a
FILTER expression is a comparison (=, !=, <, <=, >, >=) between a
variable and a numeric or string constant, optionally conjoined with &&.

Evaluation joins patterns left to right with bound-variable substitution,
drops bindings a filter cannot compare (SPARQL-style type errors are not
fatal), projects, removes duplicates, and sorts by the projected terms so
results are deterministic. There is no optimizer; stores are desk-scale.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Union

from semaps.errors import ParseError, ValidationError
from semaps.rdf.store import TripleStore
from semaps.rdf.terms import (
    NUMERIC_DATATYPES,
    RDF_LANGSTRING,
    RDF_TYPE,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    Blank,
    Iri,
    Literal,
    Term,
    is_absolute_iri,
    term_key,
    term_to_json,
)

log = logging.getLogger(__name__)

VARIABLE_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_OPS = ("<=", ">=", "!=", "=", "<", ">")


@dataclass(frozen=True)
class Variable:
    name: str


PatternTerm = Union[Iri, Literal, Blank, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> set[str]:
        return {
            t.name for t in (self.subject, self.predicate, self.object)
            if isinstance(t, Variable)
        }


@dataclass(frozen=True)
class Comparison:
    """`?var op constant`; constant is a string or numeric literal."""

    var: str
    op: str
    constant: Literal


@dataclass(frozen=True)
class FilterExpr:
    """Conjunction of comparisons (single comparison = one-element tuple)."""

    comparisons: tuple[Comparison, ...]


@dataclass
class SelectQuery:
    variables: list[str]
    patterns: list[TriplePattern]
    filters: list[FilterExpr] = field(default_factory=list)
    limit: int | None = None


Binding = dict[str, Term]


class _QueryLexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _peek(self, offset: int = 0) -> str | None:
        j = self.pos + offset
        return self.text[j] if j < len(self.text) else None

    def _advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def _looks_like_iriref(self) -> bool:
        # '<' opens an IRI only if '>' arrives before any whitespace;
        # otherwise it is the comparison operator.
        j = self.pos + 1
        while j < len(self.text):
            c = self.text[j]
            if c == ">":
                return True
            if c in " \t\r\n":
                return False
            j += 1
        return False

    def tokens(self) -> list[tuple]:
        # token: (kind, value, line, col [, extra])
        out = []
        while True:
            while (ch := self._peek()) is not None and ch in " \t\r\n":
                self._advance()
            if self._peek() == "#":
                while self._peek() is not None and self._peek() != "\n":
                    self._advance()
                continue
            ch = self._peek()
            line, col = self.line, self.col
            if ch is None:
                out.append(("eof", "", line, col))
                return out
            if ch in "{}().":
                self._advance()
                out.append(({"{": "lbrace", "}": "rbrace", "(": "lparen",
                             ")": "rparen", ".": "dot"}[ch], ch, line, col))
                continue
            if ch == "?":
                self._advance()
                name = ""
                while (c := self._peek()) is not None and (c.isalnum() or c == "_"):
                    name += self._advance()
                if not VARIABLE_NAME_RE.match(name):
                    raise ParseError(f"invalid variable name '?{name}'", line, col)
                out.append(("var", name, line, col))
                continue
            if ch == "<" and self._looks_like_iriref():
                self._advance()
                value = ""
                while (c := self._peek()) is not None and c not in ">\n":
                    value += self._advance()
                if self._peek() != ">":
                    raise ParseError("unterminated IRI reference", line, col)
                self._advance()
                out.append(("iriref", value, line, col))
                continue
            if ch == '"':
                self._advance()
                value = ""
                while True:
                    c = self._peek()
                    if c is None or c == "\n":
                        raise ParseError("unterminated string literal", line, col)
                    self._advance()
                    if c == '"':
                        break
                    if c == "\\":
                        nxt = self._advance() if self._peek() is not None else ""
                        value += {"n": "\n", "t": "\t", "r": "\r",
                                  '"': '"', "\\": "\\"}.get(nxt, nxt)
                        continue
                    value += c
                out.append(("string", value, line, col))
                continue
            if ch == "&":
                if self._peek(1) == "&":
                    self._advance(); self._advance()
                    out.append(("andand", "&&", line, col))
                    continue
                raise ParseError("unexpected '&' (expected '&&')", line, col)
            two = (ch or "") + (self._peek(1) or "")
            if two in ("<=", ">=", "!="):
                self._advance(); self._advance()
                out.append(("op", two, line, col))
                continue
            if ch in "=<>":
                self._advance()
                out.append(("op", ch, line, col))
                continue
            if ch.isdigit() or (ch in "+-" and (self._peek(1) or "").isdigit()):
                lexical = self._advance()
                while (c := self._peek()) is not None and c.isdigit():
                    lexical += self._advance()
                kind = "integer"
                if self._peek() == "." and (self._peek(1) or "").isdigit():
                    lexical += self._advance()
                    while (c := self._peek()) is not None and c.isdigit():
                        lexical += self._advance()
                    kind = "decimal"
                out.append(("number", lexical, line, col, kind))
                continue
            if ch.isalpha() or ch == "_" or ch == ":":
                word = ""
                while (c := self._peek()) is not None and (c.isalnum() or c in "_-."):
                    word += self._advance()
                if self._peek() == ":":
                    self._advance()
                    local = ""
                    while (c := self._peek()) is not None and (c.isalnum() or c in "_-./%"):
                        local += self._advance()
                    while local.endswith("."):
                        local = local[:-1]
                        self.pos -= 1
                        self.col -= 1
                    out.append(("pname", local, line, col, word))
                    continue
                out.append(("word", word, line, col))
                continue
            raise ParseError(f"unexpected character {ch!r}", line, col)


class _QueryParser:
    def __init__(self, text: str):
        self.tokens = _QueryLexer(text).tokens()
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def _peek(self):
        return self.tokens[self.pos]

    def _next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _keyword(self, tok) -> str | None:
        return tok[1].upper() if tok[0] == "word" else None

    def _expect_keyword(self, word: str):
        tok = self._next()
        if self._keyword(tok) != word:
            raise ParseError(f"expected {word}, found {tok[1]!r}", tok[2], tok[3])

    def parse(self) -> SelectQuery:
        while self._keyword(self._peek()) == "PREFIX":
            self._next()
            tok = self._next()
            if tok[0] != "pname" or tok[1]:
                raise ParseError("expected prefix name ending with ':'", tok[2], tok[3])
            iri = self._next()
            if iri[0] != "iriref":
                raise ParseError("expected namespace IRI", iri[2], iri[3])
            self.prefixes[tok[4]] = iri[1]

        self._expect_keyword("SELECT")
        variables = []
        while self._peek()[0] == "var":
            variables.append(self._next()[1])
        if not variables:
            tok = self._peek()
            raise ParseError("SELECT requires at least one variable", tok[2], tok[3])

        self._expect_keyword("WHERE")
        tok = self._next()
        if tok[0] != "lbrace":
            raise ParseError("expected '{'", tok[2], tok[3])

        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        while True:
            tok = self._peek()
            if tok[0] == "rbrace":
                self._next()
                break
            if tok[0] == "dot":
                self._next()
                continue
            if self._keyword(tok) == "FILTER":
                self._next()
                filters.append(self._filter())
                continue
            patterns.append(self._pattern())

        limit = None
        tok = self._peek()
        if self._keyword(tok) == "LIMIT":
            self._next()
            num = self._next()
            if num[0] != "number" or num[4] != "integer" or int(num[1]) <= 0:
                raise ParseError("LIMIT requires a positive integer", num[2], num[3])
            limit = int(num[1])
        tok = self._next()
        if tok[0] != "eof":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2], tok[3])

        if not patterns:
            raise ParseError("WHERE block contains no triple pattern", 1, 1)
        pattern_vars = set().union(*(p.variables() for p in patterns))
        for v in variables:
            if v not in pattern_vars:
                raise ValidationError(f"projected variable ?{v} is not bound by any pattern")
        return SelectQuery(variables, patterns, filters, limit)

    def _term(self, tok, position: str) -> PatternTerm:
        if tok[0] == "var":
            return Variable(tok[1])
        if tok[0] == "iriref":
            if not is_absolute_iri(tok[1]):
                raise ParseError(f"relative IRI {tok[1]!r}", tok[2], tok[3])
            return Iri(tok[1])
        if tok[0] == "pname":
            prefix = tok[4]
            if prefix == "_":  # blank node used as a constant
                return Blank(tok[1])
            if prefix not in self.prefixes:
                raise ParseError(f"undeclared prefix '{prefix}:'", tok[2], tok[3])
            return Iri(self.prefixes[prefix] + tok[1])
        if tok[0] == "word" and tok[1] == "a" and position == "predicate":
            return Iri(RDF_TYPE)
        if position == "object":
            if tok[0] == "string":
                return Literal(tok[1])
            if tok[0] == "number":
                return Literal(tok[1], XSD_INTEGER if tok[4] == "integer" else XSD_DECIMAL)
        raise ParseError(f"expected {position} term, found {tok[1]!r}", tok[2], tok[3])

    def _pattern(self) -> TriplePattern:
        s = self._term(self._next(), "subject")
        p = self._term(self._next(), "predicate")
        o = self._term(self._next(), "object")
        if isinstance(s, Literal):
            raise ValidationError("literal is not allowed in subject position")
        if isinstance(p, (Literal, Blank)):
            raise ValidationError("predicate must be an IRI or variable")
        return TriplePattern(s, p, o)

    def _filter(self) -> FilterExpr:
        tok = self._next()
        if tok[0] != "lparen":
            raise ParseError("expected '(' after FILTER", tok[2], tok[3])
        comparisons = [self._comparison()]
        while self._peek()[0] == "andand":
            self._next()
            comparisons.append(self._comparison())
        tok = self._next()
        if tok[0] != "rparen":
            raise ParseError("expected ')'", tok[2], tok[3])
        return FilterExpr(tuple(comparisons))

    _FLIP = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "=": "=", "!=": "!="}

    def _comparison(self) -> Comparison:
        left = self._next()
        op = self._next()
        if op[0] != "op" or op[1] not in _OPS:
            raise ParseError(f"expected comparison operator, found {op[1]!r}", op[2], op[3])
        right = self._next()
        if left[0] == "var" and right[0] in ("number", "string"):
            return Comparison(left[1], op[1], self._constant(right))
        if right[0] == "var" and left[0] in ("number", "string"):
            return Comparison(right[1], self._FLIP[op[1]], self._constant(left))
        raise ParseError(
            "filter must compare a variable with a numeric or string constant",
            op[2], op[3],
        )

    def _constant(self, tok) -> Literal:
        if tok[0] == "string":
            return Literal(tok[1])
        return Literal(tok[1], XSD_INTEGER if tok[4] == "integer" else XSD_DECIMAL)


def parse_query(text: str) -> SelectQuery:
    """Parse a SELECT query; raises ParseError/ValidationError on bad input."""
    return _QueryParser(text).parse()


def _numeric_value(term: Term) -> Decimal | None:
    if isinstance(term, Literal) and term.datatype in NUMERIC_DATATYPES:
        try:
            return Decimal(term.lexical)
        except InvalidOperation:
            return None
    return None


def _string_value(term: Term) -> str | None:
    if isinstance(term, Literal) and term.datatype in (XSD_STRING, RDF_LANGSTRING):
        return term.lexical
    return None


def _apply_op(op: str, left, right) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def _comparison_holds(c: Comparison, binding: Binding) -> bool:
    """False when the comparison fails OR cannot be evaluated on this binding."""
    term = binding.get(c.var)
    if term is None:
        return False
    const_num = _numeric_value(c.constant)
    if const_num is not None:
        value = _numeric_value(term)
        if value is None:
            log.debug("dropping binding: %r is not numeric for ?%s", term, c.var)
            return False
        return _apply_op(c.op, value, const_num)
    value = _string_value(term)
    if value is None:
        log.debug("dropping binding: %r is not a plain string for ?%s", term, c.var)
        return False
    return _apply_op(c.op, value, c.constant.lexical)


def _match_pattern(pattern: TriplePattern, binding: Binding, store: TripleStore):
    def resolve(t: PatternTerm) -> Term | None:
        if isinstance(t, Variable):
            return binding.get(t.name)
        return t

    s, p, o = resolve(pattern.subject), resolve(pattern.predicate), resolve(pattern.object)
    for triple in store.match(s, p, o):
        extended = dict(binding)
        ok = True
        for pos_term, value in (
            (pattern.subject, triple.subject),
            (pattern.predicate, triple.predicate),
            (pattern.object, triple.object),
        ):
            if isinstance(pos_term, Variable):
                bound = extended.get(pos_term.name)
                if bound is None:
                    extended[pos_term.name] = value
                elif bound != value:  # repeated variable within the pattern
                    ok = False
                    break
        if ok:
            yield extended


def evaluate(store: TripleStore, query: SelectQuery) -> list[Binding]:
    """Evaluate a SELECT query; returns projected bindings in canonical order."""
    rows: list[Binding] = [{}]
    for pattern in query.patterns:
        rows = [extended for b in rows for extended in _match_pattern(pattern, b, store)]
        if not rows:
            break

    for f in query.filters:
        rows = [b for b in rows if all(_comparison_holds(c, b) for c in f.comparisons)]

    projected = {tuple(b[v] for v in query.variables) for b in rows}
    ordered = sorted(projected, key=lambda tup: tuple(term_key(t) for t in tup))
    if query.limit is not None:
        ordered = ordered[: query.limit]
    return [dict(zip(query.variables, tup)) for tup in ordered]


def results_to_json(query: SelectQuery, rows: list[Binding]) -> dict:
    """Encode bindings in the SPARQL JSON results format."""
    return {
        "head": {"vars": list(query.variables)},
        "results": {
            "bindings": [
                {v: term_to_json(b[v]) for v in query.variables if v in b} for b in rows
            ]
        },
    }
