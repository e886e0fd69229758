"""Turtle reader and writer for the platform's exchange files.

Supported grammar (a deliberate subset, documented in the README):

    @prefix / @base directives, prefixed names, <IRI> references,
    "string" literals with ^^datatype and @lang, bare integers and
    decimals, the `a` keyword, `;` and `,` abbreviations, _:label blank
    nodes, and `#` comments.

Not supported: collections, multiline/single-quoted strings, RDF-star,
doubles in exponent notation. The parser is lenient about `/` and `.`
inside prefixed-name local parts; the serializer only emits prefixed
names that any conformant Turtle parser accepts, falling back to full
<IRI> form otherwise.

Serialization is canonical: prefixes sorted, subjects and predicates in
term order, so equal triple sets produce byte-identical documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

from semaps.errors import ParseError
from semaps.rdf.terms import (
    RDF_TYPE,
    XSD,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    Blank,
    Iri,
    Literal,
    Term,
    Triple,
    is_absolute_iri,
    triple_key,
)

DEFAULT_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "xsd": XSD,
}

_INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL_RE = re.compile(r"^[+-]?[0-9]+\.[0-9]+$")
# Conservative local-name shape every standard parser accepts unescaped.
_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    col: int
    extra: str = ""


def _is_local_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_-./%"


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

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

    def tokens(self) -> list[_Token]:
        out = []
        while True:
            tok = self._next_token()
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _next_token(self) -> _Token:
        while True:
            ch = self._peek()
            if ch is None:
                return _Token("eof", "", self.line, self.col)
            if ch in " \t\r\n":
                self._advance()
                continue
            if ch == "#":
                while self._peek() is not None and self._peek() != "\n":
                    self._advance()
                continue
            break

        line, col = self.line, self.col
        ch = self._peek()

        if ch in ".;,":
            self._advance()
            kind = {".": "dot", ";": "semi", ",": "comma"}[ch]
            return _Token(kind, ch, line, col)

        if ch == "<":
            return self._iriref(line, col)
        if ch == '"':
            return self._string(line, col)
        if ch == "@":
            return self._at_word(line, col)
        if ch == "^":
            self._advance()
            if self._peek() == "^":
                self._advance()
                return _Token("hathat", "^^", line, col)
            raise ParseError("unexpected '^' (expected '^^')", line, col)
        if ch == "_" and self._peek(1) == ":":
            self._advance()
            self._advance()
            label = self._scan_local()
            if not label:
                raise ParseError("blank node label expected after '_:'", line, col)
            return _Token("blank", label, line, col)
        if ch.isdigit() or (ch in "+-" and (self._peek(1) or "").isdigit()):
            return self._number(line, col)
        if ch.isalpha() or ch == ":" or ch == "_":
            return self._pname_or_keyword(line, col)

        raise ParseError(f"unexpected character {ch!r}", line, col)

    def _iriref(self, line: int, col: int) -> _Token:
        self._advance()  # '<'
        chars = []
        while True:
            ch = self._peek()
            if ch is None or ch == "\n":
                raise ParseError("unterminated IRI reference", line, col)
            self._advance()
            if ch == ">":
                return _Token("iriref", "".join(chars), line, col)
            chars.append(ch)

    def _string(self, line: int, col: int) -> _Token:
        self._advance()  # opening quote
        chars = []
        while True:
            ch = self._peek()
            if ch is None or ch == "\n":
                raise ParseError("unterminated string literal", line, col)
            self._advance()
            if ch == '"':
                return _Token("string", "".join(chars), line, col)
            if ch == "\\":
                esc = self._peek()
                if esc is None:
                    raise ParseError("unterminated string literal", line, col)
                self._advance()
                if esc in _ESCAPES:
                    chars.append(_ESCAPES[esc])
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    digits = ""
                    for _ in range(width):
                        d = self._peek()
                        if d is None or d not in "0123456789abcdefABCDEF":
                            raise ParseError("bad unicode escape", self.line, self.col)
                        digits += self._advance()
                    chars.append(chr(int(digits, 16)))
                else:
                    raise ParseError(f"unknown escape '\\{esc}'", self.line, self.col)
                continue
            chars.append(ch)

    def _at_word(self, line: int, col: int) -> _Token:
        self._advance()  # '@'
        word = ""
        while (ch := self._peek()) is not None and (ch.isalnum() or ch == "-"):
            word += self._advance()
        if word == "prefix":
            return _Token("at_prefix", word, line, col)
        if word == "base":
            return _Token("at_base", word, line, col)
        if word and re.match(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$", word):
            return _Token("langtag", word, line, col)
        raise ParseError(f"unknown directive or language tag '@{word}'", line, col)

    def _number(self, line: int, col: int) -> _Token:
        lexical = self._advance()
        while (ch := self._peek()) is not None and ch.isdigit():
            lexical += self._advance()
        if self._peek() == "." and (self._peek(1) or "").isdigit():
            lexical += self._advance()
            while (ch := self._peek()) is not None and ch.isdigit():
                lexical += self._advance()
            return _Token("number", lexical, line, col, extra="decimal")
        return _Token("number", lexical, line, col, extra="integer")

    def _scan_local(self) -> str:
        chars = []
        while (ch := self._peek()) is not None and _is_local_char(ch):
            chars.append(self._advance())
        local = "".join(chars)
        # A trailing '.' belongs to the statement, not the name.
        while local.endswith("."):
            local = local[:-1]
            self.pos -= 1
            self.col -= 1
        return local

    def _pname_or_keyword(self, line: int, col: int) -> _Token:
        prefix_chars = []
        while (ch := self._peek()) is not None and (ch.isalnum() or ch in "_-."):
            prefix_chars.append(self._advance())
        prefix = "".join(prefix_chars)
        if self._peek() == ":":
            self._advance()
            local = self._scan_local()
            return _Token("pname", local, line, col, extra=prefix)
        if prefix == "a":
            return _Token("a", prefix, line, col)
        raise ParseError(f"unexpected token {prefix!r}", line, col)


class _Parser:
    def __init__(self, text: str, base_iri: str):
        self.tokens = _Lexer(text).tokens()
        self.pos = 0
        self.base = base_iri
        self.prefixes: dict[str, str] = {}

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.value!r}", tok.line, tok.col)
        return tok

    def _resolve(self, ref: str, tok: _Token) -> str:
        if is_absolute_iri(ref):
            return ref
        if not self.base:
            raise ParseError(f"relative IRI {ref!r} with no base", tok.line, tok.col)
        resolved = urljoin(self.base, ref)
        if not is_absolute_iri(resolved):
            raise ParseError(f"cannot resolve relative IRI {ref!r}", tok.line, tok.col)
        return resolved

    def _expand(self, tok: _Token) -> str:
        prefix = tok.extra
        if prefix not in self.prefixes:
            raise ParseError(f"undeclared prefix '{prefix}:'", tok.line, tok.col)
        return self.prefixes[prefix] + tok.value

    def parse(self) -> set[Triple]:
        triples: set[Triple] = set()
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                return triples
            if tok.kind == "at_prefix":
                self._next()
                name = self._expect("pname", "prefix name")
                if name.value:
                    raise ParseError(
                        "prefix declaration must end with ':'", name.line, name.col
                    )
                iri = self._expect("iriref", "namespace IRI")
                self.prefixes[name.extra] = self._resolve(iri.value, iri)
                self._expect("dot", "'.'")
                continue
            if tok.kind == "at_base":
                self._next()
                iri = self._expect("iriref", "base IRI")
                self.base = self._resolve(iri.value, iri)
                self._expect("dot", "'.'")
                continue
            self._statement(triples)

    def _statement(self, triples: set[Triple]):
        subject = self._subject()
        while True:
            predicate = self._verb()
            while True:
                obj = self._object()
                triples.add(Triple(subject, predicate, obj))
                if self._peek().kind == "comma":
                    self._next()
                    continue
                break
            tok = self._next()
            if tok.kind == "semi":
                if self._peek().kind == "dot":  # tolerate trailing ';'
                    self._next()
                    return
                continue
            if tok.kind == "dot":
                return
            raise ParseError(f"expected ';' or '.', found {tok.value!r}", tok.line, tok.col)

    def _subject(self) -> Term:
        tok = self._next()
        if tok.kind == "iriref":
            return Iri(self._resolve(tok.value, tok))
        if tok.kind == "pname":
            return Iri(self._expand(tok))
        if tok.kind == "blank":
            return Blank(tok.value)
        raise ParseError(f"expected subject, found {tok.value!r}", tok.line, tok.col)

    def _verb(self) -> Term:
        tok = self._next()
        if tok.kind == "a":
            return Iri(RDF_TYPE)
        if tok.kind == "iriref":
            return Iri(self._resolve(tok.value, tok))
        if tok.kind == "pname":
            return Iri(self._expand(tok))
        raise ParseError(f"expected predicate, found {tok.value!r}", tok.line, tok.col)

    def _object(self) -> Term:
        tok = self._next()
        if tok.kind == "iriref":
            return Iri(self._resolve(tok.value, tok))
        if tok.kind == "pname":
            return Iri(self._expand(tok))
        if tok.kind == "blank":
            return Blank(tok.value)
        if tok.kind == "number":
            datatype = XSD_INTEGER if tok.extra == "integer" else XSD_DECIMAL
            return Literal(tok.value, datatype)
        if tok.kind == "string":
            nxt = self._peek()
            if nxt.kind == "hathat":
                self._next()
                dt = self._next()
                if dt.kind == "iriref":
                    return Literal(tok.value, self._resolve(dt.value, dt))
                if dt.kind == "pname":
                    return Literal(tok.value, self._expand(dt))
                raise ParseError("expected datatype IRI after '^^'", dt.line, dt.col)
            if nxt.kind == "langtag":
                self._next()
                return Literal(tok.value, lang=nxt.value)
            return Literal(tok.value)
        raise ParseError(f"expected object, found {tok.value!r}", tok.line, tok.col)


def parse_turtle(text: str, base_iri: str = "") -> set[Triple]:
    """Parse a Turtle document into a triple set.

    Raises ParseError (with line/column) on syntax errors, undeclared
    prefixes, and unterminated strings or IRIs.
    """
    return _Parser(text, base_iri).parse()


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _render_iri(value: str, prefixes: dict[str, str], as_predicate: bool = False) -> str:
    if as_predicate and value == RDF_TYPE:
        return "a"
    best = None
    for prefix, ns in prefixes.items():
        if ns and value.startswith(ns):
            local = value[len(ns):]
            if _SAFE_LOCAL_RE.match(local) and (best is None or len(ns) > len(best[1])):
                best = (prefix, ns, local)
    if best:
        return f"{best[0]}:{best[2]}"
    return f"<{value}>"


def _render_term(t: Term, prefixes: dict[str, str]) -> str:
    if isinstance(t, Iri):
        return _render_iri(t.value, prefixes)
    if isinstance(t, Blank):
        return f"_:{t.label}"
    if t.lang:
        return f'"{_escape_string(t.lexical)}"@{t.lang}'
    if t.datatype == XSD_INTEGER and _INTEGER_RE.match(t.lexical):
        return t.lexical
    if t.datatype == XSD_DECIMAL and _DECIMAL_RE.match(t.lexical):
        return t.lexical
    if t.datatype == XSD_STRING:
        return f'"{_escape_string(t.lexical)}"'
    dt = _render_iri(t.datatype, prefixes)
    return f'"{_escape_string(t.lexical)}"^^{dt}'


def serialize_turtle(triples, prefixes: dict[str, str] | None = None) -> str:
    """Write triples as canonical Turtle.

    Output re-parses to the same triple set and is deterministic: prefix
    directives sorted by name, subject blocks and predicates in term
    order, `a` for rdf:type.
    """
    if prefixes is None:
        prefixes = dict(DEFAULT_PREFIXES)
    lines = [f"@prefix {name}: <{ns}> ." for name, ns in sorted(prefixes.items())]

    ordered = sorted(triples, key=triple_key)
    blocks = []
    i = 0
    while i < len(ordered):
        subject = ordered[i].subject
        group = []
        while i < len(ordered) and ordered[i].subject == subject:
            group.append(ordered[i])
            i += 1
        blocks.append(_render_subject_block(subject, group, prefixes))

    doc = "\n".join(lines)
    if blocks:
        doc += "\n\n" + "\n".join(blocks)
    return doc + "\n"


def _render_subject_block(subject: Term, group: list[Triple], prefixes) -> str:
    parts = []
    i = 0
    while i < len(group):
        predicate = group[i].predicate
        objects = []
        while i < len(group) and group[i].predicate == predicate:
            objects.append(_render_term(group[i].object, prefixes))
            i += 1
        parts.append(f"{_render_iri(predicate.value, prefixes, as_predicate=True)} {', '.join(objects)}")
    subject_str = _render_term(subject, prefixes)
    joined = " ;\n    ".join(parts)
    return f"{subject_str} {joined} ."
