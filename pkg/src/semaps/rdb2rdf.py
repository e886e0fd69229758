"""Declarative mapping from tabular data to triples.

A mapping file is line-oriented (`#` comments, blank lines ignored):

    prefix ex: <http://semaps.example/ns#>
    table markers columns id,creator,lat,lon,label,created
      subject ex:marker/{id}
      type ex:Marker
      property ex:hasCreator iri ex:user/{creator}
      property ex:lat literal {lat} xsd:decimal
      property ex:label literal {label}
      property ex:status constant "open"

Tables come from CSV files (RFC-4180 quoting, header row, no embedded
newlines). An empty cell means NULL: the property triple for that row is
simply not emitted. Template substitutions into IRI positions are
percent-encoded so the result is always a valid IRI.
"""

from __future__ import annotations

import csv
import re
import shlex
from dataclasses import dataclass
from pathlib import Path
from typing import Union
from urllib.parse import quote

from semaps.errors import ParseError, ValidationError
from semaps.rdf.terms import (
    RDF_TYPE,
    XSD,
    XSD_STRING,
    Iri,
    Literal,
    Term,
    Triple,
    is_absolute_iri,
)

BUILTIN_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "xsd": XSD,
}

_PLACEHOLDER_RE = re.compile(r"\{([^{}]*)\}")


@dataclass(frozen=True)
class LiteralSpec:
    column: str
    datatype: str = XSD_STRING


@dataclass(frozen=True)
class IriSpec:
    template: str


@dataclass(frozen=True)
class ConstantSpec:
    term: Term


ObjectSpec = Union[LiteralSpec, IriSpec, ConstantSpec]


@dataclass
class MappingRule:
    table: str
    columns: tuple[str, ...]
    subject_template: str
    type_iri: str | None = None
    properties: list[tuple[str, ObjectSpec]] = None

    def __post_init__(self):
        if self.properties is None:
            self.properties = []


@dataclass
class TableData:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple[str, ...]]

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValidationError(
                    f"table {self.name!r}: row {i + 1} has {len(row)} cells, "
                    f"expected {len(self.columns)}"
                )


def read_csv(path: str | Path, name: str | None = None) -> TableData:
    """Load a CSV file with a header row; the table name defaults to the stem."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty CSV file")
        rows = [tuple(row) for row in reader]
    return TableData(name or path.stem, tuple(h.strip() for h in header), rows)


def _template_columns(template: str) -> list[str]:
    return _PLACEHOLDER_RE.findall(template)


class _MappingParser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.prefixes = dict(BUILTIN_PREFIXES)
        self.rules: list[MappingRule] = []
        self.current: MappingRule | None = None

    def error(self, lineno: int, message: str) -> ParseError:
        return ParseError(message, lineno)

    def resolve_iri(self, token: str, lineno: int) -> str:
        """Expand <...> or prefixed form to an absolute IRI string."""
        if token.startswith("<") and token.endswith(">"):
            iri = token[1:-1]
        elif ":" in token and token.split(":", 1)[0] in self.prefixes:
            prefix, local = token.split(":", 1)
            iri = self.prefixes[prefix] + local
        else:
            iri = token  # may itself be absolute (scheme:path)
        if not is_absolute_iri(iri.split("{", 1)[0]):
            raise self.error(lineno, f"relative IRI after expansion: {iri!r}")
        return iri

    def check_columns(self, template: str, lineno: int):
        assert self.current is not None
        for col in _template_columns(template):
            if col not in self.current.columns:
                raise self.error(
                    lineno,
                    f"template references unknown column {col!r} "
                    f"(table {self.current.table!r} declares {list(self.current.columns)})",
                )

    @staticmethod
    def _strip_comment(line: str) -> str:
        # '#' starts a comment only outside "..." strings and <...> IRIs
        # (namespace IRIs routinely end in '#').
        in_quote = in_angle = False
        for i, ch in enumerate(line):
            if ch == '"' and not in_angle:
                in_quote = not in_quote
            elif ch == "<" and not in_quote:
                in_angle = True
            elif ch == ">" and not in_quote:
                in_angle = False
            elif ch == "#" and not in_quote and not in_angle:
                return line[:i]
        return line

    def parse(self) -> list[MappingRule]:
        for lineno, raw in enumerate(self.lines, start=1):
            try:
                tokens = shlex.split(self._strip_comment(raw), comments=False)
            except ValueError as exc:
                raise self.error(lineno, f"bad line: {exc}")
            if not tokens:
                continue
            keyword = tokens[0]
            if keyword == "prefix":
                self._prefix(tokens, lineno)
            elif keyword == "table":
                self._table(tokens, lineno)
            elif keyword == "subject":
                self._subject(tokens, lineno)
            elif keyword == "type":
                self._type(tokens, lineno)
            elif keyword == "property":
                self._property(tokens, lineno)
            else:
                raise self.error(lineno, f"unknown directive {keyword!r}")
        self._finish_rule(len(self.lines))
        return self.rules

    def _finish_rule(self, lineno: int):
        if self.current is not None and not self.current.subject_template:
            raise self.error(lineno, f"table {self.current.table!r} has no subject template")
        self.current = None

    def _prefix(self, tokens: list[str], lineno: int):
        if len(tokens) != 3 or not tokens[1].endswith(":"):
            raise self.error(lineno, "usage: prefix name: <iri>")
        iri = tokens[2]
        if not (iri.startswith("<") and iri.endswith(">")):
            raise self.error(lineno, "namespace must be written as <iri>")
        self.prefixes[tokens[1][:-1]] = iri[1:-1]

    def _table(self, tokens: list[str], lineno: int):
        self._finish_rule(lineno)
        if len(tokens) != 4 or tokens[2] != "columns":
            raise self.error(lineno, "usage: table name columns a,b,c")
        columns = tuple(c.strip() for c in tokens[3].split(",") if c.strip())
        if not columns:
            raise self.error(lineno, "table declares no columns")
        rule = MappingRule(tokens[1], columns, subject_template="")
        self.rules.append(rule)
        self.current = rule

    def _require_table(self, lineno: int) -> MappingRule:
        if self.current is None:
            raise self.error(lineno, "directive outside a table block")
        return self.current

    def _subject(self, tokens: list[str], lineno: int):
        rule = self._require_table(lineno)
        if len(tokens) != 2:
            raise self.error(lineno, "usage: subject template")
        template = self.resolve_iri(tokens[1], lineno)
        self.check_columns(template, lineno)
        rule.subject_template = template

    def _type(self, tokens: list[str], lineno: int):
        rule = self._require_table(lineno)
        if len(tokens) != 2:
            raise self.error(lineno, "usage: type iri")
        rule.type_iri = self.resolve_iri(tokens[1], lineno)

    def _property(self, tokens: list[str], lineno: int):
        rule = self._require_table(lineno)
        if len(tokens) < 3:
            raise self.error(lineno, "usage: property iri (iri|literal|constant) ...")
        predicate = self.resolve_iri(tokens[1], lineno)
        kind = tokens[2]
        rest = tokens[3:]
        if kind == "iri":
            if len(rest) != 1:
                raise self.error(lineno, "usage: property iri <template>")
            template = self.resolve_iri(rest[0], lineno)
            self.check_columns(template, lineno)
            spec: ObjectSpec = IriSpec(template)
        elif kind == "literal":
            if len(rest) not in (1, 2):
                raise self.error(lineno, "usage: property literal {column} [datatype]")
            m = _PLACEHOLDER_RE.fullmatch(rest[0])
            if not m:
                raise self.error(lineno, "literal value must be a single {column} placeholder")
            column = m.group(1)
            self.check_columns(rest[0], lineno)
            datatype = self.resolve_iri(rest[1], lineno) if len(rest) == 2 else XSD_STRING
            spec = LiteralSpec(column, datatype)
        elif kind == "constant":
            if len(rest) != 1:
                raise self.error(lineno, "usage: property constant (<iri>|\"string\")")
            token = rest[0]
            # shlex strips quotes, so classify by shape: <...>, a declared
            # prefix, or an absolute IRI is a constant IRI; anything else a string.
            if token.startswith("<") or (
                ":" in token
                and (token.split(":", 1)[0] in self.prefixes or is_absolute_iri(token))
            ):
                spec = ConstantSpec(Iri(self.resolve_iri(token, lineno)))
            else:
                spec = ConstantSpec(Literal(token))
        else:
            raise self.error(lineno, f"unknown object kind {kind!r}")
        rule.properties.append((predicate, spec))


def parse_mapping(text: str) -> list[MappingRule]:
    """Parse a mapping document; errors carry the offending line number."""
    return _MappingParser(text).parse()


def _substitute(template: str, columns: tuple[str, ...], row: tuple[str, ...]) -> str:
    values = dict(zip(columns, row))
    return _PLACEHOLDER_RE.sub(lambda m: quote(values[m.group(1)], safe=""), template)


def apply_mapping(rules: list[MappingRule], tables: list[TableData]) -> set[Triple]:
    """Expand every rule against its table; returns the emitted triple set."""
    by_name = {t.name: t for t in tables}
    out: set[Triple] = set()
    for rule in rules:
        table = by_name.get(rule.table)
        if table is None:
            raise ValidationError(
                f"mapping references table {rule.table!r} but no such table was provided"
            )
        missing = set(rule.columns) - set(table.columns)
        if missing:
            raise ValidationError(
                f"table {table.name!r} lacks declared columns {sorted(missing)}"
            )
        for row in table.rows:
            cells = dict(zip(table.columns, row))
            subject_value = _substitute(rule.subject_template, table.columns, row)
            if not is_absolute_iri(subject_value):
                raise ValidationError(f"substituted subject is not absolute: {subject_value!r}")
            subject = Iri(subject_value)
            if rule.type_iri:
                out.add(Triple(subject, Iri(RDF_TYPE), Iri(rule.type_iri)))
            for predicate, spec in rule.properties:
                if isinstance(spec, LiteralSpec):
                    value = cells[spec.column]
                    if value == "":
                        continue  # NULL
                    out.add(Triple(subject, Iri(predicate), Literal(value, spec.datatype)))
                elif isinstance(spec, IriSpec):
                    if any(cells[c] == "" for c in _template_columns(spec.template)):
                        continue  # NULL
                    target = _substitute(spec.template, table.columns, row)
                    out.add(Triple(subject, Iri(predicate), Iri(target)))
                else:
                    out.add(Triple(subject, Iri(predicate), spec.term))
    return out
