"""Common-sense inferential knowledge graph.

A directed graph of natural-language concepts ("en" or "pt") connected by
named inferential relations, each tagged Pre (precondition) or Pos
(postcondition). The graph is immutable after loading and safe to share
across threads. Lemma lookup drives semantic characterization; breadth-
first expansion over outgoing relations drives linked-data search.

File formats (UTF-8, tab-separated, `#` comments and blank lines ignored):

    concepts:   id <TAB> lemma <TAB> lang <TAB> iri;iri;...   (links optional)
    relations:  optional header  !relations: Name,Name,...
                name <TAB> source lemma <TAB> target lemma <TAB> Pre|Pos <TAB> lang
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path

from semaps.errors import NotFoundError, ParseError, ValidationError
from semaps.rdf.terms import is_absolute_iri

SEED_RELATION_NAMES = frozenset(
    {
        "CapableOf",
        "PropertyOf",
        "EffectOf",
        "IsA",
        "UsedFor",
        "PartOf",
        "AtLocation",
        "MotivatedByGoal",
        "Causes",
        "DefinedAs",
    }
)

# Spelling variants folded into the canonical relation name at load time.
_RELATION_ALIASES = {"ProprietyOf": "PropertyOf"}

LANGUAGES = ("en", "pt")

MATCH_EXACT = "exact"
MATCH_NORMALIZED = "normalized"
MATCH_TOKEN_OVERLAP = "token_overlap"

MAX_CANDIDATES = 10
MAX_EXPANSION_DEPTH = 3


def normalize(text: str) -> str:
    """Lowercase, fold diacritics, collapse whitespace."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return " ".join(stripped.casefold().split())


@dataclass(frozen=True)
class Concept:
    id: int
    lemma: str
    language: str
    external_links: tuple[str, ...] = ()


@dataclass(frozen=True)
class InferentialRelation:
    name: str
    source: int
    target: int
    polarity: str  # "Pre" | "Pos"


@dataclass(frozen=True)
class Candidate:
    concept_id: int
    score: float
    match_kind: str


@dataclass(frozen=True)
class ExpansionHit:
    concept_id: int
    relation: str
    polarity: str
    depth: int


class KnowledgeGraph:
    def __init__(self, relation_names: frozenset[str] = SEED_RELATION_NAMES):
        self.relation_names = relation_names
        self.concepts: dict[int, Concept] = {}
        self._lemma_index: dict[tuple[str, str], int] = {}
        self._out: dict[int, list[InferentialRelation]] = {}
        self._in: dict[int, list[InferentialRelation]] = {}
        self._relation_set: set[tuple] = set()

    def __len__(self) -> int:
        return len(self.concepts)

    @property
    def relations(self) -> list[InferentialRelation]:
        out = [r for rels in self._out.values() for r in rels]
        return sorted(out, key=self._relation_order)

    def _relation_order(self, r: InferentialRelation) -> tuple:
        return (r.name, self.concepts[r.target].lemma, r.polarity, r.source)

    def concept(self, concept_id: int) -> Concept:
        c = self.concepts.get(concept_id)
        if c is None:
            raise NotFoundError(f"unknown concept id {concept_id}")
        return c

    def lookup(self, lemma: str, language: str) -> Concept | None:
        cid = self._lemma_index.get((normalize(lemma), language))
        return self.concepts[cid] if cid is not None else None

    def add_concept(self, concept: Concept):
        if concept.id in self.concepts:
            raise ValidationError(f"duplicate concept id {concept.id}")
        key = (normalize(concept.lemma), concept.language)
        if key in self._lemma_index:
            raise ValidationError(
                f"duplicate lemma {concept.lemma!r} for language {concept.language!r}"
            )
        for link in concept.external_links:
            if not is_absolute_iri(link):
                raise ValidationError(f"external link is not an absolute IRI: {link!r}")
        self.concepts[concept.id] = concept
        self._lemma_index[key] = concept.id

    def add_relation(self, relation: InferentialRelation):
        if relation.name not in self.relation_names:
            raise ValidationError(f"unknown relation name {relation.name!r}")
        if relation.polarity not in ("Pre", "Pos"):
            raise ValidationError(f"polarity must be Pre or Pos, got {relation.polarity!r}")
        for endpoint in (relation.source, relation.target):
            if endpoint not in self.concepts:
                raise ValidationError(f"relation endpoint {endpoint} does not exist")
        key = (relation.name, relation.source, relation.target, relation.polarity)
        if key in self._relation_set:
            raise ValidationError(f"duplicate relation tuple {key}")
        self._relation_set.add(key)
        self._out.setdefault(relation.source, []).append(relation)
        self._in.setdefault(relation.target, []).append(relation)
        self._out[relation.source].sort(key=self._relation_order)
        self._in[relation.target].sort(key=self._relation_order)

    def characterize(self, expression: str, language: str) -> list[Candidate]:
        """Rank concepts against a designer's linguistic expression.

        Exact lemma match scores 1.0, a match after normalization 0.9,
        otherwise 0.8 * |shared tokens| / |token union| when positive.
        At most ten candidates, ordered by (score desc, lemma, id).
        """
        if not expression.strip():
            raise ValidationError("expression must be non-empty", field="expression")
        norm_expr = normalize(expression)
        expr_tokens = set(norm_expr.split())
        scored: list[tuple[Candidate, str]] = []
        for c in self.concepts.values():
            if c.language != language:
                continue
            if expression == c.lemma:
                scored.append((Candidate(c.id, 1.0, MATCH_EXACT), c.lemma))
                continue
            if norm_expr == normalize(c.lemma):
                scored.append((Candidate(c.id, 0.9, MATCH_NORMALIZED), c.lemma))
                continue
            lemma_tokens = set(normalize(c.lemma).split())
            shared = expr_tokens & lemma_tokens
            if shared:
                score = 0.8 * len(shared) / len(expr_tokens | lemma_tokens)
                scored.append((Candidate(c.id, score, MATCH_TOKEN_OVERLAP), c.lemma))
        scored.sort(key=lambda item: (-item[0].score, item[1], item[0].concept_id))
        return [cand for cand, _ in scored[:MAX_CANDIDATES]]

    def relations_of(
        self,
        concept_id: int,
        name: str | None = None,
        polarity: str | None = None,
    ) -> list[InferentialRelation]:
        """Outgoing relations of a concept, optionally filtered, in
        (name, target lemma) order."""
        self.concept(concept_id)
        rels = self._out.get(concept_id, [])
        return [
            r
            for r in rels
            if (name is None or r.name == name)
            and (polarity is None or r.polarity == polarity)
        ]

    def expand(self, concept_id: int, depth: int = 1) -> list[ExpansionHit]:
        """Breadth-first closure over outgoing relations.

        The seed is excluded; every reached concept appears once, annotated
        with the relation of its first (shallowest) discovery. The returned
        order is the discovery order, which makes expand(d) a prefix of
        expand(d+1).
        """
        self.concept(concept_id)
        if not 1 <= depth <= MAX_EXPANSION_DEPTH:
            raise ValidationError(
                f"depth must be between 1 and {MAX_EXPANSION_DEPTH}, got {depth}",
                field="depth",
            )
        visited = {concept_id}
        frontier = [concept_id]
        hits: list[ExpansionHit] = []
        for d in range(1, depth + 1):
            next_frontier = []
            for cid in frontier:
                for rel in self._out.get(cid, []):
                    if rel.target in visited:
                        continue
                    visited.add(rel.target)
                    hits.append(ExpansionHit(rel.target, rel.name, rel.polarity, d))
                    next_frontier.append(rel.target)
            frontier = next_frontier
        return hits

    def equals(self, other: "KnowledgeGraph") -> bool:
        return (
            self.relation_names == other.relation_names
            and self.concepts == other.concepts
            and self._relation_set == other._relation_set
        )


def _split_line(line: str, expected: tuple[int, ...], path: Path, lineno: int) -> list[str]:
    fields = line.split("\t")
    if len(fields) not in expected:
        raise ParseError(
            f"{path.name}: expected {' or '.join(map(str, expected))} tab-separated "
            f"fields, got {len(fields)}",
            lineno,
        )
    return [f.strip() for f in fields]


def load_kb(concepts_file: str | Path, relations_file: str | Path) -> KnowledgeGraph:
    """Load a knowledge graph from its two fixture files."""
    concepts_path = Path(concepts_file)
    relations_path = Path(relations_file)

    relation_names = set(SEED_RELATION_NAMES)
    relation_rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(
        relations_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!relations:"):
            extra = [n.strip() for n in line[len("!relations:"):].split(",") if n.strip()]
            relation_names.update(extra)
            continue
        relation_rows.append((lineno, _split_line(line, (5,), relations_path, lineno)))

    graph = KnowledgeGraph(frozenset(relation_names))

    for lineno, raw in enumerate(
        concepts_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = _split_line(line, (3, 4), concepts_path, lineno)
        try:
            cid = int(fields[0])
        except ValueError:
            raise ParseError(f"{concepts_path.name}: bad concept id {fields[0]!r}", lineno)
        if cid <= 0:
            raise ParseError(f"{concepts_path.name}: concept id must be positive", lineno)
        lemma, lang = fields[1], fields[2]
        if lang not in LANGUAGES:
            raise ParseError(
                f"{concepts_path.name}: language must be one of {LANGUAGES}, got {lang!r}",
                lineno,
            )
        links = tuple(
            link.strip()
            for link in (fields[3].split(";") if len(fields) == 4 else [])
            if link.strip()
        )
        try:
            graph.add_concept(Concept(cid, lemma, lang, links))
        except ValidationError as exc:
            raise ParseError(f"{concepts_path.name}: {exc}", lineno)

    for lineno, fields in relation_rows:
        name = _RELATION_ALIASES.get(fields[0], fields[0])
        source_lemma, target_lemma, polarity, lang = fields[1], fields[2], fields[3], fields[4]
        source = graph.lookup(source_lemma, lang)
        if source is None:
            raise ParseError(
                f"{relations_path.name}: relation references missing lemma "
                f"{source_lemma!r} ({lang})",
                lineno,
            )
        target = graph.lookup(target_lemma, lang)
        if target is None:
            raise ParseError(
                f"{relations_path.name}: relation references missing lemma "
                f"{target_lemma!r} ({lang})",
                lineno,
            )
        try:
            graph.add_relation(InferentialRelation(name, source.id, target.id, polarity))
        except ValidationError as exc:
            raise ParseError(f"{relations_path.name}: {exc}", lineno)

    return graph


def save_kb(graph: KnowledgeGraph, concepts_file: str | Path, relations_file: str | Path):
    """Write a graph back in the loadable format (sorted, canonical)."""
    concept_lines = []
    for c in sorted(graph.concepts.values(), key=lambda c: c.id):
        concept_lines.append(f"{c.id}\t{c.lemma}\t{c.language}\t{';'.join(c.external_links)}")
    Path(concepts_file).write_text("\n".join(concept_lines) + "\n", encoding="utf-8")

    relation_lines = ["!relations: " + ",".join(sorted(graph.relation_names))]
    for r in graph.relations:
        source = graph.concepts[r.source]
        target = graph.concepts[r.target]
        relation_lines.append(
            f"{r.name}\t{source.lemma}\t{target.lemma}\t{r.polarity}\t{source.language}"
        )
    Path(relations_file).write_text("\n".join(relation_lines) + "\n", encoding="utf-8")
