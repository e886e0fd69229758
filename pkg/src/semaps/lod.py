"""Linked-open-data search driven by knowledge-graph expansion.

Given a seed concept, the client expands it over its inferential
relations, queries every enabled source for resources tagged with any
concept in the expansion set, geo-filters against the current viewport,
and groups results by the concept that matched ("direct" for the seed,
the relation-target lemma otherwise).

Sources are either local Turtle fixtures or remote SPARQL endpoints.
A failing source never fails the search: it is skipped and reported in
the result's degraded-source list.

Fixture vocabulary (predicates in the platform namespace): `about` links
a resource to a concept's external IRI; `label`, `lat`, `lon`, `snippet`
carry its display data.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from semaps.errors import FetchError, ValidationError
from semaps.geo import Viewport, great_circle_km
from semaps.kb import Concept, KnowledgeGraph, normalize
from semaps.ontology import DEFAULT_BASE_NAMESPACE
from semaps.rdf.store import TripleStore
from semaps.rdf.terms import Iri, Literal, is_absolute_iri
from semaps.rdf.turtle import parse_turtle
from semaps.sparql import evaluate, parse_query

log = logging.getLogger(__name__)

FIXTURE = "fixture"
REMOTE = "remote"

DIRECT = "direct"

MAX_IN_FLIGHT = 4
DEFAULT_TIMEOUT = 5.0


@dataclass
class LodSource:
    name: str
    kind: str  # FIXTURE | REMOTE
    target: str  # path to a Turtle file, or SPARQL endpoint URL
    enabled: bool = True

    def __post_init__(self):
        if self.kind not in (FIXTURE, REMOTE):
            raise ValidationError(f"source kind must be fixture or remote, got {self.kind!r}")


@dataclass
class LodResource:
    uri: str
    label: str
    source: str
    matched_concept_id: int
    matched_lemma: str
    relation: str  # DIRECT or the inferential relation name
    depth: int
    latitude: float | None = None
    longitude: float | None = None
    snippet: str | None = None
    distance_km: float | None = None

    def __post_init__(self):
        if not is_absolute_iri(self.uri):
            raise ValidationError(f"resource uri is not absolute: {self.uri!r}")
        if self.latitude is not None and not -90.0 <= self.latitude <= 90.0:
            raise ValidationError(f"latitude out of range: {self.latitude}")
        if self.longitude is not None and not -180.0 <= self.longitude <= 180.0:
            raise ValidationError(f"longitude out of range: {self.longitude}")

    @property
    def unlocated(self) -> bool:
        return self.latitude is None or self.longitude is None

    def to_json(self) -> dict:
        return {
            "uri": self.uri,
            "label": self.label,
            "source": self.source,
            "matched_concept_id": self.matched_concept_id,
            "matched_lemma": self.matched_lemma,
            "relation": self.relation,
            "depth": self.depth,
            "latitude": self.latitude,
            "longitude": self.longitude,
            "snippet": self.snippet,
            "distance_km": self.distance_km,
            "unlocated": self.unlocated,
        }


@dataclass
class SearchGroup:
    label: str
    resources: list[LodResource] = field(default_factory=list)


@dataclass
class SearchResult:
    seed_concept_id: int
    depth: int
    groups: list[SearchGroup] = field(default_factory=list)
    degraded_sources: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "seed_concept_id": self.seed_concept_id,
            "depth": self.depth,
            "groups": [
                {"label": g.label, "resources": [r.to_json() for r in g.resources]}
                for g in self.groups
            ],
            "degraded_sources": self.degraded_sources,
        }


def geo_sort(resources: list[LodResource], center_lat: float, center_lon: float) -> list[LodResource]:
    """Located resources by ascending great-circle distance from the center,
    then unlocated ones in their original order. Sets distance_km."""
    located = [r for r in resources if not r.unlocated]
    unlocated = [r for r in resources if r.unlocated]
    for r in located:
        r.distance_km = great_circle_km(center_lat, center_lon, r.latitude, r.longitude)
    located.sort(key=lambda r: (r.distance_km, r.uri))
    return located + unlocated


def _default_http_get(url: str, params: dict, timeout: float) -> dict:
    response = httpx.get(
        url,
        params=params,
        headers={"Accept": "application/sparql-results+json"},
        timeout=timeout,
    )
    response.raise_for_status()
    return response.json()


class LodClient:
    def __init__(
        self,
        kb: KnowledgeGraph,
        sources: list[LodSource],
        base_namespace: str = DEFAULT_BASE_NAMESPACE,
        timeout: float = DEFAULT_TIMEOUT,
        http_get=None,
    ):
        self.kb = kb
        self.sources = sources
        self.timeout = timeout
        self.http_get = http_get or _default_http_get
        self.about = base_namespace + "about"
        self.label = base_namespace + "label"
        self.lat = base_namespace + "lat"
        self.lon = base_namespace + "lon"
        self.snippet = base_namespace + "snippet"
        self._fixture_cache: dict[str, tuple[float, TripleStore]] = {}
        for source in sources:
            if source.kind == FIXTURE and source.enabled:
                self._fixture_store(source)  # fail fast on unreadable fixtures

    # ----- fetching ------------------------------------------------------

    def _fixture_store(self, source: LodSource) -> TripleStore:
        path = Path(source.target)
        try:
            mtime = path.stat().st_mtime
        except OSError as exc:
            raise FetchError(source.name, f"fixture unreadable: {exc}")
        cached = self._fixture_cache.get(source.name)
        if cached and cached[0] == mtime:
            return cached[1]
        store = TripleStore()
        store.add_all(parse_turtle(path.read_text(encoding="utf-8")))
        self._fixture_cache[source.name] = (mtime, store)
        return store

    def fetch_from_source(
        self, source: LodSource, concept_iris: list[str], labels: list[str]
    ) -> list[dict]:
        """Raw resource rows {uri, label, lat?, lon?, snippet?} matching any
        of the IRIs (tag match) or labels (normalized containment)."""
        if source.kind == FIXTURE:
            return self._fetch_fixture(source, concept_iris, labels)
        return self._fetch_remote(source, concept_iris, labels)

    def _tag_query(self, concept_iri: str) -> str:
        return (
            f"SELECT ?r ?label WHERE {{ ?r <{self.about}> <{concept_iri}> . "
            f"?r <{self.label}> ?label }}"
        )

    def _label_query(self) -> str:
        return f"SELECT ?r ?label WHERE {{ ?r <{self.label}> ?label }}"

    def _fetch_fixture(self, source, concept_iris, labels) -> list[dict]:
        store = self._fixture_store(source)
        hits: dict[str, str] = {}
        for iri in concept_iris:
            for binding in evaluate(store, parse_query(self._tag_query(iri))):
                hits[binding["r"].value] = binding["label"].lexical
        wanted = [normalize(l) for l in labels if l.strip()]
        if wanted:
            for binding in evaluate(store, parse_query(self._label_query())):
                text = normalize(binding["label"].lexical)
                if any(w in text for w in wanted):
                    hits.setdefault(binding["r"].value, binding["label"].lexical)
        return [
            self._enrich_fixture(store, uri, label) for uri, label in sorted(hits.items())
        ]

    def _enrich_fixture(self, store: TripleStore, uri: str, label: str) -> dict:
        row = {"uri": uri, "label": label, "lat": None, "lon": None, "snippet": None}
        subject = Iri(uri)
        for key, predicate in (("lat", self.lat), ("lon", self.lon), ("snippet", self.snippet)):
            found = store.match(subject, Iri(predicate), None)
            if found and isinstance(found[0].object, Literal):
                row[key] = found[0].object.lexical
        for key in ("lat", "lon"):
            if row[key] is not None:
                try:
                    row[key] = float(row[key])
                except ValueError:
                    row[key] = None
        return row

    def _fetch_remote(self, source, concept_iris, labels) -> list[dict]:
        hits: dict[str, str] = {}
        try:
            for iri in concept_iris:
                data = self.http_get(
                    source.target, {"query": self._tag_query(iri)}, self.timeout
                )
                for row in self._result_rows(data):
                    hits[row["r"]] = row.get("label", row["r"])
            wanted = [normalize(l) for l in labels if l.strip()]
            if wanted:
                data = self.http_get(source.target, {"query": self._label_query()}, self.timeout)
                for row in self._result_rows(data):
                    if any(w in normalize(row.get("label", "")) for w in wanted):
                        hits.setdefault(row["r"], row["label"])
            return [self._enrich_remote(source, uri, label) for uri, label in sorted(hits.items())]
        except FetchError:
            raise
        except Exception as exc:
            raise FetchError(source.name, str(exc))

    def _enrich_remote(self, source, uri: str, label: str) -> dict:
        row = {"uri": uri, "label": label, "lat": None, "lon": None, "snippet": None}
        query = (
            f"SELECT ?lat ?lon WHERE {{ <{uri}> <{self.lat}> ?lat . "
            f"<{uri}> <{self.lon}> ?lon }}"
        )
        data = self.http_get(source.target, {"query": query}, self.timeout)
        for coords in self._result_rows(data):
            try:
                row["lat"] = float(coords["lat"])
                row["lon"] = float(coords["lon"])
            except (KeyError, ValueError):
                pass
            break
        snippet_query = f"SELECT ?s WHERE {{ <{uri}> <{self.snippet}> ?s }}"
        for extra in self._result_rows(
            self.http_get(source.target, {"query": snippet_query}, self.timeout)
        ):
            row["snippet"] = extra.get("s")
            break
        return row

    @staticmethod
    def _result_rows(data: dict) -> list[dict]:
        try:
            bindings = data["results"]["bindings"]
            return [{k: v["value"] for k, v in b.items()} for b in bindings]
        except (KeyError, TypeError):
            raise ValueError("malformed SPARQL JSON results")

    # ----- search ---------------------------------------------------------

    def _expansion_entries(self, seed: Concept, depth: int) -> list[tuple[Concept, str, int]]:
        entries = [(seed, DIRECT, 0)]
        for hit in self.kb.expand(seed.id, depth):
            entries.append((self.kb.concepts[hit.concept_id], hit.relation, hit.depth))
        return entries

    def search_for_concept(
        self,
        concept_id: int,
        viewport: Viewport | None = None,
        depth: int = 1,
    ) -> SearchResult:
        seed = self.kb.concept(concept_id)  # NotFoundError on unknown id
        entries = self._expansion_entries(seed, depth)
        result = SearchResult(seed_concept_id=concept_id, depth=depth)

        enabled = [s for s in self.sources if s.enabled]

        def fetch_all(source: LodSource) -> list[list[dict]]:
            return [
                self.fetch_from_source(source, list(concept.external_links), [concept.lemma])
                for concept, _, _ in entries
            ]

        per_source: dict[str, list[list[dict]]] = {}
        with ThreadPoolExecutor(max_workers=MAX_IN_FLIGHT) as pool:
            futures = {source.name: pool.submit(fetch_all, source) for source in enabled}
        for source in enabled:
            try:
                per_source[source.name] = futures[source.name].result()
            except FetchError as exc:
                log.warning("source %s degraded: %s", source.name, exc)
                result.degraded_sources.append({"source": source.name, "error": str(exc)})

        seen: set[str] = set()
        groups: list[SearchGroup] = []
        for index, (concept, relation, entry_depth) in enumerate(entries):
            group = SearchGroup(label=DIRECT if relation == DIRECT else concept.lemma)
            for source in enabled:
                rows = per_source.get(source.name)
                if rows is None:
                    continue
                for row in rows[index]:
                    if row["uri"] in seen:
                        continue
                    resource = LodResource(
                        uri=row["uri"],
                        label=row["label"],
                        source=source.name,
                        matched_concept_id=concept.id,
                        matched_lemma=concept.lemma,
                        relation=relation,
                        depth=entry_depth,
                        latitude=row.get("lat"),
                        longitude=row.get("lon"),
                        snippet=row.get("snippet"),
                    )
                    if viewport is not None and not resource.unlocated:
                        if not viewport.contains(resource.latitude, resource.longitude):
                            continue
                    seen.add(resource.uri)
                    group.resources.append(resource)
            if group.resources:
                if viewport is not None:
                    center_lat, center_lon = viewport.center()
                    group.resources = geo_sort(group.resources, center_lat, center_lon)
                groups.append(group)
        result.groups = groups
        return result
