"""Platform ontology: maps, on-demand marker classes, markers, users.

Everything the platform asserts is materialized as triples in one
TripleStore (the RDF face) while typed records back the JSON API. All
mutations funnel through a single writer lock and are appended to a
command log (one JSON object per line) before being applied, so a crashed
process recovers by loading the latest snapshot and replaying the tail.
Identifiers therefore increase strictly and never repeat across restarts.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable

from semaps.errors import ConflictError, NotFoundError, ValidationError
from semaps.geo import WHOLE_WORLD, Viewport
from semaps.kb import KnowledgeGraph, normalize
from semaps.rdf.store import TripleStore
from semaps.rdf.terms import (
    OWL_CLASS,
    RDF_TYPE,
    XSD,
    XSD_DATETIME,
    XSD_DECIMAL,
    Iri,
    Literal,
    Triple,
    term_from_json,
    term_to_json,
)
from semaps.rdf.turtle import parse_turtle, serialize_turtle

DEFAULT_BASE_NAMESPACE = "http://semaps.example/ns#"

LOG_FILENAME = "commands.jsonl"
SNAPSHOT_TTL = "snapshot.ttl"
SNAPSHOT_STATE = "snapshot.json"


class TopClass(str, Enum):
    PERSON = "Person"
    ORGANIZATION = "Organization"
    EVENT = "Event"
    COMPLAINT = "Complaint"
    ARTISTIC_PRODUCTION = "ArtisticProduction"
    BUILDING = "Building"
    COMMERCIAL_ESTABLISHMENT = "CommercialEstablishment"

    @classmethod
    def parse(cls, value: str) -> "TopClass":
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(t.value for t in cls)
            raise ValidationError(
                f"unknown top class {value!r} (expected one of: {names})",
                field="top_class",
            )


class SourceType(str, Enum):
    DIRECT_WITNESS = "DirectWitness"
    SECOND_HAND = "SecondHand"
    OFFICIAL_RECORD = "OfficialRecord"
    MEDIA_REPORT = "MediaReport"
    ANONYMOUS = "Anonymous"

    @classmethod
    def parse(cls, value: str) -> "SourceType":
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(t.value for t in cls)
            raise ValidationError(
                f"unknown source type {value!r} (expected one of: {names})",
                field="source_type",
            )


DEFAULT_RELIABILITY = {
    SourceType.DIRECT_WITNESS: 0.8,
    SourceType.SECOND_HAND: 0.4,
    SourceType.OFFICIAL_RECORD: 0.9,
    SourceType.MEDIA_REPORT: 0.6,
    SourceType.ANONYMOUS: 0.2,
}


@dataclass
class Provenance:
    source_type: SourceType
    reliability: float
    confirmations: int = 0
    refutations: int = 0

    def to_json(self) -> dict:
        return {
            "source_type": self.source_type.value,
            "reliability": self.reliability,
            "confirmations": self.confirmations,
            "refutations": self.refutations,
        }


@dataclass
class ConceptClass:
    id: int
    class_iri: str
    label: str
    parent: TopClass
    kb_concept_id: int | None  # None for explicitly unlinked classes
    map_id: int

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "class_iri": self.class_iri,
            "label": self.label,
            "top_class": self.parent.value,
            "kb_concept_id": self.kb_concept_id,
            "map_id": self.map_id,
        }


@dataclass
class MarkerRecord:
    id: int
    iri: str
    map_id: int
    class_id: int
    creator: int
    latitude: float
    longitude: float
    timestamp: datetime
    description: str
    provenance: Provenance

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "iri": self.iri,
            "map_id": self.map_id,
            "class_id": self.class_id,
            "creator": self.creator,
            "latitude": self.latitude,
            "longitude": self.longitude,
            "timestamp": self.timestamp.isoformat(),
            "description": self.description,
            "provenance": self.provenance.to_json(),
        }


@dataclass
class WikiUser:
    id: int
    iri: str
    display_name: str
    friends: set[int] = field(default_factory=set)


@dataclass
class WikiUserAccount:
    id: int
    iri: str
    login: str
    user_id: int
    reputation: float = 0.5

    def to_json(self) -> dict:
        return {
            "account_id": self.id,
            "iri": self.iri,
            "login": self.login,
            "user_id": self.user_id,
            "reputation": self.reputation,
        }


@dataclass
class CrowdMap:
    id: int
    iri: str
    title: str
    owner: int
    viewport: Viewport
    concept_class_ids: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "iri": self.iri,
            "title": self.title,
            "owner": self.owner,
            "viewport": {
                "west": self.viewport.west,
                "south": self.viewport.south,
                "east": self.viewport.east,
                "north": self.viewport.north,
            },
            "concept_class_ids": list(self.concept_class_ids),
        }


_SLUG_KEEP = re.compile(r"[^a-z0-9]+")


def slugify(text: str) -> str:
    slug = _SLUG_KEEP.sub("-", normalize(text)).strip("-")
    return slug or "x"


def format_coord(value: float) -> str:
    """Deterministic xsd:decimal lexical form for a coordinate."""
    text = f"{value:.6f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


class Vocabulary:
    """IRIs minted under the configured base namespace."""

    def __init__(self, base_namespace: str = DEFAULT_BASE_NAMESPACE):
        self.base = base_namespace
        self.root = base_namespace.rstrip("#/")
        self.rdf_type = Iri(RDF_TYPE)
        self.owl_class = Iri(OWL_CLASS)
        self.subclass_of = Iri(base_namespace + "subClassOf")
        self.label = Iri(base_namespace + "label")
        self.links_to_concept = Iri(base_namespace + "linksToConcept")
        self.has_creator = Iri(base_namespace + "hasCreator")
        self.topic = Iri(base_namespace + "topic")
        self.knows = Iri(base_namespace + "knows")
        self.lat = Iri(base_namespace + "lat")
        self.lon = Iri(base_namespace + "lon")
        self.created = Iri(base_namespace + "created")
        self.description = Iri(base_namespace + "description")
        self.title = Iri(base_namespace + "title")
        self.owner = Iri(base_namespace + "owner")
        self.name = Iri(base_namespace + "name")
        self.login = Iri(base_namespace + "login")
        self.account_of = Iri(base_namespace + "accountOf")
        self.crowd_map_class = Iri(base_namespace + "CrowdMap")
        self.wiki_user_class = Iri(base_namespace + "WikiUser")
        self.wiki_account_class = Iri(base_namespace + "WikiUserAccount")

    def entity_iri(self, kind: str, slug: str, entity_id: int) -> Iri:
        return Iri(f"{self.root}/{kind}/{slug}-{entity_id}")

    def top_class_iri(self, top: TopClass) -> Iri:
        return Iri(f"{self.root}/top/{top.value}")

    def prefixes(self) -> dict[str, str]:
        return {
            "ex": self.base,
            "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
            "xsd": XSD,
            "owl": "http://www.w3.org/2002/07/owl#",
        }


class Platform:
    """Typed registry + RDF store behind every write endpoint.

    Pass a data directory to get durability: each mutation is logged
    before it is applied, `snapshot()` persists the current state, and a
    new Platform over the same directory recovers by snapshot + replay.
    """

    def __init__(
        self,
        kb: KnowledgeGraph | None = None,
        data_dir: str | Path | None = None,
        base_namespace: str = DEFAULT_BASE_NAMESPACE,
        reliability: dict[SourceType, float] | None = None,
        clock: Callable[[], datetime] | None = None,
    ):
        self.kb = kb
        self.vocab = Vocabulary(base_namespace)
        self.store = TripleStore()
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self.reliability = dict(DEFAULT_RELIABILITY)
        if reliability:
            for source_type, value in reliability.items():
                if not 0.0 <= value <= 1.0:
                    raise ValidationError(
                        f"reliability for {source_type} must be in [0,1], got {value}"
                    )
                self.reliability[source_type] = value

        self.users: dict[int, WikiUser] = {}
        self.accounts: dict[int, WikiUserAccount] = {}
        self.maps: dict[int, CrowdMap] = {}
        self.classes: dict[int, ConceptClass] = {}
        self.markers: dict[int, MarkerRecord] = {}
        self.votes: dict[int, dict[int, str]] = {}
        self._logins: dict[str, int] = {}
        self._counters = {"user": 1, "account": 1, "map": 1, "class": 1, "marker": 1}

        self._write_lock = threading.Lock()
        self._data_dir = Path(data_dir) if data_dir is not None else None
        self._replayed_lines = 0
        if self._data_dir is not None:
            self._data_dir.mkdir(parents=True, exist_ok=True)
            self._recover()

    # ----- durability ---------------------------------------------------

    @property
    def log_path(self) -> Path:
        return self._data_dir / LOG_FILENAME

    def _log_entries(self) -> list[dict]:
        if self._data_dir is None or not self.log_path.exists():
            return []
        lines = [
            line for line in self.log_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        entries = []
        for i, line in enumerate(lines):
            try:
                entries.append(json.loads(line))
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    break  # torn tail from a crash mid-write; drop it
                raise
        return entries

    def _recover(self):
        state_path = self._data_dir / SNAPSHOT_STATE
        start = 0
        if state_path.exists():
            state = json.loads(state_path.read_text(encoding="utf-8"))
            self._load_state(state)
            ttl = (self._data_dir / SNAPSHOT_TTL).read_text(encoding="utf-8")
            self.store.add_all(parse_turtle(ttl))
            start = state["log_lines"]
        entries = self._log_entries()
        for entry in entries[start:]:
            self._apply(entry["op"], entry["args"])
        self._replayed_lines = len(entries)

    def _count_log_lines(self) -> int:
        return len(self._log_entries())

    def snapshot(self):
        """Persist store + typed state; replay resumes after the logged lines."""
        if self._data_dir is None:
            raise ValidationError("platform has no data directory")
        with self._write_lock:
            (self._data_dir / SNAPSHOT_TTL).write_text(
                self.export_turtle(), encoding="utf-8"
            )
            state = self._to_state()
            state["log_lines"] = self._count_log_lines()
            (self._data_dir / SNAPSHOT_STATE).write_text(
                json.dumps(state, indent=1, sort_keys=True), encoding="utf-8"
            )

    def _commit(self, op: str, args: dict):
        with self._write_lock:
            if self._data_dir is not None:
                entry = {"op": op, "args": args, "ts": self.clock().isoformat()}
                with self.log_path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, sort_keys=True) + "\n")
            self._apply(op, args)

    def _apply(self, op: str, args: dict):
        getattr(self, f"_apply_{op}")(args)

    def _take_id(self, kind: str) -> int:
        return self._counters[kind]

    def _bump(self, kind: str, used_id: int):
        self._counters[kind] = max(self._counters[kind], used_id + 1)

    # ----- users ---------------------------------------------------------

    def register_user(self, login: str, display_name: str) -> WikiUserAccount:
        login = login.strip()
        if not login:
            raise ValidationError("login must be non-empty", field="login")
        if login in self._logins:
            raise ConflictError(f"login {login!r} is already taken")
        args = {
            "user_id": self._take_id("user"),
            "account_id": self._take_id("account"),
            "login": login,
            "display_name": display_name or login,
        }
        self._commit("register_user", args)
        return self.accounts[args["account_id"]]

    def _apply_register_user(self, args: dict):
        user_id, account_id = args["user_id"], args["account_id"]
        slug = slugify(args["login"])
        user_iri = self.vocab.entity_iri("user", slug, user_id)
        account_iri = self.vocab.entity_iri("account", slug, account_id)
        self.users[user_id] = WikiUser(user_id, user_iri.value, args["display_name"])
        self.accounts[account_id] = WikiUserAccount(
            account_id, account_iri.value, args["login"], user_id
        )
        self._logins[args["login"]] = account_id
        self._bump("user", user_id)
        self._bump("account", account_id)
        v = self.vocab
        self.store.add_all(
            [
                Triple(user_iri, v.rdf_type, v.wiki_user_class),
                Triple(user_iri, v.name, Literal(args["display_name"])),
                Triple(account_iri, v.rdf_type, v.wiki_account_class),
                Triple(account_iri, v.account_of, user_iri),
                Triple(account_iri, v.login, Literal(args["login"])),
            ]
        )

    def add_friend(self, user_a: int, user_b: int):
        if user_a == user_b:
            raise ValidationError("a user cannot befriend themselves")
        for uid in (user_a, user_b):
            if uid not in self.users:
                raise NotFoundError(f"unknown user id {uid}")
        self._commit("add_friend", {"user_a": user_a, "user_b": user_b})

    def _apply_add_friend(self, args: dict):
        a = self.users[args["user_a"]]
        b = self.users[args["user_b"]]
        a.friends.add(b.id)
        b.friends.add(a.id)
        knows = self.vocab.knows
        self.store.insert(Triple(Iri(a.iri), knows, Iri(b.iri)))
        self.store.insert(Triple(Iri(b.iri), knows, Iri(a.iri)))

    # ----- maps ----------------------------------------------------------

    def create_map(self, title: str, owner_account: int) -> CrowdMap:
        if not title.strip():
            raise ValidationError("title must be non-empty", field="title")
        if owner_account not in self.accounts:
            raise NotFoundError(f"unknown account id {owner_account}")
        args = {"map_id": self._take_id("map"), "title": title, "owner": owner_account}
        self._commit("create_map", args)
        return self.maps[args["map_id"]]

    def _apply_create_map(self, args: dict):
        map_id = args["map_id"]
        iri = self.vocab.entity_iri("map", slugify(args["title"]), map_id)
        self.maps[map_id] = CrowdMap(
            map_id, iri.value, args["title"], args["owner"], WHOLE_WORLD
        )
        self._bump("map", map_id)
        v = self.vocab
        self.store.add_all(
            [
                Triple(iri, v.rdf_type, v.crowd_map_class),
                Triple(iri, v.title, Literal(args["title"])),
                Triple(iri, v.owner, Iri(self.accounts[args["owner"]].iri)),
            ]
        )

    def get_map(self, map_id: int) -> CrowdMap:
        m = self.maps.get(map_id)
        if m is None:
            raise NotFoundError(f"unknown map id {map_id}")
        return m

    # ----- concept classes ------------------------------------------------

    def create_concept(
        self, map_id: int, label: str, parent: TopClass, kb_concept_id: int | None
    ) -> ConceptClass:
        """Mint a marker class. kb_concept_id None creates an explicitly
        unlinked class (the designer declined every candidate)."""
        self.get_map(map_id)
        if not label.strip():
            raise ValidationError("label must be non-empty", field="label")
        if kb_concept_id is None:
            concept = None
        else:
            if self.kb is None:
                raise ValidationError("no knowledge base is loaded")
            concept = self.kb.concept(kb_concept_id)  # NotFoundError on bad id
        norm = normalize(label)
        for cc in self.classes.values():
            if cc.map_id == map_id and normalize(cc.label) == norm:
                raise ConflictError(
                    f"map {map_id} already has a concept class labeled {cc.label!r}"
                )
        args = {
            "class_id": self._take_id("class"),
            "map_id": map_id,
            "label": label,
            "parent": parent.value,
            "kb_concept_id": kb_concept_id,
            "external_links": list(concept.external_links) if concept else [],
        }
        self._commit("create_concept", args)
        return self.classes[args["class_id"]]

    def _apply_create_concept(self, args: dict):
        class_id = args["class_id"]
        parent = TopClass(args["parent"])
        class_iri = self.vocab.entity_iri("class", slugify(args["label"]), class_id)
        record = ConceptClass(
            class_id,
            class_iri.value,
            args["label"],
            parent,
            args["kb_concept_id"],
            args["map_id"],
        )
        self.classes[class_id] = record
        self.maps[args["map_id"]].concept_class_ids.append(class_id)
        self._bump("class", class_id)
        v = self.vocab
        triples = [
            Triple(class_iri, v.rdf_type, v.owl_class),
            Triple(class_iri, v.subclass_of, v.top_class_iri(parent)),
            Triple(class_iri, v.label, Literal(args["label"])),
        ]
        for link in args["external_links"]:
            triples.append(Triple(class_iri, v.links_to_concept, Iri(link)))
        self.store.add_all(triples)

    def get_class(self, class_id: int) -> ConceptClass:
        cc = self.classes.get(class_id)
        if cc is None:
            raise NotFoundError(f"unknown concept class id {class_id}")
        return cc

    def classes_of(self, map_id: int) -> list[ConceptClass]:
        return [self.classes[cid] for cid in self.get_map(map_id).concept_class_ids]

    # ----- markers ---------------------------------------------------------

    def create_marker(
        self,
        map_id: int,
        class_id: int,
        creator_account: int,
        latitude: float,
        longitude: float,
        description: str,
        source_type: SourceType,
    ) -> MarkerRecord:
        self.get_map(map_id)
        cc = self.get_class(class_id)
        if cc.map_id != map_id:
            raise NotFoundError(f"concept class {class_id} does not belong to map {map_id}")
        if creator_account not in self.accounts:
            raise NotFoundError(f"unknown account id {creator_account}")
        if not -90.0 <= latitude <= 90.0:
            raise ValidationError(f"latitude out of range [-90, 90]: {latitude}", field="latitude")
        if not -180.0 <= longitude <= 180.0:
            raise ValidationError(
                f"longitude out of range [-180, 180]: {longitude}", field="longitude"
            )
        args = {
            "marker_id": self._take_id("marker"),
            "map_id": map_id,
            "class_id": class_id,
            "creator": creator_account,
            "latitude": latitude,
            "longitude": longitude,
            "description": description,
            "source_type": source_type.value,
            "reliability": self.reliability[source_type],
            "timestamp": self.clock().isoformat(),
        }
        self._commit("create_marker", args)
        return self.markers[args["marker_id"]]

    def _apply_create_marker(self, args: dict):
        marker_id = args["marker_id"]
        cc = self.classes[args["class_id"]]
        marker_iri = self.vocab.entity_iri("marker", slugify(cc.label), marker_id)
        record = MarkerRecord(
            id=marker_id,
            iri=marker_iri.value,
            map_id=args["map_id"],
            class_id=args["class_id"],
            creator=args["creator"],
            latitude=args["latitude"],
            longitude=args["longitude"],
            timestamp=datetime.fromisoformat(args["timestamp"]),
            description=args["description"],
            provenance=Provenance(
                SourceType(args["source_type"]), args["reliability"]
            ),
        )
        self.markers[marker_id] = record
        self._bump("marker", marker_id)
        v = self.vocab
        self.store.add_all(
            [
                Triple(marker_iri, v.rdf_type, Iri(cc.class_iri)),
                Triple(marker_iri, v.has_creator, Iri(self.accounts[args["creator"]].iri)),
                Triple(marker_iri, v.topic, Iri(cc.class_iri)),
                Triple(marker_iri, v.lat, Literal(format_coord(args["latitude"]), XSD_DECIMAL)),
                Triple(marker_iri, v.lon, Literal(format_coord(args["longitude"]), XSD_DECIMAL)),
                Triple(marker_iri, v.created, Literal(args["timestamp"], XSD_DATETIME)),
                Triple(marker_iri, v.description, Literal(args["description"])),
            ]
        )

    def get_marker(self, marker_id: int) -> MarkerRecord:
        m = self.markers.get(marker_id)
        if m is None:
            raise NotFoundError(f"unknown marker id {marker_id}")
        return m

    def markers_in(self, map_id: int, viewport: Viewport) -> list[MarkerRecord]:
        """Markers of the map inside the (inclusive) viewport, ordered by id."""
        self.get_map(map_id)
        return [
            m
            for m in sorted(self.markers.values(), key=lambda m: m.id)
            if m.map_id == map_id and viewport.contains(m.latitude, m.longitude)
        ]

    # ----- votes and reputation ---------------------------------------------

    def confirm_marker(
        self, marker_id: int, account_id: int, vote: str
    ) -> tuple[Provenance, float]:
        if vote not in ("confirm", "refute"):
            raise ValidationError(f"vote must be 'confirm' or 'refute', got {vote!r}", field="vote")
        marker = self.get_marker(marker_id)
        if account_id not in self.accounts:
            raise NotFoundError(f"unknown account id {account_id}")
        if account_id == marker.creator:
            raise ValidationError("creators cannot vote on their own markers")
        if account_id in self.votes.get(marker_id, {}):
            raise ConflictError(f"account {account_id} already voted on marker {marker_id}")
        self._commit(
            "confirm_marker",
            {"marker_id": marker_id, "account_id": account_id, "vote": vote},
        )
        marker = self.markers[marker_id]
        return marker.provenance, self.accounts[marker.creator].reputation

    def _apply_confirm_marker(self, args: dict):
        marker = self.markers[args["marker_id"]]
        self.votes.setdefault(marker.id, {})[args["account_id"]] = args["vote"]
        if args["vote"] == "confirm":
            marker.provenance.confirmations += 1
        else:
            marker.provenance.refutations += 1
        creator = self.accounts[marker.creator]
        confirmations = refutations = 0
        for m in self.markers.values():
            if m.creator == creator.id:
                confirmations += m.provenance.confirmations
                refutations += m.provenance.refutations
        # Laplace-smoothed confirmation ratio: bounded in (0,1), monotone.
        creator.reputation = (1 + confirmations) / (2 + confirmations + refutations)

    # ----- bulk import and export --------------------------------------------

    def import_triples(self, triples) -> int:
        encoded = [
            {
                "s": term_to_json(t.subject),
                "p": term_to_json(t.predicate),
                "o": term_to_json(t.object),
            }
            for t in triples
        ]
        before = len(self.store)
        self._commit("import_triples", {"triples": encoded})
        return len(self.store) - before

    def _apply_import_triples(self, args: dict):
        self.store.add_all(
            Triple(term_from_json(t["s"]), term_from_json(t["p"]), term_from_json(t["o"]))
            for t in args["triples"]
        )

    def export_turtle(self) -> str:
        return serialize_turtle(self.store.triples(), self.vocab.prefixes())

    # ----- snapshot state ------------------------------------------------------

    def _to_state(self) -> dict:
        return {
            "counters": dict(self._counters),
            "users": [
                {
                    "id": u.id,
                    "iri": u.iri,
                    "display_name": u.display_name,
                    "friends": sorted(u.friends),
                }
                for u in self.users.values()
            ],
            "accounts": [
                {
                    "id": a.id,
                    "iri": a.iri,
                    "login": a.login,
                    "user_id": a.user_id,
                    "reputation": a.reputation,
                }
                for a in self.accounts.values()
            ],
            "maps": [m.to_json() for m in self.maps.values()],
            "classes": [c.to_json() for c in self.classes.values()],
            "markers": [m.to_json() for m in self.markers.values()],
            "votes": {
                str(marker_id): {str(acc): v for acc, v in votes.items()}
                for marker_id, votes in self.votes.items()
            },
        }

    def _load_state(self, state: dict):
        self._counters = dict(state["counters"])
        for u in state["users"]:
            self.users[u["id"]] = WikiUser(
                u["id"], u["iri"], u["display_name"], set(u["friends"])
            )
        for a in state["accounts"]:
            account = WikiUserAccount(
                a["id"], a["iri"], a["login"], a["user_id"], a["reputation"]
            )
            self.accounts[account.id] = account
            self._logins[account.login] = account.id
        for m in state["maps"]:
            vp = m["viewport"]
            self.maps[m["id"]] = CrowdMap(
                m["id"],
                m["iri"],
                m["title"],
                m["owner"],
                Viewport(vp["west"], vp["south"], vp["east"], vp["north"]),
                list(m["concept_class_ids"]),
            )
        for c in state["classes"]:
            self.classes[c["id"]] = ConceptClass(
                c["id"],
                c["class_iri"],
                c["label"],
                TopClass(c["top_class"]),
                c["kb_concept_id"],
                c["map_id"],
            )
        for m in state["markers"]:
            p = m["provenance"]
            self.markers[m["id"]] = MarkerRecord(
                id=m["id"],
                iri=m["iri"],
                map_id=m["map_id"],
                class_id=m["class_id"],
                creator=m["creator"],
                latitude=m["latitude"],
                longitude=m["longitude"],
                timestamp=datetime.fromisoformat(m["timestamp"]),
                description=m["description"],
                provenance=Provenance(
                    SourceType(p["source_type"]),
                    p["reliability"],
                    p["confirmations"],
                    p["refutations"],
                ),
            )
        for marker_id, votes in state["votes"].items():
            self.votes[int(marker_id)] = {int(acc): v for acc, v in votes.items()}
