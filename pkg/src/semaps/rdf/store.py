"""Indexed in-memory triple store.

Set semantics with three positional indexes (subject, predicate, object).
`match` picks the most selective index for the bound positions and always
returns results in the canonical triple order, so callers can rely on
byte-stable output.

Concurrency contract: any number of concurrent readers OR one writer.
The store itself does not lock; the platform layer serializes writers.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from semaps.rdf.terms import Blank, Term, Triple, triple_key


class TripleStore:
    def __init__(self):
        self._triples: set[Triple] = set()
        self._by_subject: dict[Term, set[Triple]] = {}
        self._by_predicate: dict[Term, set[Triple]] = {}
        self._by_object: dict[Term, set[Triple]] = {}
        self._next_blank = 0

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def triples(self) -> list[Triple]:
        """All triples in canonical order."""
        return sorted(self._triples, key=triple_key)

    def fresh_blank(self) -> Blank:
        """Mint a blank node whose label is unused in this store."""
        while True:
            label = f"b{self._next_blank}"
            self._next_blank += 1
            candidate = Blank(label)
            if candidate not in self._by_subject and candidate not in self._by_object:
                return candidate

    def insert(self, t: Triple) -> bool:
        """Add a triple; returns True when it was not present before."""
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_subject.setdefault(t.subject, set()).add(t)
        self._by_predicate.setdefault(t.predicate, set()).add(t)
        self._by_object.setdefault(t.object, set()).add(t)
        return True

    def remove(self, t: Triple) -> bool:
        """Remove a triple; returns True when it was present."""
        if t not in self._triples:
            return False
        self._triples.discard(t)
        for index, key in (
            (self._by_subject, t.subject),
            (self._by_predicate, t.predicate),
            (self._by_object, t.object),
        ):
            bucket = index[key]
            bucket.discard(t)
            if not bucket:
                del index[key]
        return True

    def add_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
    ) -> list[Triple]:
        """Triples agreeing with every bound position; None is a wildcard.

        Results come back sorted by (subject, predicate, object) keys.
        """
        candidate_sets = []
        if subject is not None:
            candidate_sets.append(self._by_subject.get(subject, set()))
        if predicate is not None:
            candidate_sets.append(self._by_predicate.get(predicate, set()))
        if object is not None:
            candidate_sets.append(self._by_object.get(object, set()))

        if not candidate_sets:
            found = self._triples
        else:
            base = min(candidate_sets, key=len)
            found = [
                t
                for t in base
                if (subject is None or t.subject == subject)
                and (predicate is None or t.predicate == predicate)
                and (object is None or t.object == object)
            ]
        return sorted(found, key=triple_key)
