import pytest

from semaps.errors import NotFoundError, ParseError, ValidationError
from semaps.kb import (
    MATCH_EXACT,
    MATCH_NORMALIZED,
    MATCH_TOKEN_OVERLAP,
    load_kb,
    normalize,
    save_kb,
)

from .oracles import bfs_expand


def write_kb(tmp_path, concepts: str, relations: str = ""):
    c = tmp_path / "concepts.tsv"
    r = tmp_path / "relations.tsv"
    c.write_text(concepts, encoding="utf-8")
    r.write_text(relations, encoding="utf-8")
    return c, r


def concept_by_lemma(graph, lemma, lang="en"):
    found = graph.lookup(lemma, lang)
    assert found is not None, lemma
    return found


class TestLoad:
    def test_single_concept_no_relations(self, tmp_path):
        graph = load_kb(*write_kb(tmp_path, "1\thello\ten\t\n"))
        assert len(graph) == 1
        assert graph.relations == []

    def test_fixture_contains_politician_tuples(self, fixture_kb):
        politician = concept_by_lemma(fixture_kb, "politician")
        pre = fixture_kb.relations_of(politician.id, polarity="Pre")
        facts = {
            (r.name, fixture_kb.concepts[r.target].lemma, r.polarity) for r in pre
        }
        assert facts == {
            ("CapableOf", "to propose laws", "Pre"),
            ("PropertyOf", "corruption", "Pre"),
        }

    def test_dangling_relation_endpoint(self, tmp_path):
        with pytest.raises(ParseError) as err:
            load_kb(*write_kb(tmp_path, "1\ta\ten\t\n", "IsA\ta\tmissing thing\tPre\ten\n"))
        assert "missing thing" in str(err.value)

    def test_duplicate_concept_id(self, tmp_path):
        with pytest.raises(ParseError) as err:
            load_kb(*write_kb(tmp_path, "1\ta\ten\t\n1\tb\ten\t\n"))
        assert err.value.line == 2

    def test_duplicate_normalized_lemma_same_language(self, tmp_path):
        with pytest.raises(ParseError):
            load_kb(*write_kb(tmp_path, "1\tCrime\ten\t\n2\tcrime\ten\t\n"))

    def test_same_lemma_across_languages_allowed(self, fixture_kb):
        assert fixture_kb.lookup("crime", "en").id != fixture_kb.lookup("crime", "pt").id

    def test_propriety_of_is_canonicalized(self, tmp_path):
        graph = load_kb(
            *write_kb(
                tmp_path,
                "1\ta\ten\t\n2\tb\ten\t\n",
                "ProprietyOf\ta\tb\tPre\ten\n",
            )
        )
        assert graph.relations[0].name == "PropertyOf"

    def test_unknown_relation_requires_header(self, tmp_path):
        concepts = "1\ta\ten\t\n2\tb\ten\t\n"
        with pytest.raises(ParseError):
            load_kb(*write_kb(tmp_path, concepts, "Invented\ta\tb\tPre\ten\n"))
        graph = load_kb(
            *write_kb(tmp_path, concepts, "!relations: Invented\nInvented\ta\tb\tPre\ten\n")
        )
        assert graph.relations[0].name == "Invented"

    def test_bad_language_rejected(self, tmp_path):
        with pytest.raises(ParseError):
            load_kb(*write_kb(tmp_path, "1\ta\tfr\t\n"))


class TestCharacterize:
    def test_exact_match_tops_ranking(self, fixture_kb):
        candidates = fixture_kb.characterize("politician", "en")
        top = candidates[0]
        assert fixture_kb.concepts[top.concept_id].lemma == "politician"
        assert top.score == 1.0 and top.match_kind == MATCH_EXACT

    def test_normalized_match_scores_09(self, fixture_kb):
        candidates = fixture_kb.characterize("  Politician ", "en")
        top = candidates[0]
        assert fixture_kb.concepts[top.concept_id].lemma == "politician"
        assert top.score == 0.9 and top.match_kind == MATCH_NORMALIZED

    def test_diacritics_fold(self, fixture_kb):
        candidates = fixture_kb.characterize("CORRUPCAO", "pt")
        top = candidates[0]
        assert fixture_kb.concepts[top.concept_id].lemma == "corrupção"
        assert top.match_kind == MATCH_NORMALIZED

    def test_no_overlap_yields_empty(self, fixture_kb):
        assert fixture_kb.characterize("quantum beekeeping", "en") == []

    def test_token_overlap_scoring(self, fixture_kb):
        # "city" shares one token with "city hall" (2-token union) -> 0.8/2
        candidates = fixture_kb.characterize("city", "en")
        top = candidates[0]
        assert fixture_kb.concepts[top.concept_id].lemma == "city hall"
        assert top.match_kind == MATCH_TOKEN_OVERLAP
        assert top.score == pytest.approx(0.8 * 1 / 2)

    def test_empty_expression_rejected(self, fixture_kb):
        with pytest.raises(ValidationError):
            fixture_kb.characterize("   ", "en")

    def test_every_concept_ranks_itself_first(self, fixture_kb):
        assert len(fixture_kb) >= 50
        for concept in fixture_kb.concepts.values():
            top = fixture_kb.characterize(concept.lemma, concept.language)[0]
            assert top.concept_id == concept.id
            assert top.score == 1.0

    def test_at_most_ten_candidates(self, fixture_kb):
        # "crime law scandal election" overlaps many lemmas but stays capped
        assert len(fixture_kb.characterize("crime law scandal election vote", "en")) <= 10

    def test_scores_in_unit_interval_and_sorted(self, fixture_kb):
        candidates = fixture_kb.characterize("traffic accident on the street", "en")
        scores = [c.score for c in candidates]
        assert all(0 < s <= 1 for s in scores)
        assert scores == sorted(scores, reverse=True)


class TestRelationsOf:
    def test_filters(self, fixture_kb):
        politician = concept_by_lemma(fixture_kb, "politician")
        all_rels = fixture_kb.relations_of(politician.id)
        assert [r.name for r in all_rels] == ["CapableOf", "EffectOf", "PropertyOf"]
        only_pos = fixture_kb.relations_of(politician.id, polarity="Pos")
        assert [r.name for r in only_pos] == ["EffectOf"]
        capable = fixture_kb.relations_of(politician.id, name="CapableOf")
        assert fixture_kb.concepts[capable[0].target].lemma == "to propose laws"

    def test_isolated_concept(self, fixture_kb):
        street = concept_by_lemma(fixture_kb, "street")
        assert fixture_kb.relations_of(street.id) == []

    def test_unknown_concept(self, fixture_kb):
        with pytest.raises(NotFoundError):
            fixture_kb.relations_of(999999)


class TestExpand:
    def test_depth_one_politician(self, fixture_kb):
        politician = concept_by_lemma(fixture_kb, "politician")
        hits = fixture_kb.expand(politician.id, 1)
        by_lemma = {fixture_kb.concepts[h.concept_id].lemma: h for h in hits}
        assert set(by_lemma) == {"to propose laws", "scandal", "corruption"}
        assert by_lemma["to propose laws"].relation == "CapableOf"
        assert by_lemma["to propose laws"].polarity == "Pre"
        assert by_lemma["corruption"].relation == "PropertyOf"
        assert all(h.depth == 1 for h in hits)

    def test_no_relations_is_empty(self, fixture_kb):
        street = concept_by_lemma(fixture_kb, "street")
        assert fixture_kb.expand(street.id, 1) == []

    def test_two_hop_chain_matches_oracle(self, fixture_kb):
        politician = concept_by_lemma(fixture_kb, "politician")
        raw = [
            (r.name, r.source, r.target, r.polarity) for r in fixture_kb.relations
        ]
        for depth in (1, 2, 3):
            hits = fixture_kb.expand(politician.id, depth)
            assert {(h.concept_id, h.depth) for h in hits} == bfs_expand(
                raw, politician.id, depth
            )
        lemmas_d2 = {
            fixture_kb.concepts[h.concept_id].lemma
            for h in fixture_kb.expand(politician.id, 2)
        }
        assert "law" in lemmas_d2  # politician -> to propose laws -> law

    def test_monotone_in_depth_and_excludes_seed(self, fixture_kb):
        for concept in list(fixture_kb.concepts.values())[:20]:
            d1 = fixture_kb.expand(concept.id, 1)
            d2 = fixture_kb.expand(concept.id, 2)
            assert d2[: len(d1)] == d1
            assert concept.id not in {h.concept_id for h in d2}

    def test_depth_out_of_range(self, fixture_kb):
        politician = concept_by_lemma(fixture_kb, "politician")
        with pytest.raises(ValidationError):
            fixture_kb.expand(politician.id, 0)
        with pytest.raises(ValidationError):
            fixture_kb.expand(politician.id, 4)

    def test_unknown_concept(self, fixture_kb):
        with pytest.raises(NotFoundError):
            fixture_kb.expand(424242, 1)


class TestSaveLoad:
    def test_round_trip_identical(self, tmp_path, fixture_kb):
        c = tmp_path / "concepts.tsv"
        r = tmp_path / "relations.tsv"
        save_kb(fixture_kb, c, r)
        reloaded = load_kb(c, r)
        assert reloaded.equals(fixture_kb)
        save_kb(reloaded, tmp_path / "c2.tsv", tmp_path / "r2.tsv")
        assert (tmp_path / "c2.tsv").read_text() == c.read_text()
        assert (tmp_path / "r2.tsv").read_text() == r.read_text()


def test_normalize():
    assert normalize("  Corrupção   Política ") == "corrupcao politica"
