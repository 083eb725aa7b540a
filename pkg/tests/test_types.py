import pytest

from xsl_lab.errors import CorpusSpecError
from xsl_lab.types import Corpus, CorpusSpec, GoldLexicon, InputPair, make_corpus


class TestInputPair:
    def test_sets_are_frozen_and_deduplicated(self):
        p = InputPair(frozenset({"the", "dog"}), frozenset({"THE", "DOG"}))
        assert p.utterance == {"the", "dog"}
        assert isinstance(p.utterance, frozenset)

    def test_accepts_iterables(self):
        p = InputPair(["the", "the", "dog"], ["DOG", "THE"])
        assert p.utterance == {"the", "dog"}

    def test_empty_utterance_rejected(self):
        with pytest.raises(ValueError, match="utterance"):
            InputPair(frozenset(), frozenset({"X"}))

    def test_empty_scene_rejected(self):
        with pytest.raises(ValueError, match="scene"):
            InputPair(frozenset({"x"}), frozenset())

    def test_whitespace_symbol_rejected(self):
        with pytest.raises(ValueError, match="whitespace"):
            InputPair(frozenset({"two words"}), frozenset({"X"}))

    def test_index_must_be_positive(self):
        with pytest.raises(ValueError, match="index"):
            InputPair(frozenset({"x"}), frozenset({"X"}), index=0)


class TestCorpus:
    def test_indices_strictly_increasing(self):
        pairs = (
            InputPair(frozenset({"a"}), frozenset({"A"}), index=2),
            InputPair(frozenset({"b"}), frozenset({"B"}), index=1),
        )
        with pytest.raises(ValueError, match="strictly increasing"):
            Corpus(pairs)

    def test_make_corpus_numbers_from_one(self):
        c = make_corpus([({"a"}, {"A"}), ({"b"}, {"B"})])
        assert [p.index for p in c] == [1, 2]

    def test_word_frequencies_count_utterances(self):
        c = make_corpus([({"a", "b"}, {"A"}), ({"a"}, {"A"})])
        assert c.word_frequencies() == {"a": 2, "b": 1}

    def test_unknown_provenance_rejected(self):
        with pytest.raises(ValueError, match="provenance"):
            make_corpus([({"a"}, {"A"})], provenance="bogus")


class TestGoldLexicon:
    def test_homonyms_and_synonyms(self):
        lex = GoldLexicon(
            {"bat": {"BAT-ANIMAL", "BAT-CLUB"}, "shut": {"CLOSE"}, "close": {"CLOSE"}}
        )
        assert lex.referents_of("bat") == {"BAT-ANIMAL", "BAT-CLUB"}
        assert lex.labels_for("CLOSE") == {"shut", "close"}

    def test_empty_referent_set_rejected(self):
        with pytest.raises(ValueError, match="no referents"):
            GoldLexicon({"w": frozenset()})


class TestCorpusSpec:
    def test_default_is_valid(self):
        CorpusSpec().validate()

    def test_vocab_smaller_than_max_len_rejected(self):
        spec = CorpusSpec(word_vocab=3, min_len=2, max_len=5, mean_len=3.0)
        with pytest.raises(CorpusSpecError, match="word_vocab"):
            spec.validate()

    def test_mean_outside_range_rejected(self):
        spec = CorpusSpec(min_len=2, max_len=4, mean_len=5.0)
        with pytest.raises(CorpusSpecError, match="mean_len"):
            spec.validate()

    def test_nonpositive_zipf_rejected(self):
        spec = CorpusSpec(zipf_exponent=0.0)
        with pytest.raises(CorpusSpecError, match="zipf"):
            spec.validate()
