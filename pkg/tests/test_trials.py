import pytest

from xsl_lab.errors import TrialConstructionError
from xsl_lab.trials import (
    build_homonym_trials,
    build_synonym_trials,
    novel_referent,
    novel_word,
)
from xsl_lab.types import GoldLexicon, make_corpus


@pytest.fixture
def corpus():
    return make_corpus(
        [
            ({"ball", "red"}, {"BALL", "RED"}),
            ({"dog", "runs"}, {"DOG", "RUNS"}),
            ({"cat", "sits", "mat"}, {"CAT", "SITS", "MAT"}),
            ({"sun", "shines"}, {"SUN", "SHINES"}),
            ({"dog", "barks"}, {"DOG", "BARKS"}),
        ]
    )


@pytest.fixture
def gold():
    words = ["ball", "red", "dog", "runs", "cat", "sits", "mat", "sun", "shines", "barks"]
    return GoldLexicon({w: frozenset({w.upper()}) for w in words})


class TestNovelSymbols:
    def test_reserved_prefix(self):
        assert novel_word("dax") == "!dax"
        assert novel_referent("dax") == "!DAX"

    def test_idempotent(self):
        assert novel_word("!dax") == "!dax"
        assert novel_referent("!DAX") == "!DAX"


class TestHomonymTrials:
    def test_every_trial_has_probe_and_novel(self, corpus, gold):
        trials = build_homonym_trials(corpus, "ball", "!DAX", n_trials=3, gold=gold)
        assert len(trials) == 3
        for t in trials:
            assert "ball" in t.utterance
            assert "!DAX" in t.scene

    def test_context_is_fixed_across_trials(self, corpus, gold):
        trials = build_homonym_trials(corpus, "ball", "!DAX", n_trials=3, gold=gold)
        contexts = {(t.utterance, t.scene) for t in trials}
        assert len(contexts) == 1

    def test_context_excludes_probe_word_and_meaning(self, corpus, gold):
        trials = build_homonym_trials(corpus, "ball", "!DAX", n_trials=4, gold=gold)
        context_words = trials[0].utterance - {"ball"}
        context_refs = trials[0].scene - {"!DAX"}
        assert "ball" not in context_words
        assert "BALL" not in context_refs

    def test_prefers_richest_context(self, corpus, gold):
        trials = build_homonym_trials(corpus, "ball", "!DAX", n_trials=1, gold=gold)
        # longest eligible utterance is the 3-word pair
        assert trials[0].utterance == {"cat", "sits", "mat", "ball"}

    def test_unknown_probe_rejected(self, corpus, gold):
        with pytest.raises(TrialConstructionError, match="never occurs"):
            build_homonym_trials(corpus, "zebra", "!DAX", n_trials=2, gold=gold)

    def test_attested_novel_referent_rejected(self, corpus, gold):
        with pytest.raises(TrialConstructionError, match="already occurs"):
            build_homonym_trials(corpus, "ball", "DOG", n_trials=2, gold=gold)

    def test_insufficient_candidates_reports_count(self, corpus, gold):
        with pytest.raises(TrialConstructionError, match="found 4") as err:
            build_homonym_trials(corpus, "ball", "!DAX", n_trials=10, gold=gold)
        assert err.value.found == 4

    def test_cutoff_restricts_candidates(self, corpus, gold):
        trials = build_homonym_trials(
            corpus, "ball", "!DAX", n_trials=1, gold=gold, after_index=4
        )
        assert trials[0].utterance == {"dog", "barks", "ball"}


class TestSynonymTrials:
    def test_every_trial_has_new_word_and_target(self, corpus, gold):
        trials = build_synonym_trials(corpus, "!dax", "BALL", n_trials=3, gold=gold)
        assert len(trials) == 3
        for t in trials:
            assert "!dax" in t.utterance
            assert "BALL" in t.scene

    def test_context_excludes_existing_label(self, corpus, gold):
        trials = build_synonym_trials(corpus, "!dax", "BALL", n_trials=4, gold=gold)
        assert "ball" not in trials[0].utterance

    def test_attested_new_word_rejected(self, corpus, gold):
        with pytest.raises(TrialConstructionError, match="already occurs"):
            build_synonym_trials(corpus, "dog", "BALL", n_trials=2, gold=gold)

    def test_unknown_target_rejected(self, corpus, gold):
        with pytest.raises(TrialConstructionError, match="never occurs"):
            build_synonym_trials(corpus, "!dax", "ZEBRA", n_trials=2, gold=gold)

    def test_insufficient_candidates_reports_count(self, corpus, gold):
        with pytest.raises(TrialConstructionError, match="found 4"):
            build_synonym_trials(corpus, "!dax", "BALL", n_trials=9, gold=gold)
