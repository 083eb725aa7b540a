import pytest
from sklearn.base import clone

from xsl_lab.estimator import CrossSituationalLearner
from xsl_lab.types import GoldLexicon


@pytest.fixture
def fitted():
    model = CrossSituationalLearner(max_referents=50)
    model.fit([({f"w{i}"}, {f"R{i}"}) for i in range(3)] * 5)
    return model


class TestSklearnProtocol:
    def test_get_params_round_trip(self):
        model = CrossSituationalLearner(alignment="referent", smoothing=0.5)
        params = model.get_params()
        assert params["alignment"] == "referent"
        assert params["smoothing"] == 0.5
        rebuilt = CrossSituationalLearner(**params)
        assert rebuilt.get_params() == params

    def test_clone_drops_fitted_state(self, fitted):
        fresh = clone(fitted)
        assert fresh.get_params() == fitted.get_params()
        assert not hasattr(fresh, "state_")

    def test_set_params(self):
        model = CrossSituationalLearner()
        model.set_params(alignment="independent", representation="joint")
        assert model.alignment == "independent"

    def test_repr_mentions_non_defaults(self):
        assert "referent" in repr(CrossSituationalLearner(alignment="referent"))


class TestFitting:
    def test_fit_accepts_corpus_pairs_or_tuples(self, tiny_corpus):
        by_corpus = CrossSituationalLearner().fit(tiny_corpus)
        by_pairs = CrossSituationalLearner().fit(list(tiny_corpus.pairs))
        by_tuples = CrossSituationalLearner().fit(
            [(p.utterance, p.scene) for p in tiny_corpus]
        )
        assert by_corpus.to_json() == by_pairs.to_json() == by_tuples.to_json()

    def test_fit_resets_partial_fit_continues(self, tiny_corpus):
        model = CrossSituationalLearner()
        model.fit(tiny_corpus)
        assert model.n_pairs_seen_ == 3
        model.partial_fit(tiny_corpus)
        assert model.n_pairs_seen_ == 6
        model.fit(tiny_corpus)
        assert model.n_pairs_seen_ == 3

    def test_partial_fit_from_scratch(self, tiny_corpus):
        model = CrossSituationalLearner()
        model.partial_fit(tiny_corpus)
        assert model.n_pairs_seen_ == 3

    def test_invalid_param_reported_at_fit(self, tiny_corpus):
        model = CrossSituationalLearner(alignment="bogus")
        with pytest.raises(ValueError, match="alignment"):
            model.fit(tiny_corpus)

    def test_invalid_input_rejected(self):
        with pytest.raises(ValueError, match="InputPair"):
            CrossSituationalLearner().fit([1, 2, 3])


class TestPrediction:
    def test_predict_best_referents(self, fitted):
        assert fitted.predict(["w0", "w1"]) == ["R0", "R1"]

    def test_predict_rejects_bare_string(self, fitted):
        with pytest.raises(ValueError, match="sequence of words"):
            fitted.predict("w0")

    def test_meaning_vector_covers_observed(self, fitted):
        assert set(fitted.meaning("w0")) == {"R0", "R1", "R2"}

    def test_unfitted_access_raises(self):
        with pytest.raises(RuntimeError, match="not been fitted"):
            CrossSituationalLearner().predict(["w"])

    def test_score_against_gold(self, fitted):
        gold = GoldLexicon({f"w{i}": frozenset({f"R{i}"}) for i in range(3)})
        assert fitted.score(None, gold) > 0.9
        with pytest.raises(ValueError, match="gold lexicon"):
            fitted.score(None, None)


class TestPersistence:
    def test_json_round_trip(self, fitted):
        text = fitted.to_json()
        again = CrossSituationalLearner.from_json(text)
        assert again.to_json() == text
        assert again.predict(["w0"]) == fitted.predict(["w0"])
        assert again.get_params() == fitted.get_params()
