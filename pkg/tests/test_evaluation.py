import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xsl_lab.errors import EvaluationError, GoldMissingError
from xsl_lab.evaluation import (
    DEFAULT_BANDS,
    FrequencyBands,
    average_comprehension,
    comprehension_report,
    comprehension_score,
    frequency_split_report,
    learning_curve,
    comprehension_hook,
)
from xsl_lab.learner import (
    Checkpoint,
    LearnerConfig,
    LearnerState,
    config_for_model,
    fresh_state,
    theta,
    train,
    update,
)
from xsl_lab.types import GoldLexicon, InputPair, make_corpus


def brute_force_score(state, w, gold):
    """Independent reference: materialize the vectors and use numpy."""
    support = sorted(state.observed_referents | gold.referents_of(w))
    learned = np.array([theta(state, w, r) for r in support])
    target = np.array([1.0 if r in gold.referents_of(w) else 0.0 for r in support])
    return float(
        learned @ target / (np.linalg.norm(learned) * np.linalg.norm(target))
    )


def state_with_row(row, observed_referents, config=None):
    state = LearnerState(config=config or LearnerConfig())
    state.assoc["w"] = dict(row)
    state.row_sums["w"] = sum(row.values())
    state.observed_words = {"w"}
    state.observed_referents = set(observed_referents)
    return state


class TestComprehensionScore:
    def test_perfect_alignment_scores_one(self):
        # a row exactly on the gold axis has cosine 1 up to the smoothing floor
        cfg = LearnerConfig(smoothing=1e-12, max_referents=10)
        state = state_with_row({"GOLD": 5.0}, {"GOLD"}, cfg)
        gold = GoldLexicon({"w": {"GOLD"}})
        assert comprehension_score(state, "w", gold) == pytest.approx(1.0, abs=1e-6)

    def test_two_referent_example(self):
        # direction (0.8, 0.2) against axis (1, 0): 0.8 / sqrt(0.68)
        cfg = LearnerConfig(smoothing=1e-15, max_referents=10)
        state = state_with_row({"GOLD": 0.8, "OTHER": 0.2}, {"GOLD", "OTHER"}, cfg)
        gold = GoldLexicon({"w": {"GOLD"}})
        expected = 0.8 / math.sqrt(0.68)
        assert expected == pytest.approx(0.9701425001453319, abs=1e-12)
        assert comprehension_score(state, "w", gold) == pytest.approx(expected, abs=1e-6)

    def test_uniform_over_hundred_slots(self):
        # an entirely fresh word over a full 100-referent registry: 1/sqrt(100)
        state = LearnerState(config=LearnerConfig(max_referents=100))
        state.observed_referents = {f"R{i:03d}" for i in range(100)}
        state.observed_words = {"w"}
        gold = GoldLexicon({"w": {"R000"}})
        assert comprehension_score(state, "w", gold) == pytest.approx(0.1, abs=1e-9)

    def test_missing_gold_entry(self):
        state = fresh_state(LearnerConfig())
        with pytest.raises(GoldMissingError, match="'w'"):
            comprehension_score(state, "w", GoldLexicon({"other": {"X"}}))

    def test_multi_hot_gold_for_homonyms(self):
        cfg = LearnerConfig(smoothing=1e-15, max_referents=10)
        state = state_with_row({"A": 1.0, "B": 1.0}, {"A", "B"}, cfg)
        gold = GoldLexicon({"w": {"A", "B"}})
        assert comprehension_score(state, "w", gold) == pytest.approx(1.0, abs=1e-6)

    def test_matches_brute_force_on_trained_states(self, tiny_corpus, identity_lexicon):
        for model in ("word_conditional", "independent_joint", "referent_joint"):
            state = fresh_state(config_for_model(model, max_referents=50))
            train(state, tiny_corpus)
            for w in state.observed_words:
                assert comprehension_score(state, w, identity_lexicon) == pytest.approx(
                    brute_force_score(state, w, identity_lexicon), abs=1e-12
                )

    @settings(max_examples=40, deadline=None)
    @given(
        rows=st.lists(
            st.tuples(
                st.sampled_from(["R1", "R2", "R3", "R4"]),
                st.floats(min_value=0.0, max_value=50.0),
            ),
            min_size=0,
            max_size=4,
            unique_by=lambda t: t[0],
        ),
        gold_refs=st.sets(st.sampled_from(["R1", "R2", "R5"]), min_size=1, max_size=2),
    )
    def test_matches_brute_force_on_random_rows(self, rows, gold_refs):
        state = state_with_row(
            {r: v for r, v in rows if v > 0}, {"R1", "R2", "R3", "R4"}
        )
        gold = GoldLexicon({"w": frozenset(gold_refs)})
        assert comprehension_score(state, "w", gold) == pytest.approx(
            brute_force_score(state, "w", gold), abs=1e-12
        )

    def test_scale_invariance(self):
        cfg = LearnerConfig(smoothing=1e-15, max_referents=10)
        gold = GoldLexicon({"w": {"A"}})
        base = comprehension_score(
            state_with_row({"A": 2.0, "B": 1.0}, {"A", "B"}, cfg), "w", gold
        )
        scaled = comprehension_score(
            state_with_row({"A": 2000.0, "B": 1000.0}, {"A", "B"}, cfg), "w", gold
        )
        assert scaled == pytest.approx(base, abs=1e-12)

    def test_huge_raw_values_stay_finite(self):
        # raw joint strengths near the float ceiling must not overflow the norm
        cfg = LearnerConfig(representation="joint")
        state = state_with_row({"A": 1e308, "B": 1e300}, {"A", "B"}, cfg)
        gold = GoldLexicon({"w": {"A"}})
        score = comprehension_score(state, "w", gold)
        assert 0.99 <= score <= 1.0


class TestAverages:
    def test_single_word(self, identity_lexicon):
        state = fresh_state(LearnerConfig())
        update(state, InputPair(frozenset({"ray"}), frozenset({"RAY"})))
        assert average_comprehension(state, identity_lexicon) == pytest.approx(
            comprehension_score(state, "ray", identity_lexicon)
        )

    def test_mean_of_two(self, identity_lexicon):
        state = fresh_state(LearnerConfig())
        update(state, InputPair(frozenset({"ray", "eats"}), frozenset({"RAY", "EATS"})))
        expected = (
            comprehension_score(state, "ray", identity_lexicon)
            + comprehension_score(state, "eats", identity_lexicon)
        ) / 2
        assert average_comprehension(state, identity_lexicon) == pytest.approx(expected)

    def test_no_observed_words_is_error(self, identity_lexicon):
        with pytest.raises(EvaluationError, match="no observed words"):
            average_comprehension(fresh_state(LearnerConfig()), identity_lexicon)

    def test_words_outside_gold_are_ignored(self):
        state = fresh_state(LearnerConfig())
        update(state, InputPair(frozenset({"known", "junk"}), frozenset({"KNOWN"})))
        gold = GoldLexicon({"known": {"KNOWN"}})
        report = comprehension_report(state, gold)
        assert set(report.per_word) == {"known"}
        assert report.average == pytest.approx(report.per_word["known"])


class TestFrequencyBands:
    def test_default_bands_partition(self):
        for count, label in [(0, "low"), (4, "low"), (5, "mid"), (10, "mid"), (11, "high")]:
            assert DEFAULT_BANDS.label_for(count) == label

    def test_non_contiguous_bands_rejected(self):
        with pytest.raises(ValueError, match="contiguous"):
            FrequencyBands((("low", 0, 4), ("high", 6, None)))

    def test_last_band_must_be_open(self):
        with pytest.raises(ValueError, match="unbounded"):
            FrequencyBands((("low", 0, 4), ("high", 5, 10)))

    def test_report_groups_by_band(self, identity_lexicon):
        corpus = make_corpus(
            [({"ray"}, {"RAY"})] * 12 + [({"eats"}, {"EATS"})] * 7 + [({"an"}, {"AN"})]
        )
        state = fresh_state(LearnerConfig())
        train(state, corpus)
        counts = corpus.word_frequencies()
        report = frequency_split_report(state, identity_lexicon, counts)
        assert set(report) == {"low", "mid", "high"}
        assert report["high"][1] == 1 and report["mid"][1] == 1 and report["low"][1] == 1
        assert report["high"][0] == pytest.approx(
            comprehension_score(state, "ray", identity_lexicon)
        )

    def test_empty_band_absent(self, identity_lexicon):
        corpus = make_corpus([({"ray"}, {"RAY"})] * 2)
        state = fresh_state(LearnerConfig())
        train(state, corpus)
        report = frequency_split_report(
            state, identity_lexicon, corpus.word_frequencies()
        )
        assert set(report) == {"low"}

    def test_missing_counts_detected(self, identity_lexicon):
        state = fresh_state(LearnerConfig())
        update(state, InputPair(frozenset({"ray"}), frozenset({"RAY"})))
        with pytest.raises(EvaluationError, match="missing"):
            frequency_split_report(state, identity_lexicon, {})


class TestLearningCurve:
    def test_points_from_float_payloads(self):
        checkpoints = [Checkpoint(10, 3, 3, 0.5), Checkpoint(20, 4, 4, 0.75)]
        curve = learning_curve(checkpoints, model_id="m", provenance="base")
        assert curve.points == ((10, 0.5), (20, 0.75))

    def test_points_from_state_payloads(self, tiny_corpus, identity_lexicon):
        state = fresh_state(LearnerConfig())
        snapshots = []
        for p in tiny_corpus:
            update(state, p)
            snapshots.append(Checkpoint(state.step, 0, 0, state.clone()))
        curve = learning_curve(snapshots, identity_lexicon)
        assert len(curve.points) == 3
        assert all(0.0 <= v <= 1.0 for _, v in curve.points)

    def test_hook_and_curve_agree(self, tiny_corpus, identity_lexicon):
        state = fresh_state(LearnerConfig())
        _, checkpoints = train(
            state, tiny_corpus, checkpoint_every=1, hook=comprehension_hook(identity_lexicon)
        )
        curve = learning_curve(checkpoints)
        assert [s for s, _ in curve.points] == [1, 2, 3]

    def test_non_increasing_steps_rejected(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            learning_curve([Checkpoint(10, 0, 0, 0.5), Checkpoint(10, 0, 0, 0.6)])

    def test_payload_required(self):
        with pytest.raises(EvaluationError, match="payload"):
            learning_curve([Checkpoint(10, 0, 0, None)])
