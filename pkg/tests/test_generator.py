import pytest

from xsl_lab.corpus import dump_corpus
from xsl_lab.errors import CorpusSpecError
from xsl_lab.generator import (
    generate_synthetic_corpus,
    one_to_one_lexicon,
    rank_frequency_slope,
    vocabulary,
)
from xsl_lab.types import CorpusSpec

SMALL = CorpusSpec(
    n_pairs=200, word_vocab=50, min_len=2, max_len=4, mean_len=3.0, zipf_exponent=1.0, seed=7
)


class TestDeterminism:
    def test_same_spec_same_bytes(self):
        a, _ = generate_synthetic_corpus(SMALL)
        b, _ = generate_synthetic_corpus(SMALL)
        assert dump_corpus(a) == dump_corpus(b)

    def test_different_seed_different_corpus(self):
        a, _ = generate_synthetic_corpus(SMALL)
        b, _ = generate_synthetic_corpus(CorpusSpec(**{**SMALL.__dict__, "seed": 8}))
        assert dump_corpus(a) != dump_corpus(b)


class TestShape:
    def test_pair_count(self):
        corpus, _ = generate_synthetic_corpus(SMALL)
        assert len(corpus) == 200
        assert corpus.provenance == "synthetic"

    def test_utterance_lengths_within_bounds(self):
        corpus, _ = generate_synthetic_corpus(SMALL)
        lengths = {len(p.utterance) for p in corpus}
        assert min(lengths) >= SMALL.min_len
        assert max(lengths) <= SMALL.max_len

    def test_scene_is_gold_image_of_utterance(self):
        corpus, gold = generate_synthetic_corpus(SMALL)
        for p in corpus:
            expected = set()
            for w in p.utterance:
                expected |= gold.referents_of(w)
            assert p.scene == expected

    def test_lexicon_is_one_to_one(self):
        _, gold = generate_synthetic_corpus(SMALL)
        refs = [next(iter(gold.referents_of(w))) for w in gold.words()]
        assert all(len(gold.referents_of(w)) == 1 for w in gold.words())
        assert len(set(refs)) == len(refs)

    def test_infeasible_spec_rejected(self):
        bad = CorpusSpec(word_vocab=3, min_len=2, max_len=5, mean_len=3.0)
        with pytest.raises(CorpusSpecError):
            generate_synthetic_corpus(bad)


class TestZipfShape:
    @pytest.mark.parametrize("exponent", [0.9, 1.0, 1.1])
    def test_rank_frequency_slope_matches_exponent(self, exponent):
        spec = CorpusSpec(
            n_pairs=6000,
            word_vocab=1000,
            min_len=2,
            max_len=5,
            mean_len=3.5,
            zipf_exponent=exponent,
            seed=11,
        )
        corpus, _ = generate_synthetic_corpus(spec)
        slope = rank_frequency_slope(corpus)
        assert abs(-slope - exponent) / exponent <= 0.10

    def test_slope_needs_enough_words(self):
        corpus, _ = generate_synthetic_corpus(
            CorpusSpec(n_pairs=2, word_vocab=10, min_len=1, max_len=1, mean_len=1.0, seed=1)
        )
        with pytest.raises(ValueError, match="slope"):
            rank_frequency_slope(corpus, min_count=5)


class TestHelpers:
    def test_vocabulary_is_rank_ordered(self):
        words = vocabulary(12)
        assert words[0] == "w0001" and words[-1] == "w0012"

    def test_one_to_one_lexicon_uppercases(self):
        lex = one_to_one_lexicon(["dog"])
        assert lex.referents_of("dog") == {"DOG"}


class TestLargeCorpusRoundTrip:
    def test_six_thousand_records_keep_order_and_indices(self):
        from xsl_lab.corpus import load_corpus

        spec = CorpusSpec(
            n_pairs=6000, word_vocab=300, min_len=2, max_len=4, mean_len=3.0,
            zipf_exponent=1.0, seed=2,
        )
        corpus, _ = generate_synthetic_corpus(spec)
        reloaded = load_corpus(dump_corpus(corpus).encode())
        assert len(reloaded) == 6000
        assert [p.index for p in reloaded] == list(range(1, 6001))
        assert reloaded[5999].utterance == corpus[5999].utterance
