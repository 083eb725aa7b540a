import pytest

from xsl_lab.learner import LearnerConfig, fresh_state
from xsl_lab.types import GoldLexicon, InputPair, make_corpus


@pytest.fixture
def identity_lexicon():
    words = ["an", "apple", "eats", "ray"]
    return GoldLexicon({w: frozenset({w.upper()}) for w in words})


@pytest.fixture
def tiny_corpus():
    return make_corpus(
        [
            ({"ray", "eats"}, {"RAY", "EATS"}),
            ({"an", "apple"}, {"AN", "APPLE"}),
            ({"ray", "apple"}, {"RAY", "APPLE"}),
        ]
    )


@pytest.fixture
def nine_pair_corpus():
    return make_corpus(
        [({f"w{i}"}, {f"R{i}"}) for i in range(1, 10)]
    )


@pytest.fixture
def trace_config():
    return LearnerConfig(
        alignment="word", representation="conditional", smoothing=0.01, max_referents=100
    )


@pytest.fixture
def trace_state(trace_config):
    return fresh_state(trace_config)


def pair(utterance, scene, index=1):
    return InputPair(frozenset(utterance), frozenset(scene), index=index)


@pytest.fixture
def make_pair():
    return pair
