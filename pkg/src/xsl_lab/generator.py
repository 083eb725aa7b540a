"""Synthetic utterance-scene corpus generation.

Stands in for child-directed transcripts that cannot be bundled: word
tokens follow a rank-frequency power law, every word has exactly one
referent, and each scene is the set of referents of the words actually
uttered (minimal referential/linguistic uncertainty by construction).
"""

from __future__ import annotations

import numpy as np

from .corpus import derive_scene_from_gold
from .types import Corpus, CorpusSpec, GoldLexicon, InputPair, Word


def vocabulary(size: int) -> list[Word]:
    """Word tokens w0001, w0002, ... in rank order (rank 1 most frequent)."""
    width = max(4, len(str(size)))
    return [f"w{i:0{width}d}" for i in range(1, size + 1)]


def one_to_one_lexicon(words: list[Word]) -> GoldLexicon:
    """Gold lexicon mapping each word to its upper-cased referent symbol."""
    return GoldLexicon({w: frozenset({w.upper()}) for w in words})


def generate_synthetic_corpus(spec: CorpusSpec) -> tuple[Corpus, GoldLexicon]:
    """Generate a corpus and its gold lexicon deterministically from a spec.

    Utterance lengths are uniform on [min_len, max_len]; words are drawn
    without replacement within an utterance, with probability proportional
    to rank**-zipf_exponent. The same spec always yields the same corpus.
    """
    spec.validate()
    words = vocabulary(spec.word_vocab)
    lexicon = one_to_one_lexicon(words)

    ranks = np.arange(1, spec.word_vocab + 1, dtype=np.float64)
    weights = ranks ** -spec.zipf_exponent
    weights /= weights.sum()

    rng = np.random.default_rng(spec.seed)
    pairs = []
    for index in range(1, spec.n_pairs + 1):
        length = int(rng.integers(spec.min_len, spec.max_len + 1))
        chosen = rng.choice(spec.word_vocab, size=length, replace=False, p=weights)
        utterance = frozenset(words[i] for i in chosen)
        scene = derive_scene_from_gold(utterance, lexicon)
        pairs.append(InputPair(utterance, scene, index=index))
    return Corpus(tuple(pairs), provenance="synthetic"), lexicon


def rank_frequency_slope(corpus: Corpus, min_count: int = 3) -> float:
    """Least-squares slope of log-frequency against log-rank.

    Words are ranked by descending corpus frequency; ranks whose count
    falls below ``min_count`` are dropped so the noisy tail does not
    dominate the fit. Used to sanity-check the generator's output.
    """
    counts = sorted(corpus.word_frequencies().values(), reverse=True)
    counts = [c for c in counts if c >= min_count]
    if len(counts) < 2:
        raise ValueError("not enough frequent words to fit a slope")
    x = np.log(np.arange(1, len(counts) + 1, dtype=np.float64))
    y = np.log(np.asarray(counts, dtype=np.float64))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
