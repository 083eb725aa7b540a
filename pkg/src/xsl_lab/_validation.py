"""Input validation helpers shared by the estimators."""

from __future__ import annotations

from typing import Sequence

from .types import Corpus, InputPair


def as_input_pairs(X) -> list[InputPair]:
    """Coerce estimator input to a list of InputPair.

    Accepts a Corpus, an iterable of InputPair, or an iterable of
    (utterance, scene) 2-tuples of string collections.
    """
    if isinstance(X, Corpus):
        return list(X.pairs)
    if X is None:
        raise ValueError("X must be a corpus or a sequence of utterance-scene pairs")
    pairs: list[InputPair] = []
    for i, item in enumerate(X, start=1):
        if isinstance(item, InputPair):
            pairs.append(item)
        elif isinstance(item, Sequence) and len(item) == 2:
            utterance, scene = item
            pairs.append(InputPair(frozenset(utterance), frozenset(scene), index=i))
        else:
            raise ValueError(
                f"item {i} is not an InputPair or (utterance, scene) tuple: {item!r}"
            )
    return pairs


def as_words(words) -> list[str]:
    if isinstance(words, str):
        raise ValueError("expected a sequence of words, got a single string")
    out = list(words)
    for w in out:
        if not isinstance(w, str) or not w:
            raise ValueError(f"words must be non-empty strings, got {w!r}")
    return out
