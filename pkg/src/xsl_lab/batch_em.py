"""Multi-pass batch alignment model used to validate the incremental learner.

This is the classic alternating scheme for word-referent translation
tables: the expectation step spreads one unit of credit per (pair,
referent) across the utterance's words in proportion to the current
table, and the maximization step renormalizes each word's row into a
distribution over referents. Unlike the incremental learner it revisits
the whole corpus every iteration and uses no smoothing: cells outside the
corpus co-occurrence pattern legitimately stay at zero after one round.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_input_pairs
from .errors import DegenerateRowError
from .types import Corpus, Referent, Word


@dataclass(frozen=True)
class BatchModel:
    """Dense conditional table p(referent | word) over fixed vocabularies."""

    words: tuple[Word, ...]
    referents: tuple[Referent, ...]
    theta: np.ndarray  # shape (len(words), len(referents)); rows sum to 1

    def __post_init__(self):
        if self.theta.shape != (len(self.words), len(self.referents)):
            raise ValueError("theta shape does not match vocabularies")

    def word_index(self, w: Word) -> int:
        return self.words.index(w)

    def probability(self, w: Word, r: Referent) -> float:
        return float(self.theta[self.words.index(w), self.referents.index(r)])

    def best_referent(self, w: Word) -> Referent:
        """Argmax referent for a word; ties break lexicographically."""
        row = self.theta[self.words.index(w)]
        best = row.max()
        return min(self.referents[i] for i in np.flatnonzero(row == best))


def _vocabularies(corpus: Corpus) -> tuple[tuple[Word, ...], tuple[Referent, ...]]:
    return tuple(sorted(corpus.words())), tuple(sorted(corpus.referents()))


def uniform_model(corpus: Corpus) -> BatchModel:
    """Every word starts as a uniform distribution over the referent vocabulary."""
    words, referents = _vocabularies(corpus)
    theta = np.full((len(words), len(referents)), 1.0 / len(referents))
    return BatchModel(words=words, referents=referents, theta=theta)


def e_step(model: BatchModel, corpus: Corpus) -> np.ndarray:
    """Expected co-occurrence credit per (word, referent).

    For each pair and each referent in its scene, one unit of credit is
    split across the utterance's words in proportion to the current
    table, so credit for each (pair, referent) sums to exactly 1.
    """
    w_index = {w: i for i, w in enumerate(model.words)}
    r_index = {r: i for i, r in enumerate(model.referents)}
    counts = np.zeros_like(model.theta)
    for pair in corpus:
        wi = [w_index[w] for w in sorted(pair.utterance)]
        for r in sorted(pair.scene):
            ri = r_index[r]
            strengths = model.theta[wi, ri]
            posterior = strengths / strengths.sum()
            counts[wi, ri] += posterior
    return counts


def m_step(counts: np.ndarray, words: tuple[Word, ...], referents: tuple[Referent, ...]) -> BatchModel:
    """Row-normalize expected credit into a conditional table."""
    totals = counts.sum(axis=1)
    zero = np.flatnonzero(totals == 0)
    if zero.size:
        raise DegenerateRowError(
            f"word {words[zero[0]]!r} has zero total expected credit; cannot normalize"
        )
    return BatchModel(words=words, referents=referents, theta=counts / totals[:, None])


def log_likelihood(model: BatchModel, corpus: Corpus) -> float:
    """Corpus log-likelihood of scene referents given utterances.

    Each referent in each scene is explained by the sum of its strengths
    over the utterance's words (uniform alignment priors drop out as a
    constant and are omitted).
    """
    w_index = {w: i for i, w in enumerate(model.words)}
    r_index = {r: i for i, r in enumerate(model.referents)}
    total = 0.0
    for pair in corpus:
        wi = [w_index[w] for w in sorted(pair.utterance)]
        for r in sorted(pair.scene):
            total += math.log(model.theta[wi, r_index[r]].sum())
    return total


def batch_em(corpus: Corpus, iterations: int) -> BatchModel:
    """Run expectation/maximization rounds from the uniform start."""
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    model = uniform_model(corpus)
    for _ in range(iterations):
        counts = e_step(model, corpus)
        model = m_step(counts, model.words, model.referents)
    return model


def model_to_csv(model: BatchModel) -> str:
    """Final table as CSV (word, referent, probability), sorted."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["word", "referent", "probability"])
    for i, w in enumerate(model.words):
        for j, r in enumerate(model.referents):
            writer.writerow([w, r, repr(float(model.theta[i, j]))])
    return buf.getvalue()


def save_model_csv(model: BatchModel, path: Union[str, Path]) -> None:
    Path(path).write_text(model_to_csv(model), encoding="utf-8")


class BatchAlignmentModel(BaseEstimator):
    """Estimator facade over the batch table: fit a corpus, predict referents.

    Parameters
    ----------
    n_iter : int
        Number of expectation/maximization rounds.

    Attributes
    ----------
    model_ : BatchModel
        The fitted conditional table.
    loglik_path_ : list of float
        Log-likelihood before training and after each round; it never
        decreases.
    """

    def __init__(self, n_iter: int = 3):
        self.n_iter = n_iter

    def fit(self, X, y=None):
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        pairs = as_input_pairs(X)
        corpus = Corpus(tuple(pairs), provenance=getattr(X, "provenance", "file"))
        model = uniform_model(corpus)
        path = [log_likelihood(model, corpus)]
        for _ in range(self.n_iter):
            counts = e_step(model, corpus)
            model = m_step(counts, model.words, model.referents)
            path.append(log_likelihood(model, corpus))
        self.model_ = model
        self.loglik_path_ = path
        return self

    def predict(self, words) -> list[str]:
        if not hasattr(self, "model_"):
            raise RuntimeError("fit must be called before predict")
        return [self.model_.best_referent(w) for w in words]
