"""Scikit-learn style estimator facade over the incremental learner."""

from __future__ import annotations

from sklearn.base import BaseEstimator

from . import learner
from ._validation import as_input_pairs, as_words
from .learner import LearnerConfig
from .types import GoldLexicon


class CrossSituationalLearner(BaseEstimator):
    """Incremental word-referent learner with a fit/partial_fit/predict API.

    Parameters
    ----------
    alignment : {"independent", "word", "referent"}
        In-the-moment competition mode; see :mod:`xsl_lab.learner`.
    representation : {"joint", "conditional"}
        Meaning representation read off the association table.
    smoothing : float
        Additive smoothing mass; must be positive.
    max_referents : int
        Upper bound on distinct referents the learner may observe. Also
        sets the size of the uniform prior over referent slots.

    Examples
    --------
    >>> model = CrossSituationalLearner().fit([({"ray", "eats"}, {"RAY", "EATS"})])
    >>> sorted(model.meaning("ray"))
    ['EATS', 'RAY']
    """

    def __init__(
        self,
        alignment: str = "word",
        representation: str = "conditional",
        smoothing: float = 0.01,
        max_referents: int = 100,
    ):
        self.alignment = alignment
        self.representation = representation
        self.smoothing = smoothing
        self.max_referents = max_referents

    def _config(self) -> LearnerConfig:
        return LearnerConfig(
            alignment=self.alignment,
            representation=self.representation,
            smoothing=self.smoothing,
            max_referents=self.max_referents,
        ).validate()

    def fit(self, X, y=None):
        """Reset the learner and process all pairs of X in order."""
        self.state_ = learner.fresh_state(self._config())
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        """Process further pairs without resetting accumulated knowledge."""
        if not hasattr(self, "state_"):
            self.state_ = learner.fresh_state(self._config())
        for pair in as_input_pairs(X):
            learner.update(self.state_, pair)
        return self

    @property
    def n_pairs_seen_(self) -> int:
        self._check_fitted()
        return self.state_.step

    def predict(self, words) -> list[str]:
        """Best referent per word; ties break on lexicographic referent order."""
        self._check_fitted()
        return [learner.best_referent(self.state_, w) for w in as_words(words)]

    def meaning(self, word: str) -> dict[str, float]:
        """Meaning strengths of ``word`` over all observed referents."""
        self._check_fitted()
        return learner.meaning_vector(self.state_, word)

    def meaning_probability(self, word: str, referent: str) -> float:
        """Per-word normalized meaning strength, suitable for probe reports."""
        self._check_fitted()
        return learner.meaning_probability(self.state_, word, referent)

    def score(self, X=None, y: GoldLexicon | None = None) -> float:
        """Average comprehension against a gold lexicon (X is ignored)."""
        from .evaluation import average_comprehension

        self._check_fitted()
        if y is None:
            raise ValueError("score requires a gold lexicon as y")
        return average_comprehension(self.state_, y)

    def to_json(self) -> str:
        self._check_fitted()
        return learner.state_to_json(self.state_)

    @classmethod
    def from_json(cls, text: str) -> "CrossSituationalLearner":
        state = learner.state_from_json(text)
        est = cls(
            alignment=state.config.alignment,
            representation=state.config.representation,
            smoothing=state.config.smoothing,
            max_referents=state.config.max_referents,
        )
        est.state_ = state
        return est

    def _check_fitted(self):
        if not hasattr(self, "state_"):
            raise RuntimeError("this learner has not been fitted yet; call fit or partial_fit")
