"""Comprehension scoring against a gold lexicon.

A word is understood to the extent that its learned meaning vector points
in the same direction as its gold meaning: the score is the cosine between
theta(w, .) and the multi-hot indicator of the word's gold referents. The
learned vector is taken over the union of all observed referents and the
word's gold referents, with never-co-occurring slots at the uniform
default strength, so the score is well defined from the very first step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EvaluationError, GoldMissingError
from .learner import Checkpoint, LearnerState, theta, theta_default
from .types import Corpus, GoldLexicon, Word


def comprehension_score(state: LearnerState, w: Word, gold: GoldLexicon) -> float:
    """Cosine between the learned meaning of ``w`` and its gold meaning.

    Always in [0, 1]; exactly 1 only when the learned vector is supported
    on the gold referents alone. Scale-invariant in the learned vector, so
    raw and normalized representations of the same direction score alike.
    """
    if w not in gold:
        raise GoldMissingError(f"word {w!r} is not in the gold lexicon")
    gold_refs = gold.referents_of(w)
    row = state.assoc.get(w, {})
    default = theta_default(state, w)

    # Support is observed union gold; every slot without a cell sits at the
    # uniform default. Work relative to the row maximum: raw joint
    # strengths can be near the float ceiling where squaring overflows.
    support_size = len(state.observed_referents | gold_refs)
    n_default = support_size - len(row)
    top = max((theta(state, w, r) for r in row), default=default)
    top = max(top, default)

    norm_sq = 0.0
    for r in row:
        v = theta(state, w, r) / top
        norm_sq += v * v
    scaled_default = default / top
    norm_sq += n_default * scaled_default * scaled_default

    dot = sum(theta(state, w, r) / top for r in gold_refs)
    return dot / (math.sqrt(norm_sq) * math.sqrt(len(gold_refs)))


def average_comprehension(state: LearnerState, gold: GoldLexicon) -> float:
    """Unweighted mean comprehension over observed word types found in gold."""
    words = sorted(state.observed_words & gold.words())
    if not words:
        raise EvaluationError("no observed words overlap the gold lexicon")
    return sum(comprehension_score(state, w, gold) for w in words) / len(words)


@dataclass(frozen=True)
class ComprehensionReport:
    """Per-word scores at one training step, plus their mean."""

    model_id: str
    step: int
    per_word: dict[Word, float]
    average: float


def comprehension_report(state: LearnerState, gold: GoldLexicon) -> ComprehensionReport:
    words = sorted(state.observed_words & gold.words())
    if not words:
        raise EvaluationError("no observed words overlap the gold lexicon")
    per_word = {w: comprehension_score(state, w, gold) for w in words}
    return ComprehensionReport(
        model_id=state.config.model_id,
        step=state.step,
        per_word=per_word,
        average=sum(per_word.values()) / len(per_word),
    )


@dataclass(frozen=True)
class FrequencyBands:
    """Contiguous word-frequency bands, e.g. low (<5), mid (5-10), high (>10).

    Each band is (label, lowest count, highest count or None for
    unbounded); together the bands must cover all counts from 0 up.
    """

    bands: tuple[tuple[str, int, int | None], ...] = (
        ("low", 0, 4),
        ("mid", 5, 10),
        ("high", 11, None),
    )

    def __post_init__(self):
        if not self.bands:
            raise ValueError("at least one band is required")
        expected_low = 0
        for i, (label, lo, hi) in enumerate(self.bands):
            if lo != expected_low:
                raise ValueError(
                    f"band {label!r} starts at {lo}, expected {expected_low}; "
                    "bands must be contiguous from 0"
                )
            last = i == len(self.bands) - 1
            if last and hi is not None:
                raise ValueError("the last band must be unbounded (hi=None)")
            if not last:
                if hi is None or hi < lo:
                    raise ValueError(f"band {label!r} has invalid bounds ({lo}, {hi})")
                expected_low = hi + 1

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _, _ in self.bands)

    def label_for(self, count: int) -> str:
        for label, lo, hi in self.bands:
            if count >= lo and (hi is None or count <= hi):
                return label
        raise ValueError(f"count {count} matches no band")


DEFAULT_BANDS = FrequencyBands()


def frequency_split_report(
    state: LearnerState,
    gold: GoldLexicon,
    counts: dict[Word, int],
    bands: FrequencyBands = DEFAULT_BANDS,
) -> dict[str, tuple[float, int]]:
    """Mean comprehension per frequency band: {label: (score, n_words)}.

    ``counts`` are each word's occurrences in the training corpus and must
    cover every observed word; bands with no words are absent from the
    result rather than reported as zero.
    """
    words = sorted(state.observed_words & gold.words())
    missing = [w for w in words if w not in counts]
    if missing:
        raise EvaluationError(
            f"frequency counts missing for {len(missing)} observed words, "
            f"e.g. {missing[:3]}"
        )
    grouped: dict[str, list[float]] = {}
    for w in words:
        label = bands.label_for(counts[w])
        grouped.setdefault(label, []).append(comprehension_score(state, w, gold))
    return {
        label: (sum(scores) / len(scores), len(scores))
        for label, scores in grouped.items()
    }


@dataclass(frozen=True)
class LearningCurve:
    """Average comprehension sampled at increasing training steps."""

    model_id: str
    provenance: str
    points: tuple[tuple[int, float], ...]

    def __post_init__(self):
        steps = [s for s, _ in self.points]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("curve steps must be strictly increasing")


def learning_curve(
    checkpoints: list[Checkpoint],
    gold: GoldLexicon | None = None,
    model_id: str = "",
    provenance: str = "file",
) -> LearningCurve:
    """Build a curve from training checkpoints.

    Each checkpoint payload must be either a precomputed average (float)
    or a LearnerState to score against ``gold``.
    """
    points = []
    for cp in checkpoints:
        if isinstance(cp.payload, float):
            value = cp.payload
        elif isinstance(cp.payload, LearnerState):
            if gold is None:
                raise EvaluationError("gold lexicon required to score state checkpoints")
            value = average_comprehension(cp.payload, gold)
        else:
            raise EvaluationError(
                f"checkpoint at step {cp.step} has no scoreable payload"
            )
        points.append((cp.step, value))
    return LearningCurve(model_id=model_id, provenance=provenance, points=tuple(points))


def comprehension_hook(gold: GoldLexicon):
    """A train() hook that records the average comprehension as the payload."""

    def hook(state: LearnerState) -> float:
        return average_comprehension(state, gold)

    return hook


def word_frequencies(corpus: Corpus) -> dict[Word, int]:
    """Occurrences of each word across a corpus (one per containing utterance)."""
    return corpus.word_frequencies()
