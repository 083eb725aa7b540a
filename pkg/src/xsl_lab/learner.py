"""Incremental cross-situational word-referent learner.

The learner keeps a sparse association table between words and referents.
For each incoming utterance-scene pair it computes in-the-moment alignment
strengths from its current meaning representation, adds those strengths
into the table, and moves on; no pair is ever revisited.

Two independent choices configure a learner:

* ``alignment`` - how alignments interact within one pair:

  - ``"independent"``: each word-referent alignment is just the current
    meaning strength of that pair, unaffected by the rest of the input;
  - ``"word"``: the words of the utterance compete for each referent
    (strengths are normalized over the utterance, per referent);
  - ``"referent"``: the referents of the scene compete for each word
    (strengths are normalized over the scene, per word).

* ``representation`` - how meaning strength theta(w, r) is read off the
  association table:

  - ``"joint"``: the raw accumulated association plus a small uniform
    floor (not normalized);
  - ``"conditional"``: an additively smoothed distribution over referent
    slots for each word, so all observed referents compete globally.

Before any evidence, both representations are uniform over
``max_referents`` referent slots: 1/max_referents under "conditional" and
smoothing/max_referents under "joint".
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

from .errors import ReferentCapacityError
from .types import Corpus, InputPair, Referent, Word

ALIGNMENT_MODES = ("independent", "word", "referent")
REPRESENTATIONS = ("joint", "conditional")

#: The six learner configurations, in canonical order.
MODEL_ORDER = (
    "independent_joint",
    "word_joint",
    "referent_joint",
    "independent_conditional",
    "word_conditional",
    "referent_conditional",
)

_MAX_FLOAT = sys.float_info.max


def _sat(x: float) -> float:
    # The independent x joint learner compounds (each update adds the cell's
    # own current strength), which can exceed float range on large corpora;
    # saturate instead of propagating inf.
    return x if x <= _MAX_FLOAT else _MAX_FLOAT


@dataclass(frozen=True)
class LearnerConfig:
    """Learner hyperparameters; one of six model identities plus smoothing."""

    alignment: str = "word"
    representation: str = "conditional"
    smoothing: float = 0.01
    max_referents: int = 100

    def validate(self) -> "LearnerConfig":
        if self.alignment not in ALIGNMENT_MODES:
            raise ValueError(
                f"alignment must be one of {ALIGNMENT_MODES}, got {self.alignment!r}"
            )
        if self.representation not in REPRESENTATIONS:
            raise ValueError(
                f"representation must be one of {REPRESENTATIONS}, "
                f"got {self.representation!r}"
            )
        if not self.smoothing > 0:
            raise ValueError(f"smoothing must be > 0, got {self.smoothing}")
        if not self.max_referents > 0:
            raise ValueError(f"max_referents must be > 0, got {self.max_referents}")
        return self

    @property
    def model_id(self) -> str:
        return f"{self.alignment}_{self.representation}"


def config_for_model(
    model_id: str, smoothing: float = 0.01, max_referents: int = 100
) -> LearnerConfig:
    """Build a LearnerConfig from a canonical id like "word_conditional"."""
    if model_id not in MODEL_ORDER:
        raise ValueError(f"unknown model id {model_id!r}; expected one of {MODEL_ORDER}")
    alignment, representation = model_id.rsplit("_", 1)
    return LearnerConfig(alignment, representation, smoothing, max_referents).validate()


@dataclass
class LearnerState:
    """Mutable learner state: sparse association table plus registries.

    ``assoc[w][r]`` is the accumulated alignment mass of the pair; absent
    cells are zero. ``row_sums`` caches each word's total over all observed
    referents. A state is owned by one training sequence at a time;
    read-only snapshots can be taken with ``clone()``.
    """

    config: LearnerConfig
    assoc: dict[Word, dict[Referent, float]] = field(default_factory=dict)
    row_sums: dict[Word, float] = field(default_factory=dict)
    observed_words: set[Word] = field(default_factory=set)
    observed_referents: set[Referent] = field(default_factory=set)
    step: int = 0

    def clone(self) -> "LearnerState":
        return LearnerState(
            config=self.config,
            assoc={w: dict(row) for w, row in self.assoc.items()},
            row_sums=dict(self.row_sums),
            observed_words=set(self.observed_words),
            observed_referents=set(self.observed_referents),
            step=self.step,
        )


def fresh_state(config: LearnerConfig) -> LearnerState:
    return LearnerState(config=config.validate())


_EMPTY_ROW: dict[Referent, float] = {}


def theta(state: LearnerState, w: Word, r: Referent) -> float:
    """Current meaning strength of (w, r); defined for unseen symbols too."""
    cfg = state.config
    a = state.assoc.get(w, _EMPTY_ROW).get(r, 0.0)
    if cfg.representation == "conditional":
        row = state.row_sums.get(w, 0.0)
        return (a + cfg.smoothing) / (row + cfg.max_referents * cfg.smoothing)
    return _sat(a + cfg.smoothing / cfg.max_referents)


def theta_default(state: LearnerState, w: Word) -> float:
    """theta(w, r) for any referent the word has never co-occurred with."""
    cfg = state.config
    if cfg.representation == "conditional":
        row = state.row_sums.get(w, 0.0)
        return cfg.smoothing / (row + cfg.max_referents * cfg.smoothing)
    return cfg.smoothing / cfg.max_referents


def align(state: LearnerState, pair: InputPair) -> dict[tuple[Word, Referent], float]:
    """In-the-moment alignment strengths for one pair, from the current state.

    Under "word" alignment the values for each referent sum to 1 over the
    utterance; under "referent" alignment the values for each word sum to
    1 over the scene; under "independent" they are raw meaning strengths.
    """
    words = sorted(pair.utterance)
    referents = sorted(pair.scene)
    mode = state.config.alignment
    table: dict[tuple[Word, Referent], float] = {}
    if mode == "independent":
        for w in words:
            for r in referents:
                table[(w, r)] = theta(state, w, r)
    elif mode == "word":
        for r in referents:
            strengths = [(w, theta(state, w, r)) for w in words]
            denom = _sat(sum(v for _, v in strengths))
            for w, v in strengths:
                table[(w, r)] = v / denom
    else:  # referent competition
        for w in words:
            strengths = [(r, theta(state, w, r)) for r in referents]
            denom = _sat(sum(v for _, v in strengths))
            for r, v in strengths:
                table[(w, r)] = v / denom
    return table


def update(state: LearnerState, pair: InputPair) -> LearnerState:
    """Process one utterance-scene pair in place and return the state.

    The whole alignment table is computed from the pre-update state before
    any cell changes, so every alignment within a pair sees the same theta.
    """
    new_referents = pair.scene - state.observed_referents
    total = len(state.observed_referents) + len(new_referents)
    if total > state.config.max_referents:
        raise ReferentCapacityError(
            f"observing {total} referents exceeds max_referents="
            f"{state.config.max_referents}; configure a larger max_referents"
        )
    table = align(state, pair)
    for w in sorted(pair.utterance):
        row = state.assoc.setdefault(w, {})
        total_w = state.row_sums.get(w, 0.0)
        for r in sorted(pair.scene):
            old = row.get(r, 0.0)
            new = _sat(old + table[(w, r)])
            row[r] = new
            total_w = _sat(total_w + (new - old))
        state.row_sums[w] = total_w
    state.observed_words.update(pair.utterance)
    state.observed_referents.update(pair.scene)
    state.step += 1
    return state


@dataclass(frozen=True)
class Checkpoint:
    """Training checkpoint summary, optionally carrying an evaluation payload."""

    step: int
    n_words: int
    n_referents: int
    payload: object = None


def train(
    state: LearnerState,
    corpus: Corpus,
    checkpoint_every: int | None = None,
    hook: Callable[[LearnerState], object] | None = None,
) -> tuple[LearnerState, list[Checkpoint]]:
    """Fold ``update`` over the corpus in order.

    Emits a checkpoint every ``checkpoint_every`` pairs and at the final
    step; ``hook``, when given, is called on the state at each checkpoint
    and its return value stored in the checkpoint payload. An empty corpus
    leaves the state untouched and produces no checkpoints.
    """
    if checkpoint_every is not None and checkpoint_every < 1:
        raise ValueError(f"checkpoint_every must be >= 1, got {checkpoint_every}")
    checkpoints: list[Checkpoint] = []

    def emit():
        checkpoints.append(
            Checkpoint(
                step=state.step,
                n_words=len(state.observed_words),
                n_referents=len(state.observed_referents),
                payload=hook(state) if hook is not None else None,
            )
        )

    n = len(corpus)
    for i, pair in enumerate(corpus, start=1):
        try:
            update(state, pair)
        except ReferentCapacityError as exc:
            raise ReferentCapacityError(f"at corpus pair {pair.index}: {exc}") from None
        if checkpoint_every is not None and (i % checkpoint_every == 0 or i == n):
            emit()
    return state, checkpoints


def meaning_vector(state: LearnerState, w: Word) -> dict[Referent, float]:
    """theta(w, .) over every observed referent."""
    return {r: theta(state, w, r) for r in state.observed_referents}


def meaning_probability(state: LearnerState, w: Word, r: Referent) -> float:
    """Meaning strength of (w, r) on a per-word normalized reporting scale.

    Under the "conditional" representation this is theta itself. Under
    "joint" the raw strength is divided by the word's total strength over
    all max_referents slots (which is row_sum + smoothing), purely for
    reporting, so probe trajectories are comparable across
    representations; the learning math never uses this normalization.
    A fresh word reports 1/max_referents either way.
    """
    if state.config.representation == "conditional":
        return theta(state, w, r)
    return theta(state, w, r) / (state.row_sums.get(w, 0.0) + state.config.smoothing)


def best_referent(state: LearnerState, w: Word) -> Referent:
    """The referent with maximal meaning strength; ties break lexicographically."""
    if not state.observed_referents:
        raise ValueError("no referents observed yet")
    vec = meaning_vector(state, w)
    best = max(vec.values())
    return min(r for r, v in vec.items() if v == best)


STATE_FORMAT_VERSION = 1


def state_to_json(state: LearnerState) -> str:
    """Serialize a state to versioned JSON with full float precision."""
    doc = {
        "version": STATE_FORMAT_VERSION,
        "config": {
            "alignment": state.config.alignment,
            "representation": state.config.representation,
            "smoothing": state.config.smoothing,
            "max_referents": state.config.max_referents,
        },
        "assoc": [
            [w, r, state.assoc[w][r]]
            for w in sorted(state.assoc)
            for r in sorted(state.assoc[w])
        ],
        "observed_words": sorted(state.observed_words),
        "observed_referents": sorted(state.observed_referents),
        "step": state.step,
    }
    return json.dumps(doc, indent=1)


def state_from_json(text: Union[str, bytes]) -> LearnerState:
    doc = json.loads(text)
    version = doc.get("version")
    if version != STATE_FORMAT_VERSION:
        raise ValueError(f"unsupported state format version: {version!r}")
    cfg = LearnerConfig(
        alignment=doc["config"]["alignment"],
        representation=doc["config"]["representation"],
        smoothing=doc["config"]["smoothing"],
        max_referents=doc["config"]["max_referents"],
    ).validate()
    state = LearnerState(config=cfg, step=int(doc["step"]))
    state.observed_words = set(doc["observed_words"])
    state.observed_referents = set(doc["observed_referents"])
    for w, r, v in doc["assoc"]:
        state.assoc.setdefault(w, {})[r] = float(v)
    for w, row in state.assoc.items():
        state.row_sums[w] = sum(row[r] for r in sorted(row))
    return state


def save_state(state: LearnerState, path: Union[str, Path]) -> None:
    Path(path).write_text(state_to_json(state), encoding="utf-8")


def load_state(path: Union[str, Path]) -> LearnerState:
    return state_from_json(Path(path).read_text(encoding="utf-8"))
