"""Construction of pseudo-homonym and pseudo-synonym probe trials.

A pseudo-homonym trial pairs a familiar word with a brand-new referent; a
pseudo-synonym trial pairs a brand-new word with a familiar referent. All
trials of one probe reuse a single held-out context pair, so the new
meaning always appears in the same surroundings, and that context is
chosen to be unrelated to the familiar item's established meaning.

New symbols should be minted with :func:`novel_word` /
:func:`novel_referent`, which place them in a reserved "!" namespace that
generated corpora can never collide with.
"""

from __future__ import annotations

from .errors import TrialConstructionError
from .types import Corpus, GoldLexicon, InputPair, Referent, Word

#: Prefix of the reserved namespace for probe symbols.
NOVEL_PREFIX = "!"


def novel_word(stem: str) -> Word:
    """A word guaranteed not to occur in any generated or loaded corpus."""
    return stem if stem.startswith(NOVEL_PREFIX) else NOVEL_PREFIX + stem


def novel_referent(stem: str) -> Referent:
    """A referent guaranteed not to occur in any generated or loaded corpus."""
    return stem if stem.startswith(NOVEL_PREFIX) else NOVEL_PREFIX + stem.upper()


def _candidate_pairs(
    corpus: Corpus,
    banned_words: frozenset[Word],
    banned_referents: frozenset[Referent],
    after_index: int,
) -> list[InputPair]:
    candidates = [
        p
        for p in corpus
        if p.index > after_index
        and not (p.utterance & banned_words)
        and not (p.scene & banned_referents)
    ]
    # Prefer the richest context (longest utterance) for the new meaning;
    # earliest pair among equals keeps the choice deterministic.
    candidates.sort(key=lambda p: (-len(p.utterance), p.index))
    return candidates


def _replicate(context: InputPair, add_word: Word | None, add_referent: Referent | None, n: int) -> list[InputPair]:
    utterance = set(context.utterance)
    scene = set(context.scene)
    if add_word is not None:
        utterance.add(add_word)
    if add_referent is not None:
        scene.add(add_referent)
    return [
        InputPair(frozenset(utterance), frozenset(scene), index=k)
        for k in range(1, n + 1)
    ]


def build_homonym_trials(
    corpus: Corpus,
    probe_word: Word,
    novel_ref: Referent,
    n_trials: int = 10,
    gold: GoldLexicon | None = None,
    after_index: int = 0,
) -> list[InputPair]:
    """Probe pairs introducing a second meaning for a familiar word.

    The context is one pair (beyond ``after_index``) that contains neither
    the probe word nor any of its gold referents; the probe word joins its
    utterance and ``novel_ref`` joins its scene, and the same augmented
    pair is repeated ``n_trials`` times. There must be at least
    ``n_trials`` eligible context pairs in the corpus.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if not any(probe_word in p.utterance for p in corpus):
        raise TrialConstructionError(f"probe word {probe_word!r} never occurs in the corpus")
    if any(novel_ref in p.scene for p in corpus):
        raise TrialConstructionError(f"referent {novel_ref!r} already occurs in the corpus")
    first_meaning = gold.referents_of(probe_word) if gold and probe_word in gold else frozenset()
    candidates = _candidate_pairs(
        corpus, frozenset({probe_word}), first_meaning, after_index
    )
    if len(candidates) < n_trials:
        raise TrialConstructionError(
            f"need {n_trials} context pairs free of {probe_word!r} and its meaning "
            f"after pair {after_index}, found {len(candidates)}",
            found=len(candidates),
        )
    return _replicate(candidates[0], probe_word, novel_ref, n_trials)


def build_synonym_trials(
    corpus: Corpus,
    new_word: Word,
    target_referent: Referent,
    n_trials: int = 10,
    gold: GoldLexicon | None = None,
    after_index: int = 0,
) -> list[InputPair]:
    """Probe pairs introducing a second label for a familiar referent.

    Mirror of :func:`build_homonym_trials`: the context pair contains none
    of the referent's existing labels, ``new_word`` joins its utterance,
    and ``target_referent`` joins its scene.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if any(new_word in p.utterance for p in corpus):
        raise TrialConstructionError(f"word {new_word!r} already occurs in the corpus")
    if not any(target_referent in p.scene for p in corpus):
        raise TrialConstructionError(
            f"target referent {target_referent!r} never occurs in the corpus"
        )
    labels = gold.labels_for(target_referent) if gold is not None else frozenset()
    candidates = _candidate_pairs(corpus, labels, frozenset({target_referent}), after_index)
    if len(candidates) < n_trials:
        raise TrialConstructionError(
            f"need {n_trials} context pairs free of {target_referent!r} and its labels "
            f"after pair {after_index}, found {len(candidates)}",
            found=len(candidates),
        )
    return _replicate(candidates[0], new_word, target_referent, n_trials)
