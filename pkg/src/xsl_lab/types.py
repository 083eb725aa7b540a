"""Core value types: utterance-scene pairs, corpora, and gold lexicons.

Words and referents are both plain strings, but they live in separate
namespaces: a scene symbol never matches an utterance token by string
identity, only through an explicit lexicon entry. By convention referent
symbols are written in upper case ("ball" vs "BALL"), but nothing relies
on that.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import CorpusSpecError

# Type aliases; see module docstring for the namespace convention.
Word = str
Referent = str

#: Provenance labels a corpus can carry.
PROVENANCES = ("base", "ru_plus", "lu_plus", "synthetic", "file")


def _check_symbol(symbol: str, kind: str) -> str:
    if not isinstance(symbol, str) or not symbol:
        raise ValueError(f"{kind} must be a non-empty string, got {symbol!r}")
    if any(ch.isspace() for ch in symbol):
        raise ValueError(f"{kind} may not contain whitespace: {symbol!r}")
    return symbol


@dataclass(frozen=True)
class InputPair:
    """One learning episode: a set of words heard with a set of referents seen.

    Both sets are duplicate-free and non-empty; ``index`` is the 1-based
    position of the pair within its corpus.
    """

    utterance: frozenset[Word]
    scene: frozenset[Referent]
    index: int = 1

    def __post_init__(self):
        object.__setattr__(self, "utterance", frozenset(self.utterance))
        object.__setattr__(self, "scene", frozenset(self.scene))
        if not self.utterance:
            raise ValueError("utterance must be non-empty")
        if not self.scene:
            raise ValueError("scene must be non-empty")
        for w in self.utterance:
            _check_symbol(w, "word")
        for r in self.scene:
            _check_symbol(r, "referent")
        if self.index < 1:
            raise ValueError(f"pair index must be >= 1, got {self.index}")


@dataclass(frozen=True)
class Corpus:
    """An ordered sequence of input pairs with strictly increasing indices."""

    pairs: tuple[InputPair, ...]
    provenance: str = "file"

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if self.provenance not in PROVENANCES:
            raise ValueError(
                f"unknown provenance {self.provenance!r}; expected one of {PROVENANCES}"
            )
        prev = 0
        for p in self.pairs:
            if p.index <= prev:
                raise ValueError(
                    f"pair indices must be strictly increasing, got {p.index} after {prev}"
                )
            prev = p.index

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[InputPair]:
        return iter(self.pairs)

    def __getitem__(self, i) -> InputPair:
        return self.pairs[i]

    def words(self) -> frozenset[Word]:
        """All words occurring in any utterance."""
        out: set[Word] = set()
        for p in self.pairs:
            out.update(p.utterance)
        return frozenset(out)

    def referents(self) -> frozenset[Referent]:
        """All referents occurring in any scene."""
        out: set[Referent] = set()
        for p in self.pairs:
            out.update(p.scene)
        return frozenset(out)

    def word_frequencies(self) -> dict[Word, int]:
        """Number of utterances each word occurs in (utterances are sets)."""
        freq: dict[Word, int] = {}
        for p in self.pairs:
            for w in p.utterance:
                freq[w] = freq.get(w, 0) + 1
        return freq


def make_corpus(
    pairs: Iterable[tuple[Iterable[Word], Iterable[Referent]]],
    provenance: str = "file",
) -> Corpus:
    """Build a corpus from (utterance, scene) iterables, numbering pairs 1..N."""
    built = tuple(
        InputPair(frozenset(u), frozenset(s), index=i)
        for i, (u, s) in enumerate(pairs, start=1)
    )
    return Corpus(built, provenance=provenance)


@dataclass(frozen=True)
class GoldLexicon:
    """Ground-truth mapping from each word to its non-empty set of referents.

    A word with two or more referents is a homonym; two words sharing a
    referent are synonyms.
    """

    entries: Mapping[Word, frozenset[Referent]]

    def __post_init__(self):
        frozen = {}
        for w, refs in dict(self.entries).items():
            _check_symbol(w, "word")
            refs = frozenset(refs)
            if not refs:
                raise ValueError(f"lexicon entry for {w!r} has no referents")
            for r in refs:
                _check_symbol(r, "referent")
            frozen[w] = refs
        object.__setattr__(self, "entries", frozen)

    def __contains__(self, word: Word) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def referents_of(self, word: Word) -> frozenset[Referent]:
        return self.entries[word]

    def words(self) -> frozenset[Word]:
        return frozenset(self.entries)

    def all_referents(self) -> frozenset[Referent]:
        out: set[Referent] = set()
        for refs in self.entries.values():
            out.update(refs)
        return frozenset(out)

    def labels_for(self, referent: Referent) -> frozenset[Word]:
        """All words whose gold meaning includes ``referent``."""
        return frozenset(w for w, refs in self.entries.items() if referent in refs)


@dataclass(frozen=True)
class CorpusSpec:
    """Parameters of the synthetic corpus generator.

    Word tokens are drawn from a rank-frequency (Zipf-like) distribution
    with exponent ``zipf_exponent``; utterance lengths are drawn uniformly
    from [min_len, max_len]. ``mean_len`` is recorded for reference and
    must sit inside the range.
    """

    n_pairs: int = 6000
    word_vocab: int = 1000
    min_len: int = 2
    max_len: int = 8
    mean_len: float = 5.0
    zipf_exponent: float = 1.0
    seed: int = 0

    def validate(self) -> "CorpusSpec":
        if self.n_pairs < 1:
            raise CorpusSpecError(f"n_pairs must be >= 1, got {self.n_pairs}")
        if self.word_vocab < 1:
            raise CorpusSpecError(f"word_vocab must be >= 1, got {self.word_vocab}")
        if not (1 <= self.min_len <= self.max_len):
            raise CorpusSpecError(
                f"need 1 <= min_len <= max_len, got [{self.min_len}, {self.max_len}]"
            )
        if not (self.min_len <= self.mean_len <= self.max_len):
            raise CorpusSpecError(
                f"mean_len {self.mean_len} outside [{self.min_len}, {self.max_len}]"
            )
        if self.word_vocab < self.max_len:
            raise CorpusSpecError(
                f"word_vocab ({self.word_vocab}) must be >= max_len ({self.max_len}) "
                "so an utterance can be filled without repeats"
            )
        if self.zipf_exponent <= 0:
            raise CorpusSpecError(
                f"zipf_exponent must be > 0, got {self.zipf_exponent}"
            )
        return self
