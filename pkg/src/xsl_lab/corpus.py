"""Corpus I/O and corpus transforms.

Two on-disk formats are supported:

* ``pairs-text``: UTF-8, records separated by blank lines. Each record is
  exactly two lines: space-separated utterance tokens, then space-separated
  referent symbols. Lines starting with ``#`` are comments.
* ``jsonl``: one JSON object per line with keys ``u`` (utterance tokens)
  and ``s`` (referent symbols).

Saving is canonical (tokens sorted, comments dropped), so load/save
round-trips are byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Iterable, Union

from .errors import EmptyCorpusError, MissingLexiconEntryError, PairFormatError
from .types import Corpus, GoldLexicon, InputPair, Referent, Word, make_corpus

FORMATS = ("pairs-text", "jsonl")

Source = Union[str, Path, bytes, IO[bytes], IO[str]]


def _read_text(source: Source) -> str:
    if isinstance(source, Path):
        data = source.read_bytes()
    elif isinstance(source, str):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PairFormatError(f"source is not valid UTF-8: {exc}") from None
    return data


def load_corpus(source: Source, format: str = "pairs-text") -> Corpus:
    """Read a corpus from a path, byte string, or open stream.

    Pairs are numbered 1..N in file order. Repeated tokens within one
    record collapse (utterances and scenes are sets). Raises
    PairFormatError naming the offending line, or EmptyCorpusError if no
    records are present.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    text = _read_text(source)
    if format == "pairs-text":
        records = _parse_pairs_text(text)
    else:
        records = _parse_jsonl(text)
    if not records:
        raise EmptyCorpusError("corpus source contains no records")
    return make_corpus(records, provenance="file")


def _parse_pairs_text(text: str) -> list[tuple[list[Word], list[Referent]]]:
    records: list[tuple[list[str], list[str]]] = []
    block: list[tuple[int, str]] = []

    def flush(block):
        if not block:
            return
        if len(block) != 2:
            lineno = block[-1][0] if len(block) > 2 else block[0][0]
            raise PairFormatError(
                f"record must be exactly two lines (utterance, scene); got {len(block)}",
                line=lineno,
            )
        (u_line_no, u_line), (s_line_no, s_line) = block
        utterance = u_line.split()
        scene = s_line.split()
        if not utterance:
            raise PairFormatError("empty utterance line", line=u_line_no)
        if not scene:
            raise PairFormatError("empty scene line", line=s_line_no)
        records.append((utterance, scene))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush(block)
            block = []
        else:
            block.append((lineno, line))
    flush(block)
    return records


def _parse_jsonl(text: str) -> list[tuple[list[Word], list[Referent]]]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise PairFormatError(f"invalid JSON: {exc.msg}", line=lineno) from None
        if not isinstance(obj, dict) or "u" not in obj or "s" not in obj:
            raise PairFormatError('object must have "u" and "s" keys', line=lineno)
        u, s = obj["u"], obj["s"]
        if not isinstance(u, list) or not all(isinstance(x, str) for x in u):
            raise PairFormatError('"u" must be a list of strings', line=lineno)
        if not isinstance(s, list) or not all(isinstance(x, str) for x in s):
            raise PairFormatError('"s" must be a list of strings', line=lineno)
        if not u:
            raise PairFormatError("empty utterance", line=lineno)
        if not s:
            raise PairFormatError("empty scene", line=lineno)
        records.append((u, s))
    return records


def dump_corpus(corpus: Corpus, format: str = "pairs-text") -> str:
    """Serialize a corpus canonically (sorted tokens, no comments)."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    if format == "pairs-text":
        blocks = [
            " ".join(sorted(p.utterance)) + "\n" + " ".join(sorted(p.scene)) + "\n"
            for p in corpus
        ]
        return "\n".join(blocks)
    lines = [
        json.dumps({"u": sorted(p.utterance), "s": sorted(p.scene)}, sort_keys=True)
        for p in corpus
    ]
    return "\n".join(lines) + "\n"


def save_corpus(corpus: Corpus, path: Union[str, Path], format: str = "pairs-text") -> None:
    Path(path).write_text(dump_corpus(corpus, format=format), encoding="utf-8")


def load_lexicon(source: Source) -> GoldLexicon:
    """Read a gold lexicon from JSON: {"word": ["REFERENT", ...], ...}."""
    text = _read_text(source)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PairFormatError(f"lexicon is not valid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise PairFormatError("lexicon JSON must be an object mapping word -> referents")
    return GoldLexicon({w: frozenset(refs) for w, refs in obj.items()})


def dump_lexicon(lexicon: GoldLexicon) -> str:
    obj = {w: sorted(refs) for w, refs in sorted(lexicon.entries.items())}
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_lexicon(lexicon: GoldLexicon, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_lexicon(lexicon), encoding="utf-8")


def derive_scene_from_gold(
    utterance: Iterable[Word], lexicon: GoldLexicon
) -> frozenset[Referent]:
    """Union of the gold referents of every word in the utterance."""
    words = frozenset(utterance)
    if not words:
        raise ValueError("utterance must be non-empty")
    scene: set[Referent] = set()
    for w in sorted(words):
        if w not in lexicon:
            raise MissingLexiconEntryError(f"word {w!r} has no lexicon entry")
        scene.update(lexicon.referents_of(w))
    return frozenset(scene)


def _core_indices(n: int) -> range:
    # 1-based indices 1, 4, 7, ... -> 0-based 0, 3, 6, ...
    return range(0, n, 3)


def subsample_every_third(corpus: Corpus) -> Corpus:
    """Keep pairs 1, 4, 7, ... producing the minimal-uncertainty core corpus."""
    if len(corpus) < 3:
        raise ValueError(f"corpus must have at least 3 pairs, got {len(corpus)}")
    picked = [(corpus[i].utterance, corpus[i].scene) for i in _core_indices(len(corpus))]
    return make_corpus(picked, provenance="base")


def make_ru_plus(corpus: Corpus) -> Corpus:
    """Core pairs with added referential uncertainty.

    Output pair k keeps utterance u_{3k-2} but its scene is the union of
    the scenes of pairs 3k-2, 3k-1, 3k, so extra referents come from
    neighbouring context rather than random noise.
    """
    if len(corpus) < 3:
        raise ValueError(f"corpus must have at least 3 pairs, got {len(corpus)}")
    out = []
    n = len(corpus)
    for i in _core_indices(n):
        scene: set[Referent] = set()
        for j in (i, i + 1, i + 2):
            if j < n:
                scene.update(corpus[j].scene)
        out.append((corpus[i].utterance, scene))
    return Corpus(
        tuple(
            InputPair(frozenset(u), frozenset(s), index=k)
            for k, (u, s) in enumerate(out, start=1)
        ),
        provenance="ru_plus",
    )


def make_lu_plus(corpus: Corpus) -> Corpus:
    """Core pairs with added linguistic uncertainty (mirror of make_ru_plus).

    Output pair k keeps scene s_{3k-2} but its utterance is the union of
    the utterances of pairs 3k-2, 3k-1, 3k.
    """
    if len(corpus) < 3:
        raise ValueError(f"corpus must have at least 3 pairs, got {len(corpus)}")
    out = []
    n = len(corpus)
    for i in _core_indices(n):
        utterance: set[Word] = set()
        for j in (i, i + 1, i + 2):
            if j < n:
                utterance.update(corpus[j].utterance)
        out.append((utterance, corpus[i].scene))
    return Corpus(
        tuple(
            InputPair(frozenset(u), frozenset(s), index=k)
            for k, (u, s) in enumerate(out, start=1)
        ),
        provenance="lu_plus",
    )
