"""The scripted experiment battery.

Each ``run_*`` function executes one protocol across the configured
learners and seeds and returns tables (header + rows) plus figures
rendered from those same rows. Outputs are deterministic: a given
configuration always produces byte-identical tables and figures,
regardless of how many worker processes are used.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from joblib import Parallel, delayed

from . import svg
from .batch_em import BatchAlignmentModel
from .corpus import (
    load_corpus,
    load_lexicon,
    make_lu_plus,
    make_ru_plus,
    subsample_every_third,
)
from .errors import ConfigError, XslLabError
from .evaluation import (
    DEFAULT_BANDS,
    FrequencyBands,
    average_comprehension,
    comprehension_hook,
    comprehension_score,
    frequency_split_report,
)
from .generator import generate_synthetic_corpus
from .learner import (
    MODEL_ORDER,
    best_referent,
    config_for_model,
    fresh_state,
    meaning_probability,
    theta,
    train,
    update,
)
from .tables import format_value, rows_to_csv, write_table
from .trials import build_homonym_trials, build_synonym_trials, novel_referent, novel_word
from .types import Corpus, CorpusSpec, GoldLexicon

CONFIG_VERSION = 1


@dataclass(frozen=True)
class HomonymConfig:
    """Second-meaning probe protocol parameters."""

    training_cutoff: int = 1000
    n_trials: int = 10
    words_per_range: int = 4
    ranges: tuple[tuple[str, int, int | None], ...] = (
        ("low", 1, 4),
        ("mid", 5, 20),
        ("high", 21, None),
    )
    # Explicit probe words per range label; when None they are picked
    # deterministically (most frequent first) from the training prefix.
    words: dict[str, tuple[str, ...]] | None = None


@dataclass(frozen=True)
class SynonymConfig:
    """Second-label probe protocol parameters."""

    training_cutoff: int = 1000
    n_trials: int = 10
    n_simulations: int = 20
    seed_base: int = 9000
    target_min_frequency: int = 10


@dataclass(frozen=True)
class OracleConfig:
    """Batch-vs-incremental comparison parameters (small corpora only)."""

    n_pairs: int = 20
    word_vocab: int = 10
    min_len: int = 2
    max_len: int = 3
    zipf_exponent: float = 1.0
    seeds: tuple[int, ...] = (101, 102, 103, 104, 105)
    iterations: int = 3
    min_occurrences: int = 2
    smoothing: float = 0.01
    max_referents: int = 100

    MAX_PAIRS = 100


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a battery run depends on; hashable to a config id."""

    corpus_spec: CorpusSpec = field(
        default_factory=lambda: CorpusSpec(
            n_pairs=6000,
            word_vocab=1400,
            min_len=2,
            max_len=5,
            mean_len=3.5,
            zipf_exponent=1.0,
            seed=7,
        )
    )
    corpus_path: str | None = None
    corpus_format: str = "pairs-text"
    lexicon_path: str | None = None
    models: tuple[str, ...] = MODEL_ORDER
    seeds: tuple[int, ...] = (1, 2, 3, 4, 5)
    checkpoint_every: int = 100
    # Unit prior mass: smoothing * max_referents = 1, uniform over slots.
    smoothing: float = 1.0 / 1600.0
    max_referents: int = 1600
    bands: FrequencyBands = DEFAULT_BANDS
    homonym: HomonymConfig = field(default_factory=HomonymConfig)
    synonym: SynonymConfig = field(default_factory=SynonymConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    jobs: int = 1

    def validate(self) -> "ExperimentConfig":
        if not self.models:
            raise ConfigError("at least one model is required")
        for m in self.models:
            if m not in MODEL_ORDER:
                raise ConfigError(f"unknown model {m!r}; expected one of {MODEL_ORDER}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.checkpoint_every < 1:
            raise ConfigError(f"checkpoint_every must be >= 1, got {self.checkpoint_every}")
        if not self.smoothing > 0:
            raise ConfigError(f"smoothing must be > 0, got {self.smoothing}")
        if self.corpus_path is None:
            try:
                self.corpus_spec.validate()
            except XslLabError as exc:
                raise ConfigError(f"corpus spec: {exc}") from None
            # Every word carries one referent plus probe experiments mint a
            # novel one, so the referent budget must exceed the vocabulary.
            if self.max_referents <= self.corpus_spec.word_vocab:
                raise ConfigError(
                    f"max_referents ({self.max_referents}) must exceed the referent "
                    f"vocabulary ({self.corpus_spec.word_vocab})"
                )
        elif self.lexicon_path is None:
            raise ConfigError("a file corpus requires lexicon_path for evaluation")
        if self.homonym.training_cutoff < 1:
            raise ConfigError("homonym training_cutoff must be >= 1")
        if self.homonym.n_trials < 1:
            raise ConfigError("homonym n_trials must be >= 1")
        if self.synonym.n_trials < 1 or self.synonym.n_simulations < 1:
            raise ConfigError("synonym n_trials and n_simulations must be >= 1")
        if self.oracle.n_pairs > OracleConfig.MAX_PAIRS:
            raise ConfigError(
                f"oracle corpora are limited to {OracleConfig.MAX_PAIRS} pairs, "
                f"got {self.oracle.n_pairs}"
            )
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        return self


def config_to_dict(config: ExperimentConfig) -> dict:
    spec = config.corpus_spec
    return {
        "version": CONFIG_VERSION,
        "corpus": (
            {
                "path": config.corpus_path,
                "format": config.corpus_format,
                "lexicon": config.lexicon_path,
            }
            if config.corpus_path is not None
            else {
                "n_pairs": spec.n_pairs,
                "word_vocab": spec.word_vocab,
                "min_len": spec.min_len,
                "max_len": spec.max_len,
                "mean_len": spec.mean_len,
                "zipf_exponent": spec.zipf_exponent,
                "seed": spec.seed,
            }
        ),
        "models": list(config.models),
        "seeds": list(config.seeds),
        "checkpoint_every": config.checkpoint_every,
        "smoothing": {"value": config.smoothing, "max_referents": config.max_referents},
        "bands": [[label, lo, hi] for label, lo, hi in config.bands.bands],
        "homonym": {
            "training_cutoff": config.homonym.training_cutoff,
            "n_trials": config.homonym.n_trials,
            "words_per_range": config.homonym.words_per_range,
            "ranges": [[label, lo, hi] for label, lo, hi in config.homonym.ranges],
            "words": (
                {k: list(v) for k, v in config.homonym.words.items()}
                if config.homonym.words is not None
                else None
            ),
        },
        "synonym": {
            "training_cutoff": config.synonym.training_cutoff,
            "n_trials": config.synonym.n_trials,
            "n_simulations": config.synonym.n_simulations,
            "seed_base": config.synonym.seed_base,
            "target_min_frequency": config.synonym.target_min_frequency,
        },
        "oracle": {
            "n_pairs": config.oracle.n_pairs,
            "word_vocab": config.oracle.word_vocab,
            "min_len": config.oracle.min_len,
            "max_len": config.oracle.max_len,
            "zipf_exponent": config.oracle.zipf_exponent,
            "seeds": list(config.oracle.seeds),
            "iterations": config.oracle.iterations,
            "min_occurrences": config.oracle.min_occurrences,
            "smoothing": config.oracle.smoothing,
            "max_referents": config.oracle.max_referents,
        },
        "jobs": config.jobs,
    }


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{where}: {key!r} must be {kind.__name__}, got {value!r}")
    return value


def config_from_dict(obj: dict) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError("configuration must be a JSON object")
    version = obj.get("version")
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {version!r}; expected {CONFIG_VERSION}")
    defaults = ExperimentConfig()

    corpus = obj.get("corpus", {})
    if not isinstance(corpus, dict):
        raise ConfigError("corpus section must be an object")
    if "path" in corpus:
        corpus_path = _require(corpus, "path", str, "corpus")
        corpus_format = corpus.get("format", "pairs-text")
        lexicon_path = corpus.get("lexicon")
        spec = defaults.corpus_spec
    else:
        corpus_path = None
        corpus_format = "pairs-text"
        lexicon_path = None
        base = defaults.corpus_spec
        spec = CorpusSpec(
            n_pairs=int(corpus.get("n_pairs", base.n_pairs)),
            word_vocab=int(corpus.get("word_vocab", base.word_vocab)),
            min_len=int(corpus.get("min_len", base.min_len)),
            max_len=int(corpus.get("max_len", base.max_len)),
            mean_len=float(corpus.get("mean_len", base.mean_len)),
            zipf_exponent=float(corpus.get("zipf_exponent", base.zipf_exponent)),
            seed=int(corpus.get("seed", base.seed)),
        )

    def tuple_of_bands(raw, where) -> tuple:
        out = []
        for item in raw:
            if not isinstance(item, list) or len(item) != 3:
                raise ConfigError(f"{where}: each band must be [label, lo, hi]")
            label, lo, hi = item
            out.append((str(label), int(lo), None if hi is None else int(hi)))
        return tuple(out)

    smoothing_obj = obj.get("smoothing", {})
    hom = obj.get("homonym", {})
    syn = obj.get("synonym", {})
    orc = obj.get("oracle", {})
    hd, sd, od = defaults.homonym, defaults.synonym, defaults.oracle

    words = hom.get("words")
    if words is not None:
        if not isinstance(words, dict):
            raise ConfigError("homonym words must map range label -> list of words")
        words = {str(k): tuple(str(w) for w in v) for k, v in words.items()}

    try:
        bands = FrequencyBands(tuple_of_bands(obj["bands"], "bands")) if "bands" in obj else defaults.bands
    except ValueError as exc:
        raise ConfigError(f"bands: {exc}") from None

    config = ExperimentConfig(
        corpus_spec=spec,
        corpus_path=corpus_path,
        corpus_format=corpus_format,
        lexicon_path=lexicon_path,
        models=tuple(obj.get("models", defaults.models)),
        seeds=tuple(int(s) for s in obj.get("seeds", defaults.seeds)),
        checkpoint_every=int(obj.get("checkpoint_every", defaults.checkpoint_every)),
        smoothing=float(smoothing_obj.get("value", defaults.smoothing)),
        max_referents=int(smoothing_obj.get("max_referents", defaults.max_referents)),
        bands=bands,
        homonym=HomonymConfig(
            training_cutoff=int(hom.get("training_cutoff", hd.training_cutoff)),
            n_trials=int(hom.get("n_trials", hd.n_trials)),
            words_per_range=int(hom.get("words_per_range", hd.words_per_range)),
            ranges=tuple_of_bands(hom["ranges"], "homonym ranges") if "ranges" in hom else hd.ranges,
            words=words,
        ),
        synonym=SynonymConfig(
            training_cutoff=int(syn.get("training_cutoff", sd.training_cutoff)),
            n_trials=int(syn.get("n_trials", sd.n_trials)),
            n_simulations=int(syn.get("n_simulations", sd.n_simulations)),
            seed_base=int(syn.get("seed_base", sd.seed_base)),
            target_min_frequency=int(syn.get("target_min_frequency", sd.target_min_frequency)),
        ),
        oracle=OracleConfig(
            n_pairs=int(orc.get("n_pairs", od.n_pairs)),
            word_vocab=int(orc.get("word_vocab", od.word_vocab)),
            min_len=int(orc.get("min_len", od.min_len)),
            max_len=int(orc.get("max_len", od.max_len)),
            zipf_exponent=float(orc.get("zipf_exponent", od.zipf_exponent)),
            seeds=tuple(int(s) for s in orc.get("seeds", od.seeds)),
            iterations=int(orc.get("iterations", od.iterations)),
            min_occurrences=int(orc.get("min_occurrences", od.min_occurrences)),
            smoothing=float(orc.get("smoothing", od.smoothing)),
            max_referents=int(orc.get("max_referents", od.max_referents)),
        ),
        jobs=int(obj.get("jobs", defaults.jobs)),
    )
    return config.validate()


def load_config(path) -> ExperimentConfig:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return config_from_dict(obj)


def config_hash(config: ExperimentConfig) -> str:
    canonical = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    """Override the seed list (CLI --seed)."""
    return replace(config, seeds=(seed,))


# ---------------------------------------------------------------------------
# shared machinery


def corpus_for_seed(
    config: ExperimentConfig, seed: int, scale: int = 1
) -> tuple[Corpus, GoldLexicon]:
    """The (corpus, gold) pair a cell trains on.

    Generated corpora vary with the cell seed; a file corpus is fixed, so
    every seed sees the same data there. ``scale`` multiplies the number
    of generated pairs (the uncertainty protocols start from a three-fold
    source so each derived variant matches the configured corpus length).
    """
    if config.corpus_path is not None:
        corpus = load_corpus(config.corpus_path, format=config.corpus_format)
        gold = load_lexicon(config.lexicon_path)
        return corpus, gold
    spec = replace(
        config.corpus_spec, seed=seed, n_pairs=config.corpus_spec.n_pairs * scale
    )
    return generate_synthetic_corpus(spec)


def _learner_config(config: ExperimentConfig, model: str):
    return config_for_model(
        model, smoothing=config.smoothing, max_referents=config.max_referents
    )


def _run_ordered(tasks, jobs: int) -> list:
    """Run thunks, possibly in parallel, preserving submission order."""
    if jobs == 1:
        return [t() for t in tasks]
    return Parallel(n_jobs=jobs)(delayed(t)() for t in tasks)


@dataclass
class ExperimentResult:
    """Tables and figures from one protocol."""

    name: str
    tables: dict[str, tuple[list[str], list[list]]]
    figures: dict[str, str] = field(default_factory=dict)

    def table_csv(self, stem: str) -> str:
        header, rows = self.tables[stem]
        return rows_to_csv(header, rows)

    def write(self, out_dir, format: str = "csv") -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for stem, (header, rows) in sorted(self.tables.items()):
            written.append(write_table(out_dir / stem, header, rows, format=format))
            if format != "csv":
                # Figures re-render from CSV, so always keep the CSV too.
                written.append(write_table(out_dir / stem, header, rows, format="csv"))
        for stem, text in sorted(self.figures.items()):
            path = (out_dir / stem).with_suffix(".svg")
            path.write_text(text, encoding="utf-8")
            written.append(path)
        return written


# ---------------------------------------------------------------------------
# learning curves


CURVE_HEADER = ["model", "provenance", "seed", "step", "average_comprehension"]


def _curve_cell(config: ExperimentConfig, seed: int) -> list[list]:
    corpus, gold = corpus_for_seed(config, seed)
    rows = []
    for model in config.models:
        state = fresh_state(_learner_config(config, model))
        _, checkpoints = train(
            state, corpus, config.checkpoint_every, hook=comprehension_hook(gold)
        )
        for cp in checkpoints:
            rows.append([model, corpus.provenance, seed, cp.step, cp.payload])
    return rows


def run_curve(config: ExperimentConfig) -> ExperimentResult:
    """Average comprehension over time for every model and seed."""
    config.validate()
    results = _run_ordered(
        [lambda s=s: _curve_cell(config, s) for s in config.seeds], config.jobs
    )
    rows = [row for cell in results for row in cell]
    figure = render_figure("curve", CURVE_HEADER, _stringify(rows))
    return ExperimentResult(
        name="curve",
        tables={"curve": (CURVE_HEADER, rows)},
        figures={"curve": figure},
    )


# ---------------------------------------------------------------------------
# uncertainty (added referents / added words)


UNCERTAINTY_HEADER = [
    "model",
    "provenance",
    "seed",
    "step",
    "final_score",
    "relative_drop",
]


def uncertainty_corpora(source: Corpus) -> dict[str, Corpus]:
    """The comparable trio built from one source sequence."""
    return {
        "base": subsample_every_third(source),
        "ru_plus": make_ru_plus(source),
        "lu_plus": make_lu_plus(source),
    }


def _uncertainty_cell(config: ExperimentConfig, seed: int) -> list[list]:
    source, gold = corpus_for_seed(config, seed, scale=3)
    trio = uncertainty_corpora(source)
    rows = []
    for model in config.models:
        finals = {}
        for provenance in ("base", "ru_plus", "lu_plus"):
            corpus = trio[provenance]
            state = fresh_state(_learner_config(config, model))
            train(state, corpus)
            finals[provenance] = (average_comprehension(state, gold), state.step)
        base_score = finals["base"][0]
        for provenance in ("base", "ru_plus", "lu_plus"):
            score, step = finals[provenance]
            drop = 0.0 if provenance == "base" else (base_score - score) / base_score
            rows.append([model, provenance, seed, step, score, drop])
    return rows


def run_uncertainty(config: ExperimentConfig) -> ExperimentResult:
    """Final comprehension on the base corpus and its noisier variants."""
    config.validate()
    results = _run_ordered(
        [lambda s=s: _uncertainty_cell(config, s) for s in config.seeds], config.jobs
    )
    rows = [row for cell in results for row in cell]
    figure = render_figure("uncertainty", UNCERTAINTY_HEADER, _stringify(rows))
    return ExperimentResult(
        name="uncertainty",
        tables={"uncertainty": (UNCERTAINTY_HEADER, rows)},
        figures={"uncertainty": figure},
    )


# ---------------------------------------------------------------------------
# frequency bands


FREQUENCY_HEADER = ["model", "provenance", "seed", "step", "band", "score", "n_words"]


def _frequency_cell(config: ExperimentConfig, seed: int) -> list[list]:
    source, gold = corpus_for_seed(config, seed, scale=3)
    trio = uncertainty_corpora(source)
    rows = []
    for model in config.models:
        for provenance in ("base", "ru_plus", "lu_plus"):
            corpus = trio[provenance]
            state = fresh_state(_learner_config(config, model))
            train(state, corpus)
            counts = corpus.word_frequencies()
            report = frequency_split_report(state, gold, counts, config.bands)
            for band in config.bands.labels:
                if band not in report:
                    continue  # an empty band is absent, not zero
                score, n_words = report[band]
                rows.append([model, provenance, seed, state.step, band, score, n_words])
    return rows


def run_frequency(config: ExperimentConfig) -> ExperimentResult:
    """Comprehension split by how often each word was seen in training."""
    config.validate()
    results = _run_ordered(
        [lambda s=s: _frequency_cell(config, s) for s in config.seeds], config.jobs
    )
    rows = [row for cell in results for row in cell]
    figure = render_figure("frequency", FREQUENCY_HEADER, _stringify(rows))
    return ExperimentResult(
        name="frequency",
        tables={"frequency": (FREQUENCY_HEADER, rows)},
        figures={"frequency": figure},
    )


# ---------------------------------------------------------------------------
# pseudo-homonym probes


HOMONYM_HEADER = [
    "model",
    "provenance",
    "seed",
    "band",
    "word",
    "trial",
    "p_first_meaning",
    "p_second_meaning",
    "comp_first_meaning",
    "raw_first",
    "raw_second",
]


def pick_probe_words(
    counts: dict[str, int],
    ranges: Sequence[tuple[str, int, int | None]],
    per_range: int,
    explicit: dict[str, tuple[str, ...]] | None = None,
) -> dict[str, list[str]]:
    """Probe words per range label, most frequent first, ties lexicographic."""
    out: dict[str, list[str]] = {}
    for label, lo, hi in ranges:
        if explicit is not None and label in explicit:
            chosen = list(explicit[label])
            for w in chosen:
                if w not in counts:
                    raise ConfigError(
                        f"configured probe word {w!r} does not occur in the training prefix"
                    )
            out[label] = chosen
            continue
        eligible = sorted(
            (w for w, c in counts.items() if c >= lo and (hi is None or c <= hi)),
            key=lambda w: (-counts[w], w),
        )
        if len(eligible) < per_range:
            raise ConfigError(
                f"frequency range {label!r} has only {len(eligible)} candidate "
                f"probe words, need {per_range}"
            )
        out[label] = eligible[:per_range]
    return out


def run_homonym(config: ExperimentConfig) -> ExperimentResult:
    """Track both meanings while a familiar word acquires a second one.

    Models train on the corpus prefix, then the probe pairs are processed
    as ordinary input (learning continues); trial 0 rows record the
    pre-probe values.
    """
    config.validate()
    seed = config.seeds[0]
    corpus, gold = corpus_for_seed(config, seed)
    hconf = config.homonym
    if len(corpus) <= hconf.training_cutoff:
        raise ConfigError(
            f"corpus has {len(corpus)} pairs; homonym probes need more than "
            f"training_cutoff={hconf.training_cutoff}"
        )
    prefix = Corpus(corpus.pairs[: hconf.training_cutoff], provenance=corpus.provenance)
    counts = prefix.word_frequencies()
    probes = pick_probe_words(counts, hconf.ranges, hconf.words_per_range, hconf.words)

    rows = []
    for model in config.models:
        trained = fresh_state(_learner_config(config, model))
        train(trained, prefix)
        for label, _, _ in hconf.ranges:
            for word in probes[label]:
                first_meaning = min(gold.referents_of(word))
                second_meaning = novel_referent(f"NEW-{word}")
                trial_pairs = build_homonym_trials(
                    corpus,
                    word,
                    second_meaning,
                    n_trials=hconf.n_trials,
                    gold=gold,
                    after_index=hconf.training_cutoff,
                )
                state = trained.clone()
                for trial, pair in enumerate([None] + trial_pairs):
                    if pair is not None:
                        update(state, pair)
                    rows.append(
                        [
                            model,
                            corpus.provenance,
                            seed,
                            label,
                            word,
                            trial,
                            meaning_probability(state, word, first_meaning),
                            meaning_probability(state, word, second_meaning),
                            comprehension_score(state, word, gold),
                            theta(state, word, first_meaning),
                            theta(state, word, second_meaning),
                        ]
                    )
    figure = render_figure("homonym", HOMONYM_HEADER, _stringify(rows))
    return ExperimentResult(
        name="homonym",
        tables={"homonym": (HOMONYM_HEADER, rows)},
        figures={"homonym": figure},
    )


# ---------------------------------------------------------------------------
# pseudo-synonym probes


SYNONYM_SIMS_HEADER = [
    "model",
    "provenance",
    "seed",
    "target_word",
    "target_referent",
    "trial",
    "label",
    "probability",
    "raw_strength",
]

SYNONYM_HEADER = [
    "model",
    "provenance",
    "seed",
    "trial",
    "label",
    "mean_probability",
    "mean_raw_strength",
]


def _synonym_sim(config: ExperimentConfig, sim_seed: int) -> list[list]:
    sconf = config.synonym
    corpus, gold = corpus_for_seed(config, sim_seed)
    if len(corpus) <= sconf.training_cutoff:
        raise ConfigError(
            f"corpus has {len(corpus)} pairs; synonym probes need more than "
            f"training_cutoff={sconf.training_cutoff}"
        )
    prefix = Corpus(corpus.pairs[: sconf.training_cutoff], provenance=corpus.provenance)
    counts = prefix.word_frequencies()
    eligible = sorted(w for w, c in counts.items() if c >= sconf.target_min_frequency)
    if not eligible:
        raise ConfigError(
            f"no word reaches target_min_frequency={sconf.target_min_frequency} "
            f"in the training prefix"
        )
    target_word = random.Random(sim_seed).choice(eligible)
    target_ref = min(gold.referents_of(target_word))
    second_label = novel_word("dax")
    trial_pairs = build_synonym_trials(
        corpus,
        second_label,
        target_ref,
        n_trials=sconf.n_trials,
        gold=gold,
        after_index=sconf.training_cutoff,
    )
    rows = []
    for model in config.models:
        trained = fresh_state(_learner_config(config, model))
        train(trained, prefix)
        state = trained.clone()
        for trial, pair in enumerate([None] + trial_pairs):
            if pair is not None:
                update(state, pair)
            for label, word in (("first", target_word), ("second", second_label)):
                rows.append(
                    [
                        model,
                        corpus.provenance,
                        sim_seed,
                        target_word,
                        target_ref,
                        trial,
                        label,
                        meaning_probability(state, word, target_ref),
                        theta(state, word, target_ref),
                    ]
                )
    return rows


def run_synonym(config: ExperimentConfig) -> ExperimentResult:
    """Track both labels while a familiar referent acquires a second one.

    Runs ``n_simulations`` independent simulations (distinct corpus seeds
    and probe contexts) and reports the per-trial means alongside the
    per-simulation detail.
    """
    config.validate()
    sconf = config.synonym
    sim_seeds = [sconf.seed_base + i for i in range(sconf.n_simulations)]
    results = _run_ordered(
        [lambda s=s: _synonym_sim(config, s) for s in sim_seeds], config.jobs
    )
    detail = [row for sim in results for row in sim]

    sums: dict[tuple[str, int, str], tuple[float, float, int]] = {}
    for row in detail:
        key = (row[0], row[5], row[6])
        p, raw, n = sums.get(key, (0.0, 0.0, 0))
        sums[key] = (p + row[7], raw + row[8], n + 1)
    aggregated = []
    for model in config.models:
        for trial in range(sconf.n_trials + 1):
            for label in ("first", "second"):
                p, raw, n = sums[(model, trial, label)]
                aggregated.append(
                    [model, "synthetic", "all", trial, label, p / n, raw / n]
                )

    figure = render_figure("synonym", SYNONYM_HEADER, _stringify(aggregated))
    return ExperimentResult(
        name="synonym",
        tables={
            "synonym": (SYNONYM_HEADER, aggregated),
            "synonym_sims": (SYNONYM_SIMS_HEADER, detail),
        },
        figures={"synonym": figure},
    )


# ---------------------------------------------------------------------------
# batch-vs-incremental check


ORACLE_HEADER = [
    "incremental_model",
    "provenance",
    "seed",
    "word",
    "occurrences",
    "batch_best",
    "incremental_best",
    "agree",
]

ORACLE_SUMMARY_HEADER = [
    "incremental_model",
    "provenance",
    "seed",
    "n_words",
    "n_agree",
    "agreement_rate",
    "low_evidence",
    "loglik_nondecreasing",
]

ORACLE_THETA_HEADER = ["seed", "word", "referent", "probability"]


@dataclass(frozen=True)
class OracleOutcome:
    result: ExperimentResult
    all_agree: bool
    loglik_ok: bool

    @property
    def passed(self) -> bool:
        return self.all_agree and self.loglik_ok


def run_oracle_check(config: ExperimentConfig) -> OracleOutcome:
    """Compare the batch table against the incremental word-competition,
    conditional-representation learner on small unambiguous corpora.

    For every word seen at least ``min_occurrences`` times, both sides
    must pick the same best referent; the batch log-likelihood must never
    decrease across iterations.
    """
    config.validate()
    oconf = config.oracle
    reference = "word_conditional"
    rows = []
    summary_rows = []
    theta_rows = []
    all_agree = True
    loglik_ok = True
    for seed in oconf.seeds:
        spec = CorpusSpec(
            n_pairs=oconf.n_pairs,
            word_vocab=oconf.word_vocab,
            min_len=oconf.min_len,
            max_len=oconf.max_len,
            mean_len=(oconf.min_len + oconf.max_len) / 2,
            zipf_exponent=oconf.zipf_exponent,
            seed=seed,
        )
        corpus, _ = generate_synthetic_corpus(spec)
        batch = BatchAlignmentModel(n_iter=oconf.iterations).fit(corpus)
        path = batch.loglik_path_
        monotone = all(b >= a - 1e-9 for a, b in zip(path, path[1:]))
        loglik_ok = loglik_ok and monotone

        incremental = fresh_state(
            config_for_model(
                reference,
                smoothing=oconf.smoothing,
                max_referents=oconf.max_referents,
            )
        )
        train(incremental, corpus)

        counts = corpus.word_frequencies()
        n_words = 0
        n_agree = 0
        for word in sorted(counts):
            if counts[word] < oconf.min_occurrences:
                continue
            n_words += 1
            batch_best = batch.model_.best_referent(word)
            inc_best = best_referent(incremental, word)
            agree = batch_best == inc_best
            n_agree += agree
            rows.append(
                [reference, "synthetic", seed, word, counts[word], batch_best, inc_best, agree]
            )
        low_evidence = n_words == 0
        rate = 1.0 if low_evidence else n_agree / n_words
        if not low_evidence and n_agree < n_words:
            all_agree = False
        summary_rows.append(
            [reference, "synthetic", seed, n_words, n_agree, rate, low_evidence, monotone]
        )
        for i, word in enumerate(batch.model_.words):
            for j, referent in enumerate(batch.model_.referents):
                theta_rows.append([seed, word, referent, float(batch.model_.theta[i, j])])

    result = ExperimentResult(
        name="oracle",
        tables={
            "oracle": (ORACLE_HEADER, rows),
            "oracle_summary": (ORACLE_SUMMARY_HEADER, summary_rows),
            "oracle_theta": (ORACLE_THETA_HEADER, theta_rows),
        },
    )
    return OracleOutcome(result=result, all_agree=all_agree, loglik_ok=loglik_ok)


# ---------------------------------------------------------------------------
# figures (pure functions of the table rows)


def _stringify(rows: list[list]) -> list[list[str]]:
    return [[format_value(v) for v in row] for row in rows]


def _mean_series(pairs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    sums: dict[float, tuple[float, int]] = {}
    for x, y in pairs:
        s, n = sums.get(x, (0.0, 0))
        sums[x] = (s + y, n + 1)
    return [(x, s / n) for x, (s, n) in sorted(sums.items())]


def render_figure(kind: str, header: list[str], rows: list[list[str]]) -> str:
    """Render the standard figure for a table; same rows, same bytes."""
    idx = {name: i for i, name in enumerate(header)}

    def col(row, name):
        return row[idx[name]]

    if kind == "curve":
        series = []
        for model in MODEL_ORDER:
            pts = [
                (float(col(r, "step")), float(col(r, "average_comprehension")))
                for r in rows
                if col(r, "model") == model
            ]
            if pts:
                series.append((model, _mean_series(pts)))
        return svg.line_chart(
            series,
            title="Average comprehension over training",
            x_label="input pairs",
            y_label="average comprehension",
            y_range=(0.0, 1.0),
        )

    if kind == "uncertainty":
        groups = ["base", "ru_plus", "lu_plus"]
        series = []
        for model in MODEL_ORDER:
            values = []
            for prov in groups:
                scores = [
                    float(col(r, "final_score"))
                    for r in rows
                    if col(r, "model") == model and col(r, "provenance") == prov
                ]
                if scores:
                    values.append(sum(scores) / len(scores))
            if values:
                series.append((model, values))
        return svg.bar_chart(
            groups,
            series,
            title="Final comprehension under added uncertainty",
            y_label="average comprehension",
        )

    if kind == "frequency":
        groups = []
        for prov in ("base", "ru_plus", "lu_plus"):
            for r in rows:
                if col(r, "provenance") == prov:
                    band = col(r, "band")
                    key = f"{prov}:{band}"
                    if key not in groups:
                        groups.append(key)
        series = []
        for model in MODEL_ORDER:
            values = []
            for key in groups:
                prov, band = key.split(":")
                scores = [
                    float(col(r, "score"))
                    for r in rows
                    if col(r, "model") == model
                    and col(r, "provenance") == prov
                    and col(r, "band") == band
                ]
                values.append(sum(scores) / len(scores) if scores else 0.0)
            if any(values):
                series.append((model, values))
        return svg.bar_chart(
            groups,
            series,
            title="Comprehension by training frequency",
            y_label="average comprehension",
        )

    if kind == "homonym":
        series = []
        for model in MODEL_ORDER:
            for meaning, column in (("first", "p_first_meaning"), ("second", "p_second_meaning")):
                pts = [
                    (float(col(r, "trial")), float(col(r, column)))
                    for r in rows
                    if col(r, "model") == model
                ]
                if pts:
                    series.append((f"{model} ({meaning})", _mean_series(pts)))
        return svg.line_chart(
            series,
            title="Second-meaning probes",
            x_label="probe trial",
            y_label="meaning probability",
            y_range=(0.0, 1.0),
        )

    if kind == "synonym":
        series = []
        for model in MODEL_ORDER:
            for label in ("first", "second"):
                pts = [
                    (float(col(r, "trial")), float(col(r, "mean_probability")))
                    for r in rows
                    if col(r, "model") == model and col(r, "label") == label
                ]
                if pts:
                    series.append((f"{model} ({label})", _mean_series(pts)))
        return svg.line_chart(
            series,
            title="Second-label probes",
            x_label="probe trial",
            y_label="mean meaning probability",
            y_range=(0.0, 1.0),
        )

    raise ValueError(f"unknown figure kind {kind!r}")


# ---------------------------------------------------------------------------
# whole battery + manifest


def run_battery(config: ExperimentConfig, out_dir, format: str = "csv") -> dict:
    """Run every protocol, write all outputs, and return the manifest."""
    config.validate()
    start = time.monotonic()
    out_dir = Path(out_dir)
    outputs: list[str] = []

    for result in (
        run_curve(config),
        run_uncertainty(config),
        run_frequency(config),
        run_homonym(config),
        run_synonym(config),
    ):
        outputs.extend(str(p.relative_to(out_dir)) for p in result.write(out_dir, format))
    oracle = run_oracle_check(config)
    outputs.extend(str(p.relative_to(out_dir)) for p in oracle.result.write(out_dir, format))

    from . import __version__

    manifest = {
        "config_hash": config_hash(config),
        "artifact_version": __version__,
        "outputs": sorted(outputs),
        "oracle_passed": oracle.passed,
        "wall_clock_seconds": round(time.monotonic() - start, 3),
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return manifest
