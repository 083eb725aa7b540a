"""Command line interface.

Exit codes: 0 on success, 1 on configuration or input errors, 2 when the
batch-vs-incremental check fails its agreement assertions. The default
output directory comes from $XSL_LAB_OUT (falling back to ./out); --out
overrides it.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import __version__, experiments
from .corpus import (
    load_corpus,
    load_lexicon,
    make_lu_plus,
    make_ru_plus,
    save_corpus,
    save_lexicon,
    subsample_every_third,
)
from .errors import XslLabError
from .evaluation import comprehension_hook, comprehension_report, frequency_split_report
from .experiments import ExperimentConfig, load_config, render_figure, with_seed
from .generator import generate_synthetic_corpus
from .learner import config_for_model, fresh_state, load_state, save_state, train
from .tables import parse_csv, write_table


@click.group(name="xsl-lab")
@click.version_option(__version__)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON experiment configuration.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None, help="Output directory (overrides $XSL_LAB_OUT).")
@click.option("--seed", type=int, default=None, help="Override the configured seed list with one seed.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", help="Table output format.")
@click.option("--jobs", type=int, default=None, help="Worker processes for independent cells.")
@click.pass_context
def cli(ctx, config_path, out_dir, seed, fmt, jobs):
    """Cross-situational word learning experiments."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["out_dir"] = Path(out_dir or os.environ.get("XSL_LAB_OUT", "out"))
    ctx.obj["seed"] = seed
    ctx.obj["format"] = fmt
    ctx.obj["jobs"] = jobs


def _config(ctx) -> ExperimentConfig:
    path = ctx.obj["config_path"]
    config = load_config(path) if path else ExperimentConfig()
    if ctx.obj["seed"] is not None:
        config = with_seed(config, ctx.obj["seed"])
    if ctx.obj["jobs"] is not None:
        config = replace(config, jobs=ctx.obj["jobs"])
    return config.validate()


def _out_dir(ctx) -> Path:
    out = ctx.obj["out_dir"]
    out.mkdir(parents=True, exist_ok=True)
    return out


def _echo_written(paths):
    for p in paths:
        click.echo(f"wrote {p}")


def _run_and_write(ctx, runner):
    config = _config(ctx)
    result = runner(config)
    _echo_written(result.write(_out_dir(ctx), format=ctx.obj["format"]))


@cli.command()
@click.option("--corpus-format", type=click.Choice(["pairs-text", "jsonl"]), default="pairs-text")
@click.pass_context
def generate(ctx, corpus_format):
    """Generate a synthetic corpus and its gold lexicon."""
    config = _config(ctx)
    spec = config.corpus_spec
    if ctx.obj["seed"] is not None:
        spec = replace(spec, seed=ctx.obj["seed"])
    corpus, lexicon = generate_synthetic_corpus(spec)
    out = _out_dir(ctx)
    suffix = ".jsonl" if corpus_format == "jsonl" else ".txt"
    corpus_path = out / f"corpus{suffix}"
    lexicon_path = out / "lexicon.json"
    save_corpus(corpus, corpus_path, format=corpus_format)
    save_lexicon(lexicon, lexicon_path)
    _echo_written([corpus_path, lexicon_path])


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--kind", type=click.Choice(["base", "ru-plus", "lu-plus"]), required=True)
@click.option("--corpus-format", type=click.Choice(["pairs-text", "jsonl"]), default="pairs-text")
@click.pass_context
def transform(ctx, input_path, kind, corpus_format):
    """Derive the subsampled base corpus or an uncertainty variant."""
    corpus = load_corpus(input_path, format=corpus_format)
    transformed = {
        "base": subsample_every_third,
        "ru-plus": make_ru_plus,
        "lu-plus": make_lu_plus,
    }[kind](corpus)
    out = _out_dir(ctx)
    suffix = ".jsonl" if corpus_format == "jsonl" else ".txt"
    path = out / f"{kind.replace('-', '_')}{suffix}"
    save_corpus(transformed, path, format=corpus_format)
    _echo_written([path])


@cli.command(name="train")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--model", "model_id", type=click.Choice(list(experiments.MODEL_ORDER)), required=True)
@click.option("--corpus-format", type=click.Choice(["pairs-text", "jsonl"]), default="pairs-text")
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Gold lexicon; enables checkpoint scoring.")
@click.option("--checkpoint-every", type=int, default=None)
@click.pass_context
def train_cmd(ctx, input_path, model_id, corpus_format, lexicon_path, checkpoint_every):
    """Train one learner on a corpus file and save its state."""
    config = _config(ctx)
    corpus = load_corpus(input_path, format=corpus_format)
    max_referents = max(config.max_referents, len(corpus.referents()) + 1)
    state = fresh_state(
        config_for_model(model_id, smoothing=config.smoothing, max_referents=max_referents)
    )
    hook = None
    if lexicon_path is not None:
        hook = comprehension_hook(load_lexicon(lexicon_path))
    _, checkpoints = train(state, corpus, checkpoint_every, hook=hook)
    out = _out_dir(ctx)
    state_path = out / f"state_{model_id}.json"
    save_state(state, state_path)
    written = [state_path]
    if checkpoints and hook is not None:
        rows = [
            [model_id, corpus.provenance, cp.step, cp.n_words, cp.n_referents, cp.payload]
            for cp in checkpoints
        ]
        written.append(
            write_table(
                out / f"checkpoints_{model_id}",
                ["model", "provenance", "step", "observed_words", "observed_referents", "average_comprehension"],
                rows,
                format=ctx.obj["format"],
            )
        )
    _echo_written(written)


@cli.command(name="eval")
@click.option("--state", "state_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--lexicon", "lexicon_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--counts-from", "counts_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Corpus whose word frequencies define the bands.")
@click.option("--corpus-format", type=click.Choice(["pairs-text", "jsonl"]), default="pairs-text")
@click.pass_context
def eval_cmd(ctx, state_path, lexicon_path, counts_path, corpus_format):
    """Score a saved learner state against a gold lexicon."""
    config = _config(ctx)
    state = load_state(state_path)
    gold = load_lexicon(lexicon_path)
    report = comprehension_report(state, gold)
    rows = [
        [report.model_id, "file", report.step, "word", w, score]
        for w, score in sorted(report.per_word.items())
    ]
    rows.append([report.model_id, "file", report.step, "average", "all", report.average])
    if counts_path is not None:
        corpus = load_corpus(counts_path, format=corpus_format)
        by_band = frequency_split_report(state, gold, corpus.word_frequencies(), config.bands)
        for band in config.bands.labels:
            if band in by_band:
                score, _ = by_band[band]
                rows.append([report.model_id, "file", report.step, "band", band, score])
    path = write_table(
        _out_dir(ctx) / "eval",
        ["model", "provenance", "step", "key_type", "key", "score"],
        rows,
        format=ctx.obj["format"],
    )
    _echo_written([path])
    click.echo(f"average comprehension: {report.average:.4f}")


@cli.command()
@click.pass_context
def curve(ctx):
    """Learning curves for every configured model and seed."""
    _run_and_write(ctx, experiments.run_curve)


@cli.command()
@click.pass_context
def uncertainty(ctx):
    """Final scores on the base corpus and its noisier variants."""
    _run_and_write(ctx, experiments.run_uncertainty)


@cli.command()
@click.pass_context
def frequency(ctx):
    """Comprehension split by word frequency bands."""
    _run_and_write(ctx, experiments.run_frequency)


@cli.command()
@click.pass_context
def homonym(ctx):
    """Second-meaning probe trials for familiar words."""
    _run_and_write(ctx, experiments.run_homonym)


@cli.command()
@click.pass_context
def synonym(ctx):
    """Second-label probe trials for familiar referents."""
    _run_and_write(ctx, experiments.run_synonym)


@cli.command(name="oracle-check")
@click.pass_context
def oracle_check(ctx):
    """Batch-vs-incremental agreement check; exits 2 on failure."""
    config = _config(ctx)
    outcome = experiments.run_oracle_check(config)
    _echo_written(outcome.result.write(_out_dir(ctx), format=ctx.obj["format"]))
    header, rows = outcome.result.tables["oracle_summary"]
    col = {name: i for i, name in enumerate(header)}
    for row in rows:
        good = row[col["agreement_rate"]] == 1.0 and row[col["loglik_nondecreasing"]]
        status = "PASS" if good else "FAIL"
        note = " (low evidence)" if row[col["low_evidence"]] else ""
        click.echo(
            f"{status} seed {row[col['seed']]}: agreement "
            f"{row[col['n_agree']]}/{row[col['n_words']]}{note}, "
            f"loglik nondecreasing: {row[col['loglik_nondecreasing']]}"
        )
    if not outcome.passed:
        click.echo("oracle check FAILED", err=True)
        sys.exit(2)
    click.echo("oracle check passed")


@cli.command()
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--kind", type=click.Choice(["curve", "uncertainty", "frequency", "homonym", "synonym"]), required=True)
@click.option("--out-file", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def plot(ctx, table_path, kind, out_file):
    """Re-render the standard figure from a previously written CSV."""
    header, rows = parse_csv(Path(table_path).read_text(encoding="utf-8"))
    figure = render_figure(kind, header, rows)
    path = Path(out_file) if out_file else _out_dir(ctx) / f"{kind}.svg"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(figure, encoding="utf-8")
    _echo_written([path])


@cli.command()
@click.pass_context
def battery(ctx):
    """Run every experiment and the oracle check; write a manifest."""
    config = _config(ctx)
    manifest = experiments.run_battery(config, _out_dir(ctx), format=ctx.obj["format"])
    click.echo(json.dumps(manifest, indent=2))
    if not manifest["oracle_passed"]:
        sys.exit(2)


def main():
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except XslLabError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
