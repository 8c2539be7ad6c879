"""Command-line entry point: ``extknow {harvest,index,resample,assemble,eval,stats}``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
Every command writes ``<command>_manifest.json`` next to its outputs,
listing counts and sha256 hashes; manifests contain no paths or
timestamps, so reruns with the same inputs are byte-identical.
"""

from __future__ import annotations

import functools
import logging
import os
import sys
from pathlib import Path
from typing import Optional

import click

from extknow import corpus, docharvest, evalmetrics, resample, retrieval
from extknow._io import atomic_write_text, dump_json, sha256_file
from extknow.config import PipelineConfig, load_config
from extknow.errors import ConfigError, DataError, EmptyCollection, LengthMismatch
from extknow.pairs import dumps_pairs

log = logging.getLogger("extknow")

LOG_ENV = "EXTKNOW_LOG_LEVEL"
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


def _setup_logging(level: str) -> None:
    level = os.environ.get(LOG_ENV, level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def common_options(f):
    opts = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False),
                     help="TOML or JSON config file."),
        click.option("--out-dir", type=click.Path(file_okay=False)),
        click.option("--seed", type=click.IntRange(0, 2**64 - 1)),
        click.option("--target", type=click.Choice(retrieval.TARGETS)),
        click.option("--strategy", "strategy_name", type=click.Choice(["dist", "direct", "raw"])),
        click.option("--label", type=click.Choice(corpus.LABELS)),
        click.option("--k", type=click.IntRange(min=1)),
        click.option("--tau", type=float),
        click.option("--sample-size", type=click.IntRange(min=1)),
        click.option("--mined-top-k", type=click.IntRange(min=0)),
        click.option("--doc-dump", type=click.Path(dir_okay=False)),
        click.option("--ann-train", type=click.Path(dir_okay=False)),
        click.option("--ann-dev", type=click.Path(dir_okay=False)),
        click.option("--ann-test", type=click.Path(dir_okay=False)),
        click.option("--mined", type=click.Path(dir_okay=False)),
        click.option("--api-pairs", type=click.Path(dir_okay=False)),
        click.option("--sampled-pairs", type=click.Path(dir_okay=False)),
    ]
    for opt in reversed(opts):
        f = opt(f)

    @functools.wraps(f)
    def wrapper(config_path, **kwargs):
        names = ("out_dir", "seed", "target", "strategy_name", "label", "k", "tau",
                 "sample_size", "mined_top_k", "doc_dump", "ann_train", "ann_dev",
                 "ann_test", "mined", "api_pairs", "sampled_pairs")
        overrides = {n: kwargs.pop(n) for n in names}
        if overrides["tau"] is not None and overrides["tau"] == float("inf"):
            overrides["tau"] = "inf"
        cfg = load_config(config_path, overrides)
        _setup_logging(cfg.log_level)
        return f(cfg, **kwargs)

    return wrapper


def _write_outputs(out_dir: Path, files: dict[str, str]) -> dict[str, dict]:
    """Write every text atomically; on any failure remove what this call wrote."""
    written = []
    try:
        for name, text in files.items():
            atomic_write_text(out_dir / name, text)
            written.append(out_dir / name)
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return {name: {"sha256": sha256_file(out_dir / name)} for name in files}


def _input_digest(cfg: PipelineConfig, *names: str) -> dict[str, dict]:
    out = {}
    for name in names:
        p = getattr(cfg.paths, name)
        if p is not None and Path(p).is_file():
            out[name] = {"file": Path(p).name, "sha256": sha256_file(p)}
    return out


def _manifest(out_dir: Path, command: str, cfg: PipelineConfig, inputs: dict,
              outputs: dict, counts: dict, extra: Optional[dict] = None) -> None:
    body = {"command": command, "config": cfg.describe(), "inputs": inputs,
            "outputs": outputs, "counts": counts}
    if extra:
        body.update(extra)
    atomic_write_text(out_dir / f"{command}_manifest.json", dump_json(body))


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Build NL-to-code corpora from API documentation and evaluate code outputs."""


@cli.command()
@common_options
def harvest(cfg: PipelineConfig):
    """Emulate NL-code pairs from a JSONL documentation dump."""
    cfg.require("doc_dump")
    out = cfg.prepare_out_dir()
    stats = docharvest.HarvestStats()
    entries = docharvest.load_doc_dump(cfg.paths.doc_dump, stats)
    if not entries:
        raise EmptyCollection(f"{cfg.paths.doc_dump}: no documentation entries")
    pairs, run_stats = docharvest.harvest_with_stats(entries)
    run_stats.malformed_lines = stats.malformed_lines
    if not pairs:
        raise EmptyCollection("no pairs could be harvested")
    api_path = cfg.paths.resolved_api_pairs()
    outputs = _write_outputs(out, {
        api_path.name: dumps_pairs(pairs),
        "harvest_stats.json": dump_json(run_stats.as_dict()),
    })
    _manifest(out, "harvest", cfg, _input_digest(cfg, "doc_dump"), outputs,
              {"api_pairs": len(pairs)})
    click.echo(f"harvested {run_stats.distinct} distinct pairs from {run_stats.entries_read} "
               f"entries ({run_stats.entries_skipped} skipped)")


def _load_api_pairs(cfg: PipelineConfig) -> list:
    path = cfg.paths.resolved_api_pairs()
    if not path.is_file():
        raise ConfigError(f"api pairs not found at {path}; run harvest first")
    return corpus.load_pairs(path, "api")


@cli.command()
@common_options
def index(cfg: PipelineConfig):
    """Build and save a BM25 index over the harvested API pairs."""
    out = cfg.prepare_out_dir()
    api_pairs = _load_api_pairs(cfg)
    target = cfg.plan.get("target", "code")
    idx = retrieval.build_index(api_pairs, target)
    name = f"index_{target}.npz"
    tmp = out / f".{name}.tmp"
    try:
        retrieval.save_index(idx, tmp)
        os.replace(tmp, out / name)
    finally:
        tmp.unlink(missing_ok=True)
    _manifest(out, "index", cfg, {"api_pairs": {"sha256": sha256_file(cfg.paths.resolved_api_pairs())}},
              {name: {"sha256": sha256_file(out / name)}},
              {"doc_count": idx.doc_count, "vocabulary": len(idx.vocab)})
    click.echo(f"indexed {idx.doc_count} pairs ({len(idx.vocab)} terms, target={target})")


def _queries(cfg: PipelineConfig) -> list:
    cfg.require("ann_train", "mined")
    ann = corpus.load_pairs(cfg.paths.ann_train, "annotated")
    strategy = cfg.data_strategy()
    mined = corpus.select_top_mined(corpus.load_pairs(cfg.paths.mined, "mined"),
                                    strategy.mined_top_k)
    return ann + mined


@cli.command("resample")
@common_options
def resample_cmd(cfg: PipelineConfig):
    """Re-sample API pairs toward the annotated+mined query distribution."""
    plan = cfg.resample_plan()
    out = cfg.prepare_out_dir()
    api_pairs = _load_api_pairs(cfg)
    queries = _queries(cfg)
    idx = retrieval.build_index(api_pairs, plan.target)
    files = {}
    if plan.strategy == "dist":
        freq = resample.aggregate_freq(queries, idx, plan.k)
        plan = resample.make_plan(plan, freq)
        sampled = resample.sample_dist(plan, api_pairs)
        files["freq.tsv"] = freq.to_tsv()
    else:
        sampled = resample.sample_direct(queries, idx, api_pairs, plan.k)
    files[cfg.paths.resolved_sampled_pairs().name] = dumps_pairs(sampled)
    files["plan.json"] = dump_json({**{k: v for k, v in vars(plan).items() if k != "probabilities"},
                                    "tau": "inf" if plan.uniform else plan.tau})
    outputs = _write_outputs(out, files)
    _manifest(out, "resample", cfg, _input_digest(cfg, "ann_train", "mined"), outputs,
              {"queries": len(queries), "api_pairs": len(api_pairs), "sampled": len(sampled),
               "distinct_sampled": len({p.pair_id for p in sampled})})
    click.echo(f"{plan.strategy}: wrote {len(sampled)} pairs from {len(queries)} queries")


@cli.command("assemble")
@common_options
def assemble_cmd(cfg: PipelineConfig):
    """Write pretrain.jsonl and finetune.jsonl for a data strategy."""
    strategy = cfg.data_strategy()
    cfg.require("ann_train")
    out = cfg.prepare_out_dir()
    ann = corpus.load_pairs(cfg.paths.ann_train, "annotated")
    held = {}
    for split in ("ann_dev", "ann_test"):
        if getattr(cfg.paths, split) is not None:
            cfg.require(split)
            held[split] = corpus.load_pairs(getattr(cfg.paths, split), "annotated")
    mined = []
    if strategy.label != "man":
        cfg.require("mined")
        mined = corpus.load_pairs(cfg.paths.mined, "mined")
    api = []
    if strategy.api_source == "raw":
        api = _load_api_pairs(cfg)
    elif strategy.api_source in ("direct", "dist"):
        path = cfg.paths.resolved_sampled_pairs()
        if not path.is_file():
            raise ConfigError(f"re-sampled pairs not found at {path}; run resample first")
        api = corpus.load_pairs(path, "api")
    result = corpus.assemble(strategy, ann, mined, api,
                             dev=held.get("ann_dev", ()), test=held.get("ann_test", ()))
    outputs = _write_outputs(out, {
        "pretrain.jsonl": dumps_pairs(result["pretrain"]),
        "finetune.jsonl": dumps_pairs(result["finetune"]),
    })
    n_mined = min(strategy.mined_top_k, len(mined)) if strategy.label != "man" else 0
    counts = {"pretrain_count": len(result["pretrain"]),
              "finetune_count": len(result["finetune"]),
              "components": {"mined": n_mined, "api": len(api)}}
    _manifest(out, "assemble", cfg, _input_digest(cfg, "ann_train", "ann_dev", "ann_test", "mined"),
              outputs, counts)
    click.echo(f"{strategy.label}: pretrain={counts['pretrain_count']} "
               f"finetune={counts['finetune_count']}")


def _read_hypotheses(path) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [line.rstrip("\n") for line in fh]
    except OSError as exc:
        raise ConfigError(f"cannot read hypotheses {path}: {exc}") from exc


@cli.command("eval")
@common_options
@click.option("--hypotheses", required=True, type=click.Path(dir_okay=False),
              help="One generated code string per line, aligned with --ann-test.")
@click.option("--split-n", type=click.IntRange(min=1),
              help="Also report BLEU on the N most / N least API-frequent instances.")
@click.option("--stats-source", type=click.Path(dir_okay=False),
              help="Pair file whose snippets define API usage frequencies (default: --mined).")
def eval_cmd(cfg: PipelineConfig, hypotheses: str, split_n: Optional[int],
             stats_source: Optional[str]):
    """Score hypotheses against the test references."""
    cfg.require("ann_test")
    if not Path(hypotheses).is_file():
        raise ConfigError(f"hypotheses file not found: {hypotheses}")
    refs = [p.snippet for p in corpus.load_pairs(cfg.paths.ann_test, "annotated")]
    hyps = _read_hypotheses(hypotheses)
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    report = evalmetrics.evaluate(hyps, refs)
    if split_n is not None:
        source = stats_source or cfg.paths.mined
        if source is None:
            raise ConfigError("--split-n needs --stats-source or a mined path")
        src_pairs = corpus.load_pairs(source, "api")
        split = evalmetrics.frequency_split(refs, {"hyp": hyps}, [p.snippet for p in src_pairs],
                                            n=split_n)
        report.split_bleu = split.bleu["hyp"]
    out = cfg.prepare_out_dir()
    _write_outputs(out, {"eval_report.json": dump_json(report.to_dict())})
    click.echo(dump_json(report.to_dict()), nl=False)


@cli.command()
@common_options
@click.argument("pair_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--source", type=click.Choice(["annotated", "mined", "api"]), default="api")
@click.option("--top", type=click.IntRange(min=0), default=10)
def stats(cfg: PipelineConfig, pair_file: str, source: str, top: int):
    """Summarize a pair file: counts, distinct pairs and most-called APIs."""
    pairs = corpus.load_pairs(pair_file, source)
    calls = evalmetrics.api_usage_counts([p.snippet for p in pairs])
    body = {
        "pairs": len(pairs),
        "distinct": len({p.pair_id for p in pairs}),
        "distinct_apis": len(calls),
        "top_apis": [[name, n] for name, n in sorted(calls.items(), key=lambda x: (-x[1], x[0]))[:top]],
    }
    click.echo(dump_json(body), nl=False)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="extknow", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except DataError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
