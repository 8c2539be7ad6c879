"""Loading pair files and assembling pre-training / fine-tuning corpora."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from extknow._io import iter_jsonl
from extknow.errors import (
    DataError,
    LeakageError,
    MalformedRecord,
    MissingConfidence,
    StrategyMismatch,
)
from extknow.pairs import SOURCES, NLCodePair

log = logging.getLogger(__name__)

LABELS = ("man", "man_mine", "man_mine_api")
API_SOURCES = ("none", "raw", "direct", "dist")
DEFAULT_MINED_TOP_K = 100_000
MAX_MALFORMED_FRACTION = 0.01


@dataclass(frozen=True)
class DataStrategy:
    label: str = "man_mine_api"
    mined_top_k: int = DEFAULT_MINED_TOP_K
    api_source: str = "dist"

    def __post_init__(self):
        if self.label not in LABELS:
            raise StrategyMismatch(f"unknown strategy label {self.label!r}")
        if self.api_source not in API_SOURCES:
            raise StrategyMismatch(f"unknown api source {self.api_source!r}")
        if (self.api_source != "none") != (self.label == "man_mine_api"):
            raise StrategyMismatch(
                f"api_source={self.api_source!r} is incompatible with label={self.label!r}")
        if self.mined_top_k < 0:
            raise StrategyMismatch("mined_top_k must be >= 0")


@dataclass
class LoadReport:
    path: str
    lines: int = 0
    loaded: int = 0
    malformed: list[int] = field(default_factory=list)


def _record_to_pair(rec, source: str) -> NLCodePair:
    if not isinstance(rec, dict):
        raise ValueError("not a JSON object")
    intent = rec.get("rewritten_intent") or rec.get("intent")
    snippet = rec.get("snippet")
    if not isinstance(intent, str) or not isinstance(snippet, str):
        raise ValueError("intent/snippet missing")
    confidence = None
    if source == "mined":
        confidence = rec.get("confidence", rec.get("prob"))
        if confidence is None:
            raise ValueError("mined record without confidence")
        confidence = float(confidence)
    return NLCodePair(intent.strip(), snippet, source, confidence)


def _raw_records(path: Path):
    """Yield ``(line_number, record)``; JSON-array files (CoNaLa's layout) are accepted too."""
    with open(path, encoding="utf-8") as fh:
        head = fh.read(4096).lstrip()
    if head.startswith("["):
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        yield from enumerate(data, 1)
    else:
        yield from iter_jsonl(path)


def load_pairs(path, source: str, report: Optional[LoadReport] = None) -> list[NLCodePair]:
    """Load a pair file, tagging every pair with ``source``.

    Malformed records are skipped and their line numbers kept in
    ``report``; more than 1% malformed raises :class:`MalformedRecord`.
    ``pair_id`` is always recomputed from content.
    """
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}")
    path = Path(path)
    if report is None:
        report = LoadReport(str(path))
    pairs = []
    try:
        for lineno, rec in _raw_records(path):
            report.lines += 1
            try:
                pairs.append(_record_to_pair(rec, source))
            except (TypeError, ValueError) as exc:
                log.warning("%s:%d: skipping malformed record (%s)", path, lineno, exc)
                report.malformed.append(lineno)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if report.lines and len(report.malformed) > MAX_MALFORMED_FRACTION * report.lines:
        raise MalformedRecord(
            f"{path}: {len(report.malformed)} of {report.lines} records malformed "
            f"(lines {report.malformed[:10]})")
    report.loaded = len(pairs)
    return pairs


def select_top_mined(mined: Sequence[NLCodePair], top_k: int = DEFAULT_MINED_TOP_K) -> list[NLCodePair]:
    for p in mined:
        if p.confidence is None:
            raise MissingConfidence(f"pair {p.pair_id} has no confidence")
    ranked = sorted(mined, key=lambda p: (-p.confidence, p.pair_id))
    return ranked[:top_k]


def check_leakage(pretrain: Sequence[NLCodePair], held_out: Sequence[NLCodePair], name: str):
    held = {p.pair_id for p in held_out}
    leaked = sorted({p.pair_id for p in pretrain} & held)
    if leaked:
        raise LeakageError(f"{len(leaked)} {name} pair(s) found in pretrain: {leaked[:5]}")


def assemble(strategy: DataStrategy, ann_train: Sequence[NLCodePair],
             mined: Sequence[NLCodePair] = (), api_pairs: Sequence[NLCodePair] = (),
             dev: Sequence[NLCodePair] = (), test: Sequence[NLCodePair] = ()) -> dict[str, list[NLCodePair]]:
    """Build ``{"pretrain": ..., "finetune": ...}`` for a data strategy.

    ``api_pairs`` is taken as given: the distinct harvested set for
    ``raw``, or the output of the direct/dist re-sampling step.
    """
    pretrain: list[NLCodePair] = []
    if strategy.label in ("man_mine", "man_mine_api"):
        pretrain.extend(select_top_mined(mined, strategy.mined_top_k))
    if strategy.label == "man_mine_api":
        if not api_pairs:
            raise StrategyMismatch(f"{strategy.label}/{strategy.api_source} needs api pairs")
        pretrain.extend(api_pairs)
    check_leakage(pretrain, dev, "dev")
    check_leakage(pretrain, test, "test")
    return {"pretrain": pretrain, "finetune": list(ann_train)}
