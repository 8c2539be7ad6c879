"""Turn documentation entries into NL-code pairs.

Each entry's prototype is expanded into emulated usages, and each usage
gets a short intent built from the entry's prose: the first sentence,
then the first sentence naming each argument in the snippet. Arguments
the prose never names are listed in a closing sentence, so every
argument in the code also appears in the intent.
"""

from __future__ import annotations

import logging
import re
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from extknow._io import iter_jsonl
from extknow.errors import EmptyDescription, MalformedSignature
from extknow.pairs import NLCodePair
from extknow.sigparse import (
    Signature,
    UsageSnippet,
    enumerate_usages,
    parse_signature,
    render_usage,
)

log = logging.getLogger(__name__)

DOC_KINDS = {"function": "function", "class": "constructor", "method": "method"}

_ABBREVIATIONS = ("e.g.", "i.e.", "cf.", "vs.")
_SENTENCE_END = re.compile(r"[.?!][\"')\]]*(?=\s)")
_PARAGRAPH_BREAK = re.compile(r"\n[ \t]*\n")


@dataclass(frozen=True)
class DocEntry:
    module: str
    kind: str
    signature_text: str
    description: str
    owner_class: Optional[str] = None

    def __post_init__(self):
        if self.kind not in DOC_KINDS:
            raise ValueError(f"unknown doc entry kind {self.kind!r}")
        if not self.signature_text.strip():
            raise ValueError("empty signature_text")
        if self.kind == "method" and not self.owner_class:
            raise ValueError("method entries need owner_class")

    def signature(self) -> Signature:
        return parse_signature(self.signature_text, DOC_KINDS[self.kind], self.owner_class)


@dataclass
class HarvestStats:
    entries_read: int = 0
    entries_skipped: int = 0
    pairs_skipped: int = 0
    pairs_emitted: int = 0
    distinct: int = 0
    malformed_lines: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def split_sentences(description: str) -> list[str]:
    sentences = []
    for para in _PARAGRAPH_BREAK.split(description):
        text = " ".join(para.split())
        start = 0
        for m in _SENTENCE_END.finditer(text):
            head = text[start:m.end()]
            if head.lower().endswith(_ABBREVIATIONS):
                continue
            sentences.append(head.strip())
            start = m.end()
        tail = text[start:].strip()
        if tail:
            sentences.append(tail)
    return [s for s in sentences if s]


def mentions(sentence: str, name: str) -> bool:
    return re.search(rf"(?<![A-Za-z0-9_]){re.escape(name)}(?![A-Za-z0-9_])", sentence) is not None


def build_intent(description: str, usage: UsageSnippet) -> str:
    sentences = split_sentences(description)
    if not sentences:
        raise EmptyDescription("description has no sentences")
    chosen = [0]
    missing = []
    for arg in usage.included_args:
        hit = next((i for i, s in enumerate(sentences) if mentions(s, arg)), None)
        if hit is None:
            missing.append(arg)
        elif hit not in chosen:
            chosen.append(hit)
    parts = [sentences[i] for i in chosen]
    if missing:
        parts.append("With arguments " + ", ".join(f"'{a}'" for a in missing) + ".")
    return " ".join(parts)


def harvest_with_stats(entries: Iterable[DocEntry]) -> tuple[list[NLCodePair], HarvestStats]:
    stats = HarvestStats()
    seen: set[str] = set()
    out: list[NLCodePair] = []
    for entry in entries:
        stats.entries_read += 1
        try:
            sig = entry.signature()
        except MalformedSignature as exc:
            log.warning("skipping %s: %s", entry.signature_text, exc)
            stats.entries_skipped += 1
            continue
        for usage in enumerate_usages(sig):
            try:
                intent = build_intent(entry.description, usage)
            except EmptyDescription:
                stats.pairs_skipped += 1
                continue
            pair = NLCodePair(intent, render_usage(sig, usage), "api")
            stats.pairs_emitted += 1
            if pair.pair_id in seen:
                continue
            seen.add(pair.pair_id)
            out.append(pair)
    stats.distinct = len(out)
    return out, stats


def harvest(entries: Iterable[DocEntry]) -> list[NLCodePair]:
    return harvest_with_stats(entries)[0]


def entry_from_record(rec: dict) -> DocEntry:
    return DocEntry(
        module=str(rec.get("module", "")),
        kind=rec["kind"],
        signature_text=rec["signature_text"],
        description=rec.get("description") or "",
        owner_class=rec.get("owner_class") or None,
    )


def load_doc_dump(path, stats: Optional[HarvestStats] = None) -> list[DocEntry]:
    """Read a JSONL doc dump; undecodable or invalid lines are recorded and skipped."""
    entries = []
    for lineno, rec in iter_jsonl(path):
        try:
            if not isinstance(rec, dict):
                raise ValueError("not a JSON object")
            entries.append(entry_from_record(rec))
        except (KeyError, TypeError, ValueError) as exc:
            log.warning("%s:%d: bad doc entry (%s)", path, lineno, exc)
            if stats is not None:
                stats.malformed_lines.append(lineno)
    return entries


def entries_to_records(entries: Sequence[DocEntry]) -> list[dict]:
    return [
        {"module": e.module, "kind": e.kind, "owner_class": e.owner_class,
         "signature_text": e.signature_text, "description": e.description}
        for e in entries
    ]
