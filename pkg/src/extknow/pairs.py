"""The NL-code pair record and its JSONL encoding."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

SOURCES = ("annotated", "mined", "api")


def make_pair_id(intent: str, snippet: str) -> str:
    h = hashlib.sha256()
    h.update(intent.encode("utf-8"))
    h.update(b"\x00")
    h.update(snippet.encode("utf-8"))
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class NLCodePair:
    intent: str
    snippet: str
    source: str
    confidence: Optional[float] = None
    pair_id: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.intent or not self.snippet:
            raise ValueError("intent and snippet must be non-empty")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.source == "mined":
            if self.confidence is None:
                raise ValueError("mined pairs need a confidence")
            if not 0.0 <= self.confidence <= 1.0:
                raise ValueError(f"confidence {self.confidence} outside [0, 1]")
        elif self.confidence is not None:
            raise ValueError(f"{self.source} pairs carry no confidence")
        object.__setattr__(self, "pair_id", make_pair_id(self.intent, self.snippet))

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "intent": self.intent,
            "snippet": self.snippet,
            "source": self.source,
        }
        if self.confidence is not None:
            rec["confidence"] = self.confidence
        rec["pair_id"] = self.pair_id
        return rec


def dumps_pairs(pairs: Iterable[NLCodePair]) -> str:
    """Serialize pairs to JSONL text with a fixed field order."""
    lines = [json.dumps(p.to_record(), ensure_ascii=False) for p in pairs]
    return "".join(line + "\n" for line in lines)
