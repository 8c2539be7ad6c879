"""Re-sample documentation pairs toward the distribution of real queries.

Every annotated or mined pair is used as a query against the
documentation index; each of its top-``k`` hits gets one count. Counts
are flattened with a temperature ``tau`` (``P(y) ~ freq(y) ** (1/tau)``)
and documentation pairs are then drawn from that distribution.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from extknow.errors import AllZeroFrequencies, ConfigError
from extknow.pairs import NLCodePair
from extknow.retrieval import TARGETS, Bm25Index, pair_text, search_many

STRATEGIES = ("dist", "direct")
DIRECT_K = 5


@dataclass(frozen=True)
class FreqTable:
    counts: Mapping[str, int]
    total_queries: int

    def to_tsv(self) -> str:
        lines = ["pair_id\tcount"]
        lines += [f"{pid}\t{c}" for pid, c in self.counts.items()]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ResamplePlan:
    k: int = 1
    tau: float = 2.0
    target: str = "code"
    strategy: str = "dist"
    sample_size: Optional[int] = None
    seed: int = 0
    uniform: bool = False
    probabilities: Optional[Mapping[str, float]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not self.uniform and not (self.tau >= 1):
            raise ConfigError(f"tau must be >= 1, got {self.tau}")
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {TARGETS}, got {self.target!r}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.sample_size is not None and self.sample_size < 1:
            raise ConfigError(f"sample_size must be >= 1, got {self.sample_size}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")

    def to_json(self) -> str:
        d = asdict(self)
        d.pop("probabilities")
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_mapping(cls, d: Mapping) -> "ResamplePlan":
        known = {f for f in cls.__dataclass_fields__ if f != "probabilities"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown plan fields: {sorted(unknown)}")
        d = dict(d)
        if d.get("tau") in ("inf", "infinity", math.inf):
            d["tau"], d["uniform"] = math.inf, True
        return cls(**d)


def aggregate_freq(queries: Sequence[NLCodePair], api_index: Bm25Index, k: int,
                   target: Optional[str] = None) -> FreqTable:
    if target is not None and target != api_index.target:
        raise ConfigError(f"index target {api_index.target!r} does not match {target!r}")
    counts = dict.fromkeys(api_index.doc_ids, 0)
    texts = [pair_text(q, api_index.target) for q in queries]
    for hits in search_many(api_index, texts, k):
        for doc_id, _ in hits:
            counts[doc_id] += 1
    return FreqTable(counts, len(queries))


def smooth(freq: FreqTable, tau: float, uniform: bool = False) -> dict[str, float]:
    ids = list(freq.counts)
    f = np.array([freq.counts[i] for i in ids], dtype=np.float64)
    if not (f > 0).any():
        raise AllZeroFrequencies("no documentation pair was ever retrieved")
    if uniform or math.isinf(tau):
        w = (f > 0).astype(np.float64)
    else:
        if tau < 1:
            raise ValueError(f"tau must be >= 1, got {tau}")
        w = f ** (1.0 / tau)
    total = math.fsum(w.tolist())
    return dict(zip(ids, (w / total).tolist()))


def make_plan(plan: ResamplePlan, freq: FreqTable) -> ResamplePlan:
    return replace(plan, probabilities=smooth(freq, plan.tau, plan.uniform))


def draw_indices(probabilities: Sequence[float], size: int, seed: int) -> np.ndarray:
    """Inverse-CDF draws with replacement from a PCG64 stream.

    Zero-probability categories are never returned: ``searchsorted`` with
    ``side='right'`` steps past flat stretches of the CDF.
    """
    p = np.asarray(probabilities, dtype=np.float64)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(size)
    return np.searchsorted(cdf, u, side="right")


def sample_dist(plan: ResamplePlan, api_pairs: Sequence[NLCodePair]) -> list[NLCodePair]:
    if plan.probabilities is None:
        raise ConfigError("plan has no probabilities; call make_plan first")
    size = plan.sample_size if plan.sample_size is not None else len(api_pairs)
    p = [plan.probabilities.get(pair.pair_id, 0.0) for pair in api_pairs]
    idx = draw_indices(p, size, plan.seed)
    return [api_pairs[i] for i in idx.tolist()]


def sample_direct(queries: Sequence[NLCodePair], api_index: Bm25Index,
                  api_pairs: Sequence[NLCodePair], k: int = DIRECT_K) -> list[NLCodePair]:
    by_id = {p.pair_id: p for p in api_pairs}
    texts = [pair_text(q, api_index.target) for q in queries]
    out = []
    for hits in search_many(api_index, texts, k):
        out.extend(by_id[doc_id] for doc_id, _ in hits)
    return out


def entropy(probabilities) -> float:
    p = np.asarray(list(probabilities), dtype=np.float64)
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())
