"""Tokenization and an in-process BM25 index over NL-code pairs.

The index is built once over either the intents or the snippets of a
pair collection and is read-only afterwards. Scoring uses

    score(q, d) = sum over distinct query terms t of
        idf(t) * tf(t, d) * (k1 + 1) / (tf(t, d) + k1 * (1 - b + b * |d| / avgdl))

with the non-negative ``idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))``.
"""

from __future__ import annotations

import io
import json
import math
import re
import string
import zipfile
from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from extknow import _kernels
from extknow.errors import DataError, DuplicateDocId, EmptyCollection
from extknow.pairs import NLCodePair

TARGETS = ("intent", "code")
K1 = 1.2
B = 0.75

INDEX_FORMAT = "extknow-bm25"
INDEX_VERSION = 1

_NON_WORD = re.compile(r"\W+")
_PUNCT = string.punctuation


def tokenize(text: str, target: str) -> list[str]:
    """Lowercased tokens; code mode replaces every non-word character by a space."""
    text = text.lower()
    if target == "code":
        return _NON_WORD.sub(" ", text).split()
    if target == "intent":
        tokens = (tok.strip(_PUNCT) for tok in text.split())
        return [tok for tok in tokens if tok]
    raise ValueError(f"unknown target {target!r}")


def pair_text(pair: NLCodePair, target: str) -> str:
    return pair.snippet if target == "code" else pair.intent


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Bm25Index:
    target: str
    k1: float
    b: float
    doc_ids: tuple[str, ...]
    vocab: Mapping[str, int]
    indptr: np.ndarray
    post_doc: np.ndarray
    post_tf: np.ndarray
    doc_len: np.ndarray
    avg_doc_length: float
    idf: np.ndarray
    norm: np.ndarray

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    @property
    def doc_lengths(self) -> dict[str, int]:
        return dict(zip(self.doc_ids, self.doc_len.tolist()))

    def postings_for(self, term: str) -> list[tuple[str, int]]:
        t = self.vocab.get(term)
        if t is None:
            return []
        lo, hi = self.indptr[t], self.indptr[t + 1]
        return [(self.doc_ids[d], int(tf))
                for d, tf in zip(self.post_doc[lo:hi], self.post_tf[lo:hi])]

    @property
    def postings(self) -> dict[str, list[tuple[str, int]]]:
        return {term: self.postings_for(term) for term in self.vocab}

    def query_terms(self, text: str) -> list[int]:
        """Distinct in-vocabulary term ids of ``text`` in first-seen order."""
        seen: dict[int, None] = {}
        for tok in tokenize(text, self.target):
            t = self.vocab.get(tok)
            if t is not None:
                seen.setdefault(t)
        return list(seen)


def _assemble(target, k1, b, doc_ids, vocab, indptr, post_doc, post_tf, doc_len) -> Bm25Index:
    n = len(doc_ids)
    total = int(doc_len.sum())
    avgdl = total / n
    df = np.diff(indptr)
    idf = np.array([math.log(1 + (n - int(d) + 0.5) / (int(d) + 0.5)) for d in df],
                   dtype=np.float64)
    if avgdl > 0:
        norm = 1 - b + b * doc_len.astype(np.float64) / avgdl
    else:
        norm = np.full(n, 1 - b, dtype=np.float64)
    return Bm25Index(
        target=target, k1=float(k1), b=float(b), doc_ids=tuple(doc_ids),
        vocab=MappingProxyType(dict(vocab)),
        indptr=_readonly(indptr), post_doc=_readonly(post_doc),
        post_tf=_readonly(post_tf), doc_len=_readonly(doc_len),
        avg_doc_length=avgdl, idf=_readonly(idf), norm=_readonly(norm),
    )


def build_index(pairs: Sequence[NLCodePair], target: str = "code",
                k1: float = K1, b: float = B) -> Bm25Index:
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    if not pairs:
        raise EmptyCollection("cannot index an empty pair collection")
    if k1 <= 0 or not 0 <= b <= 1:
        raise ValueError(f"bad BM25 parameters k1={k1}, b={b}")
    by_id: dict[str, NLCodePair] = {}
    for p in pairs:
        if p.pair_id in by_id:
            raise DuplicateDocId(p.pair_id)
        by_id[p.pair_id] = p
    doc_ids = sorted(by_id)

    counts = [Counter(tokenize(pair_text(by_id[d], target), target)) for d in doc_ids]
    vocab_terms = sorted(set().union(*counts))
    vocab = {t: i for i, t in enumerate(vocab_terms)}

    postings: list[list[tuple[int, int]]] = [[] for _ in vocab_terms]
    for d, c in enumerate(counts):
        for term, tf in c.items():
            postings[vocab[term]].append((d, tf))
    indptr = np.zeros(len(vocab_terms) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(p) for p in postings])
    flat = [x for plist in postings for x in plist]
    post_doc = np.array([d for d, _ in flat], dtype=np.int64)
    post_tf = np.array([tf for _, tf in flat], dtype=np.float64)
    doc_len = np.array([sum(c.values()) for c in counts], dtype=np.int64)
    return _assemble(target, k1, b, doc_ids, vocab, indptr, post_doc, post_tf, doc_len)


def search_many(index: Bm25Index, queries: Sequence[str], k: int,
                use_numba=None) -> list[list[tuple[str, float]]]:
    """Top-``k`` hits for each query text, as ``(doc_id, score)`` lists."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q_indptr = [0]
    q_terms: list[int] = []
    for text in queries:
        q_terms.extend(index.query_terms(text))
        q_indptr.append(len(q_terms))
    ids, scores, counts = _kernels.topk_batch(
        q_indptr, q_terms, index.idf, index.indptr, index.post_doc, index.post_tf,
        index.norm, index.k1, k, use_numba=use_numba)
    doc_ids = index.doc_ids
    return [
        [(doc_ids[i], float(s)) for i, s in zip(ids[q, :m].tolist(), scores[q, :m].tolist())]
        for q, m in enumerate(counts.tolist())
    ]


def search(index: Bm25Index, query_text: str, k: int, use_numba=None) -> list[tuple[str, float]]:
    return search_many(index, [query_text], k, use_numba=use_numba)[0]


def save_index(index: Bm25Index, path) -> None:
    """Write an ``.npz`` archive with fixed entry timestamps (byte-reproducible)."""
    header = {"format": INDEX_FORMAT, "version": INDEX_VERSION,
              "target": index.target, "k1": index.k1, "b": index.b}
    terms = sorted(index.vocab, key=index.vocab.__getitem__)
    arrays = {
        "header": np.array([json.dumps(header, sort_keys=True)]),
        "terms": np.array(terms, dtype=str),
        "doc_ids": np.array(index.doc_ids, dtype=str),
        "indptr": index.indptr, "post_doc": index.post_doc,
        "post_tf": index.post_tf, "doc_len": index.doc_len,
    }
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        for name, arr in arrays.items():
            info = zipfile.ZipInfo(f"{name}.npy", date_time=(1980, 1, 1, 0, 0, 0))
            buf = io.BytesIO()
            np.lib.format.write_array(buf, np.ascontiguousarray(arr), allow_pickle=False)
            zf.writestr(info, buf.getvalue())


def load_index(path) -> Bm25Index:
    try:
        with np.load(path, allow_pickle=False) as z:
            header = json.loads(str(z["header"][0]))
            if header.get("format") != INDEX_FORMAT or header.get("version") != INDEX_VERSION:
                raise DataError(f"{path}: unsupported index file {header}")
            terms = z["terms"].tolist()
            return _assemble(header["target"], header["k1"], header["b"], z["doc_ids"].tolist(),
                             {t: i for i, t in enumerate(terms)}, z["indptr"].copy(),
                             z["post_doc"].copy(), z["post_tf"].copy(), z["doc_len"].copy())
    except (OSError, KeyError, ValueError, zipfile.BadZipFile) as exc:
        raise DataError(f"{path}: cannot read index: {exc}") from exc
