"""BM25 scoring and top-k selection over a CSR inverted index.

Two interchangeable implementations: numba ``@njit`` kernels and a plain
numpy path. Set ``EXTKNOW_NUMBA=0`` to force numpy (also used when numba
is not importable). Both evaluate the per-term contribution with the
same floating-point expression in the same term order, so they agree
bit for bit.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

NUMBA_AVAILABLE = numba is not None


def numba_enabled() -> bool:
    return NUMBA_AVAILABLE and os.environ.get("EXTKNOW_NUMBA", "1").strip().lower() not in (
        "0", "false", "no", "off")


def _topk_batch_numpy(q_indptr, q_terms, idf, indptr, post_doc, post_tf, norm, k1, k):
    n_queries = len(q_indptr) - 1
    out_ids = np.full((n_queries, k), -1, dtype=np.int64)
    out_scores = np.zeros((n_queries, k), dtype=np.float64)
    out_counts = np.zeros(n_queries, dtype=np.int64)
    scores = np.zeros(len(norm), dtype=np.float64)
    for q in range(n_queries):
        touched = []
        for j in range(q_indptr[q], q_indptr[q + 1]):
            t = q_terms[j]
            lo, hi = indptr[t], indptr[t + 1]
            docs = post_doc[lo:hi]
            tf = post_tf[lo:hi]
            scores[docs] += idf[t] * (tf * (k1 + 1.0)) / (tf + k1 * norm[docs])
            touched.append(docs)
        if not touched:
            continue
        hit = np.unique(np.concatenate(touched))
        cand = hit[scores[hit] > 0.0]
        order = np.lexsort((cand, -scores[cand]))[:k]
        m = len(order)
        out_ids[q, :m] = cand[order]
        out_scores[q, :m] = scores[cand[order]]
        out_counts[q] = m
        scores[hit] = 0.0
    return out_ids, out_scores, out_counts


def _topk_batch_py(q_indptr, q_terms, idf, indptr, post_doc, post_tf, norm, k1, k):
    n_queries = len(q_indptr) - 1
    n_docs = len(norm)
    out_ids = np.full((n_queries, k), -1, dtype=np.int64)
    out_scores = np.zeros((n_queries, k), dtype=np.float64)
    out_counts = np.zeros(n_queries, dtype=np.int64)
    scores = np.zeros(n_docs, dtype=np.float64)
    touched = np.empty(n_docs, dtype=np.int64)
    best_s = np.empty(k, dtype=np.float64)
    best_i = np.empty(k, dtype=np.int64)
    for q in range(n_queries):
        n_touched = 0
        for j in range(q_indptr[q], q_indptr[q + 1]):
            t = q_terms[j]
            w = idf[t]
            for p in range(indptr[t], indptr[t + 1]):
                d = post_doc[p]
                tf = post_tf[p]
                if scores[d] == 0.0:
                    touched[n_touched] = d
                    n_touched += 1
                scores[d] += w * (tf * (k1 + 1.0)) / (tf + k1 * norm[d])
        m = 0
        for x in range(n_touched):
            d = touched[x]
            s = scores[d]
            scores[d] = 0.0
            if s <= 0.0:
                continue
            # insertion into a (score desc, doc asc) ordered buffer
            if m == k:
                ls, li = best_s[k - 1], best_i[k - 1]
                if s < ls or (s == ls and d > li):
                    continue
                pos = k - 1
            else:
                pos = m
                m += 1
            while pos > 0 and (best_s[pos - 1] < s or (best_s[pos - 1] == s and best_i[pos - 1] > d)):
                best_s[pos] = best_s[pos - 1]
                best_i[pos] = best_i[pos - 1]
                pos -= 1
            best_s[pos] = s
            best_i[pos] = d
        for x in range(m):
            out_ids[q, x] = best_i[x]
            out_scores[q, x] = best_s[x]
        out_counts[q] = m
    return out_ids, out_scores, out_counts


if NUMBA_AVAILABLE:
    _topk_batch_jit = numba.njit(cache=True, nogil=True)(_topk_batch_py)
else:  # pragma: no cover
    _topk_batch_jit = None


def topk_batch(q_indptr, q_terms, idf, indptr, post_doc, post_tf, norm, k1, k,
               use_numba=None):
    """Top-``k`` documents for every query in a CSR batch.

    Returns ``(ids, scores, counts)``; row ``q`` holds ``counts[q]`` valid
    entries ordered by score descending then document index ascending.
    Only documents with positive score are returned.
    """
    if use_numba is None:
        use_numba = numba_enabled()
    args = (np.asarray(q_indptr, dtype=np.int64), np.asarray(q_terms, dtype=np.int64),
            idf, indptr, post_doc, post_tf, norm, float(k1), int(k))
    if use_numba:
        return _topk_batch_jit(*args)
    return _topk_batch_numpy(*args)
