"""Compare the numba and numpy BM25 top-k kernels on a synthetic corpus.

    python benchmarks/bench_bm25.py --docs 20000 --queries 2000 --k 5
"""

import time

import click
import numpy as np

from extknow import _kernels
from extknow.pairs import NLCodePair
from extknow.retrieval import build_index, search_many


def synthetic(n_docs, n_queries, vocab, seed):
    rng = np.random.default_rng(seed)
    # Zipf-ish term draws so some postings lists are long
    words = [f"w{i}" for i in range(vocab)]
    weights = 1.0 / np.arange(1, vocab + 1)
    weights /= weights.sum()

    def text(lo, hi):
        n = int(rng.integers(lo, hi))
        return " ".join(words[i] for i in rng.choice(vocab, size=n, p=weights))

    docs = [NLCodePair(f"doc {i}", text(3, 15), "api") for i in range(n_docs)]
    queries = [text(2, 10) for _ in range(n_queries)]
    return docs, queries


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


@click.command()
@click.option("--docs", "n_docs", default=20_000, show_default=True)
@click.option("--queries", "n_queries", default=2_000, show_default=True)
@click.option("--vocab", default=5_000, show_default=True)
@click.option("--k", default=5, show_default=True)
@click.option("--repeat", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
def main(n_docs, n_queries, vocab, k, repeat, seed):
    docs, queries = synthetic(n_docs, n_queries, vocab, seed)
    idx = build_index(docs, "code")
    click.echo(f"{idx.doc_count} docs, {len(idx.vocab)} terms, {len(queries)} queries, k={k}")

    t_np, res_np = timed(lambda: search_many(idx, queries, k, use_numba=False), repeat)
    click.echo(f"numpy : {t_np * 1e3:9.1f} ms  ({len(queries) / t_np:,.0f} queries/s)")
    if not _kernels.NUMBA_AVAILABLE:
        click.echo("numba : not installed")
        return
    start = time.perf_counter()
    search_many(idx, queries[:1], k, use_numba=True)
    click.echo(f"numba warm-up (compile or cache load): {time.perf_counter() - start:.2f} s")
    t_nb, res_nb = timed(lambda: search_many(idx, queries, k, use_numba=True), repeat)
    click.echo(f"numba : {t_nb * 1e3:9.1f} ms  ({len(queries) / t_nb:,.0f} queries/s)")
    click.echo(f"speedup: {t_np / t_nb:.1f}x, identical results: {res_np == res_nb}")


if __name__ == "__main__":
    main()
