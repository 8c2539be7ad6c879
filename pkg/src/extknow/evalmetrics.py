"""Corpus BLEU and token-level accuracy for generated code.

BLEU works on a surface tokenization of code: identifiers and numbers
stay whole, every other non-space character is its own token, and the
body of a string literal is a single token between its quote tokens.

API calls and variable names are found lexically rather than through a
parser, so malformed hypotheses still get scored:

    >>> sorted(extract_api_tokens("random.choice(os.listdir('C:\\\\'))"))
    ['os.listdir', 'random.choice']
"""

from __future__ import annotations

import keyword
import math
import re
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Mapping, Optional, Sequence

from extknow.errors import EmptyCorpus, InsufficientInstances, LengthMismatch

_STRING_BODY = r"""(?P<q>'''|\"\"\"|'|")(?P<body>(?:\\.|(?!(?P=q))[^\\])*)(?P=q)"""
_BLEU_TOKEN = re.compile(rf"(?P<str>{_STRING_BODY})|(?P<word>\w+)|(?P<punct>\S)", re.S)
_LITERAL = re.compile(rf"(?<!\w)[rRbBuUfF]{{0,2}}{_STRING_BODY}", re.S)
_COMMENT = re.compile(r"#[^\n]*")
_CALL_CHAIN = re.compile(r"(?<!\w)([A-Za-z_]\w*(?:\s*\.\s*[A-Za-z_]\w*)*)\s*\(")
_NAME = re.compile(r"(?<![\w.])[A-Za-z_]\w*")
_KWARG_NAME = re.compile(r"\s*=(?!=)")
_KEYWORDS = frozenset(keyword.kwlist)
_DEFINER = re.compile(r"(?<!\w)(?:def|class)$")

MAX_N = 4


def tokenize_code(code: str) -> list[str]:
    tokens = []
    for m in _BLEU_TOKEN.finditer(code):
        if m.group("str") is not None:
            q = m.group("q")
            tokens.append(q)
            if m.group("body"):
                tokens.append(m.group("body"))
            tokens.append(q)
        else:
            tokens.append(m.group())
    return tokens


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_stats(hyp: Sequence[str], ref: Sequence[str], max_n: int = MAX_N):
    """Clipped matches and totals per order, plus both lengths."""
    matches, totals = [], []
    for n in range(1, max_n + 1):
        h, r = _ngrams(hyp, n), _ngrams(ref, n)
        matches.append(sum(min(c, r[g]) for g, c in h.items()))
        totals.append(max(len(hyp) - n + 1, 0))
    return matches, totals, len(hyp), len(ref)


def bleu_from_stats(matches, totals, hyp_len, ref_len) -> float:
    # orders with no possible n-grams (very short output) drop out of the mean
    orders = [(m, t) for m, t in zip(matches, totals) if t > 0]
    if hyp_len == 0 or any(m == 0 for m, _ in orders):
        return 0.0
    log_p = sum(math.log(m / t) for m, t in orders) / len(orders)
    bp = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len)
    return 100.0 * bp * math.exp(log_p)


def corpus_bleu(hypotheses: Sequence[str], references: Sequence[str], max_n: int = MAX_N) -> float:
    """Corpus BLEU-4 in [0, 100], unsmoothed.

    Counts are summed over the whole corpus before taking precisions, so
    any order with zero total matches makes the score 0. An order with no
    n-grams at all (every hypothesis shorter than n) is left out.
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not references:
        raise EmptyCorpus("no sentences to score")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        m, t, hl, rl = bleu_stats(tokenize_code(hyp), tokenize_code(ref), max_n)
        matches = [a + b for a, b in zip(matches, m)]
        totals = [a + b for a, b in zip(totals, t)]
        hyp_len += hl
        ref_len += rl
    return bleu_from_stats(matches, totals, hyp_len, ref_len)


def sentence_bleu(hypothesis: str, reference: str, max_n: int = MAX_N) -> float:
    return bleu_from_stats(*bleu_stats(tokenize_code(hypothesis), tokenize_code(reference), max_n))


def _strip_literals(code: str) -> str:
    return _COMMENT.sub("", _LITERAL.sub('""', code))


def _calls(code: str) -> list[tuple[int, str]]:
    out = []
    for m in _CALL_CHAIN.finditer(code):
        chain = re.sub(r"\s+", "", m.group(1))
        if chain in _KEYWORDS:
            continue
        before = code[:m.start()].rstrip()
        if _DEFINER.search(before):
            continue
        if before.endswith("."):
            chain = "." + chain
        out.append((m.start(), chain))
    return out


def extract_api_tokens(snippet: str) -> set[str]:
    """Dotted names called in ``snippet``; receiver-less chained calls become ``.name``."""
    return {chain for _, chain in _calls(_strip_literals(snippet))}


def extract_variable_tokens(snippet: str) -> set[str]:
    """Identifiers that are not call heads, keywords, keyword-argument names or literals."""
    code = _strip_literals(snippet)
    call_starts = {start for start, _ in _calls(code)}
    names = set()
    for m in _NAME.finditer(code):
        name = m.group()
        if m.start() in call_starts or name in _KEYWORDS:
            continue
        if _KWARG_NAME.match(code, m.end()) and code[:m.start()].rstrip().endswith(("(", ",")):
            continue
        names.add(name)
    return names


_EXTRACTORS = {"api_call": extract_api_tokens, "variable": extract_variable_tokens}


def token_accuracy(hyps: Sequence[str], refs: Sequence[str], kind: str = "api_call") -> float:
    """Mean per-instance recall of reference tokens of ``kind``.

    Instances whose reference yields no tokens are left out; with none
    left the result is 1.0 (nothing to get wrong).
    """
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    extract = _EXTRACTORS[kind]
    scores = []
    for h, r in zip(hyps, refs):
        ref_tokens = extract(r)
        if not ref_tokens:
            continue
        scores.append(len(extract(h) & ref_tokens) / max(1, len(ref_tokens)))
    if not scores:
        return 1.0
    return math.fsum(scores) / len(scores)


def api_usage_counts(corpus: Sequence[str], known_apis: Optional[set[str]] = None) -> Counter:
    """Number of snippets in ``corpus`` that call each API."""
    counts: Counter = Counter()
    for code in corpus:
        counts.update(_filter_known(extract_api_tokens(code), known_apis))
    return counts


def _filter_known(tokens: set[str], known_apis: Optional[set[str]]) -> set[str]:
    if known_apis is None:
        return tokens
    kept = set()
    for t in tokens:
        if t in known_apis or (t.startswith(".") and any(k.endswith(t) for k in known_apis)):
            kept.add(t)
    return kept


def instance_frequencies(refs: Sequence[str], usage: Mapping[str, int],
                         known_apis: Optional[set[str]] = None) -> list[float]:
    out = []
    for code in refs:
        apis = sorted(_filter_known(extract_api_tokens(code), known_apis))
        out.append(math.fsum(usage.get(a, 0) for a in apis) / len(apis) if apis else 0.0)
    return out


@dataclass
class FrequencySplit:
    high: list[int]
    low: list[int]
    frequencies: list[float]
    bleu: dict[str, dict[str, float]]


def frequency_split(refs: Sequence[str], hyp_sets: Mapping[str, Sequence[str]],
                    api_stats_source: Sequence[str], n: int = 200,
                    known_apis: Optional[set[str]] = None) -> FrequencySplit:
    """BLEU on the ``n`` most and ``n`` least API-frequent test instances.

    Instances are ranked by the mean corpus usage count of the APIs
    their reference calls, descending, ties by position.
    """
    if len(refs) < 2 * n:
        raise InsufficientInstances(f"need {2 * n} instances, have {len(refs)}")
    for name, hyps in hyp_sets.items():
        if len(hyps) != len(refs):
            raise LengthMismatch(f"hypothesis set {name!r} has {len(hyps)} lines, expected {len(refs)}")
    usage = api_usage_counts(api_stats_source, known_apis)
    freqs = instance_frequencies(refs, usage, known_apis)
    order = sorted(range(len(refs)), key=lambda i: (-freqs[i], i))
    high, low = sorted(order[:n]), sorted(order[-n:])
    bleu = {}
    for name, hyps in hyp_sets.items():
        bleu[name] = {
            "high_freq": corpus_bleu([hyps[i] for i in high], [refs[i] for i in high]),
            "low_freq": corpus_bleu([hyps[i] for i in low], [refs[i] for i in low]),
        }
    return FrequencySplit(high, low, freqs, bleu)


@dataclass
class EvalReport:
    corpus_bleu: float
    api_token_accuracy: float
    var_token_accuracy: float
    split_bleu: Optional[dict[str, float]] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["split_bleu"] is None:
            del d["split_bleu"]
        return d


def evaluate(hyps: Sequence[str], refs: Sequence[str]) -> EvalReport:
    return EvalReport(
        corpus_bleu=corpus_bleu(hyps, refs),
        api_token_accuracy=token_accuracy(hyps, refs, "api_call"),
        var_token_accuracy=token_accuracy(hyps, refs, "variable"),
    )
