"""Automatic evaluation: corpus BLEU-3, ROUGE-L F1 and a lightweight METEOR.

The METEOR variant uses exact and Porter-stem matching stages only (no
synonym or paraphrase resources) and is reported as "meteor_lite" everywhere
to avoid claiming parity with the official scorer. All scores are on a
0..100 scale.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .analysis import is_word_token, tokenize
from .corpus import Document
from .stemmer import stem


@dataclass(frozen=True)
class EvalReport:
    bleu3: float
    rouge_l_f: float
    meteor_lite: float
    mean_len_words: float

    def to_dict(self) -> dict:
        return {
            "bleu3": self.bleu3,
            "rouge_l_f": self.rouge_l_f,
            "meteor_lite": self.meteor_lite,
            "mean_len_words": self.mean_len_words,
        }


def _check_corpus(hypotheses: Sequence[str], references: Sequence[str]) -> None:
    if not hypotheses:
        raise ValueError("empty corpus")
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis and reference counts differ")


def _words(text: str) -> list[str]:
    return [t.normalized for t in tokenize(text)]


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu3(hypotheses: Sequence[str], references: Sequence[str]) -> float:
    """Corpus BLEU over n in {1,2,3}, uniform weights, clipped modified
    precision, brevity penalty exp(1 - r/c) for short hypotheses. No
    smoothing: a zero n-gram match short-circuits to 0."""
    _check_corpus(hypotheses, references)
    matched = [0, 0, 0]
    total = [0, 0, 0]
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = _words(hyp)
        ref_tokens = _words(ref)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in (1, 2, 3):
            hyp_ngrams = _ngrams(hyp_tokens, n)
            ref_ngrams = _ngrams(ref_tokens, n)
            matched[n - 1] += sum(
                min(count, ref_ngrams[gram]) for gram, count in hyp_ngrams.items()
            )
            total[n - 1] += sum(hyp_ngrams.values())
    if any(t == 0 for t in total) or any(m == 0 for m in matched):
        return 0.0
    log_precision = math.fsum(
        math.log(m / t) for m, t in zip(matched, total)
    ) / 3.0
    brevity = math.exp(1.0 - ref_len / hyp_len) if hyp_len < ref_len else 1.0
    return 100.0 * math.exp(log_precision) * brevity


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[-1]))
        prev = curr
    return prev[-1]


def rouge_l_f(hypotheses: Sequence[str], references: Sequence[str]) -> float:
    """Mean per-pair F1 of token-level longest common subsequence."""
    _check_corpus(hypotheses, references)
    scores = []
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = _words(hyp)
        ref_tokens = _words(ref)
        lcs = _lcs_length(hyp_tokens, ref_tokens)
        if lcs == 0:
            scores.append(0.0)
            continue
        p = lcs / len(hyp_tokens)
        r = lcs / len(ref_tokens)
        scores.append(2.0 * p * r / (p + r))
    return 100.0 * math.fsum(scores) / len(scores)


def _align(hyp_tokens: list[str], ref_tokens: list[str]) -> list[tuple[int, int]]:
    """Greedy exact-match alignment, then Porter-stem matching on leftovers."""
    matches: list[tuple[int, int]] = []
    ref_used = [False] * len(ref_tokens)
    hyp_used = [False] * len(hyp_tokens)
    for hi, tok in enumerate(hyp_tokens):
        for ri, ref_tok in enumerate(ref_tokens):
            if not ref_used[ri] and tok == ref_tok:
                matches.append((hi, ri))
                ref_used[ri] = True
                hyp_used[hi] = True
                break
    hyp_stems = [stem(t) for t in hyp_tokens]
    ref_stems = [stem(t) for t in ref_tokens]
    for hi, tok_stem in enumerate(hyp_stems):
        if hyp_used[hi]:
            continue
        for ri, ref_stem in enumerate(ref_stems):
            if not ref_used[ri] and tok_stem == ref_stem:
                matches.append((hi, ri))
                ref_used[ri] = True
                break
    matches.sort()
    return matches


def _count_chunks(matches: list[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for hi, ri in matches:
        if prev is None or hi != prev[0] + 1 or ri != prev[1] + 1:
            chunks += 1
        prev = (hi, ri)
    return chunks


def meteor_lite(hypotheses: Sequence[str], references: Sequence[str]) -> float:
    """Per-pair harmonic mean F (recall-weighted 9:1) with a fragmentation
    penalty of 0.5 * (chunks/matches)^3; corpus score is the mean."""
    _check_corpus(hypotheses, references)
    scores = []
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = _words(hyp)
        ref_tokens = _words(ref)
        matches = _align(hyp_tokens, ref_tokens)
        m = len(matches)
        if m == 0:
            scores.append(0.0)
            continue
        p = m / len(hyp_tokens)
        r = m / len(ref_tokens)
        f_mean = 10.0 * p * r / (r + 9.0 * p)
        penalty = 0.5 * (_count_chunks(matches) / m) ** 3
        scores.append(f_mean * (1.0 - penalty))
    return 100.0 * math.fsum(scores) / len(scores)


def mean_output_length(hypotheses: Sequence[str]) -> float:
    """Mean word count (punctuation excluded) of the outputs."""
    if not hypotheses:
        raise ValueError("empty corpus")
    counts = [sum(1 for t in tokenize(h) if is_word_token(t)) for h in hypotheses]
    return math.fsum(counts) / len(counts)


def evaluate(hypotheses: Sequence[str], references: Sequence[str]) -> EvalReport:
    return EvalReport(
        bleu3=bleu3(hypotheses, references),
        rouge_l_f=rouge_l_f(hypotheses, references),
        meteor_lite=meteor_lite(hypotheses, references),
        mean_len_words=mean_output_length(hypotheses),
    )


def corpus_stats(docs: Iterable[Document]):
    """Mean word count (punctuation excluded) and mean sentence count of
    the targets."""
    from .corpus import CorpusStats

    n = 0
    words = 0
    sentences = 0
    for doc in docs:
        n += 1
        sentences += len(doc.sentences)
        words += sum(
            1 for s in doc.sentences for t in s.tokens if is_word_token(t)
        )
    if n == 0:
        raise ValueError("empty corpus")
    return CorpusStats(n_docs=n, mean_words=words / n, mean_sentences=sentences / n)
