"""Tokenization, sentence splitting, topic signatures and keyphrase extraction.

The tokenizer and splitter are deliberately rule-based and dependency-free:
equal text always yields byte-identical output, which the determinism
contract of the whole pipeline rests on.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, replace
from importlib import resources
from typing import Iterable, Mapping, Optional, TextIO

from .corpus import Document, KeyphraseSpan, Sentence, Token, byte_slice

log = logging.getLogger(__name__)

# Words whose trailing period does not end a sentence.
ABBREVIATIONS = frozenset({
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.",
    "e.g.", "i.e.", "vs.", "etc.", "U.S.",
})

_TERMINATORS = ".!?"
_OPENERS = "\"'“‘"


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.words


def load_stopwords(path: Optional[str] = None) -> StopwordList:
    """Load the bundled English stopword list, or a one-word-per-line file."""
    if path is None:
        text = resources.files("taskforge.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = frozenset(w.strip().lower() for w in text.splitlines() if w.strip())
    return StopwordList(words)


def _is_run_char(ch: str) -> bool:
    return ch.isalnum() or ch == "'"


def _byte_offsets(text: str) -> list[int]:
    offs = [0]
    pos = 0
    for ch in text:
        pos += len(ch.encode("utf-8"))
        offs.append(pos)
    return offs


def tokenize(text: str, stopwords: Optional[StopwordList] = None) -> list[Token]:
    """Split into maximal letter/digit/apostrophe runs; punctuation is one
    token per codepoint, whitespace emits nothing. Offsets are byte offsets."""
    offs = _byte_offsets(text)
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_run_char(ch):
            j = i + 1
            while j < n and _is_run_char(text[j]):
                j += 1
        else:
            j = i + 1
        surface = text[i:j]
        normalized = surface.lower()
        tokens.append(Token(
            surface=surface,
            normalized=normalized,
            start=offs[i],
            end=offs[j],
            is_stopword=stopwords is not None and normalized in stopwords,
        ))
        i = j
    return tokens


def is_word_token(token: Token) -> bool:
    return any(_is_run_char(ch) for ch in token.surface)


def _preceding_word(text: str, dot: int) -> str:
    """The abbreviation candidate ending at text[dot] == '.', inclusive."""
    i = dot - 1
    while i >= 0 and (text[i].isalpha() or text[i] == "."):
        i -= 1
    return text[i + 1:dot + 1]


def split_sentences(text: str, stopwords: Optional[StopwordList] = None) -> list[Sentence]:
    """Rule-based sentence boundaries: after '.', '!' or '?' followed by
    whitespace and an uppercase letter, opening quote or digit, except after
    a known abbreviation. Trailing text without a terminator forms a final
    sentence."""
    offs = _byte_offsets(text)
    n = len(text)
    boundaries: list[int] = []  # codepoint index one past the terminator
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        j = i + 1
        if j >= n or not text[j].isspace():
            continue
        while j < n and text[j].isspace():
            j += 1
        if j >= n:
            continue
        nxt = text[j]
        if not (nxt.isupper() or nxt.isdigit() or nxt in _OPENERS):
            continue
        if ch == "." and _preceding_word(text, i) in ABBREVIATIONS:
            continue
        boundaries.append(i + 1)

    spans: list[tuple[int, int]] = []
    start = 0
    for b in boundaries + [n]:
        while start < b and text[start].isspace():
            start += 1
        end = b
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
        start = b

    all_tokens = tokenize(text, stopwords)
    sentences: list[Sentence] = []
    for index, (s, e) in enumerate(spans):
        bs, be = offs[s], offs[e]
        toks = tuple(t for t in all_tokens if t.start >= bs and t.end <= be)
        sentences.append(Sentence(index=index, start=bs, end=be, tokens=toks))
    return sentences


@dataclass(frozen=True)
class TopicSignatureModel:
    scores: Mapping[str, float]
    signatures: frozenset[str]
    threshold: float
    foreground_total: int
    background_total: int


def _binomial_ll(p: float, k: int, n: int) -> float:
    # log-likelihood of k successes in n Bernoulli trials; 0*log(0) == 0
    total = 0.0
    if k:
        total += k * math.log(p)
    if n - k:
        total += (n - k) * math.log1p(-p)
    return total


def llr_score(k1: int, n1: int, k2: int, n2: int) -> float:
    """Two-sample log-likelihood-ratio statistic for one word."""
    p1 = k1 / n1
    p2 = k2 / n2
    p = (k1 + k2) / (n1 + n2)
    return 2.0 * (
        _binomial_ll(p1, k1, n1)
        + _binomial_ll(p2, k2, n2)
        - _binomial_ll(p, k1, n1)
        - _binomial_ll(p, k2, n2)
    )


def compute_topic_signatures(
    foreground_counts: Mapping[str, int],
    background_counts: Mapping[str, int],
    threshold: float = 10.83,
) -> TopicSignatureModel:
    n1 = sum(foreground_counts.values())
    n2 = sum(background_counts.values())
    if n1 <= 0 or n2 <= 0:
        raise ValueError("foreground and background totals must both be positive")
    scores: dict[str, float] = {}
    signatures = set()
    words = set(foreground_counts) | set(background_counts)
    for word in words:
        k1 = foreground_counts.get(word, 0)
        k2 = background_counts.get(word, 0)
        score = llr_score(k1, n1, k2, n2)
        scores[word] = score
        if score >= threshold and k1 * n2 > k2 * n1:
            signatures.add(word)
    return TopicSignatureModel(
        scores=scores,
        signatures=frozenset(signatures),
        threshold=threshold,
        foreground_total=n1,
        background_total=n2,
    )


def token_counts(doc: Document) -> Counter:
    """Normalized non-punctuation token counts of one document's target."""
    counts: Counter = Counter()
    for sent in doc.sentences:
        for tok in sent.tokens:
            if is_word_token(tok):
                counts[tok.normalized] += 1
    return counts


def corpus_counts(docs: Iterable[Document]) -> Counter:
    total: Counter = Counter()
    for doc in docs:
        total.update(token_counts(doc))
    return total


def read_background_counts(stream: TextIO) -> Counter:
    """Parse a word<TAB>count file."""
    counts: Counter = Counter()
    for line_no, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"background counts line {line_no}: expected word<TAB>count")
        try:
            counts[parts[0]] += int(parts[1])
        except ValueError:
            raise ValueError(f"background counts line {line_no}: bad count {parts[1]!r}")
    return counts


def extract_candidate_phrases(
    doc: Document,
    stopwords: StopwordList,
    max_len: int = 5,
) -> list[KeyphraseSpan]:
    """Maximal runs of consecutive non-stopword, non-punctuation tokens within
    one sentence, truncated to max_len tokens."""
    candidates: list[KeyphraseSpan] = []
    for sent in doc.sentences:
        run: list[Token] = []
        for tok in sent.tokens + (None,):  # sentinel flushes the last run
            keep = (
                tok is not None
                and is_word_token(tok)
                and tok.normalized not in stopwords
            )
            if keep:
                run.append(tok)
                continue
            if run:
                phrase = run[:max_len]
                candidates.append(KeyphraseSpan(
                    sentence_index=sent.index,
                    start=phrase[0].start,
                    end=phrase[-1].end,
                    surface=byte_slice(doc.target_text, phrase[0].start, phrase[-1].end),
                ))
                run = []
    return candidates


def select_keyphrases(
    candidates: list[KeyphraseSpan],
    model: TopicSignatureModel,
) -> list[KeyphraseSpan]:
    """Keep candidates containing at least one signature word, in order.

    Surfaces that would break the rendered plan format (";" or a literal
    "<sep>") are dropped with a warning.
    """
    selected: list[KeyphraseSpan] = []
    for cand in candidates:
        if ";" in cand.surface or "<sep>" in cand.surface:
            log.warning("dropping unrenderable keyphrase %r", cand.surface)
            continue
        tokens = tokenize(cand.surface)
        if any(t.normalized in model.signatures for t in tokens):
            selected.append(replace(cand, contains_signature=True))
    return selected


def annotate_keyphrases(
    docs: list[Document],
    stopwords: StopwordList,
    threshold: float = 10.83,
    max_len: int = 5,
    grouping: str = "per_document",
    background_counts: Optional[Mapping[str, int]] = None,
) -> list[Document]:
    """Attach selected keyphrases to every document.

    Documents with supplied keyphrase spans bypass extraction. By default the
    foreground is each document's own counts against the union of all targets
    as background; grouping="corpus" scores corpus counts against an external
    background (which is then required).
    """
    if grouping not in ("per_document", "corpus"):
        raise ValueError("grouping must be 'per_document' or 'corpus'")
    background = Counter(background_counts) if background_counts else None
    if background is None:
        if grouping == "corpus":
            raise ValueError("grouping='corpus' needs an external background")
        background = corpus_counts(docs)

    corpus_model: Optional[TopicSignatureModel] = None
    if grouping == "corpus":
        corpus_model = compute_topic_signatures(corpus_counts(docs), background, threshold)

    annotated = []
    for doc in docs:
        if doc.has_supplied_keyphrases:
            annotated.append(doc)
            continue
        if corpus_model is not None:
            model = corpus_model
        else:
            foreground = token_counts(doc)
            if not foreground:
                annotated.append(doc.with_keyphrases(()))
                continue
            model = compute_topic_signatures(foreground, background, threshold)
        candidates = extract_candidate_phrases(doc, stopwords, max_len)
        annotated.append(doc.with_keyphrases(select_keyphrases(candidates, model)))
    return annotated
