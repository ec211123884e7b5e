"""Shared data model for all pipeline stages.

All character spans are byte offsets into the UTF-8 encoding of the target
text, half-open [start, end), and must fall on codepoint boundaries. Every
type is an immutable dataclass, safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional, TextIO


class CorpusError(Exception):
    """Malformed input corpus; carries the offending line number when known."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    start: int
    end: int
    is_stopword: bool = False


@dataclass(frozen=True)
class Sentence:
    index: int
    start: int
    end: int
    tokens: tuple[Token, ...] = ()


@dataclass(frozen=True)
class KeyphraseSpan:
    sentence_index: int
    start: int
    end: int
    surface: str
    contains_signature: bool = False


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    target_text: str
    sentences: tuple[Sentence, ...] = ()
    keyphrases: tuple[KeyphraseSpan, ...] = ()
    meta: Mapping[str, str] = field(default_factory=dict)
    has_supplied_keyphrases: bool = False

    def with_keyphrases(self, keyphrases: Iterable[KeyphraseSpan]) -> "Document":
        return replace(self, keyphrases=tuple(keyphrases))


@dataclass(frozen=True)
class CorpusStats:
    n_docs: int
    mean_words: float
    mean_sentences: float

    def to_dict(self) -> dict:
        return {
            "n_docs": self.n_docs,
            "mean_words": self.mean_words,
            "mean_sentences": self.mean_sentences,
        }


def byte_slice(text: str, start: int, end: int) -> str:
    return text.encode("utf-8")[start:end].decode("utf-8")


def validate_document(doc: Document) -> list[str]:
    """Return a description of every invariant violation; empty means valid."""
    violations: list[str] = []
    if not doc.id:
        violations.append("id empty")

    data = doc.target_text.encode("utf-8")

    prev_end = 0
    prev_index = -1
    for sent in doc.sentences:
        if sent.index <= prev_index:
            violations.append(f"sentence index {sent.index} not ascending")
        prev_index = sent.index
        if sent.start >= sent.end:
            violations.append(f"sentence {sent.index} has empty span")
        if sent.start < prev_end:
            violations.append(f"sentence {sent.index} overlaps previous sentence")
        else:
            gap = data[prev_end:sent.start]
            if gap.strip():
                violations.append(
                    f"non-whitespace bytes {prev_end}:{sent.start} outside sentences"
                )
        if sent.end > len(data):
            violations.append(f"sentence {sent.index} span exceeds target")
        prev_end = max(prev_end, sent.end)
        tok_pos = -1
        for tok in sent.tokens:
            if tok.start >= tok.end:
                violations.append(f"token {tok.surface!r} has empty span")
            if tok.start < tok_pos:
                violations.append(f"token {tok.surface!r} out of offset order")
            tok_pos = tok.start
            if tok.normalized != tok.surface.lower():
                violations.append(f"token {tok.surface!r} normalized form mismatch")
    if doc.sentences and data[prev_end:].strip():
        violations.append("non-whitespace tail outside sentences")

    sent_spans = {s.index: (s.start, s.end) for s in doc.sentences}
    prev_kp: Optional[KeyphraseSpan] = None
    for kp in doc.keyphrases:
        if byte_slice(doc.target_text, kp.start, kp.end) != kp.surface:
            violations.append(
                f"keyphrase {kp.surface!r} does not match span {kp.start}:{kp.end}"
            )
        span = sent_spans.get(kp.sentence_index)
        if span is None:
            violations.append(
                f"keyphrase {kp.surface!r} names unknown sentence {kp.sentence_index}"
            )
        elif not (span[0] <= kp.start and kp.end <= span[1]):
            violations.append(
                f"keyphrase {kp.surface!r} span {kp.start}:{kp.end} "
                f"outside sentence {kp.sentence_index} span {span[0]}:{span[1]}"
            )
        if prev_kp is not None and kp.start < prev_kp.end:
            violations.append(
                f"keyphrase spans overlap: {prev_kp.start}:{prev_kp.end} "
                f"and {kp.start}:{kp.end}"
            )
        prev_kp = kp
    return violations


def resolve_span_overlaps(spans: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Keep the earlier-starting, then longer, span among overlapping ones."""
    ordered = sorted(spans, key=lambda s: (s[0], -(s[1] - s[0])))
    kept: list[tuple[int, int]] = []
    for span in ordered:
        if kept and span[0] < kept[-1][1]:
            continue
        kept.append(span)
    return kept


def parse_record(record: dict, derive, line_no: Optional[int] = None) -> Document:
    """Build a Document from one input-format object.

    `derive` is the callable that turns the target text into sentences with
    tokens (see analysis.split_sentences); keeping it injected makes the
    derivation a pure function of (text, tokenizer config).
    """
    for key in ("id", "title", "target"):
        if key not in record:
            raise CorpusError(f"missing required key {key!r}", line_no)
        if not isinstance(record[key], str):
            raise CorpusError(f"key {key!r} must be a string", line_no)
    if not record["id"]:
        raise CorpusError("id empty", line_no)

    target = record["target"]
    sentences = tuple(derive(target))

    keyphrases: tuple[KeyphraseSpan, ...] = ()
    supplied = False
    if "keyphrases" in record and record["keyphrases"] is not None:
        supplied = True
        spans = []
        for item in record["keyphrases"]:
            try:
                spans.append((int(item["start"]), int(item["end"])))
            except (KeyError, TypeError, ValueError):
                raise CorpusError("keyphrase entries need integer start/end", line_no)
        data = target.encode("utf-8")
        kps = []
        for start, end in resolve_span_overlaps(spans):
            if not (0 <= start < end <= len(data)):
                raise CorpusError(f"keyphrase span {start}:{end} out of range", line_no)
            sent_index = next(
                (s.index for s in sentences if s.start <= start and end <= s.end),
                None,
            )
            if sent_index is None:
                continue  # crosses a sentence boundary; dropped
            surface = data[start:end].decode("utf-8")
            kps.append(KeyphraseSpan(sent_index, start, end, surface))
        keyphrases = tuple(kps)

    meta = record.get("meta") or {}
    if not isinstance(meta, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in meta.items()
    ):
        raise CorpusError("meta must map strings to strings", line_no)

    return Document(
        id=record["id"],
        title=record["title"],
        target_text=target,
        sentences=sentences,
        keyphrases=keyphrases,
        meta=meta,
        has_supplied_keyphrases=supplied,
    )


def document_to_record(doc: Document) -> dict:
    record: dict = {"id": doc.id, "title": doc.title, "target": doc.target_text}
    if doc.has_supplied_keyphrases:
        record["keyphrases"] = [
            {"start": kp.start, "end": kp.end} for kp in doc.keyphrases
        ]
    if doc.meta:
        record["meta"] = dict(doc.meta)
    return record


def read_corpus(stream: TextIO, derive) -> Iterator[Document]:
    """Stream Documents from line-oriented JSON; aborts with the line number."""
    for line_no, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"invalid JSON ({exc.msg})", line_no)
        if not isinstance(record, dict):
            raise CorpusError("record is not a JSON object", line_no)
        yield parse_record(record, derive, line_no)


def write_corpus(docs: Iterable[Document], stream: TextIO) -> None:
    for doc in docs:
        stream.write(json.dumps(document_to_record(doc), ensure_ascii=False))
        stream.write("\n")
