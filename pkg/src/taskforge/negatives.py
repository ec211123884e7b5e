"""Rule-based corruption of targets: sentence shuffling and keyphrase swaps.

Both corruptions feed the revise and distinguishing tasks. Given the same
RngStream state and inputs they produce identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Document, KeyphraseSpan, byte_slice
from .rng import RngStream

MAX_REDRAWS = 100


class NegativeError(Exception):
    """A corruption cannot be produced for this document."""


class TooFewSentences(NegativeError):
    pass


class EmptyKeyphrases(NegativeError):
    pass


class PoolExhausted(NegativeError):
    pass


@dataclass(frozen=True)
class KeyphrasePool:
    """Sampling universe for keyphrase corruption: every selected keyphrase
    surface in the corpus, tagged with its owner so a document never draws
    its own phrases."""
    entries: tuple[tuple[str, str], ...]  # (surface, owner document id)

    def foreign_surfaces(self, doc_id: str) -> list[str]:
        return [surface for surface, owner in self.entries if owner != doc_id]


def build_pool(docs_with_keyphrases) -> KeyphrasePool:
    entries = []
    for doc, keyphrases in docs_with_keyphrases:
        for kp in keyphrases:
            entries.append((kp.surface, doc.id))
    return KeyphrasePool(tuple(entries))


def shuffle_sentences(doc: Document, rng: RngStream) -> str:
    """Uniformly drawn non-identity permutation of the sentences, joined by
    single spaces. Redraws up to MAX_REDRAWS times to escape the identity."""
    n = len(doc.sentences)
    if n < 2:
        raise TooFewSentences(f"document {doc.id!r} has {n} sentence(s)")
    order = list(range(n))
    for _ in range(MAX_REDRAWS):
        rng.shuffle(order)
        if order != list(range(n)):
            break
    texts = [
        byte_slice(doc.target_text, doc.sentences[i].start, doc.sentences[i].end)
        for i in order
    ]
    return " ".join(texts)


def corrupt_keyphrases(
    doc: Document,
    keyphrases: list[KeyphraseSpan],
    pool: KeyphrasePool,
    rng: RngStream,
    fraction: float = 1.0,
) -> str:
    """Replace keyphrase spans with uniformly drawn foreign pool surfaces.

    Replacements are drawn with replacement, one per span in document order,
    then spliced right-to-left so byte offsets stay valid. With fraction < 1
    each span is corrupted independently with that probability (at least one
    is always corrupted).
    """
    if not keyphrases:
        raise EmptyKeyphrases(f"document {doc.id!r} has no keyphrases")
    foreign = pool.foreign_surfaces(doc.id)
    if not foreign:
        raise PoolExhausted(f"no foreign pool entries for document {doc.id!r}")

    spans = sorted(keyphrases, key=lambda kp: kp.start)
    original = doc.target_text.encode("utf-8")
    for _ in range(MAX_REDRAWS):
        if fraction >= 1.0:
            chosen = spans
        else:
            chosen = [kp for kp in spans if rng.random() < fraction]
            if not chosen:
                chosen = [spans[rng.randrange(len(spans))]]
        replacements = [rng.choice(foreign) for _ in chosen]
        data = original
        for kp, surface in zip(reversed(chosen), reversed(replacements)):
            data = data[:kp.start] + surface.encode("utf-8") + data[kp.end:]
        if data != original:
            return data.decode("utf-8")
    raise PoolExhausted(
        f"pool only reproduces document {doc.id!r}'s own keyphrases"
    )
