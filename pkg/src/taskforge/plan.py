"""Keyphrase plan chains and source-input construction.

A plan chain groups a document's keyphrases by sentence, in first-occurrence
order, and renders them as "k11;k12<sep>k21;k22". The source input for
generation is the title followed by the keyphrase surfaces.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Document, KeyphraseSpan

SEP = "<sep>"
PHRASE_JOIN = ";"


@dataclass(frozen=True)
class PlanChain:
    groups: tuple[tuple[str, ...], ...]

    def __bool__(self) -> bool:
        return bool(self.groups)


def build_plan_chain(doc: Document, keyphrases: list[KeyphraseSpan]) -> PlanChain:
    """Group keyphrase surfaces by sentence, ordered by first occurrence.

    Sentences without keyphrases contribute no group.
    """
    ordered = sorted(keyphrases, key=lambda kp: (kp.sentence_index, kp.start))
    groups: list[list[str]] = []
    current_sentence = None
    for kp in ordered:
        if kp.sentence_index != current_sentence:
            groups.append([])
            current_sentence = kp.sentence_index
        groups[-1].append(kp.surface)
    return PlanChain(tuple(tuple(g) for g in groups))


def parse_plan(text: str) -> PlanChain:
    """Inverse of render_plan for surfaces free of ';' and '<sep>'."""
    if not text:
        return PlanChain(())
    return PlanChain(tuple(
        tuple(group.split(PHRASE_JOIN)) for group in text.split(SEP)
    ))


def render_plan(chain: PlanChain) -> str:
    return SEP.join(PHRASE_JOIN.join(group) for group in chain.groups)


def build_source_input(doc: Document, keyphrases: list[KeyphraseSpan]) -> str:
    """Title plus keyphrase surfaces in document order; title alone if none."""
    if not keyphrases:
        return doc.title
    surfaces = "; ".join(kp.surface for kp in keyphrases)
    return f"{doc.title} {SEP} {surfaces}"
