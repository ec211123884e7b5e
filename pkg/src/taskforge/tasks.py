"""Rendering of the task-sample types and assembly of the training mixture.

Each document yields up to six text-to-text samples: one end-to-end, two
decomposed (plan + surface), two revise (shuffled and keyphrase-corrupted
negatives) and one distinguishing sample. The per-document bundles are then
mixed into a single seed-shuffled training set.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, TextIO

from .corpus import Document, KeyphraseSpan
from .negatives import (
    EmptyKeyphrases,
    KeyphrasePool,
    PoolExhausted,
    TooFewSentences,
    build_pool,
    corrupt_keyphrases,
    shuffle_sentences,
)
from .plan import PlanChain, build_plan_chain, build_source_input, render_plan, SEP
from .rng import RngStream


class TaskKind(str, Enum):
    END_TO_END = "end_to_end"
    PLAN = "plan"
    SURFACE = "surface"
    REVISE_SHUFFLE = "revise_shuffle"
    REVISE_KEYPHRASE = "revise_keyphrase"
    DISTINGUISH = "distinguish"


PROMPTS: dict[TaskKind, str] = {
    TaskKind.END_TO_END: "Generate a coherent output",
    TaskKind.PLAN: "Produce a plan",
    TaskKind.SURFACE: "Conduct surface realization",
    TaskKind.REVISE_SHUFFLE: "Revising the Output",
    TaskKind.REVISE_KEYPHRASE: "Revising the Output",
    TaskKind.DISTINGUISH: "Which Option is Better",
}

ALL_KINDS: tuple[TaskKind, ...] = tuple(TaskKind)

_KIND_ORDER = {kind: i for i, kind in enumerate(ALL_KINDS)}


class EmptyPlan(Exception):
    pass


@dataclass(frozen=True)
class TaskSample:
    id: str
    kind: TaskKind
    prompt: str
    source: str
    target: str
    label: Optional[str] = None

    def to_dict(self) -> dict:
        record = {
            "id": self.id,
            "kind": self.kind.value,
            "prompt": self.prompt,
            "source": self.source,
            "target": self.target,
        }
        if self.label is not None:
            record["label"] = self.label
        return record


@dataclass(frozen=True)
class MixtureSpec:
    enabled: frozenset[TaskKind] = frozenset(ALL_KINDS)
    distinguish_positive_rate: float = 0.5
    shuffle_fallback: str = "skip"  # or "substitute"
    corrupt_fraction: float = 1.0
    plan_source_includes_keyphrases: bool = False

    def __post_init__(self):
        if not 0.0 <= self.distinguish_positive_rate <= 1.0:
            raise ValueError("distinguish_positive_rate must be in [0, 1]")
        if self.shuffle_fallback not in ("skip", "substitute"):
            raise ValueError("shuffle_fallback must be 'skip' or 'substitute'")
        if not 0.0 < self.corrupt_fraction <= 1.0:
            raise ValueError("corrupt_fraction must be in (0, 1]")


@dataclass
class ForgeReport:
    seed: int
    n_docs: int = 0
    n_samples: int = 0
    kind_counts: Counter = field(default_factory=Counter)
    degradations: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_docs": self.n_docs,
            "n_samples": self.n_samples,
            "kind_counts": {k.value: self.kind_counts.get(k, 0) for k in ALL_KINDS},
            "degradations": dict(sorted(self.degradations.items())),
        }


def _sample(doc_id: str, kind: TaskKind, payload: str, target: str,
            label: Optional[str] = None, variant: Optional[str] = None) -> TaskSample:
    prompt = PROMPTS[kind]
    sample_id = f"{doc_id}#{kind.value}" + (f"#{variant}" if variant else "")
    return TaskSample(
        id=sample_id,
        kind=kind,
        prompt=prompt,
        source=f"{prompt} {payload}",
        target=target,
        label=label,
    )


def make_end_to_end(doc: Document, keyphrases: list[KeyphraseSpan]) -> TaskSample:
    return _sample(doc.id, TaskKind.END_TO_END,
                   build_source_input(doc, keyphrases), doc.target_text)


def make_decomposed(
    doc: Document,
    chain: PlanChain,
    keyphrases: Optional[list[KeyphraseSpan]] = None,
    plan_source_includes_keyphrases: bool = False,
) -> tuple[TaskSample, TaskSample]:
    """Plan sample (title -> rendered chain) and surface sample
    (title + chain -> target). Raises EmptyPlan on an empty chain."""
    if not chain:
        raise EmptyPlan(f"document {doc.id!r} has no plan")
    rendered = render_plan(chain)
    if plan_source_includes_keyphrases:
        plan_payload = build_source_input(doc, keyphrases or [])
    else:
        plan_payload = doc.title
    plan_sample = _sample(doc.id, TaskKind.PLAN, plan_payload, rendered)
    surface_sample = _sample(
        doc.id, TaskKind.SURFACE, f"{doc.title} {SEP} {rendered}", doc.target_text
    )
    return plan_sample, surface_sample


def _revise_payload(doc: Document, flawed: str) -> str:
    return f"{doc.title} {SEP} {flawed}"


def make_revise(
    doc: Document,
    keyphrases: list[KeyphraseSpan],
    pool: KeyphrasePool,
    rng: RngStream,
    spec: MixtureSpec,
) -> tuple[list[TaskSample], Counter]:
    """Up to two revise samples (shuffle + keyphrase negatives); degenerate
    variants are skipped or substituted per spec.shuffle_fallback."""
    samples: list[TaskSample] = []
    degradations: Counter = Counter()

    try:
        flawed = shuffle_sentences(doc, rng)
        samples.append(_sample(doc.id, TaskKind.REVISE_SHUFFLE,
                                _revise_payload(doc, flawed), doc.target_text))
    except TooFewSentences:
        if spec.shuffle_fallback == "substitute":
            try:
                flawed = corrupt_keyphrases(doc, keyphrases, pool, rng,
                                            spec.corrupt_fraction)
                samples.append(_sample(doc.id, TaskKind.REVISE_KEYPHRASE,
                                        _revise_payload(doc, flawed),
                                        doc.target_text, variant="substitute"))
                degradations["revise_shuffle_substituted"] += 1
            except (EmptyKeyphrases, PoolExhausted):
                degradations["revise_shuffle_skipped"] += 1
        else:
            degradations["revise_shuffle_skipped"] += 1

    try:
        flawed = corrupt_keyphrases(doc, keyphrases, pool, rng, spec.corrupt_fraction)
        samples.append(_sample(doc.id, TaskKind.REVISE_KEYPHRASE,
                                _revise_payload(doc, flawed), doc.target_text))
    except (EmptyKeyphrases, PoolExhausted):
        if spec.shuffle_fallback == "substitute":
            try:
                flawed = shuffle_sentences(doc, rng)
                samples.append(_sample(doc.id, TaskKind.REVISE_SHUFFLE,
                                        _revise_payload(doc, flawed),
                                        doc.target_text, variant="substitute"))
                degradations["revise_keyphrase_substituted"] += 1
            except TooFewSentences:
                degradations["revise_keyphrase_skipped"] += 1
        else:
            degradations["revise_keyphrase_skipped"] += 1

    return samples, degradations


def make_distinguish(
    doc: Document,
    keyphrases: list[KeyphraseSpan],
    pool: KeyphrasePool,
    rng: RngStream,
    spec: MixtureSpec,
) -> tuple[TaskSample, Counter]:
    """Option is the original target with probability distinguish_positive_rate,
    otherwise a corruption (coin-flip between the two generators)."""
    degradations: Counter = Counter()
    positive = rng.random() < spec.distinguish_positive_rate
    option = doc.target_text
    if not positive:
        generators = [TaskKind.REVISE_SHUFFLE, TaskKind.REVISE_KEYPHRASE]
        first = rng.randrange(2)
        option = None
        for kind in (generators[first], generators[1 - first]):
            try:
                if kind is TaskKind.REVISE_SHUFFLE:
                    option = shuffle_sentences(doc, rng)
                else:
                    option = corrupt_keyphrases(doc, keyphrases, pool, rng,
                                                spec.corrupt_fraction)
                break
            except (TooFewSentences, EmptyKeyphrases, PoolExhausted):
                continue
        if option is None:
            positive = True
            option = doc.target_text
            degradations["distinguish_forced_positive"] += 1
    label = "positive" if positive else "negative"
    payload = f"{doc.title} {SEP} {option}"
    sample = _sample(doc.id, TaskKind.DISTINGUISH, payload, label, label=label)
    return sample, degradations


def forge_document(
    doc: Document,
    pool: KeyphrasePool,
    rng: RngStream,
    spec: MixtureSpec = MixtureSpec(),
) -> tuple[list[TaskSample], Counter]:
    """Render every enabled task sample for one document.

    A fully-formed document with all kinds enabled yields exactly six
    samples. The returned counter records degraded (skipped or substituted)
    variants.
    """
    keyphrases = list(doc.keyphrases)
    samples: list[TaskSample] = []
    degradations: Counter = Counter()

    if TaskKind.END_TO_END in spec.enabled:
        samples.append(make_end_to_end(doc, keyphrases))

    if TaskKind.PLAN in spec.enabled or TaskKind.SURFACE in spec.enabled:
        chain = build_plan_chain(doc, keyphrases)
        try:
            plan_sample, surface_sample = make_decomposed(
                doc, chain, keyphrases, spec.plan_source_includes_keyphrases
            )
            if TaskKind.PLAN in spec.enabled:
                samples.append(plan_sample)
            if TaskKind.SURFACE in spec.enabled:
                samples.append(surface_sample)
        except EmptyPlan:
            degradations["empty_plan"] += 1

    revise_enabled = (TaskKind.REVISE_SHUFFLE in spec.enabled
                      or TaskKind.REVISE_KEYPHRASE in spec.enabled)
    if revise_enabled:
        revise_samples, revise_degr = make_revise(doc, keyphrases, pool, rng, spec)
        samples.extend(s for s in revise_samples if s.kind in spec.enabled)
        degradations.update(revise_degr)

    if TaskKind.DISTINGUISH in spec.enabled:
        sample, dist_degr = make_distinguish(doc, keyphrases, pool, rng, spec)
        samples.append(sample)
        degradations.update(dist_degr)

    return samples, degradations


def _forge_one(args) -> tuple[list[TaskSample], Counter]:
    doc, pool, spec, seed = args
    rng = RngStream.for_document(seed, doc.id)
    return forge_document(doc, pool, rng, spec)


def forge_corpus(
    docs: list[Document],
    seed: int,
    spec: MixtureSpec = MixtureSpec(),
    workers: int = 1,
    pool: Optional[KeyphrasePool] = None,
) -> tuple[list[TaskSample], ForgeReport]:
    """Forge per-document bundles (parallelizable) and mix them into one
    seed-shuffled training set. Output bytes are invariant to worker count."""
    if pool is None:
        pool = build_pool((doc, doc.keyphrases) for doc in docs)

    job_args = [(doc, pool, spec, seed) for doc in docs]
    if workers > 1 and len(docs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_forge_one, job_args, chunksize=64))
    else:
        results = [_forge_one(a) for a in job_args]

    report = ForgeReport(seed=seed, n_docs=len(docs))
    samples: list[TaskSample] = []
    for doc_samples, degradations in results:
        samples.extend(doc_samples)
        report.degradations.update(degradations)
        for s in doc_samples:
            report.kind_counts[s.kind] += 1
    report.n_samples = len(samples)

    # stable pre-shuffle order so the seeded mix is worker-count independent
    samples.sort(key=lambda s: (s.id.split("#", 1)[0], _KIND_ORDER[s.kind], s.id))
    RngStream.from_seed(seed).shuffle(samples)
    return samples, report


def write_samples(samples: Iterable[TaskSample], stream: TextIO) -> None:
    for sample in samples:
        stream.write(json.dumps(sample.to_dict(), ensure_ascii=False))
        stream.write("\n")
