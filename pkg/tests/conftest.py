import random

import pytest

from taskforge.analysis import load_stopwords, split_sentences
from taskforge.corpus import parse_record

STOPWORDS = load_stopwords()

WORDS = [
    "falcon", "harbor", "engine", "meadow", "granite", "lantern", "orchid",
    "thunder", "velvet", "walnut", "zephyr", "bramble", "cascade", "drift",
    "ember", "fjord", "glacier", "hollow", "isthmus", "juniper", "kestrel",
    "lagoon", "marble", "nectar", "obsidian", "prairie", "quartz", "ripple",
    "saffron", "timber",
]


def derive(text):
    return split_sentences(text, STOPWORDS)


def make_doc(doc_id, title, target, keyphrase_spans=None, meta=None):
    record = {"id": doc_id, "title": title, "target": target}
    if keyphrase_spans is not None:
        record["keyphrases"] = [{"start": a, "end": b} for a, b in keyphrase_spans]
    if meta is not None:
        record["meta"] = meta
    return parse_record(record, derive)


def synth_doc(index, rng, min_sentences=2, max_sentences=4):
    """A fully-formed document: >= 2 sentences, one 2-word keyphrase each."""
    n_sent = rng.randint(min_sentences, max_sentences)
    text = ""
    spans = []
    for _ in range(n_sent):
        if text:
            text += " "
        start = len(text) + len("The ")
        phrase = f"{rng.choice(WORDS)} {rng.choice(WORDS)}"
        spans.append((start, start + len(phrase)))
        text += f"The {phrase} moved along."
    return make_doc(f"doc-{index:05d}", f"Title {index}", text, spans)


def synth_corpus(n, seed=0, **kwargs):
    rng = random.Random(seed)
    return [synth_doc(i, rng, **kwargs) for i in range(n)]


@pytest.fixture
def stopwords():
    return STOPWORDS
