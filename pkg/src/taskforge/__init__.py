"""Multi-task training-mixture synthesis for text generation corpora."""

from .analysis import (
    StopwordList,
    TopicSignatureModel,
    annotate_keyphrases,
    compute_topic_signatures,
    extract_candidate_phrases,
    load_stopwords,
    select_keyphrases,
    split_sentences,
    tokenize,
)
from .corpus import (
    CorpusError,
    CorpusStats,
    Document,
    KeyphraseSpan,
    Sentence,
    Token,
    read_corpus,
    validate_document,
    write_corpus,
)
from .estimators import FewShotSampler, KeyphraseAnnotator, MixtureForge
from .metrics import EvalReport, bleu3, corpus_stats, evaluate, meteor_lite, rouge_l_f
from .negatives import KeyphrasePool, build_pool, corrupt_keyphrases, shuffle_sentences
from .plan import PlanChain, build_plan_chain, build_source_input, parse_plan, render_plan
from .rng import RngStream
from .sampling import subsample
from .tasks import (
    ALL_KINDS,
    ForgeReport,
    MixtureSpec,
    TaskKind,
    TaskSample,
    forge_corpus,
    forge_document,
)

__version__ = "0.1.0"
