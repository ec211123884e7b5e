import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from taskforge.analysis import (
    compute_topic_signatures,
    extract_candidate_phrases,
    llr_score,
    select_keyphrases,
    split_sentences,
    tokenize,
)

from conftest import STOPWORDS, make_doc


class TestTokenize:
    def test_mixed_runs_and_punctuation(self):
        tokens = tokenize("A 264-day old person.")
        assert [t.surface for t in tokens] == ["A", "264", "-", "day", "old", "person", "."]
        assert [(t.start, t.end) for t in tokens] == [
            (0, 1), (2, 5), (5, 6), (6, 9), (10, 13), (14, 20), (20, 21),
        ]

    def test_empty(self):
        assert tokenize("") == []

    def test_internal_apostrophe(self):
        assert [t.surface for t in tokenize("don't")] == ["don't"]

    def test_normalized_is_casefold(self):
        (tok,) = tokenize("MiXeD")
        assert tok.normalized == "mixed"

    def test_multibyte_offsets_are_bytes(self):
        tokens = tokenize("héllo wörld")
        assert [(t.start, t.end) for t in tokens] == [(0, 6), (7, 13)]

    @given(st.text(max_size=100))
    def test_deterministic(self, text):
        assert tokenize(text) == tokenize(text)

    @given(st.text(max_size=100))
    def test_whitespace_emits_nothing(self, text):
        for tok in tokenize(text):
            assert not any(ch.isspace() for ch in tok.surface)


class TestSplitSentences:
    def test_two_sentences(self):
        assert len(split_sentences("A b. C d.")) == 2

    def test_abbreviation_not_a_boundary(self):
        assert len(split_sentences("Dr. Smith left.")) == 1

    def test_no_terminator_single_sentence(self):
        sents = split_sentences("hello")
        assert len(sents) == 1
        assert (sents[0].start, sents[0].end) == (0, 5)

    def test_lowercase_continuation_not_a_boundary(self):
        assert len(split_sentences("It was late. and dark outside.")) == 1

    def test_quote_and_digit_open_sentences(self):
        assert len(split_sentences('He left. "Stay," she said. 12 hours passed.')) == 3

    def test_tokens_attached_to_sentences(self):
        sents = split_sentences("One two. Three.")
        assert [t.surface for t in sents[0].tokens] == ["One", "two", "."]
        assert [t.surface for t in sents[1].tokens] == ["Three", "."]


class TestTopicSignatures:
    def test_absent_from_foreground_never_signature(self):
        model = compute_topic_signatures({"the": 10}, {"storm": 5, "the": 10}, 0.0)
        assert "storm" not in model.signatures

    def test_equal_rates_score_zero(self):
        assert llr_score(3, 10, 3, 10) == pytest.approx(0.0, abs=1e-12)

    def test_toy_score_matches_arbitrary_precision(self):
        fg = {"storm": 8, "the": 20}
        bg = {"storm": 1, "the": 50}
        model = compute_topic_signatures(fg, bg, 10.83)

        mpmath.mp.dps = 50
        def ll(p, k, n):
            total = mpmath.mpf(0)
            if k:
                total += k * mpmath.log(p)
            if n - k:
                total += (n - k) * mpmath.log(1 - p)
            return total
        k1, n1, k2, n2 = 8, 28, 1, 51
        p1 = mpmath.mpf(k1) / n1
        p2 = mpmath.mpf(k2) / n2
        p = mpmath.mpf(k1 + k2) / (n1 + n2)
        expected = 2 * (ll(p1, k1, n1) + ll(p2, k2, n2) - ll(p, k1, n1) - ll(p, k2, n2))
        assert model.scores["storm"] == pytest.approx(float(expected), abs=1e-9)
        assert "storm" in model.signatures

    def test_zero_total_is_an_error(self):
        with pytest.raises(ValueError):
            compute_topic_signatures({}, {"a": 1}, 10.83)

    def test_score_symmetric_under_swap(self):
        assert llr_score(5, 40, 2, 60) == pytest.approx(llr_score(2, 60, 5, 40), abs=1e-12)

    @given(
        st.integers(0, 50), st.integers(0, 50),
        st.integers(1, 100), st.integers(1, 100),
    )
    def test_score_nonnegative(self, k1, k2, extra1, extra2):
        n1 = k1 + extra1
        n2 = k2 + extra2
        assert llr_score(k1, n1, k2, n2) >= -1e-9


class TestPhrases:
    def test_stopword_delimited_chunks(self):
        doc = make_doc("d1", "T", "the strict age limit is arbitrary")
        cands = extract_candidate_phrases(doc, STOPWORDS)
        assert [c.surface for c in cands] == ["strict age limit", "arbitrary"]

    def test_all_stopwords_no_candidates(self):
        doc = make_doc("d1", "T", "it was the and of")
        assert extract_candidate_phrases(doc, STOPWORDS) == []

    def test_no_stopwords_single_candidate(self):
        doc = make_doc("d1", "T", "competency exam")
        cands = extract_candidate_phrases(doc, STOPWORDS)
        assert [c.surface for c in cands] == ["competency exam"]

    def test_max_len_truncates(self):
        doc = make_doc("d1", "T", "alpha beta gamma delta epsilon zeta eta")
        (cand,) = extract_candidate_phrases(doc, STOPWORDS, max_len=3)
        assert cand.surface == "alpha beta gamma"

    def test_select_keeps_signature_phrases_in_order(self):
        doc = make_doc(
            "d1", "T",
            "harsh storm waves. calm morning light. storm winds again. "
            "quiet night air. storm clouds gather.",
        )
        cands = extract_candidate_phrases(doc, STOPWORDS)
        assert len(cands) == 5
        model = compute_topic_signatures({"storm": 9}, {"storm": 1, "calm": 99}, 5.0)
        selected = select_keyphrases(cands, model)
        # "again" is a stopword, so the third sentence's chunk stops at "winds"
        assert [c.surface for c in selected] == [
            "harsh storm waves", "storm winds", "storm clouds gather",
        ]
        assert all(c.contains_signature for c in selected)

    def test_select_is_order_preserving_subset(self):
        doc = make_doc("d1", "T", "storm falcon. harbor storm. lantern glow.")
        cands = extract_candidate_phrases(doc, STOPWORDS)
        model = compute_topic_signatures({"storm": 5}, {"other": 50}, 1.0)
        selected = select_keyphrases(cands, model)
        surfaces = [c.surface for c in cands]
        sel_surfaces = [c.surface for c in selected]
        assert sel_surfaces == [s for s in surfaces if s in sel_surfaces]

    def test_unrenderable_surfaces_dropped(self):
        # supplied spans may carry ';' even though extraction never produces it
        doc = make_doc("d1", "T", "storm; surge ahead", [(0, 12), (13, 18)])
        model = compute_topic_signatures({"storm": 5, "surge": 5, "ahead": 5},
                                         {"other": 50}, 1.0)
        selected = select_keyphrases(list(doc.keyphrases), model)
        assert [c.surface for c in selected] == ["ahead"]
