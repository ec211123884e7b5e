from hypothesis import given, strategies as st

from taskforge.corpus import KeyphraseSpan
from taskforge.plan import (
    PlanChain,
    build_plan_chain,
    build_source_input,
    parse_plan,
    render_plan,
)

from conftest import make_doc


def kp(sentence_index, start, end, surface):
    return KeyphraseSpan(sentence_index, start, end, surface)


def test_groups_follow_sentence_then_occurrence_order():
    doc = make_doc("d1", "T", "One two. Three four. Five six.")
    chain = build_plan_chain(doc, [
        kp(0, 0, 9, "nick fury"),
        kp(0, 10, 22, "strike force"),
        kp(2, 30, 48, "super-soldier serum"),
    ])
    assert chain.groups == (("nick fury", "strike force"), ("super-soldier serum",))


def test_empty_keyphrases_empty_chain():
    doc = make_doc("d1", "T", "One two.")
    chain = build_plan_chain(doc, [])
    assert chain.groups == () and not chain


def test_one_keyphrase_per_sentence_singleton_groups():
    doc = make_doc("d1", "T", "One two. Three four. Five six.")
    chain = build_plan_chain(doc, [kp(0, 0, 3, "a"), kp(1, 9, 12, "b"), kp(2, 21, 24, "c")])
    assert chain.groups == (("a",), ("b",), ("c",))


def test_render_plan_format():
    assert render_plan(PlanChain((("a", "b"), ("c",)))) == "a;b<sep>c"
    assert render_plan(PlanChain(())) == ""
    assert render_plan(PlanChain((("x",),))) == "x"


def test_source_input_layout():
    doc = make_doc("d1", "Unhappy Meals", "One two.")
    kps = [kp(0, 0, 3, "school cafeteria lunch"), kp(0, 4, 7, "junk food")]
    assert build_source_input(doc, kps) == (
        "Unhappy Meals <sep> school cafeteria lunch; junk food"
    )


def test_source_input_title_only():
    doc = make_doc("d1", "Unhappy Meals", "One two.")
    assert build_source_input(doc, []) == "Unhappy Meals"


def test_duplicate_surfaces_retained():
    doc = make_doc("d1", "T", "One two.")
    kps = [kp(0, 0, 3, "echo"), kp(0, 4, 7, "echo")]
    assert build_source_input(doc, kps) == "T <sep> echo; echo"


surface = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters=";<"),
    min_size=1, max_size=12,
).filter(lambda s: ";" not in s and "<sep>" not in s)


@given(st.lists(st.lists(surface, min_size=1, max_size=4), min_size=0, max_size=4))
def test_render_parse_roundtrip(groups):
    chain = PlanChain(tuple(tuple(g) for g in groups))
    assert parse_plan(render_plan(chain)) == chain
