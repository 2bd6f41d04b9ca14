import random

import pytest

from models.exceptions import LineCountMismatch, MalformedAlignment, NoCandidates, NoEligibleSubtree, TranslatorFailure
from models.generation_models import Alignment, GenerationMethod
from tools.code_switcher import (
    DictionaryTranslator,
    aligned_subtree_candidates,
    constituent_spans,
    generate_parallel_corpus,
    generate_translation_corpus,
    parallel_switch,
    translation_switch,
)
from tools.parse_tree import parse_pharaoh, parse_ptb_tree

LIKE_RAMEN = "(S (NP (PRP I)) (VP (VBP like) (NP (NN ramen))))"

PARALLEL_FIXTURES = [
    (
        "(S (NP (PRP I)) (VP (VBP see) (NP (DT the) (JJ red) (NN house))))",
        "(S (NP (PPER Ich)) (VP (VVFIN sehe) (NP (ART das) (ADJA rote) (NN Haus))))",
        "0-0 1-1 2-2 3-3 4-4",
    ),
    (
        "(S (NP (PRP I)) (VP (VBP eat) (NP (JJ red) (NNS apples))))",
        "(S (NP (PRP Yo)) (VP (VBP como) (NP (NC manzanas) (AQ rojas))))",
        "0-0 1-1 2-3 3-2",
    ),
    (
        "(S (NP (PRP I)) (VP (VBP eat) (NP (NN sushi))))",
        "(S (NP (PRP わたし)) (VP (NP (NN すし)) (VB たべる)))",
        "0-0 1-2 2-1",
    ),
]


def closure_oracle(en_tree, fl_tree, links: set[tuple[int, int]]) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """Pares de constituyentes cerrados bajo el alineamiento y sin enlaces externos que los crucen."""
    pairs = set()
    en_spans = {t.span for t in en_tree.subtrees()} - {en_tree.span}
    fl_spans = {t.span for t in fl_tree.subtrees()} - {fl_tree.span}
    for es, ee in en_spans:
        for fs, fe in fl_spans:
            if any((es <= i < ee) != (fs <= j < fe) for i, j in links):
                continue
            if any(not (es <= i < ee) and (i < es) != (j < fs) for i, j in links):
                continue
            covered_en = {i for i, _ in links if es <= i < ee}
            covered_fl = {j for _, j in links if fs <= j < fe}
            if covered_en == set(range(es, ee)) and covered_fl == set(range(fs, fe)):
                pairs.add(((es, ee), (fs, fe)))
    return pairs


def candidate_pairs(en_tree, fl_tree, alignment):
    return {(c.en_span, c.fl_span) for c in aligned_subtree_candidates(en_tree, fl_tree, alignment)}


# ─────────────────────────────────────────────
# Traducción de subárbol
# ─────────────────────────────────────────────
def test_constituent_spans_collapse_unary_chains():
    spans = constituent_spans(parse_ptb_tree(LIKE_RAMEN))
    assert spans == [((0, 1), "NP"), ((1, 3), "VP"), ((1, 2), "VBP"), ((2, 3), "NP")]


def test_translation_switch_replaces_one_constituent():
    tree = parse_ptb_tree(LIKE_RAMEN)
    translate = DictionaryTranslator({"like": "好き"})
    outputs = set()
    for seed in range(50):
        try:
            outputs.add(translation_switch(tree, translate, seed).text)
        except TranslatorFailure as e:
            assert e.span in {(0, 1), (1, 3), (2, 3)}
    assert outputs == {"I 好き ramen"}


def test_translation_switch_provenance_and_pair():
    tree = parse_ptb_tree(LIKE_RAMEN)
    translate = DictionaryTranslator({"I": "わたし", "like": "好き", "ramen": "ラーメン"})
    utterance = translation_switch(tree, translate, seed=3, source_ids=["7"])
    assert utterance.method == GenerationMethod.TRANSLATION
    assert utterance.pair == "EN-JA"
    assert utterance.provenance.source_ids == ["7"]
    assert utterance.provenance.en_span in {(0, 1), (1, 3), (1, 2), (2, 3)}


def test_single_leaf_tree_has_no_eligible_subtree():
    with pytest.raises(NoEligibleSubtree):
        translation_switch(parse_ptb_tree("(NN hello)"), DictionaryTranslator({}), seed=0)


def test_dictionary_prefers_whole_phrase(write_file):
    path = write_file("dict.tsv", "like ramen\tラーメンが好き\nlike\t好き\n\n")
    translate = DictionaryTranslator.from_file(path)
    assert translate(["like", "ramen"]) == "ラーメンが好き"
    assert translate(["Like"]) == "好き"
    with pytest.raises(TranslatorFailure):
        translate(["ramen"])


def test_translation_corpus_is_seeded():
    trees = [parse_ptb_tree(LIKE_RAMEN)] * 5
    translate = DictionaryTranslator({"I": "わたし", "like": "好き", "ramen": "ラーメン"})
    first = generate_translation_corpus(trees, translate, seed=11)
    second = generate_translation_corpus(trees, translate, seed=11)
    assert first.model_dump() == second.model_dump()
    assert first.log.accepted + first.log.rejected == 5


def test_translation_corpus_logs_translator_failures():
    result = generate_translation_corpus([parse_ptb_tree(LIKE_RAMEN)] * 10, DictionaryTranslator({}), seed=0)
    assert result.corpus == []
    assert len(result.rejects) == 10


# ─────────────────────────────────────────────
# Subárboles alineados
# ─────────────────────────────────────────────
@pytest.mark.parametrize("en, fl, links", PARALLEL_FIXTURES)
def test_candidates_match_closure_oracle(en, fl, links):
    en_tree, fl_tree = parse_ptb_tree(en), parse_ptb_tree(fl)
    alignment = parse_pharaoh(links)
    assert candidate_pairs(en_tree, fl_tree, alignment) == closure_oracle(en_tree, fl_tree, set(alignment.links))


def test_candidates_match_oracle_on_random_alignments():
    rng = random.Random(5)
    for en, fl, _ in PARALLEL_FIXTURES:
        en_tree, fl_tree = parse_ptb_tree(en), parse_ptb_tree(fl)
        n, m = len(en_tree.leaves()), len(fl_tree.leaves())
        for _ in range(200):
            links = {(rng.randrange(n), rng.randrange(m)) for _ in range(rng.randint(1, n + m))}
            alignment = Alignment(links=frozenset(links))
            assert candidate_pairs(en_tree, fl_tree, alignment) == closure_oracle(en_tree, fl_tree, links)


def test_identity_alignment_pairs_every_constituent():
    en, fl, links = PARALLEL_FIXTURES[0]
    pairs = candidate_pairs(parse_ptb_tree(en), parse_ptb_tree(fl), parse_pharaoh(links))
    assert pairs == {(s, s) for s in [(0, 1), (1, 5), (1, 2), (2, 5), (2, 3), (3, 4), (4, 5)]}


def test_crossing_leaves_are_rejected():
    en, fl, links = PARALLEL_FIXTURES[1]
    pairs = candidate_pairs(parse_ptb_tree(en), parse_ptb_tree(fl), parse_pharaoh(links))
    assert ((2, 4), (2, 4)) in pairs
    assert ((2, 3), (3, 4)) not in pairs
    assert ((3, 4), (2, 3)) not in pairs


def test_empty_alignment_has_no_candidates():
    en, fl, _ = PARALLEL_FIXTURES[0]
    assert aligned_subtree_candidates(parse_ptb_tree(en), parse_ptb_tree(fl), Alignment()) == []
    with pytest.raises(NoCandidates):
        parallel_switch(["a"], ["b"], [], seed=0)


def test_parallel_switch_splices_foreign_span():
    en, fl, links = PARALLEL_FIXTURES[2]
    en_tree, fl_tree = parse_ptb_tree(en), parse_ptb_tree(fl)
    candidates = aligned_subtree_candidates(en_tree, fl_tree, parse_pharaoh(links))
    assert {(c.en_span, c.fl_span) for c in candidates} == {((0, 1), (0, 1)), ((1, 3), (1, 3))}
    texts = {parallel_switch(en_tree.leaves(), fl_tree.leaves(), candidates, seed).text for seed in range(30)}
    assert texts == {"わたし eat sushi", "I すし たべる"}


def test_parallel_corpus_rejects_monolingual_outputs():
    en_trees = [parse_ptb_tree(en) for en, _, _ in PARALLEL_FIXTURES]
    fl_trees = [parse_ptb_tree(fl) for _, fl, _ in PARALLEL_FIXTURES]
    alignments = [parse_pharaoh(links) for _, _, links in PARALLEL_FIXTURES]
    result = generate_parallel_corpus(en_trees, fl_trees, alignments, seed=1)
    # alemán y español son latinos: mismo idioma para el etiquetador
    assert [r.reason for r in result.rejects] == ["monolingual", "monolingual"]
    assert [u.pair for u in result.corpus] == ["EN-JA"]
    assert result.log.pair_histogram == {"EN-JA": 1}


def test_parallel_corpus_input_errors():
    en, fl, _ = PARALLEL_FIXTURES[0]
    en_tree, fl_tree = parse_ptb_tree(en), parse_ptb_tree(fl)
    with pytest.raises(LineCountMismatch):
        generate_parallel_corpus([en_tree], [fl_tree, fl_tree], [Alignment()], seed=0)
    with pytest.raises(MalformedAlignment) as excinfo:
        generate_parallel_corpus([en_tree, en_tree], [fl_tree, fl_tree],
                                 [parse_pharaoh("0-0"), parse_pharaoh("9-0")], seed=0)
    assert excinfo.value.line == 2
