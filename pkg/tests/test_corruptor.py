import random

import pytest

from models.exceptions import LineCountMismatch, NoSite
from models.gec_models import CorruptionConfig, Edit, ErrorType
from tools.corruptor import (
    apply_error,
    corrupt_corpus,
    ingest_external_corruptions,
    records_to_m2,
    sample_error_plan,
    touches_foreign_tokens,
)
from tools.edit_alignment import apply_edits
from tools.inflection import load_confusion_sets
from tools.text_core import tag_text

CSW_SENTENCES = [
    "I like ラーメン very much .",
    "My friend said 괜찮아 when I asked about the exam .",
    "We watched 我的世界 videos all night .",
    "He goes to the コンビニ every day and buys some おにぎり .",
    "The professor gave us a лекция about the history of Russia .",
]


def corrupted_by(text: str, error_type: ErrorType, wanted: str, tries: int = 200) -> tuple[list[str], Edit]:
    """Prueba semillas hasta que el error produce la frase buscada."""
    tagged = tag_text(text)
    for seed in range(tries):
        tokens, edit = apply_error(tagged, error_type, random.Random(seed))
        if tokens == wanted.split():
            return tokens, edit
    pytest.fail(f"ninguna semilla produjo {wanted!r}")


# ─────────────────────────────────────────────
# Plan de errores
# ─────────────────────────────────────────────
def test_error_plan_bounds():
    rng = random.Random(0)
    plans = [sample_error_plan(rng) for _ in range(2_000)]
    assert {p.k for p in plans} == {0, 1, 2, 3, 4}
    assert {t for p in plans for t in p.types} == set(ErrorType)
    assert sample_error_plan(rng, max_errors=0).k == 0


# ─────────────────────────────────────────────
# Reglas por tipo
# ─────────────────────────────────────────────
def test_determiner_deletion():
    tokens, edit = corrupted_by("I have a dog .", ErrorType.DETERMINER, "I have dog .")
    assert edit == Edit(start=2, end=2, replacement=["a"])
    assert apply_edits(tokens, [edit]) == "I have a dog .".split()


def test_noun_number_toggle():
    tokens, edit = apply_error(tag_text("I see the dogs ."), ErrorType.NOUN_NUM, random.Random(1))
    assert tokens == "I see the dog .".split()
    assert edit == Edit(start=3, end=4, replacement=["dogs"])


def test_word_order_swaps_adjacent_english_tokens():
    tokens, edit = apply_error(tag_text("cats sleep"), ErrorType.WORD_ORDER, random.Random(3))
    assert tokens == ["sleep", "cats"]
    assert edit == Edit(start=0, end=2, replacement=["cats", "sleep"])


def test_pronoun_stays_in_its_group():
    group = next(g for g in load_confusion_sets()["pronoun_groups"] if "he" in g)
    for seed in range(20):
        tokens, _ = apply_error(tag_text("Yesterday he called"), ErrorType.PRONOUN, random.Random(seed))
        assert tokens[1] in group and tokens[1] != "he"


def test_preposition_substitution():
    prepositions = load_confusion_sets()["prepositions"]
    for seed in range(20):
        tokens, edit = apply_error(tag_text("I live in Tokyo"), ErrorType.PREPOSITION, random.Random(seed))
        assert tokens[2] in prepositions and tokens[2] != "in"
        assert edit.replacement == ["in"]


def test_verb_form_toggle():
    for seed in range(20):
        tokens, _ = apply_error(tag_text("He goes home"), ErrorType.VERB_FORM, random.Random(seed))
        assert tokens[1] in {"go", "went", "going"}


def test_no_site_errors():
    with pytest.raises(NoSite):
        apply_error(tag_text("何?"), ErrorType.PUNCT, random.Random(0))
    with pytest.raises(NoSite):
        apply_error(tag_text("ラーメン が 好き"), ErrorType.PRONOUN, random.Random(0))
    with pytest.raises(NoSite):
        apply_error(tag_text("hello"), ErrorType.WORD_ORDER, random.Random(0))


# ─────────────────────────────────────────────
# Corpus
# ─────────────────────────────────────────────
def test_foreign_tokens_are_never_touched():
    corpus = [tag_text(t) for t in CSW_SENTENCES] * 200
    records, _ = corrupt_corpus(corpus, seed=42)
    assert records
    for record in records:
        foreign = [t for t in record.original if not t.isascii()]
        assert [t for t in record.corrupted if not t.isascii()] == foreign
        assert not touches_foreign_tokens(record.corrupted, record.edits)


def test_gold_edits_restore_the_original():
    corpus = [tag_text(t) for t in CSW_SENTENCES] * 100
    records, _ = corrupt_corpus(corpus, seed=7)
    for record in records:
        assert apply_edits(record.corrupted, record.edits) == record.original
        assert record.types
        assert all(edit.category is not None for edit in record.edits)


def test_same_seed_same_records():
    corpus = [tag_text(t) for t in CSW_SENTENCES]
    first, _ = corrupt_corpus(corpus, seed=5)
    second, _ = corrupt_corpus(corpus, seed=5)
    assert [r.model_dump() for r in first] == [r.model_dump() for r in second]


def test_drop_rate_and_stats_add_up():
    tagged = tag_text("The cat sat on the mat , and I saw them .")
    records, stats = corrupt_corpus([tagged] * 10_000, seed=2024)
    drop_rate = 1 - len(records) / 10_000
    assert 0.18 <= drop_rate <= 0.22
    dropped = (stats.dropped_zero_plan + stats.dropped_no_site
               + stats.dropped_zero_edit + stats.dropped_immunity)
    assert stats.emitted + dropped == stats.total == 10_000
    assert sum(stats.realized.values()) <= sum(stats.planned.values())


def test_max_errors_zero_drops_everything():
    records, stats = corrupt_corpus([tag_text("I have a dog .")], seed=1,
                                    config=CorruptionConfig(max_errors=0))
    assert records == []
    assert stats.dropped_zero_plan == 1


def test_ids_are_kept_in_input_order():
    corpus = [tag_text(t) for t in CSW_SENTENCES]
    records, _ = corrupt_corpus(corpus, seed=3, ids=[f"u{i}" for i in range(5)])
    ids = [r.id for r in records]
    assert ids == sorted(ids)
    assert set(ids) <= {f"u{i}" for i in range(5)}


# ─────────────────────────────────────────────
# Corruptor externo
# ─────────────────────────────────────────────
def test_external_pairs_get_aligned_edits():
    records, stats = ingest_external_corruptions(
        ["He go home .", "All good here ."],
        ["He goes home .", "All good here ."],
    )
    assert len(records) == 1
    assert records[0].origin == "external"
    assert [(e.start, e.end, e.replacement) for e in records[0].edits] == [(1, 2, ["goes"])]
    assert stats.dropped_zero_edit == 1
    assert records_to_m2(records) == [(records[0].corrupted, records[0].edits)]


def test_external_line_count_mismatch():
    with pytest.raises(LineCountMismatch):
        ingest_external_corruptions(["a", "b"], ["a"])
